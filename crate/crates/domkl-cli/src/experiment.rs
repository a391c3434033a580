//! Experiment drivers: seeded multi-trial runs of one algorithm, and
//! side-by-side comparisons of the multi-kernel protocol against
//! every single-kernel variant and a centralized baseline.
//!
//! Trials are independent: trial i runs with a seed derived from the
//! master seed, its own data partition, and (for synthetic data) its
//! own dataset. With the `parallel` feature, trials run concurrently;
//! results are aggregated in trial order either way, so reports are
//! byte-identical no matter the thread count.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use domkl::derive_seed;
use domkl::error::Result;
use domkl::metrics::{
    aggregate, build_report, consensus_violation, mean_curve, mse, write_curve, Aggregate,
    MetricsReport, ReportFormat,
};
use domkl::simulator::{
    partition_data, run, run_centralized_omkl, Mode, Parallelism, ResolvedHypers, RunOutcome,
};

use crate::config::{ConfigFile, ResolvedConfig, RunKind};

pub const EXPERIMENT_SCHEMA_VERSION: u32 = 1;

/// Scalar results of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    /// Per-learner prediction MSE.
    pub mse: Vec<f64>,
    /// Per-learner mean |Σ_i f̂_j − f̂_i| over rounds.
    pub consensus_violation: Vec<f64>,
    /// Per-learner hindsight-best kernel (dictionary index).
    pub best_kernels: Vec<usize>,
}

/// Per-learner aggregates across trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerSummary {
    pub id: usize,
    pub mse: Aggregate,
    pub consensus_violation: Aggregate,
    /// Cumulative accuracy regret at the final round.
    pub final_regret_accuracy: Aggregate,
    /// Hindsight-best kernel per trial.
    pub best_kernels: Vec<usize>,
    /// Kernel weights at the end of a run, averaged over trials.
    pub mean_final_weights: Vec<f64>,
}

/// Aggregated result of `run_experiment`, written as the summary file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub kind: String,
    /// Fully resolved configuration; feeding this file back through
    /// `--config` reproduces the experiment.
    pub config: ConfigFile,
    pub master_seed: u64,
    pub trial_seeds: Vec<u64>,
    pub rounds: usize,
    pub hypers: ResolvedHypers,
    pub learners: Vec<LearnerSummary>,
    pub trials: Vec<TrialRecord>,
    /// Present only when timing was requested; omitted otherwise so
    /// that repeated runs produce byte-identical files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_secs: Option<f64>,
}

/// Mean curves across trials for one learner.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerCurves {
    pub id: usize,
    pub regret_accuracy: Vec<f64>,
    pub regret_discrepancy: Vec<f64>,
    pub weight_gaps: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub report: ExperimentReport,
    pub curves: Vec<LearnerCurves>,
}

/// The config echoed into reports. The output directory is where the
/// report itself lands, not an experiment parameter; dropping it
/// keeps reports byte-identical no matter where they are written.
fn echo_config(cfg: &ResolvedConfig) -> ConfigFile {
    let mut echo = cfg.file.clone();
    echo.output.dir = None;
    echo
}

fn map_trials<T, F>(seeds: &[u64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, Parallelism) -> Result<T> + Sync + Send,
{
    // One trial keeps the engine's internal parallelism; several
    // trials parallelize across trials instead. Outputs never depend
    // on the choice.
    #[cfg(feature = "parallel")]
    if seeds.len() > 1 {
        use rayon::prelude::*;
        return seeds
            .par_iter()
            .map(|&s| f(s, Parallelism::Sequential))
            .collect();
    }
    seeds.iter().map(|&s| f(s, Parallelism::default())).collect()
}

fn run_trial(cfg: &ResolvedConfig, seed: u64, engine: Parallelism) -> Result<MetricsReport> {
    let ds = cfg.dataset_for_trial(seed)?;
    let sim = cfg.simulation_config(seed);
    let (outcome, streams) = match cfg.kind {
        RunKind::Omkl => {
            let streams = partition_data(&ds, 1, seed)?;
            (run_centralized_omkl(&sim, &streams[0])?, streams)
        }
        _ => {
            let streams = partition_data(&ds, cfg.topology.num_learners(), seed)?;
            (run(&sim, &streams, engine)?, streams)
        }
    };
    // The experiment report carries the config echo once; per-trial
    // reports stay bare.
    build_report(&outcome, &streams, seed, serde_json::Value::Null)
}

/// Runs `cfg.trials` seeded trials of the configured algorithm and
/// aggregates them.
pub fn run_experiment(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let started = Instant::now();
    let trial_seeds: Vec<u64> = (0..cfg.trials as u64)
        .map(|i| derive_seed(cfg.seed, i))
        .collect();
    let reports = map_trials(&trial_seeds, |seed, engine| run_trial(cfg, seed, engine))?;

    let rounds = reports[0].rounds;
    let num_learners = reports[0].learners.len();
    let mut learners = Vec::with_capacity(num_learners);
    let mut curves = Vec::with_capacity(num_learners);
    for j in 0..num_learners {
        let per: Vec<&_> = reports.iter().map(|r| &r.learners[j]).collect();
        let mses: Vec<f64> = per.iter().map(|l| l.mse).collect();
        let cvs: Vec<f64> = per.iter().map(|l| l.consensus_violation).collect();
        let finals: Vec<f64> = per
            .iter()
            .map(|l| l.regret_accuracy.last().copied().unwrap_or(0.0))
            .collect();
        let weight_curves: Vec<Vec<f64>> = per.iter().map(|l| l.final_weights.clone()).collect();
        learners.push(LearnerSummary {
            id: per[0].id,
            mse: aggregate(&mses)?,
            consensus_violation: aggregate(&cvs)?,
            final_regret_accuracy: aggregate(&finals)?,
            best_kernels: per.iter().map(|l| l.best_kernel).collect(),
            mean_final_weights: mean_curve(&weight_curves)?,
        });
        curves.push(LearnerCurves {
            id: per[0].id,
            regret_accuracy: mean_curve(
                &per.iter().map(|l| l.regret_accuracy.clone()).collect::<Vec<_>>(),
            )?,
            regret_discrepancy: mean_curve(
                &per.iter().map(|l| l.regret_discrepancy.clone()).collect::<Vec<_>>(),
            )?,
            weight_gaps: mean_curve(
                &per.iter().map(|l| l.weight_gaps.clone()).collect::<Vec<_>>(),
            )?,
        });
    }
    let trials = reports
        .iter()
        .map(|r| TrialRecord {
            seed: r.seed,
            mse: r.learners.iter().map(|l| l.mse).collect(),
            consensus_violation: r.learners.iter().map(|l| l.consensus_violation).collect(),
            best_kernels: r.learners.iter().map(|l| l.best_kernel).collect(),
        })
        .collect();

    let report = ExperimentReport {
        schema_version: EXPERIMENT_SCHEMA_VERSION,
        kind: "experiment".into(),
        config: echo_config(cfg),
        master_seed: cfg.seed,
        trial_seeds,
        rounds,
        hypers: reports[0].hypers,
        learners,
        trials,
        wall_clock_secs: cfg.timing.then(|| started.elapsed().as_secs_f64()),
    };
    Ok(ExperimentOutput { report, curves })
}

/// Writes the experiment summary (JSON or CSV) plus per-learner mean
/// curve files into `dir`. Returns the paths written.
pub fn write_experiment(
    out: &ExperimentOutput,
    dir: &Path,
    format: ReportFormat,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    match format {
        ReportFormat::Json => {
            let path = dir.join("summary.json");
            fs::write(&path, serde_json::to_string_pretty(&out.report)?)?;
            written.push(path);
        }
        ReportFormat::Csv => {
            let path = dir.join("summary.csv");
            let mut body = String::new();
            body.push_str(
                "learner,mse_mean,mse_std,consensus_violation_mean,final_regret_accuracy_mean,best_kernel_mode\n",
            );
            for l in &out.report.learners {
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{}",
                    l.id,
                    l.mse.mean,
                    l.mse.std,
                    l.consensus_violation.mean,
                    l.final_regret_accuracy.mean,
                    modal(&l.best_kernels).map(|(k, _)| k as i64).unwrap_or(-1),
                );
            }
            fs::write(&path, body)?;
            written.push(path);
        }
    }
    for c in &out.curves {
        for (name, series) in [
            ("regret_accuracy", &c.regret_accuracy),
            ("regret_discrepancy", &c.regret_discrepancy),
            ("weight_gaps", &c.weight_gaps),
        ] {
            let path = dir.join(format!("learner{}_{name}.csv", c.id));
            write_curve(&path, series)?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Most frequent value with its count; ties go to the smallest value.
fn modal(values: &[usize]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let mut i = 0;
    while i < sorted.len() {
        let mut n = 1;
        while i + n < sorted.len() && sorted[i + n] == sorted[i] {
            n += 1;
        }
        if best.map(|(_, c)| n > c).unwrap_or(true) {
            best = Some((sorted[i], n));
        }
        i += n;
    }
    best
}

/// Human-readable per-learner table, MSE scaled by 100.
pub fn format_experiment_table(r: &ExperimentReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<8} {:>18} {:>12} {:>12}  best kernel",
        "learner", "mse x100", "consensus", "regret_a(T)"
    );
    for l in &r.learners {
        let (k, votes) = modal(&l.best_kernels).unwrap_or((0, 0));
        let _ = writeln!(
            s,
            "{:<8} {:>10.4} ± {:>5.4} {:>12.3e} {:>12.4}  {} ({votes}/{} trials)",
            l.id,
            100.0 * l.mse.mean,
            100.0 * l.mse.std,
            l.consensus_violation.mean,
            l.final_regret_accuracy.mean,
            k,
            r.trials.len(),
        );
    }
    let _ = writeln!(
        s,
        "rounds {}, trials {}, rho {:.4}, eta {:.4}, eta_g {:.4}, reg {}",
        r.rounds,
        r.trials.len(),
        r.hypers.rho,
        r.hypers.eta,
        r.hypers.eta_g,
        r.hypers.reg,
    );
    s
}

/// One table row of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    /// domkl, dokl, or omkl.
    pub algorithm: String,
    /// Dictionary index for dokl rows.
    pub kernel: Option<usize>,
    pub variance: Option<f64>,
    /// Over learners and trials.
    pub mse: Aggregate,
    /// Per learner, over trials.
    pub per_learner_mse: Vec<Aggregate>,
    pub consensus_violation: Aggregate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelVotes {
    pub kernel: usize,
    pub votes: usize,
}

/// Aggregated result of `run_comparison`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub kind: String,
    pub config: ConfigFile,
    pub master_seed: u64,
    pub trial_seeds: Vec<u64>,
    /// Rounds per distributed learner and for the centralized run.
    pub rounds_distributed: usize,
    pub rounds_centralized: usize,
    pub rows: Vec<ComparisonRow>,
    /// Single-kernel row with the lowest mean MSE.
    pub best_single_kernel: usize,
    pub best_single_variance: f64,
    /// Multi-kernel MSE relative to that row (1.0 = parity).
    pub mse_vs_best_single: f64,
    /// Multi-kernel MSE relative to the centralized baseline.
    pub mse_vs_centralized: f64,
    /// How often each kernel ended up with the largest weight, over
    /// learners and trials of the multi-kernel runs.
    pub selected_kernel_votes: Vec<KernelVotes>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_secs: Option<f64>,
}

struct TrialComparison {
    domkl_mse: Vec<f64>,
    domkl_cv: Vec<f64>,
    domkl_selected: Vec<usize>,
    /// P × J.
    dokl_mse: Vec<Vec<f64>>,
    dokl_cv: Vec<f64>,
    omkl_mse: f64,
    rounds_distributed: usize,
    rounds_centralized: usize,
}

fn learner_mses(outcome: &RunOutcome) -> Result<Vec<f64>> {
    outcome
        .log
        .learners
        .iter()
        .map(|l| mse(&l.predictions, &l.labels))
        .collect()
}

fn mean_consensus_violation(outcome: &RunOutcome) -> Vec<f64> {
    consensus_violation(&outcome.log)
}

fn compare_trial(cfg: &ResolvedConfig, seed: u64, engine: Parallelism) -> Result<TrialComparison> {
    let ds = cfg.dataset_for_trial(seed)?;
    let streams = partition_data(&ds, cfg.topology.num_learners(), seed)?;
    let central_stream = partition_data(&ds, 1, seed)?;

    let mut sim = cfg.simulation_config(seed);
    sim.mode = Mode::Domkl;
    let domkl = run(&sim, &streams, engine)?;
    let domkl_selected = domkl
        .states
        .iter()
        .map(|s| {
            let (arg, _) = s
                .weights
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(ai, av), (i, &v)| {
                    if v > av {
                        (i, v)
                    } else {
                        (ai, av)
                    }
                });
            domkl.active_kernels[arg]
        })
        .collect();

    let mut dokl_mse = Vec::with_capacity(cfg.variances.len());
    let mut dokl_cv = Vec::with_capacity(cfg.variances.len());
    for kernel in 0..cfg.variances.len() {
        let mut single = cfg.simulation_config(seed);
        single.mode = Mode::Dokl { kernel };
        let outcome = run(&single, &streams, engine)?;
        dokl_mse.push(learner_mses(&outcome)?);
        let cv = mean_consensus_violation(&outcome);
        dokl_cv.push(cv.iter().sum::<f64>() / cv.len() as f64);
    }

    let omkl = run_centralized_omkl(&sim, &central_stream[0])?;

    Ok(TrialComparison {
        domkl_mse: learner_mses(&domkl)?,
        domkl_cv: mean_consensus_violation(&domkl),
        domkl_selected,
        dokl_mse,
        dokl_cv,
        omkl_mse: learner_mses(&omkl)?[0],
        rounds_distributed: domkl.rounds,
        rounds_centralized: omkl.rounds,
    })
}

fn row_from_trials(
    algorithm: &str,
    kernel: Option<usize>,
    variance: Option<f64>,
    per_trial_learner_mse: &[Vec<f64>],
    per_trial_cv: &[f64],
) -> Result<ComparisonRow> {
    let num_learners = per_trial_learner_mse[0].len();
    let all: Vec<f64> = per_trial_learner_mse.iter().flatten().copied().collect();
    let per_learner = (0..num_learners)
        .map(|j| {
            let vals: Vec<f64> = per_trial_learner_mse.iter().map(|t| t[j]).collect();
            aggregate(&vals)
        })
        .collect::<Result<_>>()?;
    Ok(ComparisonRow {
        algorithm: algorithm.into(),
        kernel,
        variance,
        mse: aggregate(&all)?,
        per_learner_mse: per_learner,
        consensus_violation: aggregate(per_trial_cv)?,
    })
}

/// Runs the multi-kernel protocol, every single-kernel variant, and
/// the centralized baseline on identical per-trial data splits.
pub fn run_comparison(cfg: &ResolvedConfig) -> Result<ComparisonReport> {
    let started = Instant::now();
    let trial_seeds: Vec<u64> = (0..cfg.trials as u64)
        .map(|i| derive_seed(cfg.seed, i))
        .collect();
    let trials = map_trials(&trial_seeds, |seed, engine| compare_trial(cfg, seed, engine))?;

    let mut rows = Vec::with_capacity(cfg.variances.len() + 2);
    rows.push(row_from_trials(
        "domkl",
        None,
        None,
        &trials.iter().map(|t| t.domkl_mse.clone()).collect::<Vec<_>>(),
        &trials
            .iter()
            .map(|t| t.domkl_cv.iter().sum::<f64>() / t.domkl_cv.len() as f64)
            .collect::<Vec<_>>(),
    )?);
    for (kernel, &variance) in cfg.variances.iter().enumerate() {
        rows.push(row_from_trials(
            "dokl",
            Some(kernel),
            Some(variance),
            &trials.iter().map(|t| t.dokl_mse[kernel].clone()).collect::<Vec<_>>(),
            &trials.iter().map(|t| t.dokl_cv[kernel]).collect::<Vec<_>>(),
        )?);
    }
    rows.push(row_from_trials(
        "omkl",
        None,
        None,
        &trials.iter().map(|t| vec![t.omkl_mse]).collect::<Vec<_>>(),
        &vec![0.0; trials.len()],
    )?);

    let (best_row, _) = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.algorithm == "dokl")
        .fold((0, f64::INFINITY), |(bi, bv), (i, r)| {
            if r.mse.mean < bv {
                (i, r.mse.mean)
            } else {
                (bi, bv)
            }
        });
    let best_single_kernel = rows[best_row].kernel.unwrap_or(0);
    let best_single_variance = rows[best_row].variance.unwrap_or(f64::NAN);
    let best_single_mse = rows[best_row].mse.mean;
    let domkl_mse = rows[0].mse.mean;
    let omkl_mse = rows.last().unwrap().mse.mean;

    let mut votes: Vec<usize> = Vec::new();
    for t in &trials {
        votes.extend_from_slice(&t.domkl_selected);
    }
    votes.sort_unstable();
    let mut selected_kernel_votes = Vec::new();
    let mut i = 0;
    while i < votes.len() {
        let mut n = 1;
        while i + n < votes.len() && votes[i + n] == votes[i] {
            n += 1;
        }
        selected_kernel_votes.push(KernelVotes {
            kernel: votes[i],
            votes: n,
        });
        i += n;
    }

    Ok(ComparisonReport {
        schema_version: EXPERIMENT_SCHEMA_VERSION,
        kind: "comparison".into(),
        config: echo_config(cfg),
        master_seed: cfg.seed,
        trial_seeds,
        rounds_distributed: trials[0].rounds_distributed,
        rounds_centralized: trials[0].rounds_centralized,
        rows,
        best_single_kernel,
        best_single_variance,
        mse_vs_best_single: domkl_mse / best_single_mse,
        mse_vs_centralized: domkl_mse / omkl_mse,
        selected_kernel_votes,
        wall_clock_secs: cfg.timing.then(|| started.elapsed().as_secs_f64()),
    })
}

/// Writes the comparison summary (JSON or CSV) into `dir`.
pub fn write_comparison(
    report: &ComparisonReport,
    dir: &Path,
    format: ReportFormat,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let path = match format {
        ReportFormat::Json => {
            let path = dir.join("summary.json");
            fs::write(&path, serde_json::to_string_pretty(report)?)?;
            path
        }
        ReportFormat::Csv => {
            let path = dir.join("summary.csv");
            let mut body = String::new();
            body.push_str("algorithm,kernel,variance,mse_mean,mse_std,consensus_violation_mean\n");
            for r in &report.rows {
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{}",
                    r.algorithm,
                    r.kernel.map(|k| k.to_string()).unwrap_or_default(),
                    r.variance.map(|v| v.to_string()).unwrap_or_default(),
                    r.mse.mean,
                    r.mse.std,
                    r.consensus_violation.mean,
                );
            }
            fs::write(&path, body)?;
            path
        }
    };
    Ok(vec![path])
}

/// Human-readable comparison table, MSE scaled by 100.
pub fn format_comparison_table(r: &ComparisonReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<10} {:>6} {:>10} {:>20} {:>12}",
        "algorithm", "kernel", "variance", "mse x100 (mean±std)", "consensus"
    );
    for row in &r.rows {
        let kernel = row.kernel.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
        let variance = row
            .variance
            .map(|v| format!("{v:.3e}"))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            s,
            "{:<10} {:>6} {:>10} {:>12.4} ± {:>5.4} {:>12.3e}",
            row.algorithm,
            kernel,
            variance,
            100.0 * row.mse.mean,
            100.0 * row.mse.std,
            row.consensus_violation.mean,
        );
    }
    let _ = writeln!(
        s,
        "best single kernel {} (variance {:.3e}); multi/best-single mse ratio {:.3}; multi/centralized {:.3}",
        r.best_single_kernel, r.best_single_variance, r.mse_vs_best_single, r.mse_vs_centralized,
    );
    s
}
