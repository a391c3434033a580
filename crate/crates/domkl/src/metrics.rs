//! Evaluation metrics and report output.
//!
//! Two regret notions summarise a run. Accuracy regret compares a
//! learner's cumulative online loss against the best fixed model in
//! hindsight for its own stream (solved exactly as a ridge problem
//! per kernel, best kernel taken). Discrepancy regret accumulates
//! the squared consensus violation |Σ_{i∈N_j} (f̂_j(x_{j,t}) −
//! f̂_i(x_{j,t}))|², i.e. how far neighbours are from predicting
//! alike; divided by rounds it is the mean consensus violation.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::RFFeatureMap;
use crate::simulator::{ResolvedHypers, RunLog, RunOutcome, Sample};

/// Ridge jitter added to the hindsight normal equations to keep them
/// solvable at reg = 0.
pub const HINDSIGHT_JITTER: f64 = 1e-9;

/// Mean squared prediction error.
pub fn mse(predictions: &[f64], labels: &[f64]) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::Input(format!(
            "{} predictions but {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::Input("cannot average an empty series".into()));
    }
    let sum: f64 = predictions
        .iter()
        .zip(labels)
        .map(|(p, y)| (p - y) * (p - y))
        .sum();
    Ok(sum / predictions.len() as f64)
}

fn violation_series(log: &RunLog, learner: usize) -> Vec<f64> {
    log.learners[learner]
        .neighbor_diffs
        .iter()
        .map(|diffs| {
            let s: f64 = diffs.iter().sum();
            s * s
        })
        .collect()
}

/// Mean squared consensus violation per learner:
/// (1/T) Σ_t |Σ_{i∈N_j} (f̂_j(x_{j,t}) − f̂_i(x_{j,t}))|².
pub fn consensus_violation(log: &RunLog) -> Vec<f64> {
    (0..log.learners.len())
        .map(|j| {
            let series = violation_series(log, j);
            series.iter().sum::<f64>() / log.rounds as f64
        })
        .collect()
}

/// Cumulative discrepancy regret per learner (un-averaged running
/// sums of the squared consensus violations).
pub fn regret_discrepancy(log: &RunLog) -> Vec<Vec<f64>> {
    (0..log.learners.len())
        .map(|j| {
            let mut acc = 0.0;
            violation_series(log, j)
                .into_iter()
                .map(|v| {
                    acc += v;
                    acc
                })
                .collect()
        })
        .collect()
}

/// Cumulative accuracy regret: running sum of (online loss −
/// comparator loss).
pub fn regret_accuracy(losses: &[f64], comparator_losses: &[f64]) -> Result<Vec<f64>> {
    if losses.len() != comparator_losses.len() {
        return Err(Error::Input(format!(
            "{} online losses but {} comparator losses",
            losses.len(),
            comparator_losses.len()
        )));
    }
    let mut acc = 0.0;
    Ok(losses
        .iter()
        .zip(comparator_losses)
        .map(|(l, c)| {
            acc += l - c;
            acc
        })
        .collect())
}

/// Best fixed model in hindsight for one kernel on one stream.
#[derive(Debug, Clone)]
pub struct HindsightFit {
    pub theta: DVector<f64>,
    /// Regularized loss of the fixed model at each round.
    pub losses: Vec<f64>,
    pub total_loss: f64,
}

/// Solves argmin_θ Σ_t [(y_t − θᵀz_t)² + reg ‖θ‖²] exactly through
/// the normal equations (ZᵀZ + (T·reg + jitter) I) θ = Zᵀy and
/// returns the fixed model with its per-round losses.
pub fn hindsight_comparator(
    samples: &[Sample],
    map: &RFFeatureMap,
    reg: f64,
) -> Result<HindsightFit> {
    if samples.is_empty() {
        return Err(Error::Input("hindsight fit needs at least one sample".into()));
    }
    if !reg.is_finite() || reg < 0.0 {
        return Err(Error::Config(format!(
            "reg must be finite and non-negative, got {reg}"
        )));
    }
    let t = samples.len();
    let dim = map.feature_dim();
    let mut gram = DMatrix::<f64>::zeros(dim, dim);
    let mut rhs = DVector::<f64>::zeros(dim);
    let mut zs = Vec::with_capacity(t);
    for s in samples {
        let z = map.features(&s.x)?;
        gram.ger(1.0, &z, &z, 1.0);
        rhs.axpy(s.y, &z, 1.0);
        zs.push(z);
    }
    let ridge = t as f64 * reg + HINDSIGHT_JITTER;
    for k in 0..dim {
        gram[(k, k)] += ridge;
    }
    let theta = gram
        .cholesky()
        .ok_or_else(|| Error::Numeric("hindsight normal equations are not positive definite".into()))?
        .solve(&rhs);
    let reg_term = reg * theta.norm_squared();
    let losses: Vec<f64> = zs
        .iter()
        .zip(samples)
        .map(|(z, s)| {
            let r = s.y - theta.dot(z);
            r * r + reg_term
        })
        .collect();
    let total_loss = losses.iter().sum();
    Ok(HindsightFit {
        theta,
        losses,
        total_loss,
    })
}

/// Fits every map and returns (position in `maps`, fit) of the one
/// with the lowest total loss.
pub fn best_hindsight(
    samples: &[Sample],
    maps: &[&RFFeatureMap],
    reg: f64,
) -> Result<(usize, HindsightFit)> {
    if maps.is_empty() {
        return Err(Error::Input("no kernels to fit".into()));
    }
    let mut best: Option<(usize, HindsightFit)> = None;
    for (a, map) in maps.iter().enumerate() {
        let fit = hindsight_comparator(samples, map, reg)?;
        let better = match &best {
            Some((_, b)) => fit.total_loss < b.total_loss,
            None => true,
        };
        if better {
            best = Some((a, fit));
        }
    }
    Ok(best.unwrap())
}

/// Per-learner evaluation summary with plot-ready curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerReport {
    pub id: usize,
    pub mse: f64,
    pub consensus_violation: f64,
    /// Dictionary index of the hindsight-best kernel on this
    /// learner's stream.
    pub best_kernel: usize,
    pub final_weights: Vec<f64>,
    /// Cumulative accuracy regret per round.
    pub regret_accuracy: Vec<f64>,
    /// Cumulative discrepancy regret per round.
    pub regret_discrepancy: Vec<f64>,
    /// Largest kernel-weight gap to any neighbour per round.
    pub weight_gaps: Vec<f64>,
}

/// Evaluation of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema_version: u32,
    pub rounds: usize,
    pub seed: u64,
    pub hypers: ResolvedHypers,
    /// Fully resolved run configuration, echoed for re-runnability.
    pub config: serde_json::Value,
    pub learners: Vec<LearnerReport>,
    pub wall_clock_secs: Option<f64>,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Builds the report for a finished run. `streams` must be the
/// streams the run consumed (the hindsight comparator refits them).
pub fn build_report(
    outcome: &RunOutcome,
    streams: &[Vec<Sample>],
    seed: u64,
    config: serde_json::Value,
) -> Result<MetricsReport> {
    if streams.len() != outcome.log.learners.len() {
        return Err(Error::Input(format!(
            "{} streams for {} learner logs",
            streams.len(),
            outcome.log.learners.len()
        )));
    }
    let reg = outcome.hypers.reg;
    let maps: Vec<&RFFeatureMap> = outcome
        .active_kernels
        .iter()
        .map(|&p| outcome.dictionary.map(p))
        .collect::<Result<_>>()?;
    let discrepancy = regret_discrepancy(&outcome.log);
    let violations = consensus_violation(&outcome.log);

    let mut learners = Vec::with_capacity(outcome.log.learners.len());
    for (j, log) in outcome.log.learners.iter().enumerate() {
        let rounds = &streams[j][..outcome.rounds];
        let (best_active, fit) = best_hindsight(rounds, &maps, reg)?;
        let regret = regret_accuracy(&log.losses, &fit.losses)?;
        learners.push(LearnerReport {
            id: log.id,
            mse: mse(&log.predictions, &log.labels)?,
            consensus_violation: violations[j],
            best_kernel: outcome.active_kernels[best_active],
            final_weights: outcome.states[j].weights.clone(),
            regret_accuracy: regret,
            regret_discrepancy: discrepancy[j].clone(),
            weight_gaps: log.weight_gaps.clone(),
        });
    }
    Ok(MetricsReport {
        schema_version: REPORT_SCHEMA_VERSION,
        rounds: outcome.rounds,
        seed,
        hypers: outcome.hypers,
        config,
        learners,
        wall_clock_secs: None,
    })
}

/// Report file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!(
                "unknown report format '{other}' (expected json or csv)"
            ))),
        }
    }
}

/// Writes one series as a CSV file with columns t,value (t from 1).
pub fn write_curve(path: &Path, values: &[f64]) -> Result<()> {
    let mut out = String::with_capacity(values.len() * 16 + 8);
    out.push_str("t,value\n");
    for (t, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", t + 1, v));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes a summary file plus one curve file per learner and metric
/// into `dir` (created if missing). The summary is JSON or CSV per
/// `format`; curves are always CSV with columns t,value. Returns the
/// paths written.
pub fn write_report(
    report: &MetricsReport,
    dir: &Path,
    format: ReportFormat,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    match format {
        ReportFormat::Json => {
            let path = dir.join("summary.json");
            fs::write(&path, serde_json::to_string_pretty(report)?)?;
            written.push(path);
        }
        ReportFormat::Csv => {
            let path = dir.join("summary.csv");
            let mut f = fs::File::create(&path)?;
            writeln!(
                f,
                "learner,mse,consensus_violation,best_kernel,final_regret_accuracy,final_regret_discrepancy"
            )?;
            for l in &report.learners {
                writeln!(
                    f,
                    "{},{},{},{},{},{}",
                    l.id,
                    l.mse,
                    l.consensus_violation,
                    l.best_kernel,
                    l.regret_accuracy.last().copied().unwrap_or(0.0),
                    l.regret_discrepancy.last().copied().unwrap_or(0.0),
                )?;
            }
            written.push(path);
        }
    }
    for l in &report.learners {
        for (name, series) in [
            ("regret_accuracy", &l.regret_accuracy),
            ("regret_discrepancy", &l.regret_discrepancy),
            ("weight_gaps", &l.weight_gaps),
        ] {
            let path = dir.join(format!("learner{}_{name}.csv", l.id));
            write_curve(&path, series)?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Mean and sample standard deviation of a set of values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub std: f64,
}

pub fn aggregate(values: &[f64]) -> Result<Aggregate> {
    if values.is_empty() {
        return Err(Error::Input("cannot aggregate an empty set".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(Aggregate { mean, std })
}

/// Elementwise mean of equally long curves.
pub fn mean_curve(curves: &[Vec<f64>]) -> Result<Vec<f64>> {
    if curves.is_empty() {
        return Err(Error::Input("cannot average zero curves".into()));
    }
    let len = curves[0].len();
    if curves.iter().any(|c| c.len() != len) {
        return Err(Error::Input("curves have unequal lengths".into()));
    }
    let n = curves.len() as f64;
    Ok((0..len)
        .map(|t| curves.iter().map(|c| c[t]).sum::<f64>() / n)
        .collect())
}
