//! Acceptance suite: one test per shipping criterion. Every test
//! prints a single `acceptance NN <name>: PASS/FAIL` line (visible
//! with `--nocapture`) and pins its tolerances in code. Oracles here
//! are deliberately independent of the library internals: exact
//! kernel values are recomputed inline, linear systems are re-solved
//! densely, minimizers are re-found by gradient descent, and
//! invariants are re-checked from raw logs.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

use domkl::data::synth_rkhs;
use domkl::kernels::{default_variances, sample_feature_map, KernelSpec};
use domkl::learner::{combine_weights, local_update_quadratic};
use domkl::metrics::build_report;
use domkl::simulator::{
    partition_data, run, Mode, Parallelism, RunOutcome, Sample, SimulationConfig,
};
use domkl::topology::{preset, Preset};

use domkl_cli::config::{
    resolve, ConfigFile, DatasetConfig, DictionaryConfig, Overrides, OutputSection, RunSection,
    TopologyConfig,
};
use domkl_cli::experiment::{run_comparison, run_experiment};

/// Prints the per-criterion verdict line, then enforces it.
fn verdict(number: u32, name: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("acceptance {number:02} {name}: {status} ({detail})");
    assert!(ok, "acceptance {number:02} {name}: {detail}");
}

fn skip(number: u32, name: &str, detail: &str) {
    println!("acceptance {number:02} {name}: SKIPPED ({detail})");
}

fn ring5(variances: Vec<f64>, num_features: usize, seed: u64) -> SimulationConfig {
    let mut cfg = SimulationConfig::new(preset(Preset::Ring, 5).unwrap(), variances, num_features);
    cfg.seed = seed;
    cfg
}

/// The shared run behind criteria 3 and 4: five learners on a ring,
/// the full 17-kernel dictionary, D = 50, low-noise realizable
/// synthetic data. The dataset and its partition are drawn once, big
/// enough for 1000 rounds, so runs at different horizons share a
/// trajectory prefix. Hyper-parameters are held at their fixed unit
/// values rather than the √T schedule: √T-scaled penalties couple the
/// network so strongly that disagreement starts at its floor, while
/// fixed penalties leave the initial transient visible, which is what
/// lets a within-run consensus trend be measured at all.
fn consensus_run(rounds: usize) -> (RunOutcome, Vec<Vec<Sample>>) {
    let (ds, _) = synth_rkhs(5 * 1000 + 100, 5, 1.0, 20, 0.01, 303).unwrap();
    let streams = partition_data(&ds, 5, 303).unwrap();
    let mut cfg = ring5(default_variances(), 50, 303);
    cfg.rounds = Some(rounds);
    cfg.sqrt_t_hypers = false;
    (run(&cfg, &streams, Parallelism::default()).unwrap(), streams)
}

fn same_bits(a: &DVector<f64>, b: &DVector<f64>) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b.iter())
            .all(|(x, y)| x.to_bits() == y.to_bits())
}

/// Random-feature fidelity: with D = 2000 features the approximate
/// Gaussian kernel (σ² = 1, d = 5) stays within 0.05 of the exact
/// value on average over 100 random pairs, improves on D = 20, and
/// runs in under 5 seconds.
#[test]
fn acceptance_01_rf_fidelity() {
    const PAIRS: usize = 100;
    const DIM: usize = 5;
    const MEAN_ABS_TOL: f64 = 0.05;
    const BUDGET_SECS: f64 = 5.0;

    let started = Instant::now();
    let spec = KernelSpec::gaussian(1.0).unwrap();
    let normal = Normal::new(0.0, 0.5).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let pairs: Vec<(DVector<f64>, DVector<f64>)> = (0..PAIRS)
        .map(|_| {
            (
                DVector::from_fn(DIM, |_, _| normal.sample(&mut rng)),
                DVector::from_fn(DIM, |_, _| normal.sample(&mut rng)),
            )
        })
        .collect();

    let mean_abs_err = |num_features: usize| -> f64 {
        let map = sample_feature_map(&spec, DIM, num_features, 102).unwrap();
        let total: f64 = pairs
            .iter()
            .map(|(a, b)| {
                // Exact kernel recomputed from the definition.
                let exact = (-(a - b).norm_squared() / 2.0).exp();
                let approx = map.features(a).unwrap().dot(&map.features(b).unwrap());
                (approx - exact).abs()
            })
            .sum();
        total / PAIRS as f64
    };

    let err_small = mean_abs_err(20);
    let err_large = mean_abs_err(2000);
    let elapsed = started.elapsed().as_secs_f64();

    verdict(
        1,
        "rf-fidelity",
        err_large <= MEAN_ABS_TOL && err_large < err_small && elapsed < BUDGET_SECS,
        &format!(
            "mean |approx − exact|: D=2000 {err_large:.4} (tol {MEAN_ABS_TOL}), D=20 {err_small:.4}, {elapsed:.2}s"
        ),
    );
}

/// The closed-form model update matches a dense re-solve of its
/// linear system to 1e-10 and a 10⁴-step gradient-descent oracle to
/// 1e-6, over 50 random instances at D = 50, in under 10 seconds.
#[test]
fn acceptance_02_closed_form_update() {
    const INSTANCES: usize = 50;
    const DIM: usize = 100; // feature dimension at D = 50
    const DENSE_TOL: f64 = 1e-10;
    const GD_TOL: f64 = 1e-6;
    const GD_STEPS: usize = 10_000;
    const BUDGET_SECS: f64 = 10.0;

    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(202);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut worst_dense = 0.0f64;
    let mut worst_gd = 0.0f64;

    for i in 0..INSTANCES {
        let mut z = DVector::from_fn(DIM, |_, _| normal.sample(&mut rng));
        if i % 2 == 0 {
            z /= z.norm(); // half the instances use unit-norm features
        }
        let y: f64 = normal.sample(&mut rng);
        let theta_prev = DVector::from_fn(DIM, |_, _| normal.sample(&mut rng));
        let dual = DVector::from_fn(DIM, |_, _| normal.sample(&mut rng));
        let gamma = DVector::from_fn(DIM, |_, _| normal.sample(&mut rng));
        let degree = 1 + rng.random_range(0..4usize);
        let rho = 0.5 + rng.random_range(0.0..2.0f64);
        let eta = 0.5 + rng.random_range(0.0..2.0f64);
        let reg = 0.01;

        let theta =
            local_update_quadratic(&z, y, &theta_prev, &dual, &gamma, degree, rho, eta, reg)
                .unwrap();

        // Oracle A: dense solve of (2zzᵀ + cI)θ = b.
        let c = 2.0 * reg + eta + rho * degree as f64;
        let b = &z * (2.0 * y) + &theta_prev * eta + &gamma * rho - &dual;
        let mut m = DMatrix::<f64>::identity(DIM, DIM) * c;
        m.ger(2.0, &z, &z, 1.0);
        let dense = m.lu().solve(&b).unwrap();
        worst_dense = worst_dense.max((&theta - &dense).amax());

        // Oracle B: gradient descent on the update objective with
        // step 1/L, L = 2‖z‖² + c; the gradient is (2zzᵀ + cI)θ − b.
        let step = 1.0 / (2.0 * z.norm_squared() + c);
        let mut gd = DVector::<f64>::zeros(DIM);
        for _ in 0..GD_STEPS {
            let g = &z * (2.0 * z.dot(&gd)) + &gd * c - &b;
            gd.axpy(-step, &g, 1.0);
        }
        worst_gd = worst_gd.max((&theta - &gd).amax());
    }

    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        2,
        "closed-form-update",
        worst_dense <= DENSE_TOL && worst_gd <= GD_TOL && elapsed < BUDGET_SECS,
        &format!(
            "max |Δ| vs dense {worst_dense:.2e} (tol {DENSE_TOL:.0e}), vs GD {worst_gd:.2e} (tol {GD_TOL:.0e}), {elapsed:.2}s"
        ),
    );
}

/// Five learners on a ring, the 17-kernel dictionary, D = 50, 500
/// rounds of synthetic data: kernel weights stay on the simplex
/// (|Σq − 1| ≤ 1e-9 every round) and duals conserve (network sum per
/// kernel ≤ 1e-9), in under 60 seconds.
#[test]
fn acceptance_03_protocol_invariants() {
    const ROUNDS: usize = 500;
    const SIMPLEX_TOL: f64 = 1e-9;
    const DUAL_TOL: f64 = 1e-9;
    const BUDGET_SECS: f64 = 60.0;

    let started = Instant::now();
    // Engine self-checks enforce the same bounds every round and would
    // abort the run on a violation; the log and final states are
    // re-checked here independently anyway.
    let (outcome, _) = consensus_run(ROUNDS);

    let mut worst_simplex = 0.0f64;
    for log in &outcome.log.learners {
        for w in &log.weights {
            let sum: f64 = w.iter().sum();
            worst_simplex = worst_simplex.max((sum - 1.0).abs());
            assert!(w.iter().all(|q| *q >= 0.0), "negative kernel weight");
        }
    }

    // Independent re-summation of the final duals per kernel: the
    // network-wide sum must vanish in norm.
    let mut worst_dual = 0.0f64;
    for p in 0..outcome.active_kernels.len() {
        let mut total = DVector::<f64>::zeros(outcome.dictionary.feature_dim());
        for s in &outcome.states {
            total += &s.models[p].dual;
        }
        worst_dual = worst_dual.max(total.norm());
    }

    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        3,
        "protocol-invariants",
        worst_simplex <= SIMPLEX_TOL && worst_dual <= DUAL_TOL && elapsed < BUDGET_SECS,
        &format!(
            "max |Σq − 1| {worst_simplex:.2e} (tol {SIMPLEX_TOL:.0e}), max ‖Σ duals‖ {worst_dual:.2e} (tol {DUAL_TOL:.0e}), rounds {ROUNDS}, {elapsed:.2}s"
        ),
    );
}

/// Consensus improves with time, measured on the criterion-3 run: the
/// mean per-round squared disagreement |Σ_i (f̂_j − f̂_i)|² of the last
/// 10% of rounds is at most half that of the first 10%, and over a
/// 1000-round run of the same configuration the normalized
/// discrepancy regret regret_d(t)/t decreases across the checkpoints
/// t ∈ {250, 500, 1000}.
#[test]
fn acceptance_04_consensus_trend() {
    const DECAY_FACTOR: f64 = 0.5;

    // Mean over learners of the squared neighbor-difference sum, per
    // round, on the same 500-round run criterion 3 checks.
    let (outcome, _) = consensus_run(500);
    let rounds = outcome.rounds;
    let per_round: Vec<f64> = (0..rounds)
        .map(|t| {
            outcome
                .log
                .learners
                .iter()
                .map(|l| {
                    let s: f64 = l.neighbor_diffs[t].iter().sum();
                    s * s
                })
                .sum::<f64>()
                / outcome.log.learners.len() as f64
        })
        .collect();
    let tenth = rounds / 10;
    let first: f64 = per_round[..tenth].iter().sum::<f64>() / tenth as f64;
    let last: f64 = per_round[rounds - tenth..].iter().sum::<f64>() / tenth as f64;

    // Normalized discrepancy regret at checkpoints of one longer run.
    // The engine is deterministic, so a fresh 1000-round run extends
    // the 500-round trajectory above rather than replacing it.
    let (outcome, streams) = consensus_run(1000);
    let report = build_report(&outcome, &streams, 303, serde_json::Value::Null).unwrap();
    let normalized: Vec<f64> = [250usize, 500, 1000]
        .iter()
        .map(|&t| {
            report
                .learners
                .iter()
                .map(|l| l.regret_discrepancy[t - 1])
                .sum::<f64>()
                / report.learners.len() as f64
                / t as f64
        })
        .collect();

    let decays = last <= DECAY_FACTOR * first;
    let decreasing = normalized[0] > normalized[1] && normalized[1] > normalized[2];
    verdict(
        4,
        "consensus-trend",
        decays && decreasing,
        &format!(
            "per-round violation first 10% {first:.3e} → last 10% {last:.3e} (factor ≤ {DECAY_FACTOR}); regret_d(t)/t = {:.3e}, {:.3e}, {:.3e} at t = 250, 500, 1000",
            normalized[0], normalized[1], normalized[2]
        ),
    );
}

/// Accuracy regret grows sublinearly: on realizable synthetic data
/// (generating kernel in the dictionary, noise 0.01), doubling the
/// horizon from T = 500 to 2T multiplies the regret by at most 1.6,
/// averaged over 10 seeds. Each horizon runs with its own √T
/// hyper-parameters and hindsight comparator.
#[test]
fn acceptance_05_regret_sublinearity() {
    const SEEDS: u64 = 10;
    const RATIO_TOL: f64 = 1.6;
    let variances = vec![0.1, 0.5, 1.0, 2.0, 10.0];

    let mean_regret = |rounds: usize, seed: u64| -> f64 {
        let (ds, _) = synth_rkhs(5 * rounds + 60, 5, 1.0, 20, 0.01, seed).unwrap();
        let streams = partition_data(&ds, 5, seed).unwrap();
        let mut cfg = ring5(variances.clone(), 50, seed);
        cfg.rounds = Some(rounds);
        let outcome = run(&cfg, &streams, Parallelism::default()).unwrap();
        let report = build_report(&outcome, &streams, seed, serde_json::Value::Null).unwrap();
        report
            .learners
            .iter()
            .map(|l| l.regret_accuracy.last().copied().unwrap_or(0.0))
            .sum::<f64>()
            / report.learners.len() as f64
    };

    let mut short = Vec::new();
    let mut long = Vec::new();
    for seed in 0..SEEDS {
        short.push(mean_regret(500, 500 + seed));
        long.push(mean_regret(1000, 500 + seed));
    }
    let mean_short: f64 = short.iter().sum::<f64>() / SEEDS as f64;
    let mean_long: f64 = long.iter().sum::<f64>() / SEEDS as f64;
    let ratio = mean_long / mean_short;

    verdict(
        5,
        "regret-sublinearity",
        mean_short > 0.0 && ratio <= RATIO_TOL,
        &format!(
            "mean regret_a: T=500 {mean_short:.3}, T=1000 {mean_long:.3}, ratio {ratio:.3} (tol {RATIO_TOL})"
        ),
    );
}

/// On synthetic data generated from a dictionary kernel, the
/// multi-kernel protocol lands within 1.5× of the best single-kernel
/// run's MSE and beats the median single-kernel MSE, over 10 trials.
#[test]
fn acceptance_06_multi_kernel_advantage() {
    const BEST_FACTOR: f64 = 1.5;

    let file = ConfigFile {
        schema_version: 1,
        dataset: DatasetConfig::Synthetic {
            dim: 5,
            samples: 1500,
            variance: 1.0, // dictionary index 8
            centers: 20,
            noise_std: 0.05,
        },
        topology: TopologyConfig {
            preset: Some("ring".into()),
            learners: Some(5),
            edges: None,
        },
        dictionary: DictionaryConfig::default(),
        run: RunSection {
            trials: Some(10),
            seed: Some(606),
            ..RunSection::default()
        },
        output: OutputSection::default(),
    };
    let cfg = resolve(Some(file), &Overrides::default()).unwrap();
    let report = run_comparison(&cfg).unwrap();

    let domkl = report.rows[0].mse.mean;
    let mut dokl: Vec<f64> = report
        .rows
        .iter()
        .filter(|r| r.algorithm == "dokl")
        .map(|r| r.mse.mean)
        .collect();
    dokl.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let best = dokl[0];
    let median = dokl[dokl.len() / 2];

    verdict(
        6,
        "multi-kernel-advantage",
        domkl <= BEST_FACTOR * best && domkl < median,
        &format!(
            "mse ×100: multi {:.3}, best single {:.3} (kernel {}), median single {:.3}; ratio {:.3} (tol {BEST_FACTOR})",
            100.0 * domkl,
            100.0 * best,
            report.best_single_kernel,
            100.0 * median,
            domkl / best
        ),
    );
}

/// With a one-kernel dictionary the multi-kernel protocol and the
/// single-kernel protocol are the same algorithm: predictions agree
/// bit for bit every round, the model and dual trajectories agree bit
/// for bit at four checkpoints along the run, and none of it depends
/// on whether the learners step sequentially or in parallel.
#[test]
fn acceptance_07_single_kernel_identity() {
    const ROUNDS: usize = 200;

    let (ds, _) = synth_rkhs(5 * ROUNDS + 50, 4, 1.0, 15, 0.05, 707).unwrap();
    let streams = partition_data(&ds, 5, 707).unwrap();
    let run_mode = |mode: Mode, rounds: usize, parallelism: Parallelism| {
        let mut cfg = ring5(vec![1.0], 50, 707);
        cfg.rounds = Some(rounds);
        cfg.mode = mode;
        cfg.sqrt_t_hypers = false; // horizon-independent, so prefixes are comparable
        run(&cfg, &streams, parallelism).unwrap()
    };

    let mut outcomes = Vec::new();
    for mode in [Mode::Domkl, Mode::Dokl { kernel: 0 }] {
        for parallelism in [Parallelism::Sequential, Parallelism::Rayon] {
            outcomes.push(run_mode(mode, ROUNDS, parallelism));
        }
    }

    let reference = &outcomes[0];
    let mut identical = true;
    for other in &outcomes[1..] {
        for (a, b) in reference.log.learners.iter().zip(&other.log.learners) {
            identical &= a
                .predictions
                .iter()
                .zip(&b.predictions)
                .all(|(x, y)| x.to_bits() == y.to_bits());
            identical &= a.losses == b.losses;
        }
        for (a, b) in reference.states.iter().zip(&other.states) {
            identical &= same_bits(&a.models[0].theta, &b.models[0].theta);
            identical &= same_bits(&a.models[0].dual, &b.models[0].dual);
        }
    }
    let weights_unit = outcomes
        .iter()
        .flat_map(|o| &o.states)
        .all(|s| s.weights == vec![1.0]);

    // Trajectory checkpoints: a fresh t-round run reproduces the first
    // t rounds of a longer one, so comparing final states at several
    // horizons pins the whole θ and dual trajectory, not just its end.
    let mut checkpoints = true;
    for t in [1usize, 10, 50, ROUNDS] {
        let multi = run_mode(Mode::Domkl, t, Parallelism::Sequential);
        let single = run_mode(Mode::Dokl { kernel: 0 }, t, Parallelism::Sequential);
        for (a, b) in multi.states.iter().zip(&single.states) {
            checkpoints &= same_bits(&a.models[0].theta, &b.models[0].theta);
            checkpoints &= same_bits(&a.models[0].dual, &b.models[0].dual);
        }
    }

    verdict(
        7,
        "single-kernel-identity",
        identical && weights_unit && checkpoints,
        &format!(
            "4 runs (2 modes × 2 parallelism) bitwise identical over {ROUNDS} rounds: {identical}; θ/dual checkpoints at t = 1, 10, 50, {ROUNDS} identical: {checkpoints}; weights pinned to 1: {weights_unit}"
        ),
    );
}

/// Reports are reproducible: running the binary with 1 thread and 4
/// threads yields byte-identical summary and curve files.
#[test]
fn acceptance_08_thread_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.toml");
    std::fs::write(
        &config_path,
        r#"
schema_version = 1
[dataset]
kind = "synthetic"
samples = 450
dim = 3
noise_std = 0.05
[topology]
preset = "complete"
learners = 4
[dictionary]
variances = [0.1, 0.5, 1.0, 2.0, 10.0]
num_features = 20
[run]
trials = 3
seed = 808
rounds = 100
"#,
    )
    .unwrap();

    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out_dir = dir.path().join(format!("threads-{threads}"));
        let status = Command::new(env!("CARGO_BIN_EXE_domkl"))
            .args([
                "run",
                "--config",
                config_path.to_str().unwrap(),
                "--out-dir",
                out_dir.to_str().unwrap(),
                "--threads",
                threads,
            ])
            .output()
            .expect("binary runs");
        assert!(
            status.status.success(),
            "{}",
            String::from_utf8_lossy(&status.stderr)
        );
        let mut bytes = std::fs::read(out_dir.join("summary.json")).unwrap();
        for j in 0..4 {
            for name in ["regret_accuracy", "regret_discrepancy", "weight_gaps"] {
                bytes.extend(std::fs::read(out_dir.join(format!("learner{j}_{name}.csv"))).unwrap());
            }
        }
        outputs.push(bytes);
    }

    verdict(
        8,
        "thread-determinism",
        outputs[0] == outputs[1],
        &format!(
            "summary + 12 curve files byte-identical across --threads 1 and 4 ({} bytes)",
            outputs[0].len()
        ),
    );
}

/// Real-dataset check, optional: on a locally provided wave-energy
/// CSV (9,500 rows, 48 features; DOMKL_WAVE_CSV or
/// data/wave-energy.csv), three learners on a complete graph with the
/// default dictionary and min-max scaling reach a per-learner
/// normalized MSE within a factor of 5 of 0.047 × 10⁻², and the
/// multi-kernel run does not lose to the σ² = 10² single-kernel run.
/// Skipped when the file is absent.
#[test]
fn acceptance_09_wave_energy() {
    const TABLE_MSE_X100: f64 = 0.047;
    const BAND_FACTOR: f64 = 5.0;
    // σ² = 10² sits at index 12 of the default dictionary.
    const REFERENCE_KERNEL: usize = 12;

    let path = std::env::var("DOMKL_WAVE_CSV")
        .map(PathBuf::from)
        .unwrap_or_else(|_| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/wave-energy.csv")
        });
    if !path.is_file() {
        skip(
            9,
            "wave-energy",
            "optional dataset not present; set DOMKL_WAVE_CSV to enable",
        );
        return;
    }

    let file = |mode: &str, kernel_index: Option<usize>| ConfigFile {
        schema_version: 1,
        dataset: DatasetConfig::Csv {
            path: path.clone(),
            label: None,
            header: true,
            normalize: Default::default(),
        },
        topology: TopologyConfig {
            preset: Some("complete".into()),
            learners: Some(3),
            edges: None,
        },
        dictionary: DictionaryConfig::default(),
        run: RunSection {
            mode: Some(mode.into()),
            kernel_index,
            trials: Some(1),
            seed: Some(909),
            ..RunSection::default()
        },
        output: OutputSection::default(),
    };
    let learner_mse_x100 = |mode: &str, kernel_index: Option<usize>| -> (Vec<f64>, usize) {
        let cfg = resolve(Some(file(mode, kernel_index)), &Overrides::default()).unwrap();
        let out = run_experiment(&cfg).unwrap();
        let per_learner = out
            .report
            .learners
            .iter()
            .map(|l| 100.0 * l.mse.mean)
            .collect();
        (per_learner, out.report.rounds)
    };

    let (multi, rounds) = learner_mse_x100("domkl", None);
    let (single, _) = learner_mse_x100("dokl", Some(REFERENCE_KERNEL));
    let lo = TABLE_MSE_X100 / BAND_FACTOR;
    let hi = TABLE_MSE_X100 * BAND_FACTOR;
    let in_band = multi.iter().all(|m| (lo..=hi).contains(m));
    let multi_mean: f64 = multi.iter().sum::<f64>() / multi.len() as f64;
    let single_mean: f64 = single.iter().sum::<f64>() / single.len() as f64;
    let ordered = multi_mean <= single_mean;

    verdict(
        9,
        "wave-energy",
        in_band && ordered,
        &format!(
            "per-learner mse ×100 = {multi:.4?} (band [{lo:.4}, {hi:.4}]); multi mean {multi_mean:.4} vs σ²=10² single {single_mean:.4}; {rounds} rounds on {}",
            path.display()
        ),
    );
}

/// Hedge hand check: with two kernels and cumulative losses
/// (0, η_g ln 3), the weights are exactly (0.75, 0.25) to 1e-12.
#[test]
fn acceptance_10_hedge_hand_example() {
    const TOL: f64 = 1e-12;

    let mut worst = 0.0f64;
    for eta_g in [1.0, 7.3] {
        let losses = [0.0, eta_g * 3.0f64.ln()];
        let weights = combine_weights(&losses, eta_g).unwrap();
        worst = worst.max((weights[0] - 0.75).abs());
        worst = worst.max((weights[1] - 0.25).abs());
    }

    verdict(
        10,
        "hedge-hand-example",
        worst <= TOL,
        &format!("max |q − (0.75, 0.25)| = {worst:.2e} (tol {TOL:.0e})"),
    );
}
