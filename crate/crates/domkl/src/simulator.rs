//! Central simulation of the distributed protocol.
//!
//! The engine advances all learners round by round. Within a round,
//! every phase reads a frozen snapshot of the previous phase's state
//! and writes its results only at the phase barrier:
//!
//! 1. prediction and model refresh (reads round-start models and
//!    weights of self and neighbours),
//! 2. dual refresh (reads the *new* models of self and neighbours),
//! 3. kernel reweighting (reads accumulated losses, or stored
//!    messages from the previous round).
//!
//! Because each learner's work inside a phase touches no mutable
//! shared state, phases can run learners in parallel (rayon, with
//! the `parallel` feature) and still produce byte-identical results
//! to sequential execution.
//!
//! Two algorithms share the machinery: the multi-kernel protocol
//! (consensus updates plus distributed Hedge weighting over a kernel
//! dictionary) and its single-kernel form, which skips the weighting
//! exchange entirely. A centralized single-learner baseline with
//! per-kernel gradient steps is included for comparisons.

use nalgebra::DVector;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::kernels::KernelDictionary;
use crate::learner::{
    combine_log_weights, combine_weights, dual_update, gamma, hedge_local_exponent,
    local_update_quadratic, message_update, predict, LearnerState,
};
use crate::losses::{ConvexLoss, QuadraticLoss};
use crate::topology::Topology;

/// One observation in a learner's stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub x: DVector<f64>,
    pub y: f64,
}

/// Which algorithm the engine runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Full multi-kernel protocol over the whole dictionary.
    Domkl,
    /// Single-kernel protocol on one dictionary entry; no kernel
    /// weighting is computed or exchanged.
    Dokl { kernel: usize },
}

/// How kernel weights are shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightMode {
    /// Each learner combines its own accumulated losses with its
    /// direct neighbours' every round.
    Neighbor,
    /// Learners forward log-domain messages so that loss information
    /// propagates beyond one hop, one hop per round. Exact only on
    /// acyclic graphs: cycles re-count the same losses.
    MessagePassing,
}

/// Whether per-learner work inside a phase is dispatched to rayon.
/// Without the `parallel` feature, `Rayon` degrades to sequential
/// execution. Either way the results are identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    Rayon,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Rayon
        } else {
            Parallelism::Sequential
        }
    }
}

/// Full description of a simulation run.
#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub topology: Topology,
    /// Kernel dictionary variances.
    pub variances: Vec<f64>,
    /// Random features per kernel (feature vectors have twice this
    /// dimension).
    pub num_features: usize,
    /// Rounds to run; `None` uses the shortest stream.
    pub rounds: Option<usize>,
    /// Master seed; kernel feature maps derive their seeds from it.
    pub seed: u64,
    /// If set, ρ = η = η_g = √T, overriding the explicit values.
    pub sqrt_t_hypers: bool,
    pub rho: f64,
    pub eta: f64,
    pub eta_g: f64,
    /// Ridge weight λ in the loss.
    pub reg: f64,
    pub mode: Mode,
    pub weight_mode: WeightMode,
    /// Permit message passing on cyclic graphs (logged as a warning;
    /// weights then over-count shared losses).
    pub allow_cyclic_messages: bool,
    /// Verify simplex and dual-conservation invariants every round.
    pub self_checks: bool,
}

impl SimulationConfig {
    /// A config with conventional defaults: √T hyper-parameters,
    /// ridge weight 0.01, full protocol, neighbour weighting,
    /// self-checks on.
    pub fn new(topology: Topology, variances: Vec<f64>, num_features: usize) -> Self {
        SimulationConfig {
            topology,
            variances,
            num_features,
            rounds: None,
            seed: 0,
            sqrt_t_hypers: true,
            rho: 1.0,
            eta: 1.0,
            eta_g: 1.0,
            reg: 0.01,
            mode: Mode::Domkl,
            weight_mode: WeightMode::Neighbor,
            allow_cyclic_messages: false,
            self_checks: true,
        }
    }
}

/// Hyper-parameter values actually used after resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedHypers {
    pub rho: f64,
    pub eta: f64,
    pub eta_g: f64,
    pub reg: f64,
    /// Gradient step of the centralized baseline, when applicable.
    pub ogd_step: Option<f64>,
}

/// Per-learner, per-round traces of one run. Row t of each series
/// describes round t (0-based); `weights[t]` is the combination used
/// for the prediction at round t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerLog {
    pub id: usize,
    pub neighbors: Vec<usize>,
    pub predictions: Vec<f64>,
    pub labels: Vec<f64>,
    /// Squared prediction errors (f̂ − y)².
    pub sq_errors: Vec<f64>,
    /// Regularized losses (f̂ − y)² + λ Σ_p q_p ‖θ_p‖².
    pub losses: Vec<f64>,
    /// Kernel weights used at each round, over the active kernels.
    pub weights: Vec<Vec<f64>>,
    /// Largest kernel-weight gap to any neighbour at each round.
    pub weight_gaps: Vec<f64>,
    /// f̂_j(x_j) − f̂_i(x_j) per neighbour (order of `neighbors`).
    pub neighbor_diffs: Vec<Vec<f64>>,
    /// Cumulative per-kernel losses after each round (T × P).
    pub kernel_loss_sums: Vec<Vec<f64>>,
}

impl LearnerLog {
    fn new(id: usize, neighbors: Vec<usize>, rounds: usize, kernels: usize) -> Self {
        LearnerLog {
            id,
            neighbors,
            predictions: Vec::with_capacity(rounds),
            labels: Vec::with_capacity(rounds),
            sq_errors: Vec::with_capacity(rounds),
            losses: Vec::with_capacity(rounds),
            weights: Vec::with_capacity(rounds),
            weight_gaps: Vec::with_capacity(rounds),
            neighbor_diffs: Vec::with_capacity(rounds),
            kernel_loss_sums: Vec::with_capacity(rounds.min(kernels.max(1))),
        }
    }
}

/// Traces of a full run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLog {
    pub rounds: usize,
    pub learners: Vec<LearnerLog>,
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub log: RunLog,
    pub states: Vec<LearnerState>,
    pub dictionary: KernelDictionary,
    /// Dictionary indices of the kernels the run used (all of them
    /// for the full protocol, one for the single-kernel protocol).
    pub active_kernels: Vec<usize>,
    pub hypers: ResolvedHypers,
    pub rounds: usize,
}

/// Splits a dataset into per-learner streams: a seeded shuffle dealt
/// into `num_learners` chunks of ⌊N/J⌋ samples each; the remainder
/// is dropped.
pub fn partition_data(
    dataset: &Dataset,
    num_learners: usize,
    seed: u64,
) -> Result<Vec<Vec<Sample>>> {
    if num_learners == 0 {
        return Err(Error::Config("need at least one learner".into()));
    }
    let per = dataset.len() / num_learners;
    if per == 0 {
        return Err(Error::Input(format!(
            "{} samples cannot feed {num_learners} learners",
            dataset.len()
        )));
    }
    let mut indices: Vec<usize> = (0..dataset.len()).collect();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);
    let streams = (0..num_learners)
        .map(|j| {
            indices[j * per..(j + 1) * per]
                .iter()
                .map(|&i| Sample {
                    x: dataset.features[i].clone(),
                    y: dataset.labels[i],
                })
                .collect()
        })
        .collect();
    Ok(streams)
}

fn map_learners<T, F>(parallelism: Parallelism, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallelism == Parallelism::Rayon {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = parallelism;
    (0..n).map(f).collect()
}

struct Resolved {
    rounds: usize,
    rho: f64,
    eta: f64,
    eta_g: f64,
    reg: f64,
}

fn resolve(config: &SimulationConfig, streams: &[Vec<Sample>]) -> Result<Resolved> {
    let j = config.topology.num_learners();
    if streams.len() != j {
        return Err(Error::Input(format!(
            "{} streams for {j} learners",
            streams.len()
        )));
    }
    let shortest = streams.iter().map(Vec::len).min().unwrap_or(0);
    let rounds = config.rounds.unwrap_or(shortest);
    if rounds == 0 {
        return Err(Error::Input("no rounds to run".into()));
    }
    if shortest < rounds {
        return Err(Error::Input(format!(
            "a stream has only {shortest} samples for {rounds} rounds"
        )));
    }
    let (rho, eta, eta_g) = if config.sqrt_t_hypers {
        let s = (rounds as f64).sqrt();
        (s, s, s)
    } else {
        (config.rho, config.eta, config.eta_g)
    };
    for &(v, name) in &[(rho, "rho"), (eta, "eta"), (eta_g, "eta_g")] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Config(format!(
                "{name} must be finite and positive, got {v}"
            )));
        }
    }
    if !config.reg.is_finite() || config.reg < 0.0 {
        return Err(Error::Config(format!(
            "reg must be finite and non-negative, got {}",
            config.reg
        )));
    }
    Ok(Resolved {
        rounds,
        rho,
        eta,
        eta_g,
        reg: config.reg,
    })
}

fn check_simplex(weights: &[f64], learner: usize) -> Result<()> {
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-9 || weights.iter().any(|q| *q < -1e-12 || !q.is_finite()) {
        return Err(Error::Protocol(format!(
            "learner {learner}: kernel weights left the simplex (sum {sum})"
        )));
    }
    Ok(())
}

fn check_dual_conservation(states: &[LearnerState], num_kernels: usize) -> Result<()> {
    for a in 0..num_kernels {
        let dim = states[0].models[a].dual.len();
        let mut total = DVector::zeros(dim);
        for s in states {
            total += &s.models[a].dual;
        }
        let norm = total.norm();
        let conserved = norm <= 1e-9; // written so that NaN also fails
        if !conserved {
            return Err(Error::Protocol(format!(
                "dual variables for kernel slot {a} sum to norm {norm:.3e}, expected 0"
            )));
        }
    }
    Ok(())
}

/// Per-learner results of the prediction/update phase.
struct PhaseA {
    prediction: f64,
    sq_error: f64,
    loss: f64,
    per_kernel_losses: Vec<f64>,
    neighbor_diffs: Vec<f64>,
    weight_gap: f64,
    new_thetas: Vec<DVector<f64>>,
}

/// Runs the distributed protocol on per-learner streams.
///
/// Deterministic: outputs depend only on `config` and `streams`,
/// never on `parallelism` or thread count.
pub fn run(
    config: &SimulationConfig,
    streams: &[Vec<Sample>],
    parallelism: Parallelism,
) -> Result<RunOutcome> {
    let r = resolve(config, streams)?;
    let topology = &config.topology;
    let j = topology.num_learners();

    let input_dim = streams[0]
        .first()
        .map(|s| s.x.len())
        .ok_or_else(|| Error::Input("empty stream".into()))?;
    let dictionary =
        KernelDictionary::from_variances(&config.variances, input_dim, config.num_features, config.seed)?;

    let active: Vec<usize> = match config.mode {
        Mode::Domkl => (0..dictionary.len()).collect(),
        Mode::Dokl { kernel } => {
            if kernel >= dictionary.len() {
                return Err(Error::Config(format!(
                    "kernel index {kernel} out of range for dictionary of size {}",
                    dictionary.len()
                )));
            }
            vec![kernel]
        }
    };
    let hedge_active = matches!(config.mode, Mode::Domkl);

    if config.weight_mode == WeightMode::MessagePassing && hedge_active && !topology.is_acyclic() {
        if config.allow_cyclic_messages {
            log::warn!(
                "message passing on a cyclic topology over-counts losses; proceeding as requested"
            );
        } else {
            return Err(Error::Config(
                "message passing requires an acyclic topology (set allow_cyclic_messages to override)"
                    .into(),
            ));
        }
    }

    let feature_dim = dictionary.feature_dim();
    let loss_fn = QuadraticLoss::new(r.reg)?;
    let mut states: Vec<LearnerState> = (0..j)
        .map(|id| LearnerState::new(id, active.len(), feature_dim))
        .collect();
    let mut logs: Vec<LearnerLog> = (0..j)
        .map(|id| {
            LearnerLog::new(
                id,
                topology.neighbors(id).map(|n| n.to_vec()).unwrap_or_default(),
                r.rounds,
                active.len(),
            )
        })
        .collect();

    for t in 0..r.rounds {
        run_round(
            config,
            &r,
            &dictionary,
            &active,
            hedge_active,
            &loss_fn,
            streams,
            &mut states,
            &mut logs,
            t,
            parallelism,
        )
        .map_err(|e| e.at_round(t))?;
    }

    Ok(RunOutcome {
        log: RunLog {
            rounds: r.rounds,
            learners: logs,
        },
        states,
        dictionary,
        active_kernels: active,
        hypers: ResolvedHypers {
            rho: r.rho,
            eta: r.eta,
            eta_g: r.eta_g,
            reg: r.reg,
            ogd_step: None,
        },
        rounds: r.rounds,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_round(
    config: &SimulationConfig,
    r: &Resolved,
    dictionary: &KernelDictionary,
    active: &[usize],
    hedge_active: bool,
    loss_fn: &QuadraticLoss,
    streams: &[Vec<Sample>],
    states: &mut Vec<LearnerState>,
    logs: &mut [LearnerLog],
    t: usize,
    parallelism: Parallelism,
) -> Result<()> {
    let topology = &config.topology;
    let j = topology.num_learners();

    // Phase 1: predict and refresh models from the round-start
    // snapshot.
    let phase_a: Vec<PhaseA> = {
        let states = &*states;
        map_learners(parallelism, j, |id| {
            let sample = &streams[id][t];
            let me = &states[id];
            let zs: Vec<DVector<f64>> = active
                .iter()
                .map(|&p| dictionary.map(p)?.features(&sample.x))
                .collect::<Result<_>>()?;
            let prediction = predict(&me.weights, &me.models, &zs)?;
            let sq_error = QuadraticLoss::squared_error(prediction, sample.y);
            let model_reg: f64 = me
                .weights
                .iter()
                .zip(&me.models)
                .map(|(q, m)| q * m.theta.norm_squared())
                .sum();
            let loss = sq_error + r.reg * model_reg;
            let per_kernel_losses: Vec<f64> = me
                .models
                .iter()
                .zip(&zs)
                .map(|(m, z)| loss_fn.loss(&m.theta, z, sample.y))
                .collect();

            let neighbors = topology.neighbors(id)?;
            let mut neighbor_diffs = Vec::with_capacity(neighbors.len());
            let mut weight_gap = 0.0f64;
            for &i in neighbors {
                let other = &states[i];
                let fi = predict(&other.weights, &other.models, &zs)?;
                neighbor_diffs.push(prediction - fi);
                for (qa, qb) in me.weights.iter().zip(&other.weights) {
                    weight_gap = weight_gap.max((qa - qb).abs());
                }
            }

            let degree = neighbors.len();
            let mut new_thetas = Vec::with_capacity(active.len());
            for (a, z) in zs.iter().enumerate() {
                let own = &me.models[a].theta;
                let nb: Vec<&DVector<f64>> = neighbors
                    .iter()
                    .map(|&i| &states[i].models[a].theta)
                    .collect();
                let g = gamma(own, &nb)?;
                new_thetas.push(local_update_quadratic(
                    z,
                    sample.y,
                    own,
                    &me.models[a].dual,
                    &g,
                    degree,
                    r.rho,
                    r.eta,
                    r.reg,
                )?);
            }
            Ok(PhaseA {
                prediction,
                sq_error,
                loss,
                per_kernel_losses,
                neighbor_diffs,
                weight_gap,
                new_thetas,
            })
        })?
    };

    // Barrier: log the round and commit models and loss sums.
    for (id, out) in phase_a.into_iter().enumerate() {
        let log = &mut logs[id];
        log.predictions.push(out.prediction);
        log.labels.push(streams[id][t].y);
        log.sq_errors.push(out.sq_error);
        log.losses.push(out.loss);
        log.weights.push(states[id].weights.clone());
        log.weight_gaps.push(out.weight_gap);
        log.neighbor_diffs.push(out.neighbor_diffs);
        let state = &mut states[id];
        for (a, theta) in out.new_thetas.into_iter().enumerate() {
            state.models[a].theta = theta;
            state.models[a].loss_sum += out.per_kernel_losses[a];
        }
        log.kernel_loss_sums
            .push(state.models.iter().map(|m| m.loss_sum).collect());
    }

    // Phase 2: dual refresh from the committed models.
    let new_duals: Vec<Vec<DVector<f64>>> = {
        let states = &*states;
        map_learners(parallelism, j, |id| {
            let me = &states[id];
            let neighbors = topology.neighbors(id)?;
            (0..active.len())
                .map(|a| {
                    let nb: Vec<&DVector<f64>> = neighbors
                        .iter()
                        .map(|&i| &states[i].models[a].theta)
                        .collect();
                    dual_update(&me.models[a].dual, &me.models[a].theta, &nb, r.rho)
                })
                .collect()
        })?
    };
    for (state, duals) in states.iter_mut().zip(new_duals) {
        for (a, dual) in duals.into_iter().enumerate() {
            state.models[a].dual = dual;
        }
    }

    // Phase 3: kernel reweighting.
    if hedge_active {
        match config.weight_mode {
            WeightMode::Neighbor => {
                let new_weights: Vec<Vec<f64>> = {
                    let states = &*states;
                    map_learners(parallelism, j, |id| {
                        let neighbors = topology.neighbors(id)?;
                        let combined: Vec<f64> = (0..active.len())
                            .map(|a| {
                                let mut l = states[id].models[a].loss_sum;
                                for &i in neighbors {
                                    l += states[i].models[a].loss_sum;
                                }
                                l
                            })
                            .collect();
                        combine_weights(&combined, r.eta_g)
                    })?
                };
                for (state, w) in states.iter_mut().zip(new_weights) {
                    state.weights = w;
                }
            }
            WeightMode::MessagePassing => {
                type Outgoing = Vec<(usize, Vec<f64>)>;
                let results: Vec<(Vec<f64>, Outgoing)> = {
                    let states = &*states;
                    map_learners(parallelism, j, |id| {
                        let me = &states[id];
                        let neighbors = topology.neighbors(id)?;
                        let own: Vec<f64> = me
                            .models
                            .iter()
                            .map(|m| hedge_local_exponent(m.loss_sum, r.eta_g))
                            .collect::<Result<_>>()?;
                        let silent = vec![0.0; active.len()];
                        let inbox = |from: usize| -> &[f64] {
                            me.messages
                                .get(&from)
                                .map(Vec::as_slice)
                                .unwrap_or(&silent)
                        };
                        let all: Vec<&[f64]> = neighbors.iter().map(|&l| inbox(l)).collect();
                        let weights = combine_log_weights(&message_update(&own, &all)?)?;
                        let outgoing: Outgoing = neighbors
                            .iter()
                            .map(|&target| {
                                let others: Vec<&[f64]> = neighbors
                                    .iter()
                                    .filter(|&&l| l != target)
                                    .map(|&l| inbox(l))
                                    .collect();
                                Ok((target, message_update(&own, &others)?))
                            })
                            .collect::<Result<_>>()?;
                        Ok((weights, outgoing))
                    })?
                };
                let mut deliveries: Vec<(usize, usize, Vec<f64>)> = Vec::new();
                for (id, (w, outgoing)) in results.into_iter().enumerate() {
                    states[id].weights = w;
                    for (target, msg) in outgoing {
                        deliveries.push((target, id, msg));
                    }
                }
                for (target, from, msg) in deliveries {
                    states[target].messages.insert(from, msg);
                }
            }
        }
    }

    if config.self_checks {
        for state in states.iter() {
            check_simplex(&state.weights, state.id)?;
            for model in &state.models {
                if model.theta.iter().any(|v| !v.is_finite())
                    || model.dual.iter().any(|v| !v.is_finite())
                {
                    return Err(Error::Numeric(format!(
                        "learner {} produced non-finite state",
                        state.id
                    )));
                }
            }
        }
        check_dual_conservation(states, active.len())?;
    }
    Ok(())
}

/// Runs the centralized single-learner baseline: one model per
/// dictionary kernel updated by a gradient step of size 1/√T, with
/// Hedge weighting over the learner's own accumulated losses.
pub fn run_centralized_omkl(config: &SimulationConfig, stream: &[Sample]) -> Result<RunOutcome> {
    let rounds = config.rounds.unwrap_or(stream.len());
    if rounds == 0 {
        return Err(Error::Input("no rounds to run".into()));
    }
    if stream.len() < rounds {
        return Err(Error::Input(format!(
            "stream has only {} samples for {rounds} rounds",
            stream.len()
        )));
    }
    let eta_g = if config.sqrt_t_hypers {
        (rounds as f64).sqrt()
    } else {
        config.eta_g
    };
    if !eta_g.is_finite() || eta_g <= 0.0 {
        return Err(Error::Config(format!(
            "eta_g must be finite and positive, got {eta_g}"
        )));
    }
    if !config.reg.is_finite() || config.reg < 0.0 {
        return Err(Error::Config(format!(
            "reg must be finite and non-negative, got {}",
            config.reg
        )));
    }
    let step = 1.0 / (rounds as f64).sqrt();
    let input_dim = stream[0].x.len();
    let dictionary =
        KernelDictionary::from_variances(&config.variances, input_dim, config.num_features, config.seed)?;
    let loss_fn = QuadraticLoss::new(config.reg)?;

    let p = dictionary.len();
    let mut state = LearnerState::new(0, p, dictionary.feature_dim());
    let mut log = LearnerLog::new(0, Vec::new(), rounds, p);

    for (t, sample) in stream.iter().take(rounds).enumerate() {
        let zs = dictionary.features_all(&sample.x)?;
        let prediction = predict(&state.weights, &state.models, &zs)
            .map_err(|e| e.at_round(t))?;
        let sq_error = QuadraticLoss::squared_error(prediction, sample.y);
        let model_reg: f64 = state
            .weights
            .iter()
            .zip(&state.models)
            .map(|(q, m)| q * m.theta.norm_squared())
            .sum();
        log.predictions.push(prediction);
        log.labels.push(sample.y);
        log.sq_errors.push(sq_error);
        log.losses.push(sq_error + config.reg * model_reg);
        log.weights.push(state.weights.clone());
        log.weight_gaps.push(0.0);
        log.neighbor_diffs.push(Vec::new());

        for (model, z) in state.models.iter_mut().zip(&zs) {
            model.loss_sum += loss_fn.loss(&model.theta, z, sample.y);
            let grad = loss_fn.gradient(&model.theta, z, sample.y);
            model.theta -= grad * step;
        }
        log.kernel_loss_sums
            .push(state.models.iter().map(|m| m.loss_sum).collect());
        let losses: Vec<f64> = state.models.iter().map(|m| m.loss_sum).collect();
        state.weights = combine_weights(&losses, eta_g).map_err(|e| e.at_round(t))?;
    }

    Ok(RunOutcome {
        log: RunLog {
            rounds,
            learners: vec![log],
        },
        states: vec![state],
        dictionary,
        active_kernels: (0..p).collect(),
        hypers: ResolvedHypers {
            rho: f64::NAN,
            eta: f64::NAN,
            eta_g,
            reg: config.reg,
            ogd_step: Some(step),
        },
        rounds,
    })
}
