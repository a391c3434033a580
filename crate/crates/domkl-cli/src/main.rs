use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use domkl_cli::config::{parse_config, resolve, Overrides, Rounds};
use domkl_cli::experiment::{
    format_comparison_table, format_experiment_table, run_comparison, run_experiment,
    write_comparison, write_experiment,
};

/// Distributed online multi-kernel learning over a learner network.
#[derive(Parser)]
#[command(name = "domkl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm across seeded trials and write a report.
    Run(RunArgs),
    /// Compare the multi-kernel protocol against every single-kernel
    /// variant and a centralized baseline on the same data splits.
    Compare(RunArgs),
}

/// Flags override config-file keys; unset values fall back to the
/// file and then to defaults. Every flag can also be set through the
/// environment variable named after it (DOMKL_ prefix).
#[derive(Args)]
struct RunArgs {
    /// Config file: TOML, JSON, or a previously written summary.json
    /// (its embedded config is reused).
    #[arg(long, env = "DOMKL_CONFIG")]
    config: Option<PathBuf>,

    /// Dataset: a CSV path, or 'synth' for generated data.
    #[arg(long, env = "DOMKL_DATASET")]
    dataset: Option<String>,

    /// Network preset: complete, ring, path, or star.
    #[arg(long, env = "DOMKL_TOPOLOGY")]
    topology: Option<String>,

    /// Number of learners.
    #[arg(long, env = "DOMKL_LEARNERS")]
    learners: Option<usize>,

    /// Algorithm: domkl, dokl, or omkl.
    #[arg(long, env = "DOMKL_MODE")]
    mode: Option<String>,

    /// Dictionary index of the kernel for dokl mode.
    #[arg(long, env = "DOMKL_KERNEL_INDEX")]
    kernel_index: Option<usize>,

    /// Kernel weighting: neighbor or message-passing.
    #[arg(long, env = "DOMKL_WEIGHT_MODE")]
    weight_mode: Option<String>,

    /// Seeded repetitions to aggregate.
    #[arg(long, env = "DOMKL_TRIALS")]
    trials: Option<usize>,

    /// Master seed; trial seeds derive from it.
    #[arg(long, env = "DOMKL_SEED")]
    seed: Option<u64>,

    /// Rounds per learner, or 'auto' for the full partition.
    #[arg(long, env = "DOMKL_ROUNDS")]
    rounds: Option<String>,

    /// Consensus penalty ρ (implies explicit hyper-parameters).
    #[arg(long, env = "DOMKL_RHO")]
    rho: Option<f64>,

    /// Proximal weight η.
    #[arg(long, env = "DOMKL_ETA")]
    eta: Option<f64>,

    /// Kernel weighting temperature η_g.
    #[arg(long, env = "DOMKL_ETA_G")]
    eta_g: Option<f64>,

    /// Ridge weight λ in the per-round loss.
    #[arg(long, env = "DOMKL_REG")]
    reg: Option<f64>,

    /// Random features per kernel (D).
    #[arg(long, env = "DOMKL_FEATURES")]
    features: Option<usize>,

    /// Set ρ = η = η_g = √T. Defaults to true unless --rho/--eta/
    /// --eta-g is given.
    #[arg(long, env = "DOMKL_SQRT_T_HYPERS", num_args = 0..=1, default_missing_value = "true")]
    sqrt_t_hypers: Option<bool>,

    /// Report directory.
    #[arg(long, env = "DOMKL_OUT_DIR")]
    out_dir: Option<PathBuf>,

    /// Summary format: json or csv.
    #[arg(long, env = "DOMKL_FORMAT")]
    format: Option<String>,

    /// Skip the per-round invariant checks.
    #[arg(long, env = "DOMKL_NO_SELF_CHECKS")]
    no_self_checks: bool,

    /// Permit message passing on cyclic topologies (weights then
    /// over-count shared losses).
    #[arg(long, env = "DOMKL_ALLOW_CYCLIC_MESSAGES")]
    allow_cyclic_messages: bool,

    /// Record wall-clock time in the report. Off by default so that
    /// repeated runs produce byte-identical files.
    #[arg(long, env = "DOMKL_TIMING")]
    timing: bool,

    /// Worker threads; 0 uses all cores.
    #[arg(long, env = "DOMKL_THREADS", default_value_t = 0)]
    threads: usize,
}

impl RunArgs {
    fn overrides(&self) -> anyhow::Result<Overrides> {
        let rounds = self
            .rounds
            .as_deref()
            .map(Rounds::from_str)
            .transpose()?;
        Ok(Overrides {
            dataset: self.dataset.clone(),
            topology: self.topology.clone(),
            learners: self.learners,
            mode: self.mode.clone(),
            kernel_index: self.kernel_index,
            weight_mode: self.weight_mode.clone(),
            trials: self.trials,
            seed: self.seed,
            rho: self.rho,
            eta: self.eta,
            eta_g: self.eta_g,
            reg: self.reg,
            features: self.features,
            rounds,
            sqrt_t_hypers: self.sqrt_t_hypers,
            out_dir: self.out_dir.clone(),
            format: self.format.clone(),
            no_self_checks: self.no_self_checks,
            allow_cyclic_messages: self.allow_cyclic_messages,
            timing: self.timing,
        })
    }
}

fn setup_threads(threads: usize) {
    if threads == 0 {
        return;
    }
    #[cfg(feature = "parallel")]
    {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            log::warn!("thread pool already initialized: {e}");
        }
    }
    #[cfg(not(feature = "parallel"))]
    if threads > 1 {
        log::warn!("built without the parallel feature; running sequentially");
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    let (args, compare) = match &cli.command {
        Command::Run(a) => (a, false),
        Command::Compare(a) => (a, true),
    };
    setup_threads(args.threads);
    let file = args.config.as_deref().map(parse_config).transpose()?;
    let resolved = resolve(file, &args.overrides()?)?;

    let files = if compare {
        let report = run_comparison(&resolved)?;
        print!("{}", format_comparison_table(&report));
        write_comparison(&report, &resolved.out_dir, resolved.format)?
    } else {
        let out = run_experiment(&resolved)?;
        print!("{}", format_experiment_table(&out.report));
        write_experiment(&out, &resolved.out_dir, resolved.format)?
    };
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
