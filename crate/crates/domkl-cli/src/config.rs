//! Configuration files, command-line overrides, and resolution.
//!
//! Experiments are described by a versioned TOML (or JSON) document.
//! Command-line flags override file keys; unset keys fall back to
//! defaults. Resolution produces a fully concrete configuration that
//! is echoed verbatim into every report, so a report can be re-run
//! from its own embedded config.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use domkl::data::{self, Dataset, LabelColumn, NormMode};
use domkl::error::{Error, Result};
use domkl::kernels::default_variances;
use domkl::metrics::ReportFormat;
use domkl::simulator::{Mode, SimulationConfig, WeightMode};
use domkl::topology::{preset, Preset, Topology};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

/// Round budget: a fixed count or "auto" (⌊N/J⌋ from the dataset).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rounds {
    Fixed(usize),
    Auto(String),
}

impl Default for Rounds {
    fn default() -> Self {
        Rounds::Auto("auto".into())
    }
}

impl FromStr for Rounds {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Rounds::default());
        }
        s.parse::<usize>().map(Rounds::Fixed).map_err(|_| {
            Error::Config(format!("rounds: expected a positive integer or 'auto', got '{s}'"))
        })
    }
}

/// Where the data comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DatasetConfig {
    /// Numeric CSV; all columns except the label become features.
    Csv {
        path: PathBuf,
        /// Label column name or zero-based index; default last column.
        #[serde(default)]
        label: Option<String>,
        #[serde(default = "default_true")]
        header: bool,
        #[serde(default)]
        normalize: NormMode,
    },
    /// A scalar series unrolled into autoregressive windows.
    Series {
        path: PathBuf,
        /// Value column name or index; default column 0.
        #[serde(default)]
        column: Option<String>,
        #[serde(default = "default_ar_order")]
        ar_order: usize,
        #[serde(default)]
        header: bool,
        #[serde(default)]
        normalize: NormMode,
    },
    /// Synthetic regression data planted in a Gaussian kernel's
    /// reproducing space; regenerated per trial seed.
    Synthetic {
        #[serde(default = "default_dim")]
        dim: usize,
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default = "default_variance")]
        variance: f64,
        #[serde(default = "default_centers")]
        centers: usize,
        #[serde(default = "default_noise")]
        noise_std: f64,
    },
}

fn default_true() -> bool {
    true
}
fn default_ar_order() -> usize {
    5
}
fn default_dim() -> usize {
    5
}
fn default_samples() -> usize {
    3000
}
fn default_variance() -> f64 {
    1.0
}
fn default_centers() -> usize {
    20
}
fn default_noise() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct TopologyConfig {
    /// complete | ring | path | star. Mutually exclusive with `edges`.
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub learners: Option<usize>,
    /// Explicit undirected edge list (zero-based learner indices).
    #[serde(default)]
    pub edges: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DictionaryConfig {
    /// Kernel variances; default is the 17-kernel half-decade grid.
    #[serde(default)]
    pub variances: Option<Vec<f64>>,
    /// Random features per kernel (D).
    #[serde(default)]
    pub num_features: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// domkl | dokl | omkl.
    #[serde(default)]
    pub mode: Option<String>,
    /// Dictionary index for dokl mode.
    #[serde(default)]
    pub kernel_index: Option<usize>,
    /// neighbor | message-passing.
    #[serde(default)]
    pub weight_mode: Option<String>,
    #[serde(default)]
    pub allow_cyclic_messages: Option<bool>,
    #[serde(default)]
    pub rounds: Option<Rounds>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub rho: Option<f64>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub eta_g: Option<f64>,
    #[serde(default)]
    pub reg: Option<f64>,
    /// Defaults to true when no explicit rho/eta/eta_g is given.
    #[serde(default)]
    pub sqrt_t_hypers: Option<bool>,
    #[serde(default)]
    pub self_checks: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// json | csv.
    #[serde(default)]
    pub format: Option<String>,
    /// Include wall-clock timing in reports. Off by default so that
    /// repeated runs produce byte-identical files.
    #[serde(default)]
    pub timing: Option<bool>,
}

/// The on-disk configuration document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: u32,
    pub dataset: DatasetConfig,
    #[serde(default)]
    pub topology: TopologyConfig,
    #[serde(default)]
    pub dictionary: DictionaryConfig,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Flag-level overrides; every field is optional and, when present,
/// beats the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub dataset: Option<String>,
    pub topology: Option<String>,
    pub learners: Option<usize>,
    pub mode: Option<String>,
    pub kernel_index: Option<usize>,
    pub weight_mode: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub rho: Option<f64>,
    pub eta: Option<f64>,
    pub eta_g: Option<f64>,
    pub reg: Option<f64>,
    pub features: Option<usize>,
    pub rounds: Option<Rounds>,
    pub sqrt_t_hypers: Option<bool>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<String>,
    pub no_self_checks: bool,
    pub allow_cyclic_messages: bool,
    pub timing: bool,
}

/// Parses a TOML or JSON config file. A JSON report produced by this
/// tool is also accepted: its embedded `config` object is used, which
/// makes any report re-runnable.
pub fn parse_config(path: &Path) -> Result<ConfigFile> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let is_json = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("json"))
        .unwrap_or(false);
    if is_json {
        let value: serde_json::Value = serde_json::from_str(&raw)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let config_value = match value.get("config") {
            Some(embedded) if embedded.is_object() => embedded.clone(),
            _ => value,
        };
        serde_json::from_value(config_value)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    } else {
        toml::from_str(&raw).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Which algorithm an experiment runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Domkl,
    Dokl(usize),
    Omkl,
}

/// A fully concrete experiment description.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    /// Concrete config document, echoed into reports.
    pub file: ConfigFile,
    pub kind: RunKind,
    pub weight_mode: WeightMode,
    pub allow_cyclic_messages: bool,
    pub topology: Topology,
    pub variances: Vec<f64>,
    pub num_features: usize,
    pub rounds: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub sqrt_t_hypers: bool,
    pub rho: f64,
    pub eta: f64,
    pub eta_g: f64,
    pub reg: f64,
    pub self_checks: bool,
    pub out_dir: PathBuf,
    pub format: ReportFormat,
    pub timing: bool,
    /// CSV-backed data loaded once and shared across trials.
    loaded: Option<Arc<Dataset>>,
}

fn parse_label(s: &str) -> LabelColumn {
    match s.parse::<usize>() {
        Ok(i) => LabelColumn::Index(i),
        Err(_) => LabelColumn::Name(s.to_string()),
    }
}

fn dataset_from_flag(flag: &str) -> DatasetConfig {
    if flag.eq_ignore_ascii_case("synth") || flag.eq_ignore_ascii_case("synthetic") {
        DatasetConfig::Synthetic {
            dim: default_dim(),
            samples: default_samples(),
            variance: default_variance(),
            centers: default_centers(),
            noise_std: default_noise(),
        }
    } else {
        DatasetConfig::Csv {
            path: PathBuf::from(flag),
            label: None,
            header: true,
            normalize: NormMode::default(),
        }
    }
}

/// Merges file (optional), overrides, and defaults into a concrete
/// configuration, validating as it goes. Error messages name the
/// offending key.
pub fn resolve(file: Option<ConfigFile>, over: &Overrides) -> Result<ResolvedConfig> {
    if let Some(f) = &file {
        if f.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version: expected {CONFIG_SCHEMA_VERSION}, got {}",
                f.schema_version
            )));
        }
    }
    let mut cfg = match file {
        Some(f) => f,
        None => ConfigFile {
            schema_version: CONFIG_SCHEMA_VERSION,
            dataset: over
                .dataset
                .as_deref()
                .map(dataset_from_flag)
                .ok_or_else(|| {
                    Error::Config("dataset: required (config file or --dataset)".into())
                })?,
            topology: TopologyConfig::default(),
            dictionary: DictionaryConfig::default(),
            run: RunSection::default(),
            output: OutputSection::default(),
        },
    };

    if let Some(d) = &over.dataset {
        cfg.dataset = dataset_from_flag(d);
    }
    if let Some(t) = &over.topology {
        cfg.topology.preset = Some(t.clone());
        cfg.topology.edges = None;
    }
    if let Some(j) = over.learners {
        cfg.topology.learners = Some(j);
    }
    if let Some(m) = &over.mode {
        cfg.run.mode = Some(m.clone());
    }
    if let Some(k) = over.kernel_index {
        cfg.run.kernel_index = Some(k);
    }
    if let Some(w) = &over.weight_mode {
        cfg.run.weight_mode = Some(w.clone());
    }
    if let Some(t) = over.trials {
        cfg.run.trials = Some(t);
    }
    if let Some(s) = over.seed {
        cfg.run.seed = Some(s);
    }
    if let Some(v) = over.rho {
        cfg.run.rho = Some(v);
    }
    if let Some(v) = over.eta {
        cfg.run.eta = Some(v);
    }
    if let Some(v) = over.eta_g {
        cfg.run.eta_g = Some(v);
    }
    if let Some(v) = over.reg {
        cfg.run.reg = Some(v);
    }
    if let Some(d) = over.features {
        cfg.dictionary.num_features = Some(d);
    }
    if let Some(r) = &over.rounds {
        cfg.run.rounds = Some(r.clone());
    }
    if let Some(s) = over.sqrt_t_hypers {
        cfg.run.sqrt_t_hypers = Some(s);
    }
    if let Some(d) = &over.out_dir {
        cfg.output.dir = Some(d.clone());
    }
    if let Some(f) = &over.format {
        cfg.output.format = Some(f.clone());
    }
    if over.no_self_checks {
        cfg.run.self_checks = Some(false);
    }
    if over.allow_cyclic_messages {
        cfg.run.allow_cyclic_messages = Some(true);
    }
    if over.timing {
        cfg.output.timing = Some(true);
    }

    // Fill defaults so the echo is fully concrete.
    let learners = cfg.topology.learners.unwrap_or(5);
    cfg.topology.learners = Some(learners);
    if cfg.topology.preset.is_none() && cfg.topology.edges.is_none() {
        cfg.topology.preset = Some("complete".into());
    }
    let topology = match (&cfg.topology.preset, &cfg.topology.edges) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "topology: 'preset' and 'edges' are mutually exclusive".into(),
            ))
        }
        (Some(name), None) => {
            let kind = Preset::from_str(name)
                .map_err(|e| Error::Config(format!("topology.preset: {e}")))?;
            preset(kind, learners).map_err(|e| Error::Config(format!("topology: {e}")))?
        }
        (None, Some(edges)) => Topology::new(learners, edges)
            .map_err(|e| Error::Config(format!("topology.edges: {e}")))?,
        (None, None) => unreachable!("preset defaulted above"),
    };

    let variances = match &cfg.dictionary.variances {
        Some(v) if v.is_empty() => {
            return Err(Error::Config(
                "dictionary.variances: must not be empty (omit for the default grid)".into(),
            ))
        }
        Some(v) => v.clone(),
        None => default_variances(),
    };
    cfg.dictionary.variances = Some(variances.clone());
    let num_features = cfg.dictionary.num_features.unwrap_or(50);
    cfg.dictionary.num_features = Some(num_features);
    if num_features == 0 {
        return Err(Error::Config(
            "dictionary.num_features: must be positive".into(),
        ));
    }

    let mode_name = cfg.run.mode.clone().unwrap_or_else(|| "domkl".into());
    cfg.run.mode = Some(mode_name.clone());
    let kernel_index = cfg.run.kernel_index.unwrap_or(0);
    cfg.run.kernel_index = Some(kernel_index);
    let kind = match mode_name.to_ascii_lowercase().as_str() {
        "domkl" => RunKind::Domkl,
        "dokl" => {
            if kernel_index >= variances.len() {
                return Err(Error::Config(format!(
                    "run.kernel_index: {kernel_index} out of range for {} kernels",
                    variances.len()
                )));
            }
            RunKind::Dokl(kernel_index)
        }
        "omkl" => RunKind::Omkl,
        other => {
            return Err(Error::Config(format!(
                "run.mode: unknown mode '{other}' (expected domkl, dokl, or omkl)"
            )))
        }
    };

    let weight_name = cfg
        .run
        .weight_mode
        .clone()
        .unwrap_or_else(|| "neighbor".into());
    cfg.run.weight_mode = Some(weight_name.clone());
    let weight_mode = match weight_name.to_ascii_lowercase().as_str() {
        "neighbor" | "neighbour" => WeightMode::Neighbor,
        "message-passing" | "message_passing" => WeightMode::MessagePassing,
        other => {
            return Err(Error::Config(format!(
                "run.weight_mode: unknown mode '{other}' (expected neighbor or message-passing)"
            )))
        }
    };

    let rounds = match cfg.run.rounds.clone().unwrap_or_default() {
        Rounds::Fixed(0) => return Err(Error::Config("run.rounds: must be positive".into())),
        Rounds::Fixed(t) => Some(t),
        Rounds::Auto(s) => {
            if !s.eq_ignore_ascii_case("auto") {
                return Err(Error::Config(format!(
                    "run.rounds: expected a positive integer or 'auto', got '{s}'"
                )));
            }
            None
        }
    };
    cfg.run.rounds = Some(match rounds {
        Some(t) => Rounds::Fixed(t),
        None => Rounds::default(),
    });

    let trials = cfg.run.trials.unwrap_or(10);
    cfg.run.trials = Some(trials);
    if trials == 0 {
        return Err(Error::Config("run.trials: must be at least 1".into()));
    }
    let seed = cfg.run.seed.unwrap_or(17);
    cfg.run.seed = Some(seed);

    let explicit_hypers =
        cfg.run.rho.is_some() || cfg.run.eta.is_some() || cfg.run.eta_g.is_some();
    let sqrt_t_hypers = cfg.run.sqrt_t_hypers.unwrap_or(!explicit_hypers);
    cfg.run.sqrt_t_hypers = Some(sqrt_t_hypers);
    let rho = cfg.run.rho.unwrap_or(1.0);
    let eta = cfg.run.eta.unwrap_or(1.0);
    let eta_g = cfg.run.eta_g.unwrap_or(1.0);
    cfg.run.rho = Some(rho);
    cfg.run.eta = Some(eta);
    cfg.run.eta_g = Some(eta_g);
    if !sqrt_t_hypers {
        for (v, key) in [(rho, "run.rho"), (eta, "run.eta"), (eta_g, "run.eta_g")] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Config(format!(
                    "{key}: must be finite and positive, got {v}"
                )));
            }
        }
    }
    let reg = cfg.run.reg.unwrap_or(0.01);
    cfg.run.reg = Some(reg);
    if !reg.is_finite() || reg < 0.0 {
        return Err(Error::Config(format!(
            "run.reg: must be finite and non-negative, got {reg}"
        )));
    }
    let self_checks = cfg.run.self_checks.unwrap_or(true);
    cfg.run.self_checks = Some(self_checks);
    let allow_cyclic = cfg.run.allow_cyclic_messages.unwrap_or(false);
    cfg.run.allow_cyclic_messages = Some(allow_cyclic);

    let out_dir = cfg
        .output
        .dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("domkl-out"));
    cfg.output.dir = Some(out_dir.clone());
    let format_name = cfg.output.format.clone().unwrap_or_else(|| "json".into());
    cfg.output.format = Some(format_name.clone());
    let format = ReportFormat::from_str(&format_name)
        .map_err(|e| Error::Config(format!("output.format: {e}")))?;
    let timing = cfg.output.timing.unwrap_or(false);
    cfg.output.timing = Some(timing);

    validate_dataset(&cfg.dataset)?;

    let loaded = match &cfg.dataset {
        DatasetConfig::Synthetic { .. } => None,
        _ => Some(Arc::new(load_file_dataset(&cfg.dataset)?)),
    };

    Ok(ResolvedConfig {
        file: cfg,
        kind,
        weight_mode,
        allow_cyclic_messages: allow_cyclic,
        topology,
        variances,
        num_features,
        rounds,
        trials,
        seed,
        sqrt_t_hypers,
        rho,
        eta,
        eta_g,
        reg,
        self_checks,
        out_dir,
        format,
        timing,
        loaded,
    })
}

fn validate_dataset(ds: &DatasetConfig) -> Result<()> {
    match ds {
        DatasetConfig::Synthetic {
            dim,
            samples,
            variance,
            centers,
            noise_std,
        } => {
            if *dim == 0 {
                return Err(Error::Config("dataset.dim: must be positive".into()));
            }
            if *samples == 0 {
                return Err(Error::Config("dataset.samples: must be positive".into()));
            }
            if *centers == 0 {
                return Err(Error::Config("dataset.centers: must be positive".into()));
            }
            if !variance.is_finite() || *variance <= 0.0 {
                return Err(Error::Config(format!(
                    "dataset.variance: must be finite and positive, got {variance}"
                )));
            }
            if !noise_std.is_finite() || *noise_std < 0.0 {
                return Err(Error::Config(format!(
                    "dataset.noise_std: must be finite and non-negative, got {noise_std}"
                )));
            }
        }
        DatasetConfig::Series { ar_order, .. } => {
            if *ar_order == 0 {
                return Err(Error::Config("dataset.ar_order: must be positive".into()));
            }
        }
        DatasetConfig::Csv { .. } => {}
    }
    Ok(())
}

fn load_file_dataset(ds: &DatasetConfig) -> Result<Dataset> {
    match ds {
        DatasetConfig::Csv {
            path,
            label,
            header,
            normalize,
        } => {
            let label = match label {
                Some(s) => parse_label(s),
                None => {
                    // Default: last column. Peek at the width.
                    let mut rdr = csv::ReaderBuilder::new()
                        .has_headers(*header)
                        .from_path(path)
                        .map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?;
                    let width = if *header {
                        rdr.headers()
                            .map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?
                            .len()
                    } else {
                        let mut rec = csv::StringRecord::new();
                        rdr.read_record(&mut rec)
                            .map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?;
                        rec.len()
                    };
                    if width == 0 {
                        return Err(Error::Ingestion(format!(
                            "{}: empty file",
                            path.display()
                        )));
                    }
                    LabelColumn::Index(width - 1)
                }
            };
            let mut data = data::load_csv(path, &label, *header)?;
            data::normalize(&mut data, *normalize)?;
            Ok(data)
        }
        DatasetConfig::Series {
            path,
            column,
            ar_order,
            header,
            normalize,
        } => {
            let label = match column {
                Some(s) => parse_label(s),
                None => LabelColumn::Index(0),
            };
            // Reuse the CSV reader by treating the value column as
            // the label; the remaining columns are ignored.
            let col_idx = match &label {
                LabelColumn::Index(i) => *i,
                LabelColumn::Name(name) => {
                    let mut rdr = csv::ReaderBuilder::new()
                        .has_headers(true)
                        .from_path(path)
                        .map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?;
                    rdr.headers()
                        .map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?
                        .iter()
                        .position(|h| h.trim() == name)
                        .ok_or_else(|| {
                            Error::Config(format!("dataset.column: '{name}' not found in header"))
                        })?
                }
            };
            let mut rdr = csv::ReaderBuilder::new()
                .has_headers(*header)
                .flexible(true)
                .from_path(path)
                .map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?;
            let mut series = Vec::new();
            for rec in rdr.records() {
                let Ok(rec) = rec else { continue };
                if let Some(field) = rec.get(col_idx) {
                    if let Ok(v) = field.trim().parse::<f64>() {
                        if v.is_finite() {
                            series.push(v);
                        }
                    }
                }
            }
            let mut data = data::ar_window(&series, *ar_order)?;
            data::normalize(&mut data, *normalize)?;
            Ok(data)
        }
        DatasetConfig::Synthetic { .. } => unreachable!("synthetic data is generated per trial"),
    }
}

impl ResolvedConfig {
    /// The dataset a given trial runs on. File-backed data is shared;
    /// synthetic data is regenerated from the trial seed.
    pub fn dataset_for_trial(&self, trial_seed: u64) -> Result<Arc<Dataset>> {
        match (&self.loaded, &self.file.dataset) {
            (Some(shared), _) => Ok(Arc::clone(shared)),
            (
                None,
                DatasetConfig::Synthetic {
                    dim,
                    samples,
                    variance,
                    centers,
                    noise_std,
                },
            ) => {
                let (ds, _) =
                    data::synth_rkhs(*samples, *dim, *variance, *centers, *noise_std, trial_seed)?;
                Ok(Arc::new(ds))
            }
            (None, other) => Err(Error::Config(format!(
                "dataset: unsupported combination {other:?}"
            ))),
        }
    }

    /// The engine configuration for one trial.
    pub fn simulation_config(&self, trial_seed: u64) -> SimulationConfig {
        SimulationConfig {
            topology: self.topology.clone(),
            variances: self.variances.clone(),
            num_features: self.num_features,
            rounds: self.rounds,
            seed: trial_seed,
            sqrt_t_hypers: self.sqrt_t_hypers,
            rho: self.rho,
            eta: self.eta,
            eta_g: self.eta_g,
            reg: self.reg,
            mode: match self.kind {
                RunKind::Dokl(k) => Mode::Dokl { kernel: k },
                _ => Mode::Domkl,
            },
            weight_mode: self.weight_mode,
            allow_cyclic_messages: self.allow_cyclic_messages,
            self_checks: self.self_checks,
        }
    }

    /// The resolved config as a JSON value for report embedding.
    pub fn echo(&self) -> Result<serde_json::Value> {
        Ok(serde_json::to_value(&self.file)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_temp(content: &str, ext: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(ext).tempfile().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let f = write_temp(
            "schema_version = 1\n[dataset]\nkind = \"synthetic\"\n",
            ".toml",
        );
        let parsed = parse_config(f.path()).unwrap();
        let r = resolve(Some(parsed), &Overrides::default()).unwrap();
        assert_eq!(r.num_features, 50);
        assert_eq!(r.variances.len(), 17);
        assert_eq!(r.trials, 10);
        assert!(r.sqrt_t_hypers);
        assert_eq!(r.reg, 0.01);
        assert_eq!(r.kind, RunKind::Domkl);
        assert_eq!(r.topology.num_learners(), 5);
        assert_eq!(r.file.run.trials, Some(10));
        assert_eq!(r.format, ReportFormat::Json);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let f = write_temp(
            "schema_version = 1\nbogus = 3\n[dataset]\nkind = \"synthetic\"\n",
            ".toml",
        );
        let err = parse_config(f.path()).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let f = write_temp(
            "schema_version = 2\n[dataset]\nkind = \"synthetic\"\n",
            ".toml",
        );
        let parsed = parse_config(f.path()).unwrap();
        let err = resolve(Some(parsed), &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("schema_version"), "{err}");
    }

    #[test]
    fn flags_override_file_keys() {
        let f = write_temp(
            "schema_version = 1\n[dataset]\nkind = \"synthetic\"\n[run]\nseed = 1\ntrials = 3\n",
            ".toml",
        );
        let parsed = parse_config(f.path()).unwrap();
        let over = Overrides {
            seed: Some(99),
            learners: Some(3),
            topology: Some("ring".into()),
            mode: Some("dokl".into()),
            kernel_index: Some(8),
            ..Overrides::default()
        };
        let r = resolve(Some(parsed), &over).unwrap();
        assert_eq!(r.seed, 99);
        assert_eq!(r.trials, 3);
        assert_eq!(r.topology.num_learners(), 3);
        assert_eq!(r.kind, RunKind::Dokl(8));
        assert_eq!(r.file.run.seed, Some(99));
    }

    #[test]
    fn explicit_hypers_disable_sqrt_t_by_default() {
        let f = write_temp(
            "schema_version = 1\n[dataset]\nkind = \"synthetic\"\n[run]\nrho = 2.0\neta = 2.0\neta_g = 2.0\n",
            ".toml",
        );
        let r = resolve(Some(parse_config(f.path()).unwrap()), &Overrides::default()).unwrap();
        assert!(!r.sqrt_t_hypers);
        assert_eq!(r.rho, 2.0);
    }

    #[test]
    fn validation_errors_name_keys() {
        let f = write_temp(
            "schema_version = 1\n[dataset]\nkind = \"synthetic\"\n[run]\ntrials = 0\n",
            ".toml",
        );
        let err = resolve(Some(parse_config(f.path()).unwrap()), &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("run.trials"), "{err}");

        let f = write_temp(
            "schema_version = 1\n[dataset]\nkind = \"synthetic\"\n[run]\nmode = \"hybrid\"\n",
            ".toml",
        );
        let err = resolve(Some(parse_config(f.path()).unwrap()), &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("run.mode"), "{err}");

        let f = write_temp(
            "schema_version = 1\n[dataset]\nkind = \"synthetic\"\n[topology]\npreset = \"mesh\"\n",
            ".toml",
        );
        let err = resolve(Some(parse_config(f.path()).unwrap()), &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("topology.preset"), "{err}");
    }

    #[test]
    fn rounds_accepts_auto_and_integers() {
        let f = write_temp(
            "schema_version = 1\n[dataset]\nkind = \"synthetic\"\n[run]\nrounds = 250\n",
            ".toml",
        );
        let r = resolve(Some(parse_config(f.path()).unwrap()), &Overrides::default()).unwrap();
        assert_eq!(r.rounds, Some(250));

        let f = write_temp(
            "schema_version = 1\n[dataset]\nkind = \"synthetic\"\n[run]\nrounds = \"auto\"\n",
            ".toml",
        );
        let r = resolve(Some(parse_config(f.path()).unwrap()), &Overrides::default()).unwrap();
        assert_eq!(r.rounds, None);

        assert_eq!("auto".parse::<Rounds>().unwrap(), Rounds::default());
        assert_eq!("300".parse::<Rounds>().unwrap(), Rounds::Fixed(300));
        assert!("never".parse::<Rounds>().is_err());
    }

    #[test]
    fn explicit_edges_build_custom_topology() {
        let f = write_temp(
            "schema_version = 1\n[dataset]\nkind = \"synthetic\"\n[topology]\nlearners = 3\nedges = [[0,1],[1,2]]\n",
            ".toml",
        );
        let r = resolve(Some(parse_config(f.path()).unwrap()), &Overrides::default()).unwrap();
        assert_eq!(r.topology.num_edges(), 2);
        assert!(r.topology.is_acyclic());
    }

    #[test]
    fn json_config_and_report_reuse() {
        let json = serde_json::json!({
            "schema_version": 1,
            "dataset": {"kind": "synthetic", "samples": 100},
            "run": {"trials": 2, "seed": 5}
        });
        let f = write_temp(&json.to_string(), ".json");
        let r = resolve(Some(parse_config(f.path()).unwrap()), &Overrides::default()).unwrap();
        assert_eq!(r.trials, 2);
        assert_eq!(r.seed, 5);

        // A report wrapping the config under "config" also parses.
        let report = serde_json::json!({"kind": "experiment", "config": r.file, "extra": [1, 2]});
        let f = write_temp(&report.to_string(), ".json");
        let again = resolve(Some(parse_config(f.path()).unwrap()), &Overrides::default()).unwrap();
        assert_eq!(again.seed, 5);
    }

    #[test]
    fn synthetic_dataset_varies_with_trial_seed() {
        let f = write_temp(
            "schema_version = 1\n[dataset]\nkind = \"synthetic\"\nsamples = 50\n",
            ".toml",
        );
        let r = resolve(Some(parse_config(f.path()).unwrap()), &Overrides::default()).unwrap();
        let a = r.dataset_for_trial(1).unwrap();
        let b = r.dataset_for_trial(2).unwrap();
        assert_ne!(a.labels, b.labels);
        assert_eq!(a.len(), 50);
    }

    #[test]
    fn csv_dataset_is_loaded_and_normalized() {
        let mut data_file = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        writeln!(data_file, "a,b,y").unwrap();
        for i in 0..12 {
            writeln!(data_file, "{},{},{}", i, 2 * i, 3 * i).unwrap();
        }
        let toml = format!(
            "schema_version = 1\n[dataset]\nkind = \"csv\"\npath = \"{}\"\n",
            data_file.path().display()
        );
        let f = write_temp(&toml, ".toml");
        let r = resolve(Some(parse_config(f.path()).unwrap()), &Overrides::default()).unwrap();
        let ds = r.dataset_for_trial(0).unwrap();
        assert_eq!(ds.len(), 12);
        assert_eq!(ds.dim(), 2);
        // Default label: last column; default normalization: minmax.
        assert!(ds.labels.iter().all(|y| (0.0..=1.0).contains(y)));
        // Same data for every trial.
        let again = r.dataset_for_trial(9).unwrap();
        assert_eq!(again.labels, ds.labels);
    }

    #[test]
    fn series_dataset_unrolls_ar_windows() {
        let mut data_file = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        for i in 0..20 {
            writeln!(data_file, "{}", i as f64 * 0.1).unwrap();
        }
        let toml = format!(
            "schema_version = 1\n[dataset]\nkind = \"series\"\npath = \"{}\"\nar_order = 3\nheader = false\nnormalize = \"none\"\n",
            data_file.path().display()
        );
        let f = write_temp(&toml, ".toml");
        let r = resolve(Some(parse_config(f.path()).unwrap()), &Overrides::default()).unwrap();
        let ds = r.dataset_for_trial(0).unwrap();
        assert_eq!(ds.len(), 17);
        assert_eq!(ds.dim(), 3);
        assert!((ds.features[0][0] - 0.2).abs() < 1e-12);
        assert!((ds.labels[0] - 0.3).abs() < 1e-12);
    }
}
