//! Dataset ingestion and preparation.
//!
//! Datasets are dense feature vectors with scalar labels. Sources:
//! numeric CSV files, scalar time series unrolled into autoregressive
//! windows, and a synthetic generator that plants a known function in
//! the reproducing space of a chosen Gaussian kernel.

use std::fmt;
use std::path::Path;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::derive_seed;
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;

/// How features and labels were rescaled, with the parameters needed
/// to invert or re-apply the transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Normalization {
    /// Per-column map to [0, 1]. Constant columns map to 0.
    MinMax {
        feature_min: Vec<f64>,
        feature_max: Vec<f64>,
        label_min: f64,
        label_max: f64,
    },
    /// Per-column standardization. Constant columns map to 0.
    ZScore {
        feature_mean: Vec<f64>,
        feature_std: Vec<f64>,
        label_mean: f64,
        label_std: f64,
    },
}

/// Requested normalization mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum NormMode {
    #[default]
    MinMax,
    ZScore,
    None,
}

impl std::str::FromStr for NormMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "minmax" | "min-max" => Ok(NormMode::MinMax),
            "zscore" | "z-score" => Ok(NormMode::ZScore),
            "none" => Ok(NormMode::None),
            other => Err(Error::Config(format!(
                "unknown normalization '{other}' (expected minmax, zscore, or none)"
            ))),
        }
    }
}

impl fmt::Display for NormMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NormMode::MinMax => "minmax",
            NormMode::ZScore => "zscore",
            NormMode::None => "none",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub name: String,
    /// Rows discarded during ingestion (unparseable or non-finite).
    pub dropped_rows: usize,
    pub normalization: Option<Normalization>,
}

/// An in-memory dataset. Every feature vector has the same dimension
/// and all values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Vec<DVector<f64>>,
    pub labels: Vec<f64>,
    pub meta: DatasetMeta,
}

impl Dataset {
    pub fn new(features: Vec<DVector<f64>>, labels: Vec<f64>, name: &str) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::Input(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        if features.is_empty() {
            return Err(Error::Input("dataset is empty".into()));
        }
        let dim = features[0].len();
        if dim == 0 {
            return Err(Error::Input("feature vectors are empty".into()));
        }
        for (i, x) in features.iter().enumerate() {
            if x.len() != dim {
                return Err(Error::Input(format!(
                    "row {i} has dimension {}, expected {dim}",
                    x.len()
                )));
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::Input(format!("row {i} contains non-finite values")));
            }
        }
        if labels.iter().any(|y| !y.is_finite()) {
            return Err(Error::Input("labels contain non-finite values".into()));
        }
        Ok(Dataset {
            features,
            labels,
            meta: DatasetMeta {
                name: name.to_string(),
                ..DatasetMeta::default()
            },
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features[0].len()
    }
}

/// Which CSV column holds the label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    /// Header name; requires `has_header`.
    Name(String),
    /// Zero-based column index.
    Index(usize),
}

/// Loads a numeric CSV file. Rows that fail to parse or contain
/// non-finite values are dropped (counted in the metadata, warned via
/// `log`); all remaining columns except the label become features in
/// file order.
pub fn load_csv(path: &Path, label: &LabelColumn, has_header: bool) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?;

    let label_idx = match label {
        LabelColumn::Index(i) => *i,
        LabelColumn::Name(name) => {
            if !has_header {
                return Err(Error::Config(
                    "label column by name requires a header row".into(),
                ));
            }
            let headers = reader
                .headers()
                .map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?;
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| {
                    Error::Config(format!("label column '{name}' not found in header"))
                })?
        }
    };

    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut dropped = 0usize;
    let mut width: Option<usize> = None;

    for record in reader.records() {
        let record = match record {
            Ok(r) => r,
            Err(_) => {
                dropped += 1;
                continue;
            }
        };
        if record.len() <= label_idx {
            dropped += 1;
            continue;
        }
        if let Some(w) = width {
            if record.len() != w {
                dropped += 1;
                continue;
            }
        }
        let parsed: Option<Vec<f64>> = record
            .iter()
            .map(|f| f.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect();
        match parsed {
            Some(row) => {
                width.get_or_insert(row.len());
                let mut x = Vec::with_capacity(row.len() - 1);
                for (i, v) in row.iter().enumerate() {
                    if i != label_idx {
                        x.push(*v);
                    }
                }
                if x.is_empty() {
                    return Err(Error::Ingestion(format!(
                        "{}: rows have no feature columns",
                        path.display()
                    )));
                }
                features.push(DVector::from_vec(x));
                labels.push(row[label_idx]);
            }
            None => dropped += 1,
        }
    }

    if dropped > 0 {
        log::warn!("{}: dropped {dropped} unusable rows", path.display());
    }
    if features.is_empty() {
        return Err(Error::Ingestion(format!(
            "{}: no usable rows",
            path.display()
        )));
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let mut ds = Dataset::new(features, labels, &name)?;
    ds.meta.dropped_rows = dropped;
    Ok(ds)
}

/// Rescales features and labels in place according to `mode` and
/// records the transformation parameters in the metadata.
pub fn normalize(dataset: &mut Dataset, mode: NormMode) -> Result<()> {
    if dataset.is_empty() {
        return Err(Error::Input("cannot normalize an empty dataset".into()));
    }
    let dim = dataset.dim();
    let n = dataset.len() as f64;
    match mode {
        NormMode::None => Ok(()),
        NormMode::MinMax => {
            let mut lo = vec![f64::INFINITY; dim];
            let mut hi = vec![f64::NEG_INFINITY; dim];
            for x in &dataset.features {
                for k in 0..dim {
                    lo[k] = lo[k].min(x[k]);
                    hi[k] = hi[k].max(x[k]);
                }
            }
            let (mut ylo, mut yhi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &y in &dataset.labels {
                ylo = ylo.min(y);
                yhi = yhi.max(y);
            }
            for x in &mut dataset.features {
                for k in 0..dim {
                    let range = hi[k] - lo[k];
                    x[k] = if range > 0.0 { (x[k] - lo[k]) / range } else { 0.0 };
                }
            }
            let yrange = yhi - ylo;
            for y in &mut dataset.labels {
                *y = if yrange > 0.0 { (*y - ylo) / yrange } else { 0.0 };
            }
            dataset.meta.normalization = Some(Normalization::MinMax {
                feature_min: lo,
                feature_max: hi,
                label_min: ylo,
                label_max: yhi,
            });
            Ok(())
        }
        NormMode::ZScore => {
            let mut mean = vec![0.0; dim];
            for x in &dataset.features {
                for k in 0..dim {
                    mean[k] += x[k];
                }
            }
            for m in &mut mean {
                *m /= n;
            }
            let mut var = vec![0.0; dim];
            for x in &dataset.features {
                for k in 0..dim {
                    let d = x[k] - mean[k];
                    var[k] += d * d;
                }
            }
            let std: Vec<f64> = var.iter().map(|v| (v / n).sqrt()).collect();
            let ymean = dataset.labels.iter().sum::<f64>() / n;
            let yvar = dataset
                .labels
                .iter()
                .map(|y| (y - ymean) * (y - ymean))
                .sum::<f64>()
                / n;
            let ystd = yvar.sqrt();
            for x in &mut dataset.features {
                for k in 0..dim {
                    x[k] = if std[k] > 0.0 { (x[k] - mean[k]) / std[k] } else { 0.0 };
                }
            }
            for y in &mut dataset.labels {
                *y = if ystd > 0.0 { (*y - ymean) / ystd } else { 0.0 };
            }
            dataset.meta.normalization = Some(Normalization::ZScore {
                feature_mean: mean,
                feature_std: std,
                label_mean: ymean,
                label_std: ystd,
            });
            Ok(())
        }
    }
}

/// Unrolls a scalar series into autoregressive samples: for each t ≥
/// `order`, features [y_{t−1}, …, y_{t−order}] and label y_t.
pub fn ar_window(series: &[f64], order: usize) -> Result<Dataset> {
    if order == 0 {
        return Err(Error::Config("autoregressive order must be positive".into()));
    }
    if series.len() <= order {
        return Err(Error::Input(format!(
            "series of length {} is too short for order {order}",
            series.len()
        )));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("series contains non-finite values".into()));
    }
    let mut features = Vec::with_capacity(series.len() - order);
    let mut labels = Vec::with_capacity(series.len() - order);
    for t in order..series.len() {
        let x: Vec<f64> = (1..=order).map(|k| series[t - k]).collect();
        features.push(DVector::from_vec(x));
        labels.push(series[t]);
    }
    Dataset::new(features, labels, "ar-window")
}

/// A function f(x) = Σ_c α_c κ(x, x_c) in the reproducing space of a
/// Gaussian kernel.
#[derive(Debug, Clone)]
pub struct RkhsFunction {
    pub spec: KernelSpec,
    pub centers: Vec<DVector<f64>>,
    pub coefficients: Vec<f64>,
}

impl RkhsFunction {
    pub fn evaluate(&self, x: &DVector<f64>) -> Result<f64> {
        let mut out = 0.0;
        for (c, a) in self.centers.iter().zip(&self.coefficients) {
            out += a * self.spec.evaluate(x, c)?;
        }
        Ok(out)
    }
}

/// Synthetic regression data with a known ground truth: inputs are
/// uniform on [0, 1]^dim, the target is a random expansion over
/// `num_centers` kernel sections (coefficients N(0, 1/num_centers½)),
/// and labels get additive N(0, noise_std²) noise. Deterministic in
/// `seed`.
pub fn synth_rkhs(
    num_samples: usize,
    dim: usize,
    kernel_variance: f64,
    num_centers: usize,
    noise_std: f64,
    seed: u64,
) -> Result<(Dataset, RkhsFunction)> {
    if num_samples == 0 || dim == 0 || num_centers == 0 {
        return Err(Error::Config(
            "synthetic data needs positive sample count, dimension, and center count".into(),
        ));
    }
    if !noise_std.is_finite() || noise_std < 0.0 {
        return Err(Error::Config(format!(
            "noise standard deviation must be finite and non-negative, got {noise_std}"
        )));
    }
    let spec = KernelSpec::gaussian(kernel_variance)?;
    let unit = Uniform::new(0.0, 1.0).map_err(|e| Error::Config(e.to_string()))?;
    let coeff_std = 1.0 / (num_centers as f64).sqrt();
    let coeff_dist = Normal::new(0.0, coeff_std).map_err(|e| Error::Config(e.to_string()))?;

    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, 0));
    let centers: Vec<DVector<f64>> = (0..num_centers)
        .map(|_| DVector::from_fn(dim, |_, _| unit.sample(&mut rng)))
        .collect();
    let coefficients: Vec<f64> = (0..num_centers).map(|_| coeff_dist.sample(&mut rng)).collect();
    let truth = RkhsFunction {
        spec,
        centers,
        coefficients,
    };

    // Inputs and noise use separate streams so the noise level never
    // changes which inputs get drawn.
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, 1));
    let mut noise_rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, 2));
    let mut features = Vec::with_capacity(num_samples);
    let mut labels = Vec::with_capacity(num_samples);
    let noise = if noise_std > 0.0 {
        Some(Normal::new(0.0, noise_std).map_err(|e| Error::Config(e.to_string()))?)
    } else {
        None
    };
    for _ in 0..num_samples {
        let x = DVector::from_fn(dim, |_, _| unit.sample(&mut rng));
        let mut y = truth.evaluate(&x)?;
        if let Some(n) = &noise {
            y += n.sample(&mut noise_rng);
        }
        features.push(x);
        labels.push(y);
    }
    let ds = Dataset::new(features, labels, "synth-rkhs")?;
    Ok((ds, truth))
}
