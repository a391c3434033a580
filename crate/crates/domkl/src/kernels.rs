//! Gaussian kernels and their random Fourier feature approximations.
//!
//! A shift-invariant kernel κ(x, x') = κ(x − x') with κ(0) = 1 is the
//! Fourier transform of a probability density π_κ over frequencies
//! (Bochner). Drawing D frequencies v_1, …, v_D from π_κ and mapping
//!
//! z(x) = D^{-1/2} [sin(v_1ᵀx), …, sin(v_Dᵀx), cos(v_1ᵀx), …, cos(v_Dᵀx)]
//!
//! gives an unbiased Monte-Carlo estimate κ(x, x') ≈ z(x)ᵀz(x') whose
//! error decays with D. For the Gaussian kernel with variance σ²,
//! κ(x, x') = exp(−‖x − x'‖² / (2σ²)) and π_κ = N(0, σ⁻²I).
//!
//! Because sin² + cos² = 1 termwise, ‖z(x)‖² = 1 for every x, which
//! the closed-form model update exploits.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::derive_seed;

/// A Gaussian kernel, identified by its variance σ² > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    variance: f64,
}

impl KernelSpec {
    pub fn gaussian(variance: f64) -> Result<Self> {
        if !variance.is_finite() || variance <= 0.0 {
            return Err(Error::Config(format!(
                "kernel variance must be finite and positive, got {variance}"
            )));
        }
        Ok(KernelSpec { variance })
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Exact kernel value exp(−‖x1 − x2‖² / (2σ²)).
    pub fn evaluate(&self, x1: &DVector<f64>, x2: &DVector<f64>) -> Result<f64> {
        if x1.len() != x2.len() {
            return Err(Error::Input(format!(
                "kernel arguments have dimensions {} and {}",
                x1.len(),
                x2.len()
            )));
        }
        let d2 = (x1 - x2).norm_squared();
        Ok((-d2 / (2.0 * self.variance)).exp())
    }
}

/// A sampled random Fourier feature map for one kernel.
///
/// Feature vectors have dimension `2 * num_features` (a sine and a
/// cosine block). The map is fixed at construction; two maps built
/// from the same spec, dimension, and seed are identical.
#[derive(Debug, Clone)]
pub struct RFFeatureMap {
    spec: KernelSpec,
    /// num_features × input_dim; row i is the frequency v_i.
    frequencies: DMatrix<f64>,
}

impl RFFeatureMap {
    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn input_dim(&self) -> usize {
        self.frequencies.ncols()
    }

    /// Number of sampled frequencies D.
    pub fn num_features(&self) -> usize {
        self.frequencies.nrows()
    }

    /// Dimension of the feature vectors produced, i.e. 2D.
    pub fn feature_dim(&self) -> usize {
        2 * self.num_features()
    }

    /// Evaluates z(x). The result has unit Euclidean norm.
    pub fn features(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.input_dim() {
            return Err(Error::Input(format!(
                "feature map expects dimension {}, got {}",
                self.input_dim(),
                x.len()
            )));
        }
        let d = self.num_features();
        let scale = 1.0 / (d as f64).sqrt();
        let projected = &self.frequencies * x;
        let mut z = DVector::zeros(2 * d);
        for i in 0..d {
            let (s, c) = projected[i].sin_cos();
            z[i] = scale * s;
            z[d + i] = scale * c;
        }
        Ok(z)
    }
}

/// Samples a feature map for `spec` with `num_features` frequencies
/// drawn from N(0, σ⁻²I). Deterministic in `seed`.
pub fn sample_feature_map(
    spec: &KernelSpec,
    input_dim: usize,
    num_features: usize,
    seed: u64,
) -> Result<RFFeatureMap> {
    if input_dim == 0 {
        return Err(Error::Config("input dimension must be positive".into()));
    }
    if num_features == 0 {
        return Err(Error::Config(
            "number of random features must be positive".into(),
        ));
    }
    let std = (1.0 / spec.variance()).sqrt();
    let normal = Normal::new(0.0, std)
        .map_err(|e| Error::Config(format!("invalid frequency distribution: {e}")))?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // Row-major fill: frequencies are consumed per row, so adding a
    // frequency never changes earlier rows.
    let mut frequencies = DMatrix::zeros(num_features, input_dim);
    for i in 0..num_features {
        for k in 0..input_dim {
            frequencies[(i, k)] = normal.sample(&mut rng);
        }
    }
    Ok(RFFeatureMap {
        spec: *spec,
        frequencies,
    })
}

/// Approximate kernel value z(x1)ᵀz(x2) under `map`.
pub fn approx_kernel(map: &RFFeatureMap, x1: &DVector<f64>, x2: &DVector<f64>) -> Result<f64> {
    Ok(map.features(x1)?.dot(&map.features(x2)?))
}

/// An ordered set of kernels with their sampled feature maps. All
/// maps share the input dimension and feature count; each is sampled
/// from its own seed derived from the dictionary seed and the kernel
/// index.
#[derive(Debug, Clone)]
pub struct KernelDictionary {
    maps: Vec<RFFeatureMap>,
}

impl KernelDictionary {
    /// Builds a dictionary from explicit kernel variances.
    pub fn from_variances(
        variances: &[f64],
        input_dim: usize,
        num_features: usize,
        seed: u64,
    ) -> Result<Self> {
        if variances.is_empty() {
            return Err(Error::Config("kernel dictionary must not be empty".into()));
        }
        let maps = variances
            .iter()
            .enumerate()
            .map(|(p, &v)| {
                let spec = KernelSpec::gaussian(v)?;
                sample_feature_map(&spec, input_dim, num_features, derive_seed(seed, p as u64))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KernelDictionary { maps })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn map(&self, p: usize) -> Result<&RFFeatureMap> {
        self.maps.get(p).ok_or_else(|| {
            Error::Input(format!(
                "kernel index {p} out of range for dictionary of size {}",
                self.maps.len()
            ))
        })
    }

    pub fn maps(&self) -> &[RFFeatureMap] {
        &self.maps
    }

    pub fn variances(&self) -> Vec<f64> {
        self.maps.iter().map(|m| m.spec().variance()).collect()
    }

    pub fn input_dim(&self) -> usize {
        self.maps[0].input_dim()
    }

    pub fn feature_dim(&self) -> usize {
        self.maps[0].feature_dim()
    }

    /// Evaluates every kernel's feature map at `x`.
    pub fn features_all(&self, x: &DVector<f64>) -> Result<Vec<DVector<f64>>> {
        self.maps.iter().map(|m| m.features(x)).collect()
    }
}

/// The default 17-kernel grid: variances 10^((p−8)/2) for p = 0..17,
/// spanning 10⁻⁴ to 10⁴ in half-decade steps.
pub fn default_variances() -> Vec<f64> {
    (0..17).map(|p| 10f64.powf((p as f64 - 8.0) / 2.0)).collect()
}

/// Builds the default dictionary over [`default_variances`].
pub fn default_dictionary(
    input_dim: usize,
    num_features: usize,
    seed: u64,
) -> Result<KernelDictionary> {
    KernelDictionary::from_variances(&default_variances(), input_dim, num_features, seed)
}
