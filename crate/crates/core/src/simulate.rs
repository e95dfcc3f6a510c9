//! Seeded synthetic data for the three observation schemes:
//!
//! * A: regression y_i = f(i/n) + ξ_i with i.i.d. centered noise;
//! * B: an i.i.d. sample from the density f on [0,1];
//! * C: a centered stationary Gaussian sequence with spectral density f.
//!
//! Every draw comes from a ChaCha8 generator seeded with the 64-bit base
//! seed and switched to the stream numbered by the replication index, so a
//! (seed, replication) pair always yields the same data regardless of the
//! order in which replications are executed.

use std::f64::consts::SQRT_2;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Error, Result};
use crate::fit::RhoModel;
use crate::fourier::CoefficientModel;

/// Which of the three observation schemes produced a data set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    /// Regression with additive noise on the design x_i = i/n.
    A,
    /// I.i.d. sample from a density.
    B,
    /// Stationary Gaussian sequence.
    C,
}

impl Problem {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Gaussian,
    /// ±σ with equal probability.
    Rademacher,
    /// Uniform on [−√3σ, √3σ].
    UniformCentered,
}

/// Centered noise with standard deviation `scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    kind: NoiseKind,
    scale: f64,
}

impl NoiseSpec {
    /// A zero scale is accepted and produces noiseless data.
    pub fn new(kind: NoiseKind, scale: f64) -> Result<Self> {
        if !(scale >= 0.0 && scale.is_finite()) {
            return domain(format!("noise scale must be finite and nonnegative, got {scale}"));
        }
        Ok(Self { kind, scale })
    }

    pub fn gaussian(scale: f64) -> Result<Self> {
        Self::new(NoiseKind::Gaussian, scale)
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn variance(&self) -> f64 {
        self.scale * self.scale
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            NoiseKind::Gaussian => self.scale * rng.sample::<f64, _>(StandardNormal),
            NoiseKind::Rademacher => {
                if rng.random::<bool>() {
                    self.scale
                } else {
                    -self.scale
                }
            }
            NoiseKind::UniformCentered => {
                let h = 3f64.sqrt() * self.scale;
                rng.random_range(-h..=h)
            }
        }
    }
}

/// Base seed plus replication index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed {
    pub base: u64,
    pub replication: u64,
}

impl Seed {
    pub fn new(base: u64, replication: u64) -> Self {
        Self { base, replication }
    }

    /// Independent stream for this (base, replication) pair.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.base);
        rng.set_stream(self.replication);
        rng
    }
}

impl From<u64> for Seed {
    fn from(base: u64) -> Self {
        Self::new(base, 0)
    }
}

/// Observations together with the scheme that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    problem: Problem,
    observations: Vec<f64>,
}

impl DataSet {
    pub fn new(problem: Problem, observations: Vec<f64>) -> Result<Self> {
        if observations.len() < 2 {
            return domain("a data set needs at least two observations");
        }
        if let Some(i) = observations.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("observation {i} is not finite")));
        }
        if problem == Problem::B && observations.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return domain("density observations must lie in [0,1]");
        }
        Ok(Self { problem, observations })
    }

    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn n(&self) -> usize {
        self.observations.len()
    }

    /// Design point x_i = i/n of the i-th observation (1-based), for regression data.
    pub fn design(&self, i: usize) -> f64 {
        i as f64 / self.observations.len() as f64
    }
}

/// y_i = f(i/n) + ξ_i for i = 1..n, with f built from the explicit coefficients.
pub fn gen_regression(model: &CoefficientModel, n: usize, noise: &NoiseSpec, seed: Seed) -> Result<DataSet> {
    if n < 2 {
        return domain("regression needs n >= 2");
    }
    // f is 1-periodic, so f(n/n) = f(0)
    let grid = model.eval_uniform_grid(n);
    let mut rng = seed.rng();
    let y = (1..=n).map(|i| grid[i % n] + noise.draw(&mut rng)).collect();
    DataSet::new(Problem::A, y)
}

/// Number of panels of the inverse-CDF grid.
pub const DENSITY_GRID: usize = 1 << 14;

/// Inverse-CDF sampler for a density given by its Fourier coefficients.
#[derive(Debug, Clone)]
pub struct DensitySampler {
    /// Normalized cumulative distribution at x_j = j / DENSITY_GRID.
    cdf: Vec<f64>,
}

impl DensitySampler {
    pub fn new(model: &CoefficientModel) -> Result<Self> {
        let c1 = model.coeff(1);
        if (c1 - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidDensity(format!("total mass c_1 = {c1} differs from 1")));
        }
        let m = DENSITY_GRID;
        let mut f = model.eval_uniform_grid(m);
        f.push(f[0]);
        if let Some(j) = f.iter().position(|&v| v < -1e-12) {
            return Err(Error::InvalidDensity(format!(
                "f({}) = {} is negative",
                j as f64 / m as f64,
                f[j]
            )));
        }
        let h = 1.0 / m as f64;
        let mut cdf = Vec::with_capacity(m + 1);
        let mut acc = 0.0;
        cdf.push(0.0);
        for w in f.windows(2) {
            acc += 0.5 * h * (w[0].max(0.0) + w[1].max(0.0));
            cdf.push(acc);
        }
        for v in &mut cdf {
            *v /= acc;
        }
        Ok(Self { cdf })
    }

    /// x with F(x) = u, by linear interpolation between grid nodes.
    pub fn quantile(&self, u: f64) -> f64 {
        let m = self.cdf.len() - 1;
        // first node with F > u
        let j = self.cdf.partition_point(|&c| c <= u).clamp(1, m);
        let (lo, hi) = (self.cdf[j - 1], self.cdf[j]);
        let frac = if hi > lo { ((u - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.0 };
        ((j - 1) as f64 + frac) / m as f64
    }

    pub fn sample(&self, n: usize, seed: Seed) -> Result<DataSet> {
        if n < 2 {
            return domain("a density sample needs n >= 2");
        }
        let mut rng = seed.rng();
        let xs = (0..n).map(|_| self.quantile(rng.random::<f64>())).collect();
        DataSet::new(Problem::B, xs)
    }
}

/// n i.i.d. draws from the density f.
pub fn gen_density_sample(model: &CoefficientModel, n: usize, seed: Seed) -> Result<DataSet> {
    DensitySampler::new(model)?.sample(n, seed)
}

/// r(h) = √2 ∫₀¹ cos(2πhx) f(x) dx, which is √2·c_1 at h = 0 and c_{2h} otherwise.
pub fn covariance_from_spectrum(model: &CoefficientModel, h: usize) -> f64 {
    if h == 0 {
        SQRT_2 * model.coeff(1)
    } else {
        model.coeff(2 * h)
    }
}

/// Largest supported length of a stationary Gaussian path.
pub const MAX_STATIONARY_LEN: usize = 4096;

/// Cholesky factor of the banded Toeplitz covariance, cached for repeated draws.
#[derive(Debug, Clone)]
pub struct StationaryGaussianSampler {
    n: usize,
    band: usize,
    /// Row i holds L[i][i−band..=i], left-padded with zeros.
    rows: Vec<f64>,
}

impl StationaryGaussianSampler {
    pub fn new(model: &CoefficientModel, n: usize) -> Result<Self> {
        if n > MAX_STATIONARY_LEN {
            return Err(Error::Size { requested: n, max: MAX_STATIONARY_LEN });
        }
        if n < 2 {
            return domain("a stationary path needs n >= 2");
        }
        // r(h) vanishes for 2h beyond the explicit coefficients
        let band = (model.len() / 2).min(n - 1);
        let r: Vec<f64> = (0..=band).map(|h| covariance_from_spectrum(model, h)).collect();
        let w = band + 1;
        let mut rows = vec![0.0; n * w];
        // L[i][j] lives at rows[i*w + (j + band − i)]
        for i in 0..n {
            let j0 = i.saturating_sub(band);
            for j in j0..=i {
                let mut s = r[i - j];
                let k0 = j0.max(j.saturating_sub(band));
                for k in k0..j {
                    s -= rows[i * w + k + band - i] * rows[j * w + k + band - j];
                }
                if j == i {
                    if !(s > 0.0) {
                        return Err(Error::SpectralValidity(format!(
                            "covariance matrix is not positive definite (pivot {i} is {s})"
                        )));
                    }
                    rows[i * w + band] = s.sqrt();
                } else {
                    rows[i * w + j + band - i] = s / rows[j * w + band];
                }
            }
        }
        Ok(Self { n, band, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample(&self, seed: Seed) -> Result<DataSet> {
        let mut rng = seed.rng();
        let z: Vec<f64> = (0..self.n).map(|_| rng.sample(StandardNormal)).collect();
        let w = self.band + 1;
        let xs = (0..self.n)
            .map(|i| {
                let j0 = i.saturating_sub(self.band);
                (j0..=i).map(|j| self.rows[i * w + j + self.band - i] * z[j]).sum()
            })
            .collect();
        DataSet::new(Problem::C, xs)
    }
}

/// One path of length n whose covariance is exactly [r(|i−j|)].
pub fn gen_stationary_gaussian(model: &CoefficientModel, n: usize, seed: Seed) -> Result<DataSet> {
    StationaryGaussianSampler::new(model, n)?.sample(seed)
}

/// The sequence estimated by the lag-product coefficients: s_1 = r(0) = √2·c_1
/// and s_{h+1} = r(h) = c_{2h}. Its tail energy is the smoothness index that
/// the stationary-sequence estimators target.
pub fn spectral_target(model: &CoefficientModel, k: usize) -> Result<CoefficientModel> {
    if k < 1 {
        return domain("number of coefficients must be at least 1");
    }
    CoefficientModel::new((0..k).map(|h| covariance_from_spectrum(model, h)).collect())
}

/// Cosine-only spectral density whose lag-product target has tail energy
/// ρ: c_1 = `leading` and c_{2h} = √(ρ(h) − ρ(h+1)) for 1 ≤ h ≤ `lags`.
pub fn spectral_from_rho_model(rho: &RhoModel, lags: usize, leading: f64) -> Result<CoefficientModel> {
    if lags < 1 {
        return domain("at least one lag is required");
    }
    let mut coeffs = vec![0.0; 2 * lags];
    coeffs[0] = leading;
    for h in 1..=lags {
        let d = rho.eval(h) - rho.eval(h + 1);
        if d < 0.0 {
            return domain(format!("smoothness model increases between N = {h} and N = {}", h + 1));
        }
        coeffs[2 * h - 1] = d.sqrt();
    }
    CoefficientModel::new(coeffs)
}
