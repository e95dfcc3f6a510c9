//! Trigonometric basis on [0,1], exact Fourier analysis of known functions,
//! the smoothness index ρ(N), the projection risk A(n,N) and the oracle
//! truncation N*.
//!
//! The basis is indexed from 1:
//!
//! * φ₁(x) = 1
//! * φ₂ₗ(x) = √2·cos(2πlx)
//! * φ₂ₗ₊₁(x) = √2·sin(2πlx)
//!
//! It is orthonormal in L₂[0,1], so for f = Σ c_k φ_k the tail energy
//! ρ(N) = Σ_{k>N} c_k² is the squared L₂ distance between f and its
//! N-term truncation.

use std::f64::consts::{PI, SQRT_2};

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{domain, Error, Result};
use crate::fit::RhoModel;
use crate::numeric::simpson_samples;

/// Panel count of the fixed composite Simpson rule used for projections.
pub const QUADRATURE_PANELS: usize = 1 << 12;

/// Evaluates the k-th basis function at `x ∈ [0,1]`.
pub fn eval_basis(k: usize, x: f64) -> Result<f64> {
    if k < 1 {
        return domain("basis index must be at least 1");
    }
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("basis argument {x} outside [0,1]"));
    }
    Ok(basis(k, x))
}

#[inline]
pub(crate) fn basis(k: usize, x: f64) -> f64 {
    if k == 1 {
        return 1.0;
    }
    let l = (k / 2) as f64;
    let arg = 2.0 * PI * l * x;
    if k % 2 == 0 {
        SQRT_2 * arg.cos()
    } else {
        SQRT_2 * arg.sin()
    }
}

/// Samples of a real function on an equispaced grid covering [0,1]
/// (both endpoints included).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    samples: Vec<f64>,
}

impl GridFunction {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return domain("a grid function needs at least two samples");
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("non-finite sample at grid index {i}")));
        }
        Ok(Self { samples })
    }

    /// Samples `f` at `panels + 1` equispaced points.
    pub fn from_fn<F: Fn(f64) -> f64>(f: F, panels: usize) -> Result<Self> {
        let panels = panels.max(1);
        let samples = (0..=panels).map(|i| f(i as f64 / panels as f64)).collect();
        Self::new(samples)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn integral(&self) -> f64 {
        simpson_samples(&self.samples, 1.0)
    }

    /// Fourier coefficients c_1..c_K by composite Simpson quadrature on the grid.
    pub fn project(&self, k: usize) -> Result<CoefficientModel> {
        if k < 1 {
            return domain("number of coefficients must be at least 1");
        }
        let panels = self.samples.len() - 1;
        let mut buf = vec![0.0; self.samples.len()];
        let coeffs = (1..=k)
            .map(|j| {
                for (i, (b, s)) in buf.iter_mut().zip(&self.samples).enumerate() {
                    *b = s * basis(j, i as f64 / panels as f64);
                }
                simpson_samples(&buf, 1.0)
            })
            .collect();
        CoefficientModel::new(coeffs)
    }
}

/// c_k = ∫₀¹ f φ_k for k = 1..K, via Simpson's rule on [`QUADRATURE_PANELS`] panels.
pub fn project_coefficients<F: Fn(f64) -> f64>(f: F, k: usize) -> Result<CoefficientModel> {
    GridFunction::from_fn(f, QUADRATURE_PANELS)?.project(k)
}

/// Sign assignment used when turning a smoothness model into coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignPattern {
    Positive,
    /// c_k carries sign (-1)^k.
    Alternating,
}

/// The unknown function f, represented by its leading Fourier coefficients
/// and optionally a smoothness model describing the energy beyond them.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientModel {
    coeffs: Vec<f64>,
    tail_model: Option<RhoModel>,
}

impl CoefficientModel {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::Numeric(format!("coefficient c_{} is not finite", i + 1)));
        }
        Ok(Self { coeffs, tail_model: None })
    }

    /// Attaches a model for ρ(N) at N ≥ K. The explicit coefficients are
    /// kept as given; the model only accounts for the energy past index K.
    pub fn with_tail(coeffs: Vec<f64>, tail: RhoModel) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("a tail model needs at least one explicit coefficient");
        }
        let mut m = Self::new(coeffs)?;
        m.tail_model = Some(tail);
        Ok(m)
    }

    /// Builds coefficients whose tail energies follow `rho` exactly:
    /// c_1 = `leading` and c_k² = ρ(k-1) − ρ(k) for 2 ≤ k ≤ K, with `rho`
    /// kept as the tail model beyond K.
    pub fn from_rho_model(rho: RhoModel, k: usize, leading: f64, signs: SignPattern) -> Result<Self> {
        if k < 1 {
            return domain("number of coefficients must be at least 1");
        }
        let mut coeffs = Vec::with_capacity(k);
        coeffs.push(leading);
        for j in 2..=k {
            let diff = rho.eval(j - 1) - rho.eval(j);
            if diff < 0.0 {
                return domain(format!("smoothness model increases between N = {} and N = {j}", j - 1));
            }
            let sign = match signs {
                SignPattern::Positive => 1.0,
                SignPattern::Alternating if j % 2 == 1 => -1.0,
                SignPattern::Alternating => 1.0,
            };
            coeffs.push(sign * diff.sqrt());
        }
        Self::with_tail(coeffs, rho)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn tail_model(&self) -> Option<&RhoModel> {
        self.tail_model.as_ref()
    }

    /// c_k with 1-based index; zero beyond the explicit coefficients.
    pub fn coeff(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.coeffs.get(k - 1).copied().unwrap_or(0.0)
    }

    /// Σ_k c_k φ_k(x) over the explicit coefficients.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * basis(i + 1, x))
            .sum()
    }

    /// f(j/m) for j = 0..m, computed with one inverse FFT.
    pub fn eval_uniform_grid(&self, m: usize) -> Vec<f64> {
        assert!(m >= 1);
        let mut spec = vec![Complex::new(0.0, 0.0); m];
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let k = i + 1;
            let l = k / 2;
            // √2 (a cos θ + b sin θ) = Re[√2 (a − i b) e^{iθ}]
            let term = if k % 2 == 0 {
                Complex::new(SQRT_2 * c, 0.0)
            } else {
                Complex::new(0.0, -SQRT_2 * c)
            };
            spec[l % m] += term;
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut spec);
        let head = self.coeff(1);
        spec.iter().map(|z| head + z.re).collect()
    }

    /// ρ(N) = Σ_{k>N} c_k², extended by the tail model when present.
    pub fn rho_tail(&self, n: usize) -> f64 {
        let k = self.coeffs.len();
        match &self.tail_model {
            Some(tail) if n >= k => tail.eval(n),
            Some(tail) => self.explicit_tail(n) + tail.eval(k),
            None => self.explicit_tail(n),
        }
    }

    fn explicit_tail(&self, n: usize) -> f64 {
        self.coeffs.iter().skip(n).map(|c| c * c).sum()
    }

    pub fn profile(&self, n_max: usize) -> SmoothnessProfile {
        let mut values = Vec::with_capacity(n_max + 1);
        // suffix sums keep this O(K + n_max)
        let k = self.coeffs.len();
        let mut suffix = vec![0.0; k + 1];
        for i in (0..k).rev() {
            suffix[i] = suffix[i + 1] + self.coeffs[i] * self.coeffs[i];
        }
        for n in 0..=n_max {
            let v = match &self.tail_model {
                Some(tail) if n >= k => tail.eval(n),
                Some(tail) => suffix[n] + tail.eval(k),
                None => suffix[n.min(k)],
            };
            values.push(v);
        }
        SmoothnessProfile { start: 0, values }
    }
}

/// Anything that can report ρ(N).
pub trait RhoSource {
    fn rho_at(&self, n: usize) -> Option<f64>;
}

impl RhoSource for CoefficientModel {
    fn rho_at(&self, n: usize) -> Option<f64> {
        Some(self.rho_tail(n))
    }
}

impl RhoSource for RhoModel {
    fn rho_at(&self, n: usize) -> Option<f64> {
        (n >= 1).then(|| self.eval(n))
    }
}

/// The map N ↦ ρ(N) on a contiguous range `start..=max_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessProfile {
    start: usize,
    values: Vec<f64>,
}

impl SmoothnessProfile {
    /// Profile with values ρ(start), ρ(start+1), ….
    pub fn new(start: usize, values: Vec<f64>) -> Self {
        Self { start, values }
    }

    pub fn from_fn<F: Fn(usize) -> f64>(start: usize, max_n: usize, f: F) -> Self {
        Self {
            start,
            values: (start..=max_n).map(f).collect(),
        }
    }

    pub fn from_rho_model(model: &RhoModel, max_n: usize) -> Self {
        Self::from_fn(1, max_n, |n| model.eval(n))
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(self.start).and_then(|i| self.values.get(i)).copied()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Largest N covered, or `None` for an empty profile.
    pub fn max_n(&self) -> Option<usize> {
        (!self.values.is_empty()).then(|| self.start + self.values.len() - 1)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }
}

impl RhoSource for SmoothnessProfile {
    fn rho_at(&self, n: usize) -> Option<f64> {
        self.get(n)
    }
}

/// A(n,N) = N/n + ρ(N), the L₂ risk of the N-term projection estimate at unit noise level.
pub fn risk_a(n: usize, big_n: usize, rho_n: f64) -> Result<f64> {
    if big_n < 1 || big_n > n {
        return domain(format!("truncation N = {big_n} must lie in [1, n = {n}]"));
    }
    if !(rho_n >= 0.0) {
        return domain(format!("ρ(N) = {rho_n} must be nonnegative"));
    }
    Ok(big_n as f64 / n as f64 + rho_n)
}

/// N* = argmin_{N ∈ [1,n]} A(n,N) by exhaustive scan, ties to the smallest N.
pub fn optimal_n(n: usize, profile: &SmoothnessProfile) -> Result<usize> {
    if profile.is_empty() || n < 1 {
        return domain("empty smoothness profile");
    }
    let mut best = (0usize, f64::INFINITY);
    for big_n in 1..=n {
        let rho = profile
            .get(big_n)
            .ok_or_else(|| Error::Domain(format!("profile does not cover N = {big_n}")))?;
        let a = risk_a(n, big_n, rho)?;
        if a < best.1 {
            best = (big_n, a);
        }
    }
    Ok(best.0)
}

/// Outcome of the dyadic sup-norm bound Σ_l 2^{l+1/2} ρ^{1/2}(2^l).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NikolskiiBound {
    Converged(f64),
    /// Partial sums still moved by more than 1e-6 (relative) at the last term.
    Diverged { partial_sum: f64 },
}

impl NikolskiiBound {
    pub fn value(&self) -> f64 {
        match self {
            Self::Converged(v) => *v,
            Self::Diverged { .. } => f64::INFINITY,
        }
    }
}

/// Uniform-norm bound Σ_{l=0}^{L} 2^{l+1/2} ρ^{1/2}(2^l).
///
/// The sum carries no |c_1| term, so it only bounds ‖f‖_C for functions
/// with zero mean.
pub fn nikolskii_bound(profile: &SmoothnessProfile, l_max: u32) -> Result<NikolskiiBound> {
    let mut sum = 0.0;
    let mut last = 0.0;
    for l in 0..=l_max {
        let n = 1usize << l;
        let rho = profile
            .get(n)
            .ok_or_else(|| Error::Domain(format!("profile does not cover N = {n}")))?;
        last = 2f64.powf(l as f64 + 0.5) * rho.max(0.0).sqrt();
        sum += last;
    }
    if sum > 0.0 && last / sum > 1e-6 {
        Ok(NikolskiiBound::Diverged { partial_sum: sum })
    } else {
        Ok(NikolskiiBound::Converged(sum))
    }
}
