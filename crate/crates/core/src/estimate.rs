//! Empirical Fourier coefficients, projection and adaptive estimates, the τ
//! statistic with its argmin Ñ, the smoothness estimator ρ̂ₙ(N) and the
//! per-scheme scale σ.

use std::f64::consts::{PI, SQRT_2};

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{domain, Result};
use crate::fourier::CoefficientModel;
use crate::simulate::{DataSet, Problem};

/// ĉ_1..ĉ_K computed from n observations.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCoefficients {
    values: Vec<f64>,
    n: usize,
    problem: Problem,
}

impl EmpiricalCoefficients {
    /// Wraps precomputed values; `n` is the sample size they came from.
    pub fn new(values: Vec<f64>, n: usize, problem: Problem) -> Result<Self> {
        if values.is_empty() {
            return domain("at least one coefficient is required");
        }
        if values.len() > n {
            return domain(format!("K = {} exceeds n = {n}", values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(crate::Error::Numeric("non-finite empirical coefficient".into()));
        }
        Ok(Self { values, n, problem })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// ĉ_k with 1-based index.
    pub fn get(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn k(&self) -> usize {
        self.values.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn problem(&self) -> Problem {
        self.problem
    }

    /// Largest N for which τ_N is defined.
    pub fn max_n(&self) -> usize {
        self.values.len() / 2
    }
}

/// Computes ĉ_1..ĉ_K according to the scheme that produced `data`.
///
/// * A: ĉ_k = n⁻¹ Σ y_i φ_k(i/n)
/// * B: ĉ_k = n⁻¹ Σ φ_k(ξ_i)
/// * C: ĉ_{k+1} = n⁻¹ Σ_{i ≤ n−k} ξ_i ξ_{i+k} for lags k = 0..K−1
pub fn empirical_coeffs(data: &DataSet, k: usize) -> Result<EmpiricalCoefficients> {
    let n = data.n();
    let k_max = if data.problem() == Problem::C { n - 1 } else { n };
    if k < 1 || k > k_max {
        return domain(format!("K = {k} must lie in [1, {k_max}]"));
    }
    let ys = data.observations();
    let values = match data.problem() {
        Problem::A => regression_coeffs(ys, k),
        Problem::B => density_coeffs(ys, k),
        Problem::C => lag_products(ys, k),
    };
    EmpiricalCoefficients::new(values, n, data.problem())
}

fn regression_coeffs(ys: &[f64], k: usize) -> Vec<f64> {
    let n = ys.len();
    // x_i = i/n, and φ_k(n/n) = φ_k(0), so y_n sits at phase 0
    let mut buf: Vec<Complex<f64>> = (0..n).map(|j| Complex::new(ys[if j == 0 { n - 1 } else { j - 1 }], 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let inv = 1.0 / n as f64;
    (1..=k)
        .map(|j| {
            if j == 1 {
                return buf[0].re * inv;
            }
            let z = buf[j / 2];
            if j % 2 == 0 {
                SQRT_2 * z.re * inv
            } else {
                -SQRT_2 * z.im * inv
            }
        })
        .collect()
}

/// How often the rotation recurrence is re-anchored with an exact cis.
const REANCHOR: usize = 32;

fn density_coeffs(xs: &[f64], k: usize) -> Vec<f64> {
    let n = xs.len();
    let l_max = k / 2;
    let mut acc = vec![Complex::new(0.0, 0.0); l_max + 1];
    for &x in xs {
        let step = Complex::from_polar(1.0, 2.0 * PI * x);
        let mut z = step;
        for (l, a) in acc.iter_mut().enumerate().skip(1) {
            if l % REANCHOR == 0 {
                z = Complex::from_polar(1.0, 2.0 * PI * l as f64 * x);
            }
            *a += z;
            z *= step;
        }
    }
    let inv = 1.0 / n as f64;
    (1..=k)
        .map(|j| {
            if j == 1 {
                1.0
            } else if j % 2 == 0 {
                SQRT_2 * acc[j / 2].re * inv
            } else {
                SQRT_2 * acc[j / 2].im * inv
            }
        })
        .collect()
}

fn lag_products(xs: &[f64], k: usize) -> Vec<f64> {
    let n = xs.len();
    (0..k)
        .map(|lag| xs.iter().zip(&xs[lag..]).map(|(a, b)| a * b).sum::<f64>() / n as f64)
        .collect()
}

/// f̂_{n,N} = Σ_{k ≤ N} ĉ_k φ_k.
pub fn projection_estimate(coeffs: &EmpiricalCoefficients, big_n: usize) -> Result<CoefficientModel> {
    if big_n < 1 || big_n > coeffs.k() {
        return domain(format!("N = {big_n} must lie in [1, {}]", coeffs.k()));
    }
    CoefficientModel::new(coeffs.values[..big_n].to_vec())
}

/// τ_N = Σ_{j=N+1}^{2N} ĉ_j².
pub fn tau_stat(coeffs: &EmpiricalCoefficients, big_n: usize) -> Result<f64> {
    if big_n < 1 || 2 * big_n > coeffs.k() {
        return domain(format!("τ_N needs 1 <= N and 2N <= K = {}", coeffs.k()));
    }
    Ok(coeffs.values[big_n..2 * big_n].iter().map(|c| c * c).sum())
}

/// Ñ: the smallest minimizer of τ_N over N ∈ [1, floor(K/2)].
pub fn select_n(coeffs: &EmpiricalCoefficients) -> Result<usize> {
    if coeffs.k() < 2 {
        return domain("selecting N needs K >= 2");
    }
    let mut best = (1, f64::INFINITY);
    for n in 1..=coeffs.max_n() {
        let t = tau_stat(coeffs, n)?;
        if t < best.1 {
            best = (n, t);
        }
    }
    Ok(best.0)
}

/// Projection estimate at the data-driven truncation Ñ.
pub fn adaptive_estimate(coeffs: &EmpiricalCoefficients) -> Result<CoefficientModel> {
    projection_estimate(coeffs, select_n(coeffs)?)
}

/// ρ̂ₙ(N) = τ_N − N/n, which can be negative.
pub fn rho_hat(coeffs: &EmpiricalCoefficients, big_n: usize) -> Result<f64> {
    Ok(tau_stat(coeffs, big_n)? - big_n as f64 / coeffs.n() as f64)
}

/// max(ρ̂ₙ(N), 0).
pub fn rho_hat_clamped(coeffs: &EmpiricalCoefficients, big_n: usize) -> Result<f64> {
    rho_hat(coeffs, big_n).map(|v| v.max(0.0))
}

/// The map N ↦ ρ̂ₙ(N), in increasing N.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoHatTrajectory {
    points: Vec<(usize, f64)>,
    n: Option<usize>,
    problem: Option<Problem>,
}

impl RhoHatTrajectory {
    /// Raw ρ̂ₙ(N) for every N ∈ [1, floor(K/2)].
    pub fn from_coeffs(coeffs: &EmpiricalCoefficients) -> Result<Self> {
        if coeffs.max_n() < 1 {
            return domain("a trajectory needs K >= 2");
        }
        let points = (1..=coeffs.max_n())
            .map(|n| rho_hat(coeffs, n).map(|v| (n, v)))
            .collect::<Result<_>>()?;
        Ok(Self { points, n: Some(coeffs.n()), problem: Some(coeffs.problem()) })
    }

    /// Trajectory from explicit (N, ρ̂) pairs, sorted by N.
    pub fn from_points(mut points: Vec<(usize, f64)>, n: Option<usize>, problem: Option<Problem>) -> Self {
        points.sort_by_key(|p| p.0);
        Self { points, n, problem }
    }

    pub fn points(&self) -> &[(usize, f64)] {
        &self.points
    }

    pub fn n(&self) -> Option<usize> {
        self.n
    }

    pub fn problem(&self) -> Option<Problem> {
        self.problem
    }

    pub fn get(&self, big_n: usize) -> Option<f64> {
        self.points
            .binary_search_by_key(&big_n, |p| p.0)
            .ok()
            .map(|i| self.points[i].1)
    }

    /// Same trajectory with negative values replaced by 0.
    pub fn clamped(&self) -> Self {
        Self {
            points: self.points.iter().map(|&(n, v)| (n, v.max(0.0))).collect(),
            ..self.clone()
        }
    }
}

/// Inputs to [`sigma_for_problem`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SigmaParams<'a> {
    /// Var(ξ) of the regression noise.
    pub noise_variance: Option<f64>,
    /// Spectral density of the stationary sequence.
    pub spectral_model: Option<&'a CoefficientModel>,
}

/// σ for each scheme: √Var(ξ) for A, 1 for B, and √(2c_1² + Σ_{k≥2} c_k²) for C.
pub fn sigma_for_problem(problem: Problem, params: SigmaParams<'_>) -> Result<f64> {
    match problem {
        Problem::A => match params.noise_variance {
            Some(v) if v >= 0.0 && v.is_finite() => Ok(v.sqrt()),
            Some(v) => domain(format!("noise variance {v} is invalid")),
            None => domain("σ for regression needs the noise variance"),
        },
        Problem::B => Ok(1.0),
        Problem::C => {
            let Some(m) = params.spectral_model else {
                return domain("σ for stationary data needs the spectral model");
            };
            let c1 = m.coeff(1);
            let rest: f64 = m.coeffs().iter().skip(1).map(|c| c * c).sum();
            Ok((2.0 * c1 * c1 + rest).sqrt())
        }
    }
}
