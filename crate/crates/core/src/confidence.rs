//! Confidence statements for ρ(N): asymptotic Gaussian intervals built on
//! Θ(n, N, ρ), non-asymptotic B(ζ) tail bounds for each observation scheme,
//! and union-bound regions over a range of N.
//!
//! Levels follow the coverage convention: `alpha` is the probability mass
//! inside the interval, so `alpha = 0.95` gives the usual 95% interval.

use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use crate::error::{domain, Result};
use crate::estimate::RhoHatTrajectory;
use crate::numeric::simpson;
use crate::simulate::Problem;
use crate::tail::{chi_transform, combine_max, overline_transform, YoungOrliczPhi, MAX_TERMS};

/// Θ(n, N, ρ) = √(4ρ/n + 9N/n²).
pub fn theta(n: usize, big_n: usize, rho: f64) -> Result<f64> {
    if big_n < 1 || big_n > n {
        return domain(format!("N = {big_n} must lie in [1, n = {n}]"));
    }
    if !(rho >= 0.0) {
        return domain(format!("ρ = {rho} must be nonnegative"));
    }
    let (n, big_n) = (n as f64, big_n as f64);
    Ok((4.0 * rho / n + 9.0 * big_n / (n * n)).sqrt())
}

const CDF_PANELS: usize = 4096;

/// P(|Z| ≤ v) for a standard normal Z, by composite Simpson quadrature.
pub fn normal_two_sided_mass(v: f64) -> f64 {
    if v <= 0.0 {
        return 0.0;
    }
    let density = |x: f64| (-0.5 * x * x).exp();
    let upper = v.min(40.0);
    (2.0 / (2.0 * PI).sqrt() * simpson(density, 0.0, upper, CDF_PANELS)).min(1.0)
}

/// P(|Z| > v) for a standard normal Z, integrated directly over the tail.
pub fn normal_two_sided_tail(v: f64) -> f64 {
    if v <= 1.0 {
        return 1.0 - normal_two_sided_mass(v);
    }
    let density = |x: f64| (-0.5 * x * x).exp();
    2.0 / (2.0 * PI).sqrt() * simpson(density, v, v + 12.0, CDF_PANELS)
}

/// Lower-tail standard normal quantile by Acklam's rational approximation
/// (relative error about 1e-9).
fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// v(α) with P(|Z| ≤ v) = α: a rational approximation refined by one Newton
/// step against [`normal_two_sided_mass`].
pub fn normal_quantile_two_sided(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("α = {alpha} must lie in (0,1)"));
    }
    let v0 = acklam(0.5 * (1.0 + alpha));
    let slope = 2.0 * (-0.5 * v0 * v0).exp() / (2.0 * PI).sqrt();
    Ok((v0 - (normal_two_sided_mass(v0) - alpha) / slope).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiMethod {
    /// ρ̂ ± v·Θ(n, N, max(ρ̂, 0)).
    PlugIn,
    /// The exact set {ρ ≥ 0 : (ρ̂ − ρ)² ≤ v²·Θ(n, N, ρ)²}.
    QuadraticSolve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceInterval {
    pub big_n: usize,
    pub n: usize,
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
    pub method: CiMethod,
    /// The quadratic-solve set can be empty; `lower` and `upper` are then 0.
    pub empty: bool,
}

impl ConfidenceInterval {
    /// Bounds with the lower end clamped at 0.
    pub fn reported(&self) -> (f64, f64) {
        (self.lower.max(0.0), self.upper.max(0.0))
    }

    pub fn contains(&self, rho: f64) -> bool {
        !self.empty && rho >= self.lower && rho <= self.upper
    }
}

/// Interval for ρ(N) at coverage level `alpha`.
pub fn asymptotic_ci(rho_hat_raw: f64, n: usize, big_n: usize, alpha: f64, method: CiMethod) -> Result<ConfidenceInterval> {
    let v = normal_quantile_two_sided(alpha)?;
    let mut ci = interval_at(rho_hat_raw, n, big_n, v, method)?;
    ci.level = alpha;
    Ok(ci)
}

/// Interval at an explicit multiplier v instead of a level.
pub fn interval_at(rho_hat_raw: f64, n: usize, big_n: usize, v: f64, method: CiMethod) -> Result<ConfidenceInterval> {
    if !rho_hat_raw.is_finite() || !(v >= 0.0) {
        return domain("ρ̂ must be finite and v nonnegative");
    }
    let mut ci = ConfidenceInterval {
        big_n,
        n,
        level: normal_two_sided_mass(v),
        lower: rho_hat_raw,
        upper: rho_hat_raw,
        method,
        empty: false,
    };
    match method {
        CiMethod::PlugIn => {
            let half = v * theta(n, big_n, rho_hat_raw.max(0.0))?;
            ci.lower -= half;
            ci.upper += half;
        }
        CiMethod::QuadraticSolve => {
            theta(n, big_n, 0.0)?;
            let (nf, bn) = (n as f64, big_n as f64);
            let v2 = v * v;
            let b = rho_hat_raw + 2.0 * v2 / nf;
            let disc = v2 * (4.0 * rho_hat_raw / nf + 4.0 * v2 / (nf * nf) + 9.0 * bn / (nf * nf));
            let hi = b + disc.max(0.0).sqrt();
            if disc < 0.0 || hi < 0.0 {
                ci.lower = 0.0;
                ci.upper = 0.0;
                ci.empty = true;
            } else {
                ci.lower = (b - disc.sqrt()).max(0.0);
                ci.upper = hi;
            }
        }
    }
    Ok(ci)
}

/// Combined generating function ζ of one observation scheme, with the
/// normalized deviation μ = (ρ̂ − ρ)/(√2·Θ) satisfying ‖μ‖B(ζ) ≤ `scale`.
#[derive(Debug, Clone)]
pub struct TailPipeline {
    problem: Problem,
    zeta: YoungOrliczPhi,
    scale: f64,
}

/// Nodes of the final tabulation of ζ.
const ZETA_NODES: usize = 513;

impl TailPipeline {
    /// Builds ζ for a scheme.
    ///
    /// * A: max(χ[φ̄], φ̄) with φ̄ the overline transform of the noise φ;
    /// * B: max(χ[φ₂], φ₂);
    /// * C: the overline transform of χ[φ₂] over at most [`MAX_TERMS`] terms,
    ///   with scale Δ² = Var(ξ₁).
    ///
    /// χ is taken with β² = 1. `noise_phi` defaults to φ₂ and is used for A
    /// only; `delta_sq` is used for C only.
    pub fn new(problem: Problem, noise_phi: Option<YoungOrliczPhi>, delta_sq: f64) -> Result<Self> {
        let q = YoungOrliczPhi::quadratic();
        let (zeta, scale) = match problem {
            Problem::A => {
                let bar = overline_transform(&noise_phi.unwrap_or(q), MAX_TERMS)?;
                (combine_max(&chi_transform(&bar, 1.0)?, &bar)?, 1.0)
            }
            Problem::B => (combine_max(&chi_transform(&q, 1.0)?, &q)?, 1.0),
            Problem::C => {
                if !(delta_sq > 0.0 && delta_sq.is_finite()) {
                    return domain("Δ² must be positive and finite");
                }
                (overline_transform(&chi_transform(&q, 1.0)?, MAX_TERMS)?, delta_sq)
            }
        };
        let zeta = if zeta.lambda0().is_finite() {
            zeta.tabulate(zeta.lambda0(), ZETA_NODES)?
        } else {
            zeta
        };
        Ok(Self { problem, zeta, scale })
    }

    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn zeta(&self) -> &YoungOrliczPhi {
        &self.zeta
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Bound on P(|μ| > t): min(2, 2·exp(−ζ*(t/scale))).
    pub fn normalized_bound(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 2.0;
        }
        (2.0 * (-self.zeta.conjugate(t / self.scale)).exp()).min(2.0)
    }

    /// Bound on P(|ρ̂ₙ(N) − ρ(N)| > t) with ρ plugged into Θ.
    pub fn bound(&self, n: usize, big_n: usize, rho: f64, t: f64) -> Result<f64> {
        let th = theta(n, big_n, rho)?;
        if th == 0.0 {
            return Ok(if t > 0.0 { 0.0 } else { 2.0 });
        }
        Ok(self.normalized_bound(t / (SQRT_2 * th)))
    }
}

fn cached(problem: Problem) -> Result<&'static TailPipeline> {
    static A: OnceLock<TailPipeline> = OnceLock::new();
    static B: OnceLock<TailPipeline> = OnceLock::new();
    static C: OnceLock<TailPipeline> = OnceLock::new();
    let cell = match problem {
        Problem::A => &A,
        Problem::B => &B,
        Problem::C => &C,
    };
    if let Some(p) = cell.get() {
        return Ok(p);
    }
    // Δ² only rescales the argument, so the cached C pipeline uses Δ² = 1
    let built = TailPipeline::new(problem, None, 1.0)?;
    Ok(cell.get_or_init(|| built))
}

/// Bound on P(|ρ̂ₙ(N) − ρ(N)| > t) for scheme `problem`, with Gaussian-class
/// noise for A and Δ² = `delta_sq` for C.
pub fn nonasymptotic_tail(problem: Problem, n: usize, big_n: usize, rho_plug: f64, t: f64, delta_sq: f64) -> Result<f64> {
    let p = cached(problem)?;
    let scale = if problem == Problem::C {
        if !(delta_sq > 0.0 && delta_sq.is_finite()) {
            return domain("Δ² must be positive and finite");
        }
        delta_sq
    } else {
        1.0
    };
    let th = theta(n, big_n, rho_plug)?;
    if t <= 0.0 {
        return Ok(2.0);
    }
    Ok(p.normalized_bound(t / (SQRT_2 * th * scale)))
}

/// Thresholds v(N) applied to the normalized deviations μ(N).
#[derive(Debug, Clone, PartialEq)]
pub enum Thresholds {
    PerN(Vec<f64>),
    /// One threshold w for every N.
    Uniform(f64),
}

/// How the per-N probabilities P(|μ(N)| > v(N)) are bounded.
#[derive(Debug, Clone, Copy)]
pub enum RegionBound<'a> {
    /// μ(N) treated as N(0, 1/2), so the bound is erfc(v).
    Gaussian,
    NonAsymptotic(&'a TailPipeline),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceRegion {
    pub a: usize,
    pub b: usize,
    pub thresholds: Vec<f64>,
    pub per_n_bounds: Vec<f64>,
    /// min(1, Σ per-N bounds): bound on the probability that some μ(N) exceeds its threshold.
    pub q: f64,
    /// {ρ ≥ 0 : |ρ̂ − ρ| ≤ v(N)·√2·Θ(n, N, ρ)} for each N in [a, b].
    pub intervals: Vec<ConfidenceInterval>,
}

/// Simultaneous region over N ∈ [a, b] by the union bound.
pub fn union_region(
    trajectory: &RhoHatTrajectory,
    a: usize,
    b: usize,
    thresholds: &Thresholds,
    bound: RegionBound<'_>,
) -> Result<ConfidenceRegion> {
    if a < 1 || a > b {
        return domain(format!("the range [{a}, {b}] is empty"));
    }
    let n = trajectory
        .n()
        .ok_or_else(|| crate::Error::Domain("the trajectory carries no sample size".into()))?;
    let vs: Vec<f64> = match thresholds {
        Thresholds::PerN(v) if v.len() == b - a + 1 => v.clone(),
        Thresholds::PerN(v) => return domain(format!("{} thresholds given for {} values of N", v.len(), b - a + 1)),
        Thresholds::Uniform(w) => vec![*w; b - a + 1],
    };
    let mut per_n = Vec::with_capacity(vs.len());
    let mut intervals = Vec::with_capacity(vs.len());
    for (big_n, &v) in (a..=b).zip(&vs) {
        let rho_hat = trajectory
            .get(big_n)
            .ok_or_else(|| crate::Error::Domain(format!("the trajectory has no value at N = {big_n}")))?;
        if !(v >= 0.0) {
            return domain("thresholds must be nonnegative");
        }
        per_n.push(match bound {
            RegionBound::Gaussian => normal_two_sided_tail(SQRT_2 * v),
            RegionBound::NonAsymptotic(p) => p.normalized_bound(v),
        });
        intervals.push(interval_at(rho_hat, n, big_n, SQRT_2 * v, CiMethod::QuadraticSolve)?);
    }
    let q = per_n.iter().sum::<f64>().min(1.0);
    Ok(ConfidenceRegion { a, b, thresholds: vs, per_n_bounds: per_n, q, intervals })
}
