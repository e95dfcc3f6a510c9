//! Young–Orlicz generating functions φ, the υ function, pointwise maxima and
//! the exponential tail bound of the B(φ) spaces.

use std::fmt;
use std::sync::Arc;

use super::conjugate::young_fenchel;
use crate::error::{domain, Result};

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A generating function φ defined on [−λ₀, λ₀]; it evaluates to +∞ outside.
#[derive(Clone)]
pub struct YoungOrliczPhi {
    lambda0: f64,
    f: Eval,
}

impl fmt::Debug for YoungOrliczPhi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("YoungOrliczPhi").field("lambda0", &self.lambda0).finish_non_exhaustive()
    }
}

impl YoungOrliczPhi {
    /// φ₂(λ) = λ²/2, the subgaussian generating function.
    pub fn quadratic() -> Self {
        Self::custom_unchecked(f64::INFINITY, |x| 0.5 * x * x)
    }

    /// υ(λ) = −½ ln(1 − 2|λ|) − |λ| on |λ| < 1/2.
    pub fn upsilon() -> Self {
        Self::custom_unchecked(0.5, |x| upsilon(x).unwrap_or(f64::INFINITY))
    }

    /// λ ↦ φ(cλ), defined on [−λ₀/c, λ₀/c].
    pub fn scaled(phi: &YoungOrliczPhi, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return domain(format!("scale must be positive and finite, got {c}"));
        }
        let inner = phi.clone();
        Ok(Self::custom_unchecked(phi.lambda0 / c, move |x| inner.eval(c * x)))
    }

    /// A user-supplied φ, checked numerically for φ(0) = 0, evenness,
    /// φ′(0) = 0, φ″(0) > 0 and convexity on a grid inside the domain.
    pub fn custom<F>(lambda0: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lambda0 > 0.0) {
            return domain("λ₀ must be positive");
        }
        let edge = if lambda0.is_finite() { 0.999 * lambda0 } else { 10.0 };
        if f(0.0).abs() > 1e-12 {
            return domain("φ(0) must vanish");
        }
        let h = 1e-4 * edge;
        let (fp, fm, f0) = (f(h), f(-h), f(0.0));
        // a vanishing derivative makes the one-sided slope shrink with the step
        for side in [1.0, -1.0] {
            let slope = |d: f64| f(side * d) / d;
            if slope(1e-7).abs() > 0.2 * slope(1e-6).abs() + 1e-300 {
                return domain("φ′(0) must vanish");
            }
        }
        if !((fp - 2.0 * f0 + fm) / (h * h) > 0.0) {
            return domain("φ″(0) must be positive");
        }
        let pts = 256;
        let xs: Vec<f64> = (0..=pts).map(|i| -edge + 2.0 * edge * i as f64 / pts as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        if ys.iter().any(|y| !y.is_finite()) {
            return domain("φ must be finite inside its domain");
        }
        for (x, y) in xs.iter().zip(&ys) {
            if (y - f(-x)).abs() > 1e-12 * (1.0 + y.abs()) {
                return domain(format!("φ is not even at λ = {x}"));
            }
        }
        for w in ys.windows(3) {
            if w[0] - 2.0 * w[1] + w[2] < -1e-10 * (1.0 + w[1].abs()) {
                return domain("φ is not convex");
            }
        }
        Ok(Self::custom_unchecked(lambda0, f))
    }

    /// A φ taken as given, without the Young–Orlicz checks.
    pub fn custom_unchecked<F>(lambda0: f64, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { lambda0, f: Arc::new(f) }
    }

    /// Piecewise-linear interpolation of the nodes (xs, ys); +∞ outside [xs₀, xs_last].
    pub fn tabulated(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return domain("a tabulated function needs at least two aligned nodes");
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return domain("tabulation nodes must be strictly increasing");
        }
        let lambda0 = xs[0].abs().max(xs[xs.len() - 1].abs());
        Ok(Self::custom_unchecked(lambda0, move |x| interpolate(&xs, &ys, x)))
    }

    /// Samples φ at `points` equispaced nodes on [−edge, edge].
    pub fn tabulate(&self, edge: f64, points: usize) -> Result<Self> {
        if !(edge > 0.0 && edge.is_finite()) || points < 2 {
            return domain("tabulation needs a finite positive edge and two nodes");
        }
        let xs: Vec<f64> = (0..points)
            .map(|i| -edge + 2.0 * edge * i as f64 / (points - 1) as f64)
            .collect();
        let ys = xs.iter().map(|&x| self.eval(x)).collect();
        Self::tabulated(xs, ys)
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        if lambda.abs() > self.lambda0 {
            f64::INFINITY
        } else {
            (self.f)(lambda)
        }
    }

    /// φ*(t) = sup_λ (λt − φ(λ)).
    pub fn conjugate(&self, t: f64) -> f64 {
        young_fenchel(|x| self.eval(x), -self.lambda0, self.lambda0, t)
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let last = xs.len() - 1;
    if !(x >= xs[0] && x <= xs[last]) {
        return f64::INFINITY;
    }
    let j = xs.partition_point(|&v| v <= x).clamp(1, last);
    let (x0, x1, y0, y1) = (xs[j - 1], xs[j], ys[j - 1], ys[j]);
    if x == x1 {
        return y1;
    }
    if x == x0 {
        return y0;
    }
    if !(y0.is_finite() && y1.is_finite()) {
        return f64::INFINITY;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// υ(λ) = −½ ln(1 − 2|λ|) − |λ|, the log-MGF of Z² − 1 for λ ∈ [0, 1/2).
pub fn upsilon(lambda: f64) -> Result<f64> {
    let a = lambda.abs();
    if !(a < 0.5) {
        return domain(format!("|λ| = {a} must be below 1/2: the moment generating function is infinite"));
    }
    Ok(-0.5 * (-2.0 * a).ln_1p() - a)
}

/// Pointwise max(φ, ν) on the intersection of the two domains.
pub fn combine_max(phi: &YoungOrliczPhi, nu: &YoungOrliczPhi) -> Result<YoungOrliczPhi> {
    let lambda0 = phi.lambda0.min(nu.lambda0);
    if !(lambda0 > 0.0) {
        return domain("the two generating functions have no common domain");
    }
    let (a, b) = (phi.clone(), nu.clone());
    Ok(YoungOrliczPhi::custom_unchecked(lambda0, move |x| a.eval(x).max(b.eval(x))))
}

/// min(2, 2·exp(−φ*(t/v))): tail bound for ‖ξ‖B(φ) ≤ v.
pub fn b_phi_tail(phi: &YoungOrliczPhi, norm_v: f64, t: f64) -> Result<f64> {
    if !(norm_v > 0.0) {
        return domain("the norm bound must be positive");
    }
    if t <= 0.0 {
        return Ok(2.0);
    }
    Ok((2.0 * (-phi.conjugate(t / norm_v)).exp()).min(2.0))
}

/// The map t ↦ [`b_phi_tail`] for fixed φ and norm.
#[derive(Debug, Clone)]
pub struct TailBound {
    phi: YoungOrliczPhi,
    norm: f64,
}

impl TailBound {
    pub fn new(phi: YoungOrliczPhi, norm: f64) -> Result<Self> {
        if !(norm > 0.0) {
            return domain("the norm bound must be positive");
        }
        Ok(Self { phi, norm })
    }

    /// Upper bound on P(|ξ| ≥ t), valid for every t > 0.
    pub fn eval(&self, t: f64) -> f64 {
        b_phi_tail(&self.phi, self.norm, t).expect("norm validated at construction")
    }
}
