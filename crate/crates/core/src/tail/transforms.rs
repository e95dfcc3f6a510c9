//! Transforms of generating functions used for sums and squares:
//!
//! * φ̄(λ) = sup Σ_j φ(γ_j λ) over unit vectors γ (sums of weighted terms);
//! * φ⁽ˢ⁾(λ) = sup_v (|λ||v| − φ*(√|v|)) (squares);
//! * χ(λ) = φ⁽ˢ⁾(λ) − λβ² (centered squares).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::phi::YoungOrliczPhi;
use crate::error::{domain, Result};
use crate::numeric::{grid_golden_max, project_simplex};

/// Largest number of terms handled by [`overline_phi`].
pub const MAX_TERMS: usize = 8;

/// Random starting points of the simplex search.
pub const RESTARTS: usize = 32;

const SIMPLEX_ITERATIONS: usize = 200;

/// Nodes used when tabulating a transform on a finite domain.
pub const TABULATION_NODES: usize = 257;

/// One term of the sum: the sign of γ_j is free, so it contributes the
/// larger of φ(x) and φ(−x).
fn term(phi: &YoungOrliczPhi, x: f64) -> f64 {
    phi.eval(x).max(phi.eval(-x))
}

/// Whether u ↦ φ(√u) is convex on [0, λ²]. In that case the supremum
/// defining φ̄ is attained at a single unit weight.
fn sqrt_convex(phi: &YoungOrliczPhi, lambda: f64) -> bool {
    let pts = 256;
    let l2 = lambda * lambda;
    let g: Vec<f64> = (0..=pts)
        .map(|i| term(phi, (l2 * i as f64 / pts as f64).sqrt()))
        .collect();
    if g.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    g.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -1e-9 * (scale + 1e-300))
}

/// Σ_j φ(√w_j·λ) for weights on the simplex.
fn weighted_sum(phi: &YoungOrliczPhi, lambda: f64, w: &[f64]) -> f64 {
    w.iter().map(|&wj| term(phi, wj.max(0.0).sqrt() * lambda)).sum()
}

fn simplex_ascent(phi: &YoungOrliczPhi, lambda: f64, start: Vec<f64>) -> (Vec<f64>, f64) {
    let g = |u: f64| term(phi, u.max(0.0).sqrt() * lambda);
    let h = 1e-7;
    let mut w = project_simplex(&start);
    let mut f = weighted_sum(phi, lambda, &w);
    let mut eta = 0.5;
    for _ in 0..SIMPLEX_ITERATIONS {
        let grad: Vec<f64> = w
            .iter()
            .map(|&u| {
                if u > h {
                    (g(u + h) - g(u - h)) / (2.0 * h)
                } else {
                    (g(u + h) - g(u)) / h
                }
            })
            .collect();
        let mut moved = false;
        while eta > 1e-12 {
            let cand: Vec<f64> = w.iter().zip(&grad).map(|(a, d)| a + eta * d).collect();
            let cand = project_simplex(&cand);
            let fc = weighted_sum(phi, lambda, &cand);
            if fc > f {
                w = cand;
                f = fc;
                eta *= 1.5;
                moved = true;
                break;
            }
            eta *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (w, f)
}

/// φ̄(λ) restricted to unit vectors with `m_terms` entries.
///
/// Only the squared weights γ_j² matter once each sign is chosen to maximize
/// its term, so the search runs over the simplex. For even φ and u ↦ φ(√u)
/// convex on [0, λ²] the value is exactly φ(λ). Otherwise
/// the supremum over the simplex of squared weights is searched by projected
/// gradient ascent from the barycenter, the previous (m − 1)-term optimum
/// padded with a zero, and [`RESTARTS`] seeded random points. The result is
/// attained at a feasible point, hence a lower bound of the supremum, and it
/// is nondecreasing in `m_terms`.
pub fn overline_phi(phi: &YoungOrliczPhi, lambda: f64, m_terms: usize) -> Result<f64> {
    if !(1..=MAX_TERMS).contains(&m_terms) {
        return domain(format!("the number of terms must lie in [1, {MAX_TERMS}]"));
    }
    let single = term(phi, lambda);
    if m_terms == 1 || lambda == 0.0 || !single.is_finite() || sqrt_convex(phi, lambda) {
        return Ok(single);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f76_6572);
    let mut prev = vec![1.0];
    let mut best = single;
    for m in 2..=m_terms {
        let mut padded = prev.clone();
        padded.push(0.0);
        let mut starts = vec![padded, vec![1.0 / m as f64; m]];
        for _ in 0..RESTARTS {
            let e: Vec<f64> = (0..m).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let s: f64 = e.iter().sum();
            starts.push(e.into_iter().map(|x| x / s).collect());
        }
        let mut level_best = (prev.clone(), f64::NEG_INFINITY);
        for s in starts {
            let (w, f) = simplex_ascent(phi, lambda, s);
            if f > level_best.1 {
                level_best = (w, f);
            }
        }
        // the padded start keeps the level value at least the previous one
        best = best.max(level_best.1);
        prev = level_best.0;
    }
    Ok(best)
}

/// λ ↦ [`overline_phi`] as a generating function.
///
/// If the fixed-point convexity check passes on the whole domain (on
/// [−100, 100] for an unbounded domain) φ itself is returned. Otherwise a
/// finite domain is tabulated on [`TABULATION_NODES`] nodes.
pub fn overline_transform(phi: &YoungOrliczPhi, m_terms: usize) -> Result<YoungOrliczPhi> {
    let edge = if phi.lambda0().is_finite() { phi.lambda0() } else { 100.0 };
    let inner_edge = if term(phi, edge).is_finite() { edge } else { edge * (1.0 - 1e-9) };
    let even = (0..=64).all(|i| {
        let x = inner_edge * i as f64 / 64.0;
        phi.eval(x) == phi.eval(-x)
    });
    if even && sqrt_convex(phi, inner_edge) {
        return Ok(phi.clone());
    }
    if !phi.lambda0().is_finite() {
        return domain("the overline transform of a function on an unbounded domain needs the fixed-point case");
    }
    let n = TABULATION_NODES;
    let xs: Vec<f64> = (0..n).map(|i| -edge + 2.0 * edge * i as f64 / (n - 1) as f64).collect();
    let ys = xs
        .iter()
        .map(|&x| overline_phi(phi, x, m_terms))
        .collect::<Result<Vec<_>>>()?;
    YoungOrliczPhi::tabulated(xs, ys)
}

/// Beyond this v the sharp transform is declared divergent.
pub const SHARP_V_MAX: f64 = 1e12;

/// φ⁽ˢ⁾(λ) = sup_{v ≥ 0} (|λ|v − φ*(√v)); +∞ when the objective keeps
/// growing up to [`SHARP_V_MAX`].
pub fn phi_sharp(phi: &YoungOrliczPhi, lambda: f64) -> f64 {
    let a = lambda.abs();
    if a == 0.0 {
        return 0.0;
    }
    let h = |v: f64| a * v - phi.conjugate(v.sqrt());
    let mut vmax = 1.0;
    loop {
        let (h1, h2) = (h(vmax), h(2.0 * vmax));
        if !(h2 > h1 + 1e-9 * (1.0 + h1.abs())) {
            break;
        }
        vmax *= 2.0;
        if vmax > SHARP_V_MAX {
            return f64::INFINITY;
        }
    }
    grid_golden_max(h, 0.0, 2.0 * vmax, 129).1.max(0.0)
}

/// Edge of the set where φ⁽ˢ⁾ is finite, by bisection; +∞ if finite at 10⁶.
pub fn phi_sharp_domain(phi: &YoungOrliczPhi) -> f64 {
    let mut lo = 0.0;
    let mut hi = 1.0;
    while phi_sharp(phi, hi).is_finite() {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return f64::INFINITY;
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if phi_sharp(phi, mid).is_finite() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// χ(λ) = φ⁽ˢ⁾(λ) − λβ².
pub fn chi(phi: &YoungOrliczPhi, beta_sq: f64, lambda: f64) -> Result<f64> {
    if !(beta_sq >= 0.0) {
        return domain("β² must be nonnegative");
    }
    Ok(phi_sharp(phi, lambda) - lambda * beta_sq)
}

/// λ ↦ χ(λ) as a generating function on the domain of φ⁽ˢ⁾, tabulated when
/// that domain is finite.
pub fn chi_transform(phi: &YoungOrliczPhi, beta_sq: f64) -> Result<YoungOrliczPhi> {
    if !(beta_sq >= 0.0) {
        return domain("β² must be nonnegative");
    }
    let edge = phi_sharp_domain(phi);
    if edge == 0.0 {
        return domain("the sharp transform is infinite away from 0");
    }
    let inner = phi.clone();
    let lazy = YoungOrliczPhi::custom_unchecked(edge, move |x| phi_sharp(&inner, x) - x * beta_sq);
    if edge.is_finite() {
        lazy.tabulate(edge, TABULATION_NODES)
    } else {
        Ok(lazy)
    }
}
