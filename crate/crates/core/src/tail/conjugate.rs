//! Numerical Young–Fenchel (Legendre) transform.

use crate::numeric::grid_golden_max;

/// Grid size of the scan that precedes golden-section refinement.
pub const CONJUGATE_GRID: usize = 512;

/// Infinite domain ends are bracketed by doubling out to this distance.
pub const CONJUGATE_REACH: f64 = 1e15;

/// g*(v) = sup_{p ∈ [lo, hi]} (p·v − g(p)).
///
/// Either end may be infinite. Infinite ends are bracketed by doubling; if
/// the objective is still increasing at [`CONJUGATE_REACH`] the result is
/// `f64::INFINITY`. Points where `g` is infinite or NaN are excluded.
pub fn young_fenchel<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, v: f64) -> f64 {
    let h = |p: f64| {
        let gp = g(p);
        if gp.is_nan() || gp == f64::INFINITY {
            f64::NEG_INFINITY
        } else {
            p * v - gp
        }
    };
    let increasing = |x1: f64, x2: f64| {
        let (h1, h2) = (h(x1), h(x2));
        h2 > h1 && h2 - h1 > 1e-12 * ((x2 * v).abs() + g(x2).abs())
    };
    let anchor = 0f64.clamp(lo.min(hi), hi.max(lo));
    let b = if hi.is_finite() {
        hi
    } else {
        let mut w = 1.0;
        while increasing(anchor + w, anchor + 2.0 * w) {
            w *= 2.0;
            if w > CONJUGATE_REACH {
                return f64::INFINITY;
            }
        }
        anchor + 2.0 * w
    };
    let a = if lo.is_finite() {
        lo
    } else {
        let mut w = 1.0;
        while increasing(anchor - w, anchor - 2.0 * w) {
            w *= 2.0;
            if w > CONJUGATE_REACH {
                return f64::INFINITY;
            }
        }
        anchor - 2.0 * w
    };
    grid_golden_max(h, a, b, CONJUGATE_GRID).1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_self_conjugate() {
        for i in 0..=40 {
            let t = -10.0 + 0.5 * i as f64;
            let got = young_fenchel(|x| 0.5 * x * x, f64::NEG_INFINITY, f64::INFINITY, t);
            assert!((got - 0.5 * t * t).abs() < 1e-8, "t = {t}: {got}");
        }
    }

    #[test]
    fn linear_function_conjugate() {
        let g = |x: f64| 1.5 * x;
        assert_eq!(young_fenchel(g, f64::NEG_INFINITY, f64::INFINITY, 1.5), 0.0);
        assert_eq!(young_fenchel(g, f64::NEG_INFINITY, f64::INFINITY, 1.6), f64::INFINITY);
        assert_eq!(young_fenchel(g, f64::NEG_INFINITY, f64::INFINITY, 1.4), f64::INFINITY);
    }

    #[test]
    fn bounded_domain_attains_edge() {
        // sup over [0, 1] of p·3 − p² is at the edge p = 1
        let got = young_fenchel(|x| x * x, 0.0, 1.0, 3.0);
        assert!((got - 2.0).abs() < 1e-14);
    }
}
