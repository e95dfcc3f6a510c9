//! Moment bounds for sums of independent centered variables with the optimal
//! Rosenthal constant R(p) = r·p/(e·ln p).

use std::f64::consts::E;

use crate::error::{domain, Result};

/// The numerical constant r, equal to R(e).
pub const ROSENTHAL_R: f64 = 1.77638;

/// R(p) for p ≥ 2.
pub fn rosenthal_constant(p: f64) -> Result<f64> {
    if !(p >= 2.0 && p.is_finite()) {
        return domain(format!("the moment order p = {p} must be finite and at least 2"));
    }
    Ok(ROSENTHAL_R * p / (E * p.ln()))
}

/// R(p)·max(‖Σξ_i‖₂, (Σ‖ξ_i‖_p^p)^{1/p}).
pub fn rosenthal_bound(p: f64, l2_part: f64, lp_part: f64) -> Result<f64> {
    Ok(rosenthal_constant(p)? * l2_part.max(lp_part))
}

/// Identically distributed summands: R(p)·√n·‖ξ₁‖_p.
pub fn rosenthal_iid(p: f64, n: usize, lp_norm: f64) -> Result<f64> {
    Ok(rosenthal_constant(p)? * (n as f64).sqrt() * lp_norm)
}

/// Weighted sums Σ q_i η_i of identically distributed η: R(p)·‖q‖₂·‖η‖_p.
pub fn rosenthal_weighted(p: f64, weights: &[f64], lp_norm: f64) -> Result<f64> {
    let q2 = weights.iter().map(|q| q * q).sum::<f64>().sqrt();
    Ok(rosenthal_constant(p)? * q2 * lp_norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_at_e() {
        assert!((rosenthal_constant(E).unwrap() - 1.77638).abs() < 1e-12);
        assert!(rosenthal_constant(1.9).is_err());
        assert!(rosenthal_constant(2.0).is_ok());
    }

    #[test]
    fn forms_agree() {
        let p = 4.0;
        let r = rosenthal_constant(p).unwrap();
        assert!((rosenthal_bound(p, 1.0, 3.0).unwrap() - 3.0 * r).abs() < 1e-15);
        assert!((rosenthal_iid(p, 64, 1.0).unwrap() - 8.0 * r).abs() < 1e-12);
        let q = [0.6, 0.8];
        assert!((rosenthal_weighted(p, &q, 2.0).unwrap() - 2.0 * r).abs() < 1e-12);
        let n = 16;
        let flat = vec![1.0 / (n as f64).sqrt(); n];
        assert!((rosenthal_weighted(p, &flat, 1.5).unwrap() - r * 1.5).abs() < 1e-12);
    }
}
