//! Grand Lebesgue Spaces Gψ: generating functions ψ, the norm
//! sup_p ‖f‖_p/ψ(p), moment-to-tail conversion, and the transforms linking
//! ψ with Young–Orlicz functions φ.

use std::fmt;
use std::sync::Arc;

use super::conjugate::young_fenchel;
use super::phi::YoungOrliczPhi;
use crate::error::{domain, Result};

/// Number of p-values in the geometric evaluation grid of [`gls_norm`].
pub const GLS_GRID: usize = 512;

/// Largest p on the grid when b = +∞.
pub const GLS_P_MAX: f64 = 1e3;

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A generating function ψ on [1, b).
///
/// `atoms` are isolated points where ψ is finite although it is infinite on
/// a neighbourhood; they are always added to the evaluation grid.
#[derive(Clone)]
pub struct GeneratingPsi {
    b: f64,
    f: Eval,
    atoms: Vec<f64>,
}

impl fmt::Debug for GeneratingPsi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratingPsi")
            .field("b", &self.b)
            .field("atoms", &self.atoms)
            .finish_non_exhaustive()
    }
}

impl GeneratingPsi {
    /// Checks that ψ is finite and bounded away from 0 on the interior grid.
    pub fn new<F>(b: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let psi = Self::new_unchecked(b, f)?;
        let grid = psi.grid();
        let lo = grid.iter().map(|&p| psi.eval(p)).fold(f64::INFINITY, f64::min);
        if let Some(&p) = grid.iter().find(|&&p| !psi.eval(p).is_finite()) {
            return domain(format!("ψ is not finite at p = {p}"));
        }
        if !(lo > 0.0) {
            return domain("ψ must be bounded away from zero");
        }
        Ok(psi)
    }

    pub fn new_unchecked<F>(b: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(b > 1.0) {
            return domain(format!("the upper endpoint b = {b} must exceed 1"));
        }
        Ok(Self { b, f: Arc::new(f), atoms: Vec::new() })
    }

    /// ψ(p) = √p on [1, ∞).
    pub fn sqrt() -> Self {
        Self::new_unchecked(f64::INFINITY, f64::sqrt).expect("b = ∞ is valid")
    }

    /// ψ⁽ʳ⁾: equal to 1 at p = r and +∞ elsewhere, so that Gψ⁽ʳ⁾ is L_r.
    pub fn degenerate(r: f64) -> Result<Self> {
        if !(r >= 1.0 && r.is_finite()) {
            return domain(format!("the exponent r = {r} must be finite and at least 1"));
        }
        let mut psi = Self::new_unchecked(f64::INFINITY, move |p| if p == r { 1.0 } else { f64::INFINITY })?;
        psi.atoms.push(r);
        Ok(psi)
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    /// ψ(p) for p ∈ [1, b), +∞ elsewhere.
    pub fn eval(&self, p: f64) -> f64 {
        if !(p >= 1.0 && p < self.b) {
            return f64::INFINITY;
        }
        (self.f)(p)
    }

    /// Geometric grid on [1, b): p = b − (b − 1)e^{−s} with s uniform on
    /// [0, ln 10⁹] for finite b, or p = 1000^{s} with s uniform on [0, 1]
    /// otherwise; atoms appended.
    pub fn grid(&self) -> Vec<f64> {
        let last = (GLS_GRID - 1) as f64;
        let mut g: Vec<f64> = if self.b.is_finite() {
            let smax = 1e9f64.ln();
            (0..GLS_GRID)
                .map(|i| self.b - (self.b - 1.0) * (-smax * i as f64 / last).exp())
                .collect()
        } else {
            (0..GLS_GRID).map(|i| GLS_P_MAX.powf(i as f64 / last)).collect()
        };
        g.extend(self.atoms.iter().copied());
        g
    }
}

/// sup_p ‖f‖_p / ψ(p) over the grid of [`GeneratingPsi::grid`].
///
/// The value is a lower bound of the true supremum. Beyond the grid the ratio
/// is probed at two further points, each about three decades closer to b
/// (finite b) or 1024 times larger (infinite b). If the ratio is still
/// rising at the second probe by at least 0.75 of the rise at the first,
/// the supremum is reported as +∞.
pub fn gls_norm<M: Fn(f64) -> f64>(moment_fn: M, psi: &GeneratingPsi) -> f64 {
    let ratio = |p: f64| {
        let s = psi.eval(p);
        if !(s.is_finite() && s > 0.0) {
            return 0.0;
        }
        let m = moment_fn(p);
        if m.is_nan() {
            0.0
        } else {
            m / s
        }
    };
    let grid = psi.grid();
    let mut sup = grid.iter().map(|&p| ratio(p)).fold(0.0, f64::max);
    let probes = if psi.b().is_finite() {
        let b = psi.b();
        [b - (b - 1.0) * 1e-9, b - (b - 1.0) * 1e-12, b - (b - 1.0) * 1e-15]
    } else {
        [GLS_P_MAX, GLS_P_MAX * 1024.0, GLS_P_MAX * 1024.0 * 1024.0]
    };
    let r: Vec<f64> = probes.iter().map(|&p| ratio(p)).collect();
    let (d1, d2) = (r[1] - r[0], r[2] - r[1]);
    if sup == f64::INFINITY || (d2 > 0.0 && d2 >= 0.75 * d1) {
        return f64::INFINITY;
    }
    for v in r {
        sup = sup.max(v);
    }
    sup
}

/// exp(−h*(ln t)) with h(p) = p·ln ψ(p): the tail bound for ‖ξ‖Gψ = 1.
pub fn tail_from_gls(psi: &GeneratingPsi, t: f64) -> Result<f64> {
    if !(t >= std::f64::consts::E) {
        return domain(format!("t = {t} must be at least e"));
    }
    let lt = t.ln();
    let h = |p: f64| p * psi.eval(p).ln();
    let mut conj = young_fenchel(h, 1.0, psi.b(), lt);
    for &p in psi.atoms() {
        conj = conj.max(p * lt - h(p));
    }
    Ok((-conj).exp())
}

/// ψ⁽ᵐ⁾(p) = ψ(mp)^m on [1, b/m).
pub fn psi_power_transform(psi: &GeneratingPsi, m: f64) -> Result<GeneratingPsi> {
    if !(m > 1.0 && m.is_finite()) {
        return domain(format!("the power m = {m} must exceed 1"));
    }
    if !(psi.b() / m > 1.0) {
        return domain(format!("b/m = {} must exceed 1", psi.b() / m));
    }
    let inner = psi.clone();
    let mut out = GeneratingPsi::new_unchecked(psi.b() / m, move |p| inner.eval(m * p).powf(m))?;
    out.atoms = psi.atoms().iter().map(|a| a / m).filter(|&a| a >= 1.0).collect();
    Ok(out)
}

/// ψ_φ(p) = p·exp(−β*(p)/p) with β(y) = φ(eʸ), on [1, ∞).
pub fn psi_from_phi(phi: &YoungOrliczPhi) -> GeneratingPsi {
    let phi = phi.clone();
    let y_max = phi.lambda0().ln();
    GeneratingPsi::new_unchecked(f64::INFINITY, move |p| {
        let beta_star = young_fenchel(|y| phi.eval(y.exp()), f64::NEG_INFINITY, y_max, p);
        p * (-beta_star / p).exp()
    })
    .expect("b = ∞ is valid")
}

/// φ_Δ(λ) = Δ*(|ln|λ||), with Δ* the conjugate of Δ over [1, ∞).
///
/// The result is returned as given: for degenerate Δ it need not be a
/// Young–Orlicz function (Δ ≡ 0 gives 0 at |λ| = 1 and +∞ elsewhere).
pub fn phi_from_psi_delta<D>(delta: D) -> YoungOrliczPhi
where
    D: Fn(f64) -> f64 + Send + Sync + 'static,
{
    YoungOrliczPhi::custom_unchecked(f64::INFINITY, move |lambda| {
        let v = lambda.abs().ln().abs();
        if !v.is_finite() {
            return f64::INFINITY;
        }
        young_fenchel(&delta, 1.0, f64::INFINITY, v)
    })
}
