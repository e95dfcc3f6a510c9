//! Parametric smoothness models and least-squares fitting of ρ̂ trajectories.
//!
//! Two families are supported:
//!
//! * quasi-power: ρ(N) = c₁·N^{−α}·ln^{γ}(N+1), with c₁, α > 0 and γ ≥ 0;
//! * quasi-exponential: ρ(N) = c₂·N^{κ}·q^{N}, with c₂ > 0 and q ∈ (0,1).
//!
//! Fitting runs Gauss–Newton on the unlogged residuals, started from an
//! ordinary least-squares fit of ln ρ̂ on the linearized model. Parameters
//! stay in bounds through a smooth reparameterization: c = e^u, α = e^a,
//! γ = e^g and q = 1/(1 + e^{−s}).

use nalgebra::{Matrix3, Vector3};

use crate::error::{domain, Error, Result};
use crate::estimate::RhoHatTrajectory;
use crate::fourier::RhoSource;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoModel {
    QuasiPower { c1: f64, alpha: f64, gamma: f64 },
    QuasiExp { c2: f64, kappa: f64, q: f64 },
}

impl RhoModel {
    pub fn quasi_power(c1: f64, alpha: f64, gamma: f64) -> Result<Self> {
        if !(c1 > 0.0 && alpha > 0.0 && gamma >= 0.0) || !(c1.is_finite() && alpha.is_finite() && gamma.is_finite()) {
            return domain(format!("quasi-power parameters need c1 > 0, alpha > 0, gamma >= 0 (got {c1}, {alpha}, {gamma})"));
        }
        Ok(Self::QuasiPower { c1, alpha, gamma })
    }

    pub fn quasi_exp(c2: f64, kappa: f64, q: f64) -> Result<Self> {
        if !(c2 > 0.0 && c2.is_finite() && kappa.is_finite() && q > 0.0 && q < 1.0) {
            return domain(format!("quasi-exponential parameters need c2 > 0, q in (0,1) (got {c2}, {kappa}, {q})"));
        }
        Ok(Self::QuasiExp { c2, kappa, q })
    }

    /// ρ(N) under the model; N is expected to be at least 1.
    pub fn eval(&self, n: usize) -> f64 {
        let x = n as f64;
        match *self {
            Self::QuasiPower { c1, alpha, gamma } => c1 * x.powf(-alpha) * (x + 1.0).ln().powf(gamma),
            Self::QuasiExp { c2, kappa, q } => c2 * x.powf(kappa) * q.powf(x),
        }
    }

    /// Parameters in declaration order: (c1, α, γ) or (c2, κ, q).
    pub fn params(&self) -> [f64; 3] {
        match *self {
            Self::QuasiPower { c1, alpha, gamma } => [c1, alpha, gamma],
            Self::QuasiExp { c2, kappa, q } => [c2, kappa, q],
        }
    }

    /// Same family with new parameters (unchecked).
    pub fn with_params(&self, p: [f64; 3]) -> Self {
        match self {
            Self::QuasiPower { .. } => Self::QuasiPower { c1: p[0], alpha: p[1], gamma: p[2] },
            Self::QuasiExp { .. } => Self::QuasiExp { c2: p[0], kappa: p[1], q: p[2] },
        }
    }

    /// ∂ρ(N)/∂(params) in the natural parameterization.
    pub fn gradient(&self, n: usize) -> [f64; 3] {
        let x = n as f64;
        let m = self.eval(n);
        match *self {
            Self::QuasiPower { c1, .. } => {
                let ll = (x + 1.0).ln().ln();
                [m / c1, -x.ln() * m, ll * m]
            }
            Self::QuasiExp { c2, q, .. } => [m / c2, x.ln() * m, x / q * m],
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Self::QuasiPower { .. } => Family::QuasiPower,
            Self::QuasiExp { .. } => Family::QuasiExp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    QuasiPower,
    QuasiExp,
}

/// Result of the ρ(2N)/ρ(N) ratio scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaCheck {
    pub gamma_sup: f64,
    pub satisfied: bool,
}

/// max_{N ∈ [2, N_max]} ρ(2N)/ρ(N); the condition holds when this is below 1.
pub fn check_gamma_condition<S: RhoSource + ?Sized>(rho: &S, n_max: usize) -> Result<GammaCheck> {
    if n_max < 2 {
        return domain("the ratio scan needs N_max >= 2");
    }
    let mut sup = f64::NEG_INFINITY;
    for n in 2..=n_max {
        let at = |m: usize| {
            rho.rho_at(m)
                .ok_or_else(|| Error::Domain(format!("ρ is not available at N = {m}")))
        };
        let (r1, r2) = (at(n)?, at(2 * n)?);
        if r1 <= 0.0 {
            return Err(Error::TrigPolynomial { at: n });
        }
        if r2 <= 0.0 {
            return Err(Error::TrigPolynomial { at: 2 * n });
        }
        sup = sup.max(r2 / r1);
    }
    Ok(GammaCheck { gamma_sup: sup, satisfied: sup < 1.0 })
}

/// Minimum number of positive trajectory points for the log-linear fits.
pub const MIN_LOGLIN_POINTS: usize = 9;

/// OLS initializer (ĉ₃, α̂₁, γ̂₁) for the quasi-power family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerInit {
    pub c3: f64,
    pub alpha1: f64,
    pub gamma1: f64,
}

impl PowerInit {
    /// Starting model (e^{ĉ₃}, α̂₁, γ̂₁), with α and γ pushed inside their bounds.
    pub fn model(&self) -> RhoModel {
        RhoModel::QuasiPower {
            c1: self.c3.exp(),
            alpha: self.alpha1.max(1e-3),
            gamma: self.gamma1.max(1e-3),
        }
    }
}

/// OLS initializer (ln ĉ₂, κ̂, ln q̂) for the quasi-exponential family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpInit {
    pub ln_c2: f64,
    pub kappa: f64,
    pub ln_q: f64,
    /// Set when ln q̂ is not clearly negative, i.e. the data show no geometric decay.
    pub mismatch: bool,
}

impl ExpInit {
    pub fn model(&self) -> RhoModel {
        RhoModel::QuasiExp {
            c2: self.ln_c2.exp(),
            kappa: self.kappa,
            q: self.ln_q.exp().clamp(1e-12, 1.0 - 1e-9),
        }
    }
}

fn positive_points(traj: &RhoHatTrajectory) -> Result<Vec<(f64, f64)>> {
    let pts: Vec<(f64, f64)> = traj
        .points()
        .iter()
        .filter(|(_, v)| *v > 0.0 && v.is_finite())
        .map(|&(n, v)| (n as f64, v))
        .collect();
    if pts.len() < MIN_LOGLIN_POINTS {
        return Err(Error::InsufficientData { needed: MIN_LOGLIN_POINTS, got: pts.len() });
    }
    Ok(pts)
}

fn ols3(rows: impl Iterator<Item = ([f64; 3], f64)>) -> Result<Vector3<f64>> {
    let mut xtx = Matrix3::zeros();
    let mut xty = Vector3::zeros();
    for (x, y) in rows {
        let x = Vector3::from(x);
        xtx += x * x.transpose();
        xty += x * y;
    }
    let eig = xtx.symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    if !(lo > hi * 1e-14) {
        return Err(Error::RankDeficient);
    }
    xtx.lu().solve(&xty).ok_or(Error::RankDeficient)
}

/// Regresses ln ρ̂(N) on [1, −ln N, ln ln(N+1)], dropping nonpositive ρ̂.
pub fn loglin_init_power(traj: &RhoHatTrajectory) -> Result<PowerInit> {
    let pts = positive_points(traj)?;
    let beta = ols3(pts.iter().map(|&(n, v)| ([1.0, -n.ln(), (n + 1.0).ln().ln()], v.ln())))?;
    Ok(PowerInit { c3: beta[0], alpha1: beta[1], gamma1: beta[2] })
}

/// Regresses ln ρ̂(N) on [1, ln N, N], dropping nonpositive ρ̂.
pub fn loglin_init_exp(traj: &RhoHatTrajectory) -> Result<ExpInit> {
    let pts = positive_points(traj)?;
    let beta = ols3(pts.iter().map(|&(n, v)| ([1.0, n.ln(), n], v.ln())))?;
    Ok(ExpInit {
        ln_c2: beta[0],
        kappa: beta[1],
        ln_q: beta[2],
        mismatch: beta[2] >= -1e-9,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
    pub step_tolerance: f64,
    /// Per-point weights aligned with the trajectory points; `None` is unweighted.
    pub weights: Option<Vec<f64>>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            gradient_tolerance: 1e-10,
            step_tolerance: 1e-14,
            weights: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Gradient,
    Step,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: RhoModel,
    pub initial: RhoModel,
    pub rss: f64,
    pub iterations: usize,
    pub converged: bool,
    pub stop: StopReason,
    pub gradient_norm: f64,
    /// A parameter ran into its bound (α, γ → 0 or q → 0, 1).
    pub at_boundary: bool,
    /// Objective after the initializer and after each accepted step.
    pub objective_trace: Vec<f64>,
}

pub fn fit_quasi_power(traj: &RhoHatTrajectory) -> Result<FitResult> {
    fit_quasi_power_with(traj, &FitOptions::default())
}

pub fn fit_quasi_exp(traj: &RhoHatTrajectory) -> Result<FitResult> {
    fit_quasi_exp_with(traj, &FitOptions::default())
}

pub fn fit_quasi_power_with(traj: &RhoHatTrajectory, opts: &FitOptions) -> Result<FitResult> {
    let init = loglin_init_power(traj)?.model();
    gauss_newton(traj, init, opts)
}

pub fn fit_quasi_exp_with(traj: &RhoHatTrajectory, opts: &FitOptions) -> Result<FitResult> {
    let init = loglin_init_exp(traj)?.model();
    gauss_newton(traj, init, opts)
}

/// Unconstrained coordinates of a model.
fn to_free(m: &RhoModel) -> [f64; 3] {
    match *m {
        RhoModel::QuasiPower { c1, alpha, gamma } => [c1.ln(), alpha.ln(), gamma.ln()],
        RhoModel::QuasiExp { c2, kappa, q } => [c2.ln(), kappa, (q / (1.0 - q)).ln()],
    }
}

fn from_free(family: Family, t: [f64; 3]) -> RhoModel {
    match family {
        Family::QuasiPower => RhoModel::QuasiPower { c1: t[0].exp(), alpha: t[1].exp(), gamma: t[2].exp() },
        Family::QuasiExp => RhoModel::QuasiExp {
            c2: t[0].exp(),
            kappa: t[1],
            q: 1.0 / (1.0 + (-t[2]).exp()),
        },
    }
}

/// ∂ρ(N)/∂(free coordinates).
fn free_jacobian_row(m: &RhoModel, n: usize) -> [f64; 3] {
    let g = m.gradient(n);
    match *m {
        RhoModel::QuasiPower { c1, alpha, gamma } => [g[0] * c1, g[1] * alpha, g[2] * gamma],
        RhoModel::QuasiExp { c2, q, .. } => [g[0] * c2, g[1], g[2] * q * (1.0 - q)],
    }
}

fn objective(traj: &RhoHatTrajectory, m: &RhoModel, w: &[f64]) -> f64 {
    traj.points()
        .iter()
        .zip(w)
        .map(|(&(n, y), wi)| wi * (y - m.eval(n)).powi(2))
        .sum()
}

fn gauss_newton(traj: &RhoHatTrajectory, init: RhoModel, opts: &FitOptions) -> Result<FitResult> {
    let pts = traj.points();
    if pts.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let w: Vec<f64> = match &opts.weights {
        Some(w) if w.len() != pts.len() => return domain("weights must align with trajectory points"),
        Some(w) => w.clone(),
        None => vec![1.0; pts.len()],
    };
    let family = init.family();
    let mut theta = to_free(&init);
    let mut model = from_free(family, theta);
    let mut z = objective(traj, &model, &w);
    let mut trace = vec![z];
    let mut stop = StopReason::MaxIterations;
    let mut grad_norm = f64::INFINITY;
    let mut iterations = 0;

    for it in 0..=opts.max_iterations {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (&(n, y), wi) in pts.iter().zip(&w) {
            let row = Vector3::from(free_jacobian_row(&model, n));
            let r = y - model.eval(n);
            jtj += *wi * row * row.transpose();
            jtr += *wi * r * row;
        }
        // ∇Z = −2 Jᵀ W r
        grad_norm = 2.0 * jtr.norm();
        if grad_norm <= opts.gradient_tolerance {
            stop = StopReason::Gradient;
            break;
        }
        if it == opts.max_iterations || stop == StopReason::Step {
            break;
        }
        iterations = it + 1;
        let step = solve_normal(&jtj, &jtr);
        let Some(step) = step else {
            stop = StopReason::Step;
            break;
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand = [theta[0] + t * step[0], theta[1] + t * step[1], theta[2] + t * step[2]];
            let cand_model = from_free(family, cand);
            let cz = objective(traj, &cand_model, &w);
            if cz.is_finite() && cz <= z {
                let moved = t * step.norm();
                theta = cand;
                model = cand_model;
                z = cz;
                trace.push(z);
                accepted = true;
                if moved <= opts.step_tolerance * (1.0 + Vector3::from(theta).norm()) {
                    stop = StopReason::Step;
                }
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            stop = StopReason::Step;
            break;
        }
    }

    let [p0, p1, p2] = model.params();
    let at_boundary = match family {
        Family::QuasiPower => p1 < 1e-6 || p2 < 1e-6,
        Family::QuasiExp => !(p2 > 1e-10 && p2 < 1.0 - 1e-10),
    };
    debug_assert!(p0 > 0.0);
    Ok(FitResult {
        model,
        initial: init,
        rss: z,
        iterations,
        converged: grad_norm <= opts.gradient_tolerance,
        stop,
        gradient_norm: grad_norm,
        at_boundary,
        objective_trace: trace,
    })
}

fn solve_normal(jtj: &Matrix3<f64>, jtr: &Vector3<f64>) -> Option<Vector3<f64>> {
    let scale = jtj.diagonal().max();
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    if let Some(chol) = jtj.cholesky() {
        let s = chol.solve(jtr);
        if s.iter().all(|v| v.is_finite()) {
            return Some(s);
        }
    }
    // near-singular: fall back to a tiny ridge
    let ridged = jtj + Matrix3::identity() * (scale * 1e-12);
    ridged.cholesky().map(|c| c.solve(jtr))
}
