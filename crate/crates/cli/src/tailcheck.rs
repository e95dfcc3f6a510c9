//! `tailcheck`: empirical tails of the normalized deviation against the
//! Gaussian and non-asymptotic bounds.

use std::f64::consts::SQRT_2;

use rayon::prelude::*;
use smoothcal::confidence::{normal_two_sided_tail, theta, TailPipeline};
use smoothcal::estimate::{empirical_coeffs, rho_hat};
use smoothcal::simulate::Problem;
use smoothcal::tail::YoungOrliczPhi;

use crate::config::Experiment;
use crate::error::CliResult;
use crate::output::{create_dir, num, write_csv};
use crate::Report;

pub fn run(exp: &Experiment, report: &Report) -> CliResult<()> {
    create_dir(&exp.output)?;
    let big_n = exp.tail_n;
    let truth = exp.target.rho_tail(big_n);
    let scale = SQRT_2 * theta(exp.n, big_n, truth)?;
    let mus: Vec<f64> = (0..exp.replications)
        .into_par_iter()
        .map(|r| -> CliResult<f64> {
            let data = exp.draw(r)?;
            let coeffs = empirical_coeffs(&data, 2 * big_n)?;
            Ok((rho_hat(&coeffs, big_n)? - truth) / scale)
        })
        .collect::<CliResult<_>>()?;
    // Δ² = Var(ξ₁) = r(0) for stationary sequences
    let delta_sq = if exp.problem == Problem::C { exp.target.coeff(1) } else { 1.0 };
    let pipeline = TailPipeline::new(exp.problem, None, delta_sq)?;
    let count = mus.len() as f64;
    let rows = exp.t_grid.iter().map(|&t| {
        let p = mus.iter().filter(|m| m.abs() > t).count() as f64 / count;
        vec![
            exp.problem.tag().to_string(),
            big_n.to_string(),
            num(t),
            num(p),
            num((p * (1.0 - p) / count).sqrt()),
            num(normal_two_sided_tail(SQRT_2 * t)),
            num(pipeline.normalized_bound(t)),
        ]
    });
    let path = exp.output.join("tailcheck.csv");
    write_csv(&path, &["problem", "N", "t", "empirical_tail", "mc_se", "gaussian_bound", "bphi_bound"], rows)?;
    report.wrote(&path);

    let u = YoungOrliczPhi::upsilon();
    let rows = (1..=20).map(|t| {
        let t = t as f64;
        let lhs = 2.0 * (-u.conjugate(t)).exp();
        let rhs = t.sqrt() * (-t / 2.0).exp();
        vec![num(t), num(lhs), num(rhs), (lhs <= rhs).to_string(), "REPORT-ONLY".to_string()]
    });
    let path = exp.output.join("upsilon_report.csv");
    write_csv(&path, &["t", "two_exp_neg_upsilon_conjugate", "sqrt_t_exp_neg_half_t", "holds", "status"], rows)?;
    report.wrote(&path);
    Ok(())
}
