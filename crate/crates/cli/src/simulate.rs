//! `simulate`: seeded replications of the estimation pipeline.

use rayon::prelude::*;
use smoothcal::confidence::{asymptotic_ci, theta};
use smoothcal::estimate::{empirical_coeffs, rho_hat, rho_hat_clamped, select_n, tau_stat, RhoHatTrajectory};

use crate::config::Experiment;
use crate::error::CliResult;
use crate::fit::fit_and_write;
use crate::output::{create_dir, num, write_csv};
use crate::Report;

struct PerN {
    big_n: usize,
    tau: f64,
    raw: f64,
    clamped: f64,
    theta: f64,
    lo: f64,
    hi: f64,
    covered: bool,
    sq_err: f64,
}

struct Replication {
    rows: Vec<PerN>,
    n_tilde: usize,
}

fn replicate(exp: &Experiment, rep: usize) -> CliResult<Replication> {
    let data = exp.draw(rep)?;
    let coeffs = empirical_coeffs(&data, 2 * exp.n_hi)?;
    let mut rows = Vec::with_capacity(exp.n_hi - exp.n_lo + 1);
    for big_n in exp.n_lo..=exp.n_hi {
        let raw = rho_hat(&coeffs, big_n)?;
        let clamped = rho_hat_clamped(&coeffs, big_n)?;
        let ci = asymptotic_ci(raw, exp.n, big_n, exp.alpha, exp.ci_method)?;
        let (lo, hi) = ci.reported();
        let truth = exp.target.rho_tail(big_n);
        let head: f64 = (1..=big_n).map(|k| (coeffs.get(k) - exp.target.coeff(k)).powi(2)).sum();
        rows.push(PerN {
            big_n,
            tau: tau_stat(&coeffs, big_n)?,
            raw,
            clamped,
            theta: theta(exp.n, big_n, clamped)?,
            lo,
            hi,
            covered: ci.contains(truth),
            sq_err: head + truth,
        });
    }
    Ok(Replication { rows, n_tilde: select_n(&coeffs)? })
}

/// A(n,N) = σ²N/n + ρ(N).
fn risk(exp: &Experiment, big_n: usize) -> f64 {
    exp.sigma_sq * big_n as f64 / exp.n as f64 + exp.target.rho_tail(big_n)
}

pub fn run(exp: &Experiment, report: &Report) -> CliResult<()> {
    create_dir(&exp.output)?;
    let reps: Vec<Replication> =
        (0..exp.replications).into_par_iter().map(|r| replicate(exp, r)).collect::<CliResult<_>>()?;

    let traj_rows = reps.iter().enumerate().flat_map(|(r, rep)| {
        rep.rows.iter().map(move |row| {
            vec![
                r.to_string(),
                row.big_n.to_string(),
                num(row.tau),
                num(row.raw),
                num(row.clamped),
                num(exp.target.rho_tail(row.big_n)),
                num(row.theta),
                num(row.lo),
                num(row.hi),
                u8::from(row.covered).to_string(),
            ]
        })
    });
    let path = exp.output.join("trajectories.csv");
    write_csv(
        &path,
        &["replication", "N", "tau", "rho_hat_raw", "rho_hat_clamped", "rho_true", "theta", "ci_lo", "ci_hi", "covered"],
        traj_rows,
    )?;
    report.wrote(&path);

    let count = reps.len() as f64;
    let mut mean_points = Vec::new();
    let mut summary = Vec::new();
    for (i, big_n) in (exp.n_lo..=exp.n_hi).enumerate() {
        let mise = reps.iter().map(|r| r.rows[i].sq_err).sum::<f64>() / count;
        let coverage = reps.iter().filter(|r| r.rows[i].covered).count() as f64 / count;
        let mean_raw = reps.iter().map(|r| r.rows[i].raw).sum::<f64>() / count;
        let a = risk(exp, big_n);
        mean_points.push((big_n, mean_raw));
        summary.push(vec![
            big_n.to_string(),
            num(a),
            num(mise),
            num(mise / a),
            num(coverage),
            num(mean_raw),
            num(exp.target.rho_tail(big_n)),
        ]);
    }
    let path = exp.output.join("summary.csv");
    write_csv(&path, &["N", "A", "mise", "mise_over_A", "coverage", "mean_rho_hat", "rho_true"], summary)?;
    report.wrote(&path);

    let n_star = (1..=exp.n_hi)
        .map(|big_n| (big_n, risk(exp, big_n)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
        .0;
    let selection = reps.iter().enumerate().map(|(r, rep)| {
        vec![
            r.to_string(),
            rep.n_tilde.to_string(),
            n_star.to_string(),
            num(rep.n_tilde as f64 / n_star as f64),
        ]
    });
    let path = exp.output.join("selection.csv");
    write_csv(&path, &["replication", "n_tilde", "n_star", "ratio"], selection)?;
    report.wrote(&path);

    let path = exp.output.join("trajectory_mean.csv");
    write_csv(&path, &["N", "rho_hat"], mean_points.iter().map(|(k, v)| vec![k.to_string(), num(*v)]))?;
    report.wrote(&path);

    if let Some(family) = exp.fit_family {
        let traj = RhoHatTrajectory::from_points(mean_points, Some(exp.n), Some(exp.problem));
        fit_and_write(&traj, family, &exp.output, report)?;
    }
    Ok(())
}
