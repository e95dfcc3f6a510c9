//! `fit`: least-squares fit of a smoothness model to a ρ̂ trajectory file.

use std::path::Path;

use smoothcal::estimate::RhoHatTrajectory;
use smoothcal::fit::{fit_quasi_exp, fit_quasi_power, Family, FitResult, RhoModel, StopReason};

use crate::error::{CliError, CliResult};
use crate::output::{create_dir, num, write_csv};
use crate::Report;

/// Reads a CSV with header `N,rho_hat`; lines starting with `#` are skipped.
pub fn read_trajectory(path: &Path) -> CliResult<RhoHatTrajectory> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).has_headers(false).from_reader(file);
    let parse = |line: u64, message: String| CliError::Parse { path: path.to_path_buf(), line, message };
    let mut records = reader.records();
    let header = match records.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(parse(e.position().map_or(0, |p| p.line()), e.to_string())),
        None => return Err(parse(1, "empty file: expected header `N,rho_hat`".into())),
    };
    let line_of = |r: &csv::StringRecord| r.position().map_or(0, |p| p.line());
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names != ["N", "rho_hat"] {
        return Err(parse(line_of(&header), format!("expected header `N,rho_hat`, found `{}`", names.join(","))));
    }
    let mut points = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| parse(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = line_of(&rec);
        if rec.len() != 2 {
            return Err(parse(line, format!("expected 2 fields, found {}", rec.len())));
        }
        let big_n: usize = rec[0]
            .trim()
            .parse()
            .map_err(|_| parse(line, format!("N = `{}` is not a positive integer", &rec[0])))?;
        let value: f64 = rec[1]
            .trim()
            .parse()
            .map_err(|_| parse(line, format!("rho_hat = `{}` is not a number", &rec[1])))?;
        if big_n < 1 || !value.is_finite() {
            return Err(parse(line, "N must be at least 1 and rho_hat finite".into()));
        }
        points.push((big_n, value));
    }
    if points.is_empty() {
        return Err(parse(line_of(&header) + 1, "no data rows".into()));
    }
    Ok(RhoHatTrajectory::from_points(points, None, None))
}

fn stop_name(s: StopReason) -> &'static str {
    match s {
        StopReason::Gradient => "gradient",
        StopReason::Step => "step",
        StopReason::MaxIterations => "max-iterations",
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::QuasiPower => "quasi-power",
        Family::QuasiExp => "quasi-exp",
    }
}

/// Fits `family`, then writes fit.csv (one row) and curve.csv (fitted values on the input grid).
pub fn fit_and_write(traj: &RhoHatTrajectory, family: Family, dir: &Path, report: &Report) -> CliResult<FitResult> {
    create_dir(dir)?;
    let result = match family {
        Family::QuasiPower => fit_quasi_power(traj)?,
        Family::QuasiExp => fit_quasi_exp(traj)?,
    };
    let names: [&str; 3] = match result.model {
        RhoModel::QuasiPower { .. } => ["c1", "alpha", "gamma"],
        RhoModel::QuasiExp { .. } => ["c2", "kappa", "q"],
    };
    let init: Vec<String> = names.iter().map(|n| format!("initial_{n}")).collect();
    let mut header: Vec<&str> = vec!["family"];
    header.extend(names);
    header.extend(init.iter().map(String::as_str));
    header.extend(["rss", "iterations", "converged", "stop", "gradient_norm", "at_boundary"]);
    let mut row = vec![family_name(family).to_string()];
    row.extend(result.model.params().map(num));
    row.extend(result.initial.params().map(num));
    row.extend([
        num(result.rss),
        result.iterations.to_string(),
        result.converged.to_string(),
        stop_name(result.stop).to_string(),
        num(result.gradient_norm),
        result.at_boundary.to_string(),
    ]);
    let path = dir.join("fit.csv");
    write_csv(&path, &header, [row])?;
    report.wrote(&path);

    let curve = traj.points().iter().map(|&(big_n, v)| {
        let fitted = result.model.eval(big_n);
        vec![big_n.to_string(), num(v), num(fitted), num(v - fitted)]
    });
    let path = dir.join("curve.csv");
    write_csv(&path, &["N", "rho_hat", "fitted", "residual"], curve)?;
    report.wrote(&path);
    Ok(result)
}
