//! Monte Carlo dominance checks of the confidence machinery on density data.

use smoothcal::confidence::{
    nonasymptotic_tail, theta, union_region, RegionBound, TailPipeline, Thresholds,
};
use smoothcal::estimate::{empirical_coeffs, RhoHatTrajectory};
use smoothcal::fourier::CoefficientModel;
use smoothcal::simulate::{DensitySampler, Problem, Seed};

fn density_model() -> CoefficientModel {
    let mut c: Vec<f64> = (1..=64).map(|k| 0.3 * (k as f64).powi(-2)).collect();
    c[0] = 1.0;
    CoefficientModel::new(c).unwrap()
}

fn trajectories(n: usize, reps: u64, seed: u64, k: usize) -> Vec<RhoHatTrajectory> {
    let sampler = DensitySampler::new(&density_model()).unwrap();
    (0..reps)
        .map(|r| {
            let d = sampler.sample(n, Seed::new(seed, r)).unwrap();
            RhoHatTrajectory::from_coeffs(&empirical_coeffs(&d, k).unwrap()).unwrap()
        })
        .collect()
}

#[test]
fn density_tail_bound_dominates_the_empirical_tail() {
    let (n, big_n, reps) = (4096, 8, 2000);
    let model = density_model();
    let rho = model.rho_tail(big_n);
    let scale = 2f64.sqrt() * theta(n, big_n, rho).unwrap();
    let mus: Vec<f64> = trajectories(n, reps, 201, 2 * big_n)
        .iter()
        .map(|t| (t.get(big_n).unwrap() - rho) / scale)
        .collect();
    let pipeline = TailPipeline::new(Problem::B, None, 1.0).unwrap();
    for t in [1.0, 2.0, 3.0] {
        let p = mus.iter().filter(|m| m.abs() > t).count() as f64 / reps as f64;
        let se = (p * (1.0 - p) / reps as f64).sqrt();
        let bound = nonasymptotic_tail(Problem::B, n, big_n, rho, t * scale, 1.0).unwrap();
        assert!((bound - pipeline.normalized_bound(t)).abs() < 1e-12);
        assert!(p <= bound + 3.0 * se, "t = {t}: {p} vs {bound}");
    }
}

#[test]
fn nonasymptotic_bounds_are_vacuous_at_zero_and_decrease() {
    for problem in [Problem::A, Problem::B, Problem::C] {
        let mut prev = 2.0;
        assert!((nonasymptotic_tail(problem, 4096, 8, 0.01, 1e-12, 1.0).unwrap() - 2.0).abs() < 1e-6);
        for i in 1..=40 {
            let b = nonasymptotic_tail(problem, 4096, 8, 0.01, 1e-3 * i as f64, 1.0).unwrap();
            assert!(b <= prev + 1e-12);
            prev = b;
        }
    }
}

#[test]
fn uniform_threshold_region_dominates_the_simultaneous_miss_rate() {
    let (n, reps, a, b, w) = (4096, 500, 2, 16, 2.0);
    let model = density_model();
    let mut misses = 0;
    let mut q_gauss = 0.0;
    for t in trajectories(n, reps, 202, 2 * b) {
        let region = union_region(&t, a, b, &Thresholds::Uniform(w), RegionBound::Gaussian).unwrap();
        q_gauss = region.q;
        let missed = (a..=b).any(|big_n| {
            let rho = model.rho_tail(big_n);
            let mu = (t.get(big_n).unwrap() - rho) / (2f64.sqrt() * theta(n, big_n, rho).unwrap());
            mu.abs() > w
        });
        if missed {
            misses += 1;
        }
        let all_cover = (a..=b).all(|big_n| region.intervals[big_n - a].contains(model.rho_tail(big_n)));
        assert_eq!(all_cover, !missed);
    }
    let p = misses as f64 / reps as f64;
    let se = (p * (1.0 - p) / reps as f64).sqrt().max(1.0 / reps as f64);
    assert!(p <= q_gauss + 3.0 * se, "{p} vs {q_gauss}");
}
