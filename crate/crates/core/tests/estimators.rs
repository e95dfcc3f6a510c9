//! Monte Carlo checks of the coefficient, truncation and smoothness estimators.

use smoothcal::estimate::{
    adaptive_estimate, empirical_coeffs, projection_estimate, rho_hat, select_n, sigma_for_problem, tau_stat,
    EmpiricalCoefficients, SigmaParams,
};
use smoothcal::fit::RhoModel;
use smoothcal::fourier::{CoefficientModel, SignPattern};
use smoothcal::simulate::{
    gen_density_sample, gen_regression, DataSet, NoiseSpec, Problem, Seed, StationaryGaussianSampler,
};

#[test]
fn regression_coefficients_are_unbiased() {
    let model = CoefficientModel::new(vec![0.4, 0.8, -0.5, 0.3, 0.0, -0.2, 0.1, 0.05, 0.02, 0.01]).unwrap();
    let (n, reps, sigma) = (256, 2000, 1.0);
    let noise = NoiseSpec::gaussian(sigma).unwrap();
    let mut sums = [0.0; 8];
    for r in 0..reps {
        let d = gen_regression(&model, n, &noise, Seed::new(11, r)).unwrap();
        let e = empirical_coeffs(&d, 8).unwrap();
        for (k, s) in sums.iter_mut().enumerate() {
            *s += e.get(k + 1);
        }
    }
    // a trigonometric polynomial of degree below n/2 has no discretization error
    let tol = 4.0 * sigma / (reps as f64 * n as f64).sqrt();
    for (k, s) in sums.iter().enumerate() {
        assert!((s / reps as f64 - model.coeff(k + 1)).abs() <= tol, "k = {}", k + 1);
    }
}

#[test]
fn density_coefficients_are_unbiased() {
    let model = CoefficientModel::new(vec![1.0, 0.3, 0.2, 0.0, 0.1]).unwrap();
    let (n, reps) = (1024, 2000);
    let mut sums = [0.0; 8];
    for r in 0..reps {
        let d = gen_density_sample(&model, n, Seed::new(12, r)).unwrap();
        let e = empirical_coeffs(&d, 8).unwrap();
        assert_eq!(e.get(1), 1.0);
        for (k, s) in sums.iter_mut().enumerate() {
            *s += e.get(k + 1);
        }
    }
    let tol = 4.0 / (reps as f64 * n as f64).sqrt();
    for (k, s) in sums.iter().enumerate() {
        assert!((s / reps as f64 - model.coeff(k + 1)).abs() <= tol, "k = {}", k + 1);
    }
}

#[test]
fn noiseless_riemann_sum_recovers_phi2() {
    let model = CoefficientModel::new(vec![0.0, 1.0]).unwrap();
    let d = gen_regression(&model, 2048, &NoiseSpec::gaussian(0.0).unwrap(), Seed::new(0, 0)).unwrap();
    let e = empirical_coeffs(&d, 8).unwrap();
    assert!((e.get(2) - 1.0).abs() < 1e-3);
}

#[test]
fn white_noise_lag_products_vanish() {
    let n = 4096;
    let d = StationaryGaussianSampler::new(&CoefficientModel::new(vec![1.0]).unwrap(), n)
        .unwrap()
        .sample(Seed::new(13, 0))
        .unwrap();
    let e = empirical_coeffs(&d, 4).unwrap();
    assert!(e.get(2).abs() <= 4.0 * 2f64.sqrt() / (n as f64).sqrt());
    assert!((e.get(1) - 2f64.sqrt()).abs() < 0.1);
}

#[test]
fn lag_products_match_a_direct_sum() {
    let xs = vec![0.3, -1.2, 0.8, 2.0, -0.4];
    let d = DataSet::new(Problem::C, xs.clone()).unwrap();
    let e = empirical_coeffs(&d, 4).unwrap();
    for lag in 0..4 {
        let want: f64 = (0..5 - lag).map(|i| xs[i] * xs[i + lag]).sum::<f64>() / 5.0;
        assert!((e.get(lag + 1) - want).abs() < 1e-15);
    }
    assert!(empirical_coeffs(&d, 5).is_err());
}

fn quasi_power_model(k: usize) -> CoefficientModel {
    let rho = RhoModel::quasi_power(1.0, 1.5, 0.0).unwrap();
    CoefficientModel::from_rho_model(rho, k, 1.0, SignPattern::Alternating).unwrap()
}

#[test]
fn adaptive_mise_is_within_three_of_the_oracle() {
    let n = 4096;
    let model = quasi_power_model(n);
    let noise = NoiseSpec::gaussian(1.0).unwrap();
    let reps = 200;
    let max_n = 256;
    let mut fixed = vec![0.0; max_n + 1];
    let mut adaptive = 0.0;
    for r in 0..reps {
        let d = gen_regression(&model, n, &noise, Seed::new(14, r)).unwrap();
        let e = empirical_coeffs(&d, n).unwrap();
        let err2: Vec<f64> = (1..=n).map(|k| (e.get(k) - model.coeff(k)).powi(2)).collect();
        let mut acc = 0.0;
        for big_n in 1..=max_n {
            acc += err2[big_n - 1];
            fixed[big_n] += acc + model.rho_tail(big_n);
        }
        let sel = select_n(&e).unwrap();
        adaptive += err2[..sel].iter().sum::<f64>() + model.rho_tail(sel);
    }
    let best = fixed[1..].iter().fold(f64::INFINITY, |a, &b| a.min(b)) / reps as f64;
    let adaptive = adaptive / reps as f64;
    assert!(adaptive <= 3.0 * best, "adaptive {adaptive} vs oracle {best}");
}

#[test]
fn adaptive_estimate_composes_selection_and_projection() {
    let model = quasi_power_model(512);
    let d = gen_regression(&model, 512, &NoiseSpec::gaussian(1.0).unwrap(), Seed::new(15, 0)).unwrap();
    let e = empirical_coeffs(&d, 512).unwrap();
    let direct = projection_estimate(&e, select_n(&e).unwrap()).unwrap();
    assert_eq!(adaptive_estimate(&e).unwrap(), direct);
}

#[test]
fn rho_hat_splits_into_linear_and_quadratic_parts() {
    // ĉ_k = c_k + δ_k/√n reproduces ρ̂ − (ρ(N) − ρ(2N)) = S₁ + S₂
    let n = 1000;
    let c: Vec<f64> = (1..=40).map(|k| (k as f64).powf(-1.2)).collect();
    let truth = CoefficientModel::new(c.clone()).unwrap();
    let mut rng = Seed::new(16, 0).rng();
    use rand::Rng;
    let delta: Vec<f64> = (0..40).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
    let hat: Vec<f64> = c.iter().zip(&delta).map(|(c, d)| c + d / (n as f64).sqrt()).collect();
    let e = EmpiricalCoefficients::new(hat, n, Problem::A).unwrap();
    for big_n in 1..=20 {
        let s1: f64 = 2.0 / (n as f64).sqrt() * (big_n + 1..=2 * big_n).map(|k| c[k - 1] * delta[k - 1]).sum::<f64>();
        let s2: f64 = (big_n + 1..=2 * big_n).map(|k| delta[k - 1].powi(2) - 1.0).sum::<f64>() / n as f64;
        let window = truth.rho_tail(big_n) - truth.rho_tail(2 * big_n);
        let lhs = rho_hat(&e, big_n).unwrap() - window;
        assert!((lhs - (s1 + s2)).abs() < 1e-13, "N = {big_n}");
    }
    // with nothing beyond 2N the window is the full tail
    let short = CoefficientModel::new(c[..20].to_vec()).unwrap();
    assert_eq!(short.rho_tail(10) - short.rho_tail(20), short.rho_tail(10));
}

#[test]
fn tau_examples_and_rho_hat_formula() {
    let e = EmpiricalCoefficients::new(vec![1.0, 0.5, 0.25, 0.1], 100, Problem::A).unwrap();
    assert_eq!(tau_stat(&e, 1).unwrap(), 0.25);
    assert!((tau_stat(&e, 2).unwrap() - 0.0725).abs() < 1e-15);
    let zero = EmpiricalCoefficients::new(vec![0.0; 40], 100, Problem::B).unwrap();
    assert_eq!(rho_hat(&zero, 10).unwrap(), -0.1);
}

#[test]
fn sigma_examples() {
    assert_eq!(sigma_for_problem(Problem::B, SigmaParams::default()).unwrap(), 1.0);
    let a = SigmaParams { noise_variance: Some(1.0), ..Default::default() };
    assert_eq!(sigma_for_problem(Problem::A, a).unwrap(), 1.0);
    let m = CoefficientModel::new(vec![1.0, 0.5]).unwrap();
    let c = SigmaParams { spectral_model: Some(&m), ..Default::default() };
    assert!((sigma_for_problem(Problem::C, c).unwrap() - 1.5).abs() < 1e-15);
}
