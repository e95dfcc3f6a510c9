//! Monte Carlo checks of the three data generators.

use smoothcal::fourier::{eval_basis, CoefficientModel};
use smoothcal::simulate::{
    covariance_from_spectrum, gen_density_sample, gen_regression, DensitySampler, NoiseKind, NoiseSpec,
    StationaryGaussianSampler, Seed,
};

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v)
}

#[test]
fn noise_kinds_have_the_stated_moments() {
    let n = 100_000;
    for (i, kind) in [NoiseKind::Gaussian, NoiseKind::Rademacher, NoiseKind::UniformCentered].into_iter().enumerate() {
        let sigma = 0.8;
        let noise = NoiseSpec::new(kind, sigma).unwrap();
        let mut rng = Seed::new(77, i as u64).rng();
        let xs: Vec<f64> = (0..n).map(|_| noise.draw(&mut rng)).collect();
        let (m, v) = mean_var(&xs);
        assert!(m.abs() <= 4.0 * sigma / (n as f64).sqrt(), "{kind:?}: mean {m}");
        assert!((v / (sigma * sigma) - 1.0).abs() <= 0.05, "{kind:?}: variance {v}");
        assert!((noise.variance() - sigma * sigma).abs() < 1e-15);
    }
}

#[test]
fn regression_means_recover_the_signal() {
    let model = CoefficientModel::new(vec![0.5, 1.0, -0.4, 0.0, 0.3]).unwrap();
    let (n, reps, sigma) = (32, 10_000, 1.3);
    let noise = NoiseSpec::gaussian(sigma).unwrap();
    let mut sums = vec![0.0; n];
    for r in 0..reps {
        let d = gen_regression(&model, n, &noise, Seed::new(5, r)).unwrap();
        for (s, y) in sums.iter_mut().zip(d.observations()) {
            *s += y;
        }
    }
    for (i, s) in sums.iter().enumerate() {
        let x = (i + 1) as f64 / n as f64;
        let want = model.eval(x % 1.0);
        assert!((s / reps as f64 - want).abs() <= 4.0 * sigma / 100.0, "point {i}");
    }
}

#[test]
fn noiseless_regression_is_exact() {
    let model = CoefficientModel::new(vec![0.5, 1.0, -0.4]).unwrap();
    let d = gen_regression(&model, 64, &NoiseSpec::gaussian(0.0).unwrap(), Seed::new(1, 0)).unwrap();
    for (i, y) in d.observations().iter().enumerate() {
        assert!((y - model.eval(d.design(i + 1) % 1.0)).abs() < 1e-12);
    }
}

#[test]
fn uniform_density_passes_kolmogorov_smirnov() {
    let n = 100_000;
    let d = gen_density_sample(&CoefficientModel::new(vec![1.0]).unwrap(), n, Seed::new(2026, 0)).unwrap();
    let mut xs = d.observations().to_vec();
    xs.sort_by(f64::total_cmp);
    let ks = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n as f64).max((i + 1) as f64 / n as f64 - x))
        .fold(0.0, f64::max);
    assert!(ks < 1.628 / (n as f64).sqrt(), "KS = {ks}");
}

#[test]
fn density_basis_means_are_unbiased() {
    let model = CoefficientModel::new(vec![1.0, 0.3, 0.2, -0.25, 0.1]).unwrap();
    let n = 200_000;
    let d = DensitySampler::new(&model).unwrap().sample(n, Seed::new(9, 3)).unwrap();
    for k in 1..=8 {
        let vals: Vec<f64> = d.observations().iter().map(|&x| eval_basis(k, x).unwrap()).collect();
        let (m, v) = mean_var(&vals);
        let se = (v / n as f64).sqrt();
        assert!((m - model.coeff(k)).abs() <= 4.0 * se + 1e-12, "k = {k}: {m}");
    }
}

#[test]
fn negative_density_is_rejected() {
    assert!(DensitySampler::new(&CoefficientModel::new(vec![1.0, 1.0]).unwrap()).is_err());
}

fn spectrum() -> CoefficientModel {
    // f = 1 + Σ c_{2h} √2 cos(2πhx) with Σ|c_{2h}|√2 < 1, so f > 0
    CoefficientModel::new(vec![1.0, 0.3, 0.0, -0.2, 0.0, 0.1, 0.0, 0.05]).unwrap()
}

#[test]
fn stationary_lag_covariances_match_the_spectrum() {
    let model = spectrum();
    let (n, paths) = (256, 500);
    let sampler = StationaryGaussianSampler::new(&model, n).unwrap();
    let per_path: Vec<Vec<f64>> = (0..paths)
        .map(|p| {
            let xs = sampler.sample(Seed::new(31, p)).unwrap().observations().to_vec();
            (0..=8)
                .map(|h| xs.iter().zip(&xs[h..]).map(|(a, b)| a * b).sum::<f64>() / (n - h) as f64)
                .collect()
        })
        .collect();
    for h in 0..=8 {
        let col: Vec<f64> = per_path.iter().map(|r| r[h]).collect();
        let (m, v) = mean_var(&col);
        let se = (v / paths as f64).sqrt();
        let want = covariance_from_spectrum(&model, h);
        assert!((m - want).abs() <= 3.0 * se, "lag {h}: {m} vs {want}");
    }
}

#[test]
fn white_spectrum_gives_variance_root_two() {
    let white = CoefficientModel::new(vec![1.0]).unwrap();
    let xs = StationaryGaussianSampler::new(&white, 4096).unwrap().sample(Seed::new(4, 0)).unwrap();
    let (_, v) = mean_var(xs.observations());
    assert!((v / 2f64.sqrt() - 1.0).abs() < 0.05, "variance {v}");
}

#[test]
fn lag_one_autocovariance_over_paths() {
    let model = CoefficientModel::new(vec![1.0, 0.5]).unwrap();
    let n = 512;
    let sampler = StationaryGaussianSampler::new(&model, n).unwrap();
    let vals: Vec<f64> = (0..200)
        .map(|p| {
            let xs = sampler.sample(Seed::new(8, p)).unwrap().observations().to_vec();
            xs.windows(2).map(|w| w[0] * w[1]).sum::<f64>() / (n - 1) as f64
        })
        .collect();
    let (m, v) = mean_var(&vals);
    assert!((m - 0.5).abs() <= 4.0 * (v / 200.0).sqrt(), "lag-1 mean {m}");
}

#[test]
fn generators_are_reproducible() {
    let model = spectrum();
    let a = StationaryGaussianSampler::new(&model, 300).unwrap().sample(Seed::new(3, 7)).unwrap();
    let b = StationaryGaussianSampler::new(&model, 300).unwrap().sample(Seed::new(3, 7)).unwrap();
    assert_eq!(a, b);
    let c = gen_density_sample(&model, 100, Seed::new(3, 7)).unwrap();
    let d = gen_density_sample(&model, 100, Seed::new(3, 7)).unwrap();
    assert_eq!(c, d);
    let e = gen_density_sample(&model, 100, Seed::new(3, 8)).unwrap();
    assert_ne!(c, e);
}
