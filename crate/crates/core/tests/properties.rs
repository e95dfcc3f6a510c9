//! Property tests over randomly generated inputs.

use proptest::prelude::*;
use smoothcal::confidence::{interval_at, CiMethod};
use smoothcal::estimate::{projection_estimate, rho_hat, select_n, tau_stat, EmpiricalCoefficients};
use smoothcal::fit::{check_gamma_condition, loglin_init_exp, loglin_init_power, RhoModel};
use smoothcal::fourier::{
    eval_basis, nikolskii_bound, optimal_n, risk_a, CoefficientModel, GridFunction, SmoothnessProfile,
};
use smoothcal::estimate::RhoHatTrajectory;
use smoothcal::simulate::{gen_regression, NoiseKind, NoiseSpec, Problem, Seed};
use smoothcal::tail::{b_phi_tail, overline_phi, young_fenchel, YoungOrliczPhi};

fn coeff_vec(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 1..=max_len)
}

#[test]
fn gram_matrix_is_identity() {
    let k = 64;
    let panels = 1 << 12;
    let xs: Vec<f64> = (0..=panels).map(|i| i as f64 / panels as f64).collect();
    let vals: Vec<Vec<f64>> = (1..=k)
        .map(|j| xs.iter().map(|&x| eval_basis(j, x).unwrap()).collect())
        .collect();
    for a in 0..k {
        for b in a..k {
            let prod: Vec<f64> = vals[a].iter().zip(&vals[b]).map(|(u, v)| u * v).collect();
            let g = GridFunction::new(prod).unwrap().integral();
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((g - want).abs() < 1e-10, "({}, {}) = {g}", a + 1, b + 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval_and_monotone_tail(c in coeff_vec(40)) {
        let m = CoefficientModel::new(c.clone()).unwrap();
        let sq = GridFunction::from_fn(|x| m.eval(x).powi(2), 1 << 12).unwrap();
        prop_assert!((sq.integral() - m.rho_tail(0)).abs() < 1e-8);
        for n in 0..c.len() + 2 {
            prop_assert!(m.rho_tail(n + 1) <= m.rho_tail(n));
        }
    }

    #[test]
    fn optimal_n_minimizes_risk(decay in 0.05f64..3.0, scale in 0.01f64..10.0, n in 2usize..400) {
        let p = SmoothnessProfile::from_fn(0, n, |k| scale * (-decay * k as f64).exp());
        let best = optimal_n(n, &p).unwrap();
        let a_best = risk_a(n, best, p.get(best).unwrap()).unwrap();
        for k in 1..=n {
            let a = risk_a(n, k, p.get(k).unwrap()).unwrap();
            prop_assert!(a_best <= a);
            if k < best {
                prop_assert!(a_best < a);
            }
        }
    }

    #[test]
    fn nikolskii_dominates_sup_norm(mut c in coeff_vec(32)) {
        c[0] = 0.0;
        let m = CoefficientModel::new(c).unwrap();
        let bound = nikolskii_bound(&m.profile(64), 6).unwrap().value();
        let sup = (0..10_000).map(|i| m.eval(i as f64 / 10_000.0).abs()).fold(0.0, f64::max);
        prop_assert!(sup <= bound + 1e-6);
    }

    #[test]
    fn select_n_is_the_exhaustive_argmin(c in prop::collection::vec(-1.0f64..1.0, 2..80)) {
        let n = c.len();
        let e = EmpiricalCoefficients::new(c.clone(), n, Problem::A).unwrap();
        let chosen = select_n(&e).unwrap();
        let mut best = (1, f64::INFINITY);
        for k in 1..=n / 2 {
            let t: f64 = (k + 1..=2 * k).map(|j| c[j - 1] * c[j - 1]).sum();
            if t < best.1 {
                best = (k, t);
            }
        }
        prop_assert_eq!(chosen, best.0);
        prop_assert_eq!(tau_stat(&e, chosen).unwrap(), best.1);
    }

    #[test]
    fn projection_error_splits_by_parseval(c in coeff_vec(24), noise in coeff_vec(24), big_n in 1usize..24) {
        let k = c.len().min(noise.len());
        prop_assume!(big_n <= k);
        let hat: Vec<f64> = c[..k].iter().zip(&noise).map(|(a, b)| a + 0.1 * b).collect();
        let e = EmpiricalCoefficients::new(hat.clone(), 1000, Problem::A).unwrap();
        let est = projection_estimate(&e, big_n).unwrap();
        let truth = CoefficientModel::new(c.clone()).unwrap();
        let diff = GridFunction::from_fn(|x| (est.eval(x) - truth.eval(x)).powi(2), 1 << 12).unwrap();
        let want: f64 = (0..big_n).map(|i| (hat[i] - c[i]).powi(2)).sum::<f64>() + truth.rho_tail(big_n);
        prop_assert!((diff.integral() - want).abs() < 1e-8);
    }

    #[test]
    fn rho_hat_is_tau_minus_dimension(c in prop::collection::vec(-1.0f64..1.0, 2..40), n in 40usize..1000) {
        let e = EmpiricalCoefficients::new(c.clone(), n, Problem::B).unwrap();
        let t = RhoHatTrajectory::from_coeffs(&e).unwrap();
        for &(big_n, v) in t.points() {
            prop_assert_eq!(v, tau_stat(&e, big_n).unwrap() - big_n as f64 / n as f64);
            prop_assert_eq!(v, rho_hat(&e, big_n).unwrap());
        }
        prop_assert!(t.clamped().points().iter().all(|p| p.1 >= 0.0));
    }

    #[test]
    fn fenchel_young_inequality(p in -0.49f64..0.49, v in -30.0f64..30.0) {
        let fs = [
            YoungOrliczPhi::quadratic(),
            YoungOrliczPhi::upsilon(),
            YoungOrliczPhi::custom(f64::INFINITY, |x| x.cosh().ln()).unwrap(),
        ];
        for f in &fs {
            let conj = f.conjugate(v);
            prop_assert!(p * v <= f.eval(p) + conj + 1e-9);
        }
        let direct = young_fenchel(|x| 0.5 * x * x, f64::NEG_INFINITY, f64::INFINITY, v);
        prop_assert!((direct - 0.5 * v * v).abs() < 1e-8 * (1.0 + v * v));
    }

    #[test]
    fn tail_bounds_lie_in_range_and_decrease(norm in 0.1f64..5.0) {
        let u = YoungOrliczPhi::upsilon();
        let mut prev = 2.0;
        for i in 0..40 {
            let t = 0.25 * i as f64;
            let b = b_phi_tail(&u, norm, t).unwrap();
            prop_assert!((0.0..=2.0).contains(&b));
            prop_assert!(b <= prev + 1e-12);
            prev = b;
        }
    }

    #[test]
    fn overline_is_bounded_and_monotone(lambda in -3.0f64..3.0) {
        let q = YoungOrliczPhi::quadratic();
        let lc = YoungOrliczPhi::custom(f64::INFINITY, |x| x.cosh().ln()).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for m in 1..=8 {
            prop_assert!(overline_phi(&q, lambda, m).unwrap() <= q.eval(lambda) + 1e-12);
            let v = overline_phi(&lc, lambda, m).unwrap();
            prop_assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn intervals_nest_in_level(rho_hat in -0.01f64..0.2, n in 100usize..20_000, big_n in 1usize..50, a1 in 0.05f64..0.98, gap in 0.001f64..0.5) {
        let a2 = (a1 + gap).min(0.999);
        let v1 = smoothcal::confidence::normal_quantile_two_sided(a1).unwrap();
        let v2 = smoothcal::confidence::normal_quantile_two_sided(a2).unwrap();
        for m in [CiMethod::PlugIn, CiMethod::QuadraticSolve] {
            let i1 = interval_at(rho_hat, n, big_n, v1, m).unwrap();
            let i2 = interval_at(rho_hat, n, big_n, v2, m).unwrap();
            prop_assert!(i1.lower <= i1.upper);
            if !i1.empty {
                prop_assert!(!i2.empty);
                prop_assert!(i2.lower <= i1.lower && i1.upper <= i2.upper);
            }
            if m == CiMethod::QuadraticSolve && rho_hat >= 0.0 {
                prop_assert!(i1.contains(rho_hat));
            }
        }
    }

    #[test]
    fn loglin_initializers_fit_noiseless_data(c1 in 0.1f64..10.0, alpha in 0.2f64..3.0, gamma in 0.0f64..2.0, q in 0.3f64..0.95, kappa in -1.0f64..2.0) {
        let p = RhoModel::quasi_power(c1, alpha, gamma).unwrap();
        let t = RhoHatTrajectory::from_points((1..=64).map(|n| (n, p.eval(n))).collect(), None, None);
        let init = loglin_init_power(&t).unwrap();
        let m = RhoModel::QuasiPower { c1: init.c3.exp(), alpha: init.alpha1, gamma: init.gamma1 };
        let rss: f64 = (1..=64).map(|n| (m.eval(n) - p.eval(n)).powi(2)).sum();
        prop_assert!(rss <= 1e-10);

        let e = RhoModel::quasi_exp(c1, kappa, q).unwrap();
        let t = RhoHatTrajectory::from_points((1..=40).map(|n| (n, e.eval(n))).collect(), None, None);
        let m = loglin_init_exp(&t).unwrap().model();
        let rss: f64 = (1..=40).map(|n| (m.eval(n) - e.eval(n)).powi(2)).sum();
        prop_assert!(rss <= 1e-10);
    }

    #[test]
    fn quasi_power_gamma_ratio_peaks_at_two(c1 in 0.1f64..10.0, alpha in 0.05f64..4.0, gamma in 0.0f64..3.0) {
        let p = RhoModel::quasi_power(c1, alpha, gamma).unwrap();
        let g = check_gamma_condition(&p, 200).unwrap();
        let at_two = 2f64.powf(-alpha) * (5f64.ln() / 3f64.ln()).powf(gamma);
        prop_assert!((g.gamma_sup - at_two).abs() < 1e-12 * at_two);
        prop_assert_eq!(g.satisfied, at_two < 1.0);
        if gamma == 0.0 {
            prop_assert!(g.satisfied);
        }
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>(), rep in 0u64..1000) {
        let m = CoefficientModel::new(vec![0.2, 0.5, -0.1]).unwrap();
        for kind in [NoiseKind::Gaussian, NoiseKind::Rademacher, NoiseKind::UniformCentered] {
            let noise = NoiseSpec::new(kind, 0.7).unwrap();
            let a = gen_regression(&m, 50, &noise, Seed::new(seed, rep)).unwrap();
            let b = gen_regression(&m, 50, &noise, Seed::new(seed, rep)).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
