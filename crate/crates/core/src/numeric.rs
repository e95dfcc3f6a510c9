//! Small numerical kernels shared across modules: composite quadrature,
//! golden-section maximization and simplex projection.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Composite Simpson rule on equispaced samples covering `[a, b]`.
///
/// An odd panel count is handled by closing the last three panels with
/// Simpson's 3/8 rule. Two samples fall back to the trapezoid rule.
pub(crate) fn simpson_samples(samples: &[f64], width: f64) -> f64 {
    let m = samples.len();
    debug_assert!(m >= 2);
    let panels = m - 1;
    let h = width / panels as f64;
    if panels == 1 {
        return 0.5 * h * (samples[0] + samples[1]);
    }
    if panels == 3 {
        return 3.0 * h / 8.0 * (samples[0] + 3.0 * samples[1] + 3.0 * samples[2] + samples[3]);
    }
    let even_panels = if panels % 2 == 0 { panels } else { panels - 3 };
    let mut acc = samples[0] + samples[even_panels];
    for (i, s) in samples.iter().enumerate().take(even_panels).skip(1) {
        acc += if i % 2 == 1 { 4.0 * s } else { 2.0 * s };
    }
    let mut total = acc * h / 3.0;
    if even_panels != panels {
        let t = &samples[even_panels..];
        total += 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3]);
    }
    total
}

pub(crate) fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels + panels % 2;
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let x = a + i as f64 * h;
        acc += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    acc * h / 3.0
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
///
/// Returns `(argmax, max)`. Non-finite values are treated as `-inf`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = g(c);
    let mut fd = g(d);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = g(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Maximizes `f` over `[lo, hi]` with a uniform grid scan of `points` nodes
/// followed by golden-section refinement around the best node.
pub(crate) fn grid_golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let safe = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    if hi <= lo {
        return (lo, safe(lo));
    }
    let step = (hi - lo) / (points - 1) as f64;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..points {
        let x = if i + 1 == points { hi } else { lo + i as f64 * step };
        let v = safe(x);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let best_x = if best_i + 1 == points { hi } else { lo + best_i as f64 * step };
    let a = (best_x - step).max(lo);
    let b = (best_x + step).min(hi);
    let (x, v) = golden_max(&safe, a, b);
    if v > best {
        (x, v)
    } else {
        (best_x, best)
    }
}

/// Euclidean projection onto the probability simplex.
pub(crate) fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}
