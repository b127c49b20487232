use fuzzyci_core::specfun::*;

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn choose(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[test]
fn incomplete_beta_closed_forms() {
    assert_eq!(reg_inc_beta(0.5, 1.0, 1.0).unwrap(), 0.5);
    assert!((reg_inc_beta(0.6, 2.0, 1.0).unwrap() - 0.36).abs() < 1e-15);
    assert!((reg_inc_beta(0.6, 1.0, 2.0).unwrap() - 0.84).abs() < 1e-15);
    assert!((inv_reg_inc_beta(0.36, 2.0, 1.0).unwrap() - 0.6).abs() < 1e-12);
    assert!((inv_reg_inc_beta(0.5, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn incomplete_beta_matches_simpson() {
    // B(2.5, 4.5) = Γ(2.5) Γ(4.5) / Γ(7) = (3/4)(105/16) π / 720.
    let beta = 0.75 * (105.0 / 16.0) * std::f64::consts::PI / 720.0;
    let density = |t: f64| t.powf(1.5) * (1.0 - t).powf(3.5) / beta;
    let oracle = simpson(&density, 0.0, 0.3, 1e-15);
    assert!((reg_inc_beta(0.3, 2.5, 4.5).unwrap() - oracle).abs() < 1e-12, "{oracle}");
}

#[test]
fn inverse_beta_matches_polynomial_bisection() {
    // For integer shapes, I(x, 5, 6) = P(Bin(10, x) ≥ 5).
    let cdf = |x: f64| (5..=10u64).map(|j| choose(10, j) * x.powi(j as i32) * (1.0 - x).powi(10 - j as i32)).sum::<f64>();
    let oracle = bisect(|x| cdf(x) - 0.95, 0.0, 1.0);
    assert!((inv_reg_inc_beta(0.95, 5.0, 6.0).unwrap() - oracle).abs() < 1e-10, "{oracle}");
}

#[test]
fn chisq_quantiles() {
    assert!((chisq_quantile(0.95, 2).unwrap() + 2.0 * 0.05f64.ln()).abs() < 1e-12);
    assert!((chisq_quantile(0.95, 2).unwrap() - 5.991_464_547_107_979).abs() < 1e-12);
    assert!((chisq_quantile(0.5, 2).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-12);
    // Even degrees of freedom: 1 − F(x) = e^{-x/2} Σ_{j<k/2} (x/2)^j / j!.
    let cdf8 = |x: f64| {
        let h = 0.5 * x;
        1.0 - (-h).exp() * (1.0 + h + h * h / 2.0 + h * h * h / 6.0)
    };
    let oracle = bisect(|x| cdf8(x) - 0.95, 0.0, 100.0);
    assert!((chisq_quantile(0.95, 8).unwrap() - oracle).abs() < 1e-9, "{oracle}");
    assert!(chisq_quantile(0.5, 3).is_err());
    assert!(chisq_quantile(1.0, 4).is_err());
}

#[test]
fn normal_quantile_matches_erf_series() {
    let series_cdf = |z: f64| {
        let mut term = z;
        let mut sum = z;
        for k in 1..200 {
            term *= -z * z / (2.0 * k as f64);
            sum += term / (2 * k + 1) as f64;
        }
        0.5 + sum / (2.0 * std::f64::consts::PI).sqrt()
    };
    let oracle = bisect(|z| series_cdf(z) - 0.95, 0.0, 4.0);
    let z = normal_quantile(0.95).unwrap();
    assert!((z - oracle).abs() < 1e-12, "{z} vs {oracle}");
    assert!((z - 1.6449).abs() < 1e-4);
    assert_eq!(normal_cdf(0.0), 0.5);
    for &x in &[0.3, 1.7, 2.9] {
        assert!((normal_cdf(x) - series_cdf(x)).abs() < 1e-14);
    }
}

#[test]
fn discrete_distributions() {
    // (1 + 10 + 45 + 120 + 210 + 252) / 1024
    assert!((binom_cdf(5, 10, 0.5).unwrap() - 638.0 / 1024.0).abs() < 1e-14);
    for &tau in &[0.05, 0.4, 0.93] {
        assert!((binom_pmf(0, 7, tau).unwrap() - (1.0 - tau).powi(7)).abs() < 1e-15);
        assert!((pois_pmf(0, 10.0 * tau).unwrap() - (-10.0 * tau).exp()).abs() < 1e-15);
        let direct: f64 = (0..=3u64).map(|j| choose(7, j) * tau.powi(j as i32) * (1.0 - tau).powi(7 - j as i32)).sum();
        assert!((binom_cdf(3, 7, tau).unwrap() - direct).abs() < 1e-14);
    }
    let total: f64 = (0..200).map(|w| pois_pmf(w, 30.0).unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(binom_pmf(3, 2, 0.5).is_err());
    assert!(pois_pmf(1, 0.0).is_err());
}

#[test]
fn beta_binomial_identity() {
    for n in [1u64, 6, 25] {
        for w in 1..=n {
            for &tau in &[0.01, 0.3, 0.77, 0.99] {
                let lhs = reg_inc_beta(tau, w as f64, (n - w + 1) as f64).unwrap();
                let rhs = 1.0 - binom_cdf(w - 1, n, tau).unwrap();
                assert!((lhs - rhs).abs() < 1e-12, "n={n} ω={w} τ={tau}");
            }
        }
    }
}

#[test]
fn chisq_poisson_identity() {
    for i in 1..=30u64 {
        for j in 1..=30 {
            let tau = j as f64;
            let lhs = pois_cdf(i - 1, tau).unwrap();
            let rhs = 1.0 - chisq_cdf(2.0 * tau, 2 * i as u32).unwrap();
            assert!((lhs - rhs).abs() < 1e-12, "i={i} τ={tau}");
        }
    }
}

#[test]
fn beta_round_trips_on_shape_grid() {
    let shapes = [0.5, 1.0, 2.5, 7.0, 20.0];
    for &a in &shapes {
        for &b in &shapes {
            for i in 1..20 {
                let p = i as f64 / 20.0;
                let x = inv_reg_inc_beta(p, a, b).unwrap();
                assert!((reg_inc_beta(x, a, b).unwrap() - p).abs() < 1e-9, "a={a} b={b} p={p}");
            }
        }
    }
}

#[test]
fn monotone_in_principal_argument() {
    let grid: Vec<f64> = (1..400).map(|i| i as f64 / 400.0).collect();
    let increasing = |v: Vec<f64>| v.windows(2).all(|w| w[1] >= w[0]);
    assert!(increasing(grid.iter().map(|&x| reg_inc_beta(x, 3.5, 0.7).unwrap()).collect()));
    assert!(increasing(grid.iter().map(|&p| inv_reg_inc_beta(p, 3.5, 0.7).unwrap()).collect()));
    assert!(increasing(grid.iter().map(|&p| chisq_quantile(p, 12).unwrap()).collect()));
    assert!(increasing(grid.iter().map(|&p| normal_quantile(p).unwrap()).collect()));
    assert!(increasing(grid.iter().map(|&x| normal_cdf(10.0 * (x - 0.5))).collect()));
    assert!(increasing(grid.iter().map(|&x| chisq_cdf(50.0 * x, 6).unwrap()).collect()));
}

#[test]
fn tolerance_is_validated() {
    assert!(Tolerance::new(0.0, 10).is_err());
    assert!(Tolerance::new(1e-12, 0).is_err());
    let tight = Tolerance::new(1e-12, 2).unwrap();
    assert!(inv_reg_inc_beta_with(0.3, 2.0, 3.0, &tight).is_err());
}
