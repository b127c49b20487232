use fuzzyci_core::binomial::BinomialFamily;
use fuzzyci_core::length::{el_values, expected_length, interval_mass};
use fuzzyci_core::poisson::PoissonFamily;
use fuzzyci_core::{DiscreteFamily, QuadratureSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Midpoint rule on `[lo, o]` and `[o, hi]`, `n` points each.
fn midpoint_split(f: impl Fn(f64) -> f64, lo: f64, o: f64, hi: f64, n: usize) -> f64 {
    let piece = |a: f64, b: f64| {
        let h = (b - a) / n as f64;
        (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
    };
    piece(lo, o) + piece(o, hi)
}

#[test]
fn binomial_interval_mass_against_a_million_point_sum() {
    let fam = BinomialFamily::new(10, 0.5, 0.95).unwrap();
    let quad = QuadratureSpec::for_family(&fam).unwrap();
    let got = interval_mass(&fam, 5, &quad).unwrap();
    let oracle = midpoint_split(|t| fam.membership(5, t).unwrap(), 0.0, 0.5, 1.0, 500_000);
    assert!((got - oracle).abs() < 1e-9, "{got} vs {oracle}");
}

#[test]
fn random_interval_masses() {
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    for case in 0..50 {
        let gamma = rng.gen_range(0.8..0.99);
        let (got, oracle) = if case % 2 == 0 {
            let n = rng.gen_range(1..=30u64);
            let o = rng.gen_range(0.05..0.95);
            let fam = BinomialFamily::new(n, o, gamma).unwrap();
            let w = rng.gen_range(0..=n);
            let quad = QuadratureSpec::for_family(&fam).unwrap();
            (
                interval_mass(&fam, w, &quad).unwrap(),
                midpoint_split(|t| fam.membership(w, t).unwrap(), 0.0, o, 1.0, 100_000),
            )
        } else {
            let o = rng.gen_range(0.5..15.0);
            let fam = PoissonFamily::new(o, gamma).unwrap();
            let w = rng.gen_range(0..=25u64);
            let quad = QuadratureSpec::for_family(&fam).unwrap();
            (
                interval_mass(&fam, w, &quad).unwrap(),
                midpoint_split(|t| fam.membership(w, t).unwrap(), 0.0, o, fam.tau_max(), 200_000),
            )
        };
        assert!((got - oracle).abs() <= 1e-6 * oracle.abs().max(1e-3), "case {case}: {got} vs {oracle}");
    }
}

#[test]
fn poisson_expected_length_ignores_the_far_tail() {
    let fam = PoissonFamily::new(8.0, 0.95).unwrap();
    let wide = fam.clone().with_tau_max(2.0 * fam.tau_max()).unwrap();
    let thetas = [0.5, 3.0, 8.0, 15.0];
    let a = el_values(&fam, &thetas, &QuadratureSpec::for_family(&fam).unwrap()).unwrap();
    let b = el_values(&wide, &thetas, &QuadratureSpec::for_family(&wide).unwrap()).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-8, "{x} vs {y}");
    }
}

#[test]
fn binomial_expected_length_by_direct_double_sum() {
    let fam = BinomialFamily::new(10, 0.3, 0.9).unwrap();
    let quad = QuadratureSpec::for_family(&fam).unwrap();
    let masses: Vec<f64> = (0..=10)
        .map(|w| midpoint_split(|t| fam.membership(w, t).unwrap(), 0.0, 0.3, 1.0, 100_000))
        .collect();
    for theta in [0.05, 0.3, 0.6, 0.95] {
        let oracle: f64 = (0..=10).map(|w| fam.pmf(w, theta).unwrap() * masses[w as usize]).sum();
        let got = expected_length(&fam, theta, &quad).unwrap();
        assert!((got - oracle).abs() < 1e-8, "θ={theta}");
    }
}

#[test]
fn tangency_at_the_reference_point() {
    let quad = QuadratureSpec::new(0.0, 1.0).unwrap();
    for o in [0.2, 0.5, 0.7] {
        let fam = BinomialFamily::new(10, o, 0.95).unwrap();
        let el = expected_length(&fam, o, &quad).unwrap();
        for theta in [0.1, 0.4, 0.9] {
            let bound = expected_length(&BinomialFamily::new(10, theta, 0.95).unwrap(), theta, &quad).unwrap();
            let here = expected_length(&fam, theta, &quad).unwrap();
            assert!(here >= bound - 1e-9, "o={o} θ={theta}");
        }
        assert!(el > 0.0);
    }
}
