use super::beta::reg_inc_beta;
use super::gamma::{ln_gamma, reg_lower_gamma, reg_upper_gamma};
use crate::error::{Error, Result};

fn check_prob(tau: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::domain(format!("binomial success probability must be in [0, 1], got {tau}")));
    }
    Ok(())
}

fn check_rate(tau: f64) -> Result<()> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain(format!("Poisson mean must be finite and > 0, got {tau}")));
    }
    Ok(())
}

fn ln_choose(n: u64, k: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// ln P(X = ω) for X ~ Bin(n, τ).
pub fn binom_ln_pmf(omega: u64, n: u64, tau: f64) -> Result<f64> {
    check_prob(tau)?;
    if omega > n {
        return Err(Error::domain(format!("binomial outcome {omega} exceeds n = {n}")));
    }
    let succ = if omega == 0 { 0.0 } else { omega as f64 * tau.ln() };
    let fail = if omega == n { 0.0 } else { (n - omega) as f64 * (-tau).ln_1p() };
    Ok(ln_choose(n, omega) + succ + fail)
}

pub fn binom_pmf(omega: u64, n: u64, tau: f64) -> Result<f64> {
    Ok(binom_ln_pmf(omega, n, tau)?.exp())
}

/// P(X ≤ ω) for X ~ Bin(n, τ), as I(1 − τ, n − ω, ω + 1).
pub fn binom_cdf(omega: u64, n: u64, tau: f64) -> Result<f64> {
    check_prob(tau)?;
    if omega >= n {
        return Ok(1.0);
    }
    reg_inc_beta(1.0 - tau, (n - omega) as f64, omega as f64 + 1.0)
}

/// P(X > ω) for X ~ Bin(n, τ), as I(τ, ω + 1, n − ω).
pub fn binom_sf(omega: u64, n: u64, tau: f64) -> Result<f64> {
    check_prob(tau)?;
    if omega >= n {
        return Ok(0.0);
    }
    reg_inc_beta(tau, omega as f64 + 1.0, (n - omega) as f64)
}

/// ln P(X = ω) for X ~ Poisson(τ).
pub fn pois_ln_pmf(omega: u64, tau: f64) -> Result<f64> {
    check_rate(tau)?;
    let k = omega as f64;
    Ok(k * tau.ln() - tau - ln_gamma(k + 1.0))
}

pub fn pois_pmf(omega: u64, tau: f64) -> Result<f64> {
    Ok(pois_ln_pmf(omega, tau)?.exp())
}

/// P(X ≤ ω) for X ~ Poisson(τ), as Q(ω + 1, τ).
pub fn pois_cdf(omega: u64, tau: f64) -> Result<f64> {
    check_rate(tau)?;
    reg_upper_gamma(omega as f64 + 1.0, tau)
}

/// P(X > ω) for X ~ Poisson(τ), as P(ω + 1, τ).
pub fn pois_sf(omega: u64, tau: f64) -> Result<f64> {
    check_rate(tau)?;
    reg_lower_gamma(omega as f64 + 1.0, tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_outcome_closed_forms() {
        for &(n, tau) in &[(1u64, 0.3), (10, 0.5), (25, 0.01), (40, 0.9)] {
            let p = binom_pmf(0, n, tau).unwrap();
            let exact = (1.0f64 - tau).powi(n as i32);
            assert!((p - exact).abs() <= 1e-14 * exact.max(1e-300), "n={n} tau={tau}");
        }
        for &tau in &[0.01, 1.0, 3.5, 30.0] {
            assert!((pois_pmf(0, tau).unwrap() - (-tau).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn pmf_sums_to_one() {
        for &(n, tau) in &[(5u64, 0.2), (10, 0.5), (25, 0.93), (60, 0.01)] {
            let total: f64 = (0..=n).map(|k| binom_pmf(k, n, tau).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-12, "n={n} tau={tau} total={total}");
        }
        for &tau in &[0.3, 4.0, 12.0, 30.0] {
            let mut total = 0.0;
            let mut k = 0;
            while total < 1.0 - 1e-12 {
                total += pois_pmf(k, tau).unwrap();
                k += 1;
                assert!(k < 500);
            }
            assert!(total <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn cdf_plus_sf_is_one() {
        for k in 0..10 {
            let s = binom_cdf(k, 10, 0.37).unwrap() + binom_sf(k, 10, 0.37).unwrap();
            assert!((s - 1.0).abs() < 1e-14);
            let s = pois_cdf(k, 4.2).unwrap() + pois_sf(k, 4.2).unwrap();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(binom_pmf(11, 10, 0.5).is_err());
        assert!(binom_cdf(1, 10, 1.5).is_err());
        assert!(pois_pmf(1, 0.0).is_err());
        assert!(pois_cdf(1, -1.0).is_err());
    }
}
