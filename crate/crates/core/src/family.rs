//! Common interface of the discrete membership families.

use std::ops::RangeInclusive;

use crate::error::Result;

/// A membership `ψ(ω | τ)` for a one-parameter discrete model.
///
/// Implemented by the proposed memberships and by the crisp comparison
/// intervals; the coverage and expected-length machinery only goes through
/// this trait.
pub trait DiscreteFamily {
    /// Probability of observing `omega` when the parameter is `theta`.
    fn pmf(&self, omega: u64, theta: f64) -> Result<f64>;

    /// Outcomes carrying all but a negligible tail of the mass under
    /// `theta` (the whole sample space when it is finite).
    fn support(&self, theta: f64) -> Result<RangeInclusive<u64>>;

    fn membership(&self, omega: u64, tau: f64) -> Result<f64>;

    /// Values of `τ` at which `membership(omega, ·)` may lose smoothness.
    /// Between consecutive breakpoints the membership is smooth.
    fn breakpoints(&self, omega: u64) -> Result<Vec<f64>>;

    /// Default integration range for `τ`.
    fn parameter_range(&self) -> (f64, f64);

    fn label(&self) -> String;
}

/// Coverage `Σ_ω P(ω | τ) ψ(ω | τ)` over the family's support at `τ`.
pub fn coverage<F: DiscreteFamily + ?Sized>(family: &F, tau: f64) -> Result<f64> {
    let mut total = 0.0;
    for omega in family.support(tau)? {
        let p = family.pmf(omega, tau)?;
        if p > 0.0 {
            total += p * family.membership(omega, tau)?;
        }
    }
    Ok(total)
}
