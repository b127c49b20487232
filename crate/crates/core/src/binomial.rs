//! Fuzzy membership for one binomial observation.
//!
//! For `τ < o` the optimal test of `τ` against `o` accepts small counts, so
//! `ψ_o(ω | τ)` is 1 below the `γ`-quantile of `Bin(n, τ)`, 0 above it, and
//! fractional at the quantile. For `τ > o` the roles of the tails swap. In
//! terms of the incomplete beta function, with `T(p, i) = I⁻¹(p, i, n−i+1)`:
//!
//! ```text
//! τ < o:  0                                   if τ ≤ T(1−γ, ω)
//!         (γ − 1 + I(τ, ω, n−ω+1)) / P(ω|τ)   if T(1−γ, ω) < τ ≤ T(1−γ, ω+1)
//!         1                                   if τ > T(1−γ, ω+1)
//! τ > o:  1                                   if τ ≤ T(γ, ω)
//!         (γ − I(τ, ω+1, n−ω)) / P(ω|τ)       if T(γ, ω) < τ ≤ T(γ, ω+1)
//!         0                                   if τ > T(γ, ω+1)
//! ```
//!
//! Branches are selected by comparing binomial tail probabilities with `γ`,
//! which is equivalent to the threshold comparisons above and keeps the
//! fractional branch consistent with the branch test to rounding.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::family::{self, DiscreteFamily};
use crate::specfun::{binom_cdf, binom_ln_pmf, binom_pmf, binom_sf, inv_reg_inc_beta, normal_quantile};

fn check_level(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain(format!("confidence level must be in (0, 1), got {gamma}")));
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::domain(format!("binomial parameter must be in (0, 1), got {tau}")));
    }
    Ok(())
}

/// Proposed membership `ψ_o` for `X ~ Bin(n, θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialFamily {
    n: u64,
    o: f64,
    gamma: f64,
    /// `I⁻¹(1−γ, i, n−i+1)` for `i = 0..=n+1`.
    below: Vec<f64>,
    /// `I⁻¹(γ, i, n−i+1)` for `i = 0..=n+1`.
    above: Vec<f64>,
}

/// Branch boundaries of `ψ_o(ω | ·)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// For `τ < o`: ψ = 0 at or below this value.
    pub below_zero: f64,
    /// For `τ < o`: ψ = 1 above this value.
    pub below_one: f64,
    /// For `τ > o`: ψ = 1 at or below this value.
    pub above_one: f64,
    /// For `τ > o`: ψ = 0 above this value.
    pub above_zero: f64,
}

impl BinomialFamily {
    pub fn new(n: u64, o: f64, gamma: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("binomial family needs n >= 1"));
        }
        check_tau(o)?;
        check_level(gamma)?;
        let quantile = |p: f64, i: u64| inv_reg_inc_beta(p, i as f64, (n + 1 - i) as f64);
        let below = (0..=n + 1).map(|i| quantile(1.0 - gamma, i)).collect::<Result<_>>()?;
        let above = (0..=n + 1).map(|i| quantile(gamma, i)).collect::<Result<_>>()?;
        Ok(BinomialFamily {
            n,
            o,
            gamma,
            below,
            above,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn o(&self) -> f64 {
        self.o
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn check_omega(&self, omega: u64) -> Result<()> {
        if omega > self.n {
            return Err(Error::domain(format!("outcome {omega} exceeds n = {}", self.n)));
        }
        Ok(())
    }

    pub fn thresholds(&self, omega: u64) -> Result<Thresholds> {
        self.check_omega(omega)?;
        let i = omega as usize;
        Ok(Thresholds {
            below_zero: self.below[i],
            below_one: self.below[i + 1],
            above_one: self.above[i],
            above_zero: self.above[i + 1],
        })
    }

    /// `(γ − tail) / P(ω | τ)`, divided in log space.
    fn split_value(&self, omega: u64, tau: f64, tail: f64) -> Result<f64> {
        let ln_pmf = binom_ln_pmf(omega, self.n, tau)?;
        Ok(((self.gamma - tail).ln() - ln_pmf).exp().clamp(0.0, 1.0))
    }

    /// The `τ < o` formula, evaluated without checking the side.
    fn below_branch(&self, omega: u64, tau: f64) -> Result<f64> {
        self.check_omega(omega)?;
        check_tau(tau)?;
        let less = if omega == 0 { 0.0 } else { binom_cdf(omega - 1, self.n, tau)? };
        if less >= self.gamma {
            return Ok(0.0);
        }
        if binom_cdf(omega, self.n, tau)? < self.gamma {
            return Ok(1.0);
        }
        self.split_value(omega, tau, less)
    }

    /// The `τ > o` formula, evaluated without checking the side.
    fn above_branch(&self, omega: u64, tau: f64) -> Result<f64> {
        self.check_omega(omega)?;
        check_tau(tau)?;
        let at_least = if omega == 0 { 1.0 } else { binom_sf(omega - 1, self.n, tau)? };
        if at_least <= self.gamma {
            return Ok(1.0);
        }
        let more = binom_sf(omega, self.n, tau)?;
        if more > self.gamma {
            return Ok(0.0);
        }
        self.split_value(omega, tau, more)
    }

    /// `ψ_o(ω | τ)` for `τ < o`.
    pub fn psi_lower(&self, omega: u64, tau: f64) -> Result<f64> {
        if !(tau < self.o) {
            return Err(Error::domain(format!("psi_lower needs tau < o = {}, got {tau}", self.o)));
        }
        self.below_branch(omega, tau)
    }

    /// `ψ_o(ω | τ)` for `τ > o`.
    pub fn psi_upper(&self, omega: u64, tau: f64) -> Result<f64> {
        if !(tau > self.o) {
            return Err(Error::domain(format!("psi_upper needs tau > o = {}, got {tau}", self.o)));
        }
        self.above_branch(omega, tau)
    }

    /// `ψ_o(ω | τ)` on all of `(0, 1)`. At `τ = o` the larger of the two
    /// one-sided formulas is returned, which keeps coverage at least `γ`.
    pub fn psi_o(&self, omega: u64, tau: f64) -> Result<f64> {
        if tau < self.o {
            self.below_branch(omega, tau)
        } else if tau > self.o {
            self.above_branch(omega, tau)
        } else {
            Ok(self.below_branch(omega, tau)?.max(self.above_branch(omega, tau)?))
        }
    }
}

impl DiscreteFamily for BinomialFamily {
    fn pmf(&self, omega: u64, theta: f64) -> Result<f64> {
        binom_pmf(omega, self.n, theta)
    }

    fn support(&self, _theta: f64) -> Result<RangeInclusive<u64>> {
        Ok(0..=self.n)
    }

    fn membership(&self, omega: u64, tau: f64) -> Result<f64> {
        self.psi_o(omega, tau)
    }

    fn breakpoints(&self, omega: u64) -> Result<Vec<f64>> {
        let t = self.thresholds(omega)?;
        Ok(interior_sorted(
            [t.below_zero, t.below_one, self.o, t.above_one, t.above_zero],
            0.0,
            1.0,
        ))
    }

    fn parameter_range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn label(&self) -> String {
        format!("proposed(o={})", self.o)
    }
}

pub(crate) fn interior_sorted(points: impl IntoIterator<Item = f64>, lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = points.into_iter().filter(|&p| p > lo && p < hi).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Coverage of the proposed membership at `τ`.
pub fn coverage(tau: f64, family: &BinomialFamily) -> Result<f64> {
    family::coverage(family, tau)
}

/// Crisp Agresti–Coull interval `p̃ ± z √(p̃(1−p̃)/ñ)` with
/// `ñ = n + z²`, `p̃ = (ω + z²/2)/ñ` and `z = Φ⁻¹((1+γ)/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AgrestiCoull {
    n: u64,
    gamma: f64,
    z: f64,
}

impl AgrestiCoull {
    pub fn new(n: u64, gamma: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("Agresti-Coull interval needs n >= 1"));
        }
        check_level(gamma)?;
        Ok(AgrestiCoull {
            n,
            gamma,
            z: normal_quantile(0.5 * (1.0 + gamma))?,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Interval endpoints for outcome `omega` (not clipped to `(0, 1)`).
    pub fn interval(&self, omega: u64) -> Result<(f64, f64)> {
        if omega > self.n {
            return Err(Error::domain(format!("outcome {omega} exceeds n = {}", self.n)));
        }
        let z2 = self.z * self.z;
        let n_tilde = self.n as f64 + z2;
        let p_tilde = (omega as f64 + 0.5 * z2) / n_tilde;
        let half = self.z * (p_tilde * (1.0 - p_tilde) / n_tilde).sqrt();
        Ok((p_tilde - half, p_tilde + half))
    }

    pub fn membership(&self, omega: u64, tau: f64) -> Result<f64> {
        let (lo, hi) = self.interval(omega)?;
        Ok(if tau >= lo && tau <= hi { 1.0 } else { 0.0 })
    }
}

impl DiscreteFamily for AgrestiCoull {
    fn pmf(&self, omega: u64, theta: f64) -> Result<f64> {
        binom_pmf(omega, self.n, theta)
    }

    fn support(&self, _theta: f64) -> Result<RangeInclusive<u64>> {
        Ok(0..=self.n)
    }

    fn membership(&self, omega: u64, tau: f64) -> Result<f64> {
        AgrestiCoull::membership(self, omega, tau)
    }

    fn breakpoints(&self, omega: u64) -> Result<Vec<f64>> {
        let (lo, hi) = self.interval(omega)?;
        Ok(interior_sorted([lo, hi], 0.0, 1.0))
    }

    fn parameter_range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn label(&self) -> String {
        "agresti_coull".into()
    }
}

/// Convenience wrapper matching the free-function form of the interval.
pub fn agresti_coull_membership(omega: u64, tau: f64, n: u64, gamma: f64) -> Result<f64> {
    AgrestiCoull::new(n, gamma)?.membership(omega, tau)
}
