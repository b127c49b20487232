//! Fuzzy membership for one Poisson observation.
//!
//! Same structure as the binomial case, with the thresholds written through
//! chi-square quantiles: `P(X ≤ k; τ) = 1 − F_{χ²(2k+2)}(2τ)`, so the branch
//! boundaries are `χ²_{2ω,p}/2` and `χ²_{2ω+2,p}/2` with `p = 1−γ` below `o`
//! and `p = γ` above it (`χ²_{0,p} = 0`).

use std::ops::RangeInclusive;

use crate::binomial::{interior_sorted, Thresholds};
use crate::error::{Error, Result};
use crate::family::{self, DiscreteFamily};
use crate::np::DiscreteMeasure;
use crate::specfun::{chisq_quantile, normal_quantile, pois_cdf, pois_ln_pmf, pois_pmf, pois_sf};

/// Default tail mass dropped when summing over the Poisson support.
pub const DEFAULT_TRUNCATION_MASS: f64 = 1e-12;

fn check_level(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain(format!("confidence level must be in (0, 1), got {gamma}")));
    }
    Ok(())
}

fn check_rate(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::domain(format!("Poisson mean must be positive and finite, got {tau}")));
    }
    Ok(())
}

fn check_truncation(mass: f64) -> Result<()> {
    if !(mass > 0.0 && mass <= 1e-6) {
        return Err(Error::domain(format!("truncation mass must be in (0, 1e-6], got {mass}")));
    }
    Ok(())
}

/// Default upper end of the `τ` range for a reference value `o`.
pub fn default_tau_max(o: f64) -> f64 {
    o + 10.0 * o.sqrt() + 20.0
}

/// Smallest `m` with `P(X > m; θ) ≤ tail`.
pub fn support_upper(theta: f64, tail: f64) -> Result<u64> {
    check_rate(theta)?;
    let mut lo = 0u64;
    if pois_sf(0, theta)? <= tail {
        return Ok(0);
    }
    let mut hi = (theta + 10.0 * theta.sqrt() + 40.0).ceil() as u64;
    while pois_sf(hi, theta)? > tail {
        lo = hi;
        hi *= 2;
    }
    // invariant: sf(lo) > tail >= sf(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pois_sf(mid, theta)? > tail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// `Pois(θ)` restricted to `0..m` with the remaining tail `P(X ≥ m)` placed
/// on the single point `m`.
pub fn truncated_measure(theta: f64, m: u64) -> Result<DiscreteMeasure> {
    check_rate(theta)?;
    let mut mass = Vec::with_capacity(m as usize + 1);
    for omega in 0..m {
        mass.push(pois_pmf(omega, theta)?);
    }
    mass.push(if m == 0 { 1.0 } else { pois_sf(m - 1, theta)? });
    DiscreteMeasure::from_masses(mass)
}

/// Proposed membership `ψ_o` for `X ~ Pois(θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonFamily {
    o: f64,
    gamma: f64,
    truncation_mass: f64,
    tau_max: f64,
}

impl PoissonFamily {
    pub fn new(o: f64, gamma: f64) -> Result<Self> {
        check_rate(o)?;
        check_level(gamma)?;
        Ok(PoissonFamily {
            o,
            gamma,
            truncation_mass: DEFAULT_TRUNCATION_MASS,
            tau_max: default_tau_max(o),
        })
    }

    pub fn with_truncation_mass(mut self, mass: f64) -> Result<Self> {
        check_truncation(mass)?;
        self.truncation_mass = mass;
        Ok(self)
    }

    pub fn with_tau_max(mut self, tau_max: f64) -> Result<Self> {
        check_rate(tau_max)?;
        self.tau_max = tau_max;
        Ok(self)
    }

    pub fn o(&self) -> f64 {
        self.o
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn truncation_mass(&self) -> f64 {
        self.truncation_mass
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    pub fn thresholds(&self, omega: u64) -> Result<Thresholds> {
        let half_quantile = |p: f64, k: u64| -> Result<f64> {
            if k == 0 {
                return Ok(0.0);
            }
            let k = u32::try_from(2 * k).map_err(|_| Error::domain("outcome too large"))?;
            Ok(0.5 * chisq_quantile(p, k)?)
        };
        Ok(Thresholds {
            below_zero: half_quantile(1.0 - self.gamma, omega)?,
            below_one: half_quantile(1.0 - self.gamma, omega + 1)?,
            above_one: half_quantile(self.gamma, omega)?,
            above_zero: half_quantile(self.gamma, omega + 1)?,
        })
    }

    fn split_value(&self, omega: u64, tau: f64, tail: f64) -> Result<f64> {
        let ln_pmf = pois_ln_pmf(omega, tau)?;
        Ok(((self.gamma - tail).ln() - ln_pmf).exp().clamp(0.0, 1.0))
    }

    fn below_branch(&self, omega: u64, tau: f64) -> Result<f64> {
        check_rate(tau)?;
        let less = if omega == 0 { 0.0 } else { pois_cdf(omega - 1, tau)? };
        if less >= self.gamma {
            return Ok(0.0);
        }
        if pois_cdf(omega, tau)? < self.gamma {
            return Ok(1.0);
        }
        self.split_value(omega, tau, less)
    }

    fn above_branch(&self, omega: u64, tau: f64) -> Result<f64> {
        check_rate(tau)?;
        let at_least = if omega == 0 { 1.0 } else { pois_sf(omega - 1, tau)? };
        if at_least <= self.gamma {
            return Ok(1.0);
        }
        let more = pois_sf(omega, tau)?;
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

impl DiscreteFamily for PoissonFamily {
    fn pmf(&self, omega: u64, theta: f64) -> Result<f64> {
        pois_pmf(omega, theta)
    }

    fn support(&self, theta: f64) -> Result<RangeInclusive<u64>> {
        Ok(0..=support_upper(theta, self.truncation_mass)?)
    }

    fn membership(&self, omega: u64, tau: f64) -> Result<f64> {
        self.psi_o(omega, tau)
    }

    fn breakpoints(&self, omega: u64) -> Result<Vec<f64>> {
        let t = self.thresholds(omega)?;
        Ok(interior_sorted(
            [t.below_zero, t.below_one, self.o, t.above_one, t.above_zero],
            0.0,
            f64::INFINITY,
        ))
    }

    fn parameter_range(&self) -> (f64, f64) {
        (0.0, self.tau_max)
    }

    fn label(&self) -> String {
        format!("proposed(o={})", self.o)
    }
}

/// Coverage of the proposed membership at `τ`, summed over the truncated
/// support.
pub fn coverage(tau: f64, family: &PoissonFamily) -> Result<f64> {
    family::coverage(family, tau)
}

/// Crisp score interval `ω + z²/2 ± z √(ω + z²/4)`, lower end clipped at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonScore {
    gamma: f64,
    z: f64,
    truncation_mass: f64,
    tau_max: f64,
}

impl PoissonScore {
    pub fn new(gamma: f64, tau_max: f64) -> Result<Self> {
        check_level(gamma)?;
        check_rate(tau_max)?;
        Ok(PoissonScore {
            gamma,
            z: normal_quantile(0.5 * (1.0 + gamma))?,
            truncation_mass: DEFAULT_TRUNCATION_MASS,
            tau_max,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn interval(&self, omega: u64) -> (f64, f64) {
        let z2 = self.z * self.z;
        let center = omega as f64 + 0.5 * z2;
        let half = self.z * (omega as f64 + 0.25 * z2).sqrt();
        ((center - half).max(0.0), center + half)
    }

    pub fn membership(&self, omega: u64, tau: f64) -> f64 {
        let (lo, hi) = self.interval(omega);
        if tau >= lo && tau <= hi {
            1.0
        } else {
            0.0
        }
    }
}

impl DiscreteFamily for PoissonScore {
    fn pmf(&self, omega: u64, theta: f64) -> Result<f64> {
        pois_pmf(omega, theta)
    }

    fn support(&self, theta: f64) -> Result<RangeInclusive<u64>> {
        Ok(0..=support_upper(theta, self.truncation_mass)?)
    }

    fn membership(&self, omega: u64, tau: f64) -> Result<f64> {
        Ok(PoissonScore::membership(self, omega, tau))
    }

    fn breakpoints(&self, omega: u64) -> Result<Vec<f64>> {
        let (lo, hi) = self.interval(omega);
        Ok(interior_sorted([lo, hi], 0.0, f64::INFINITY))
    }

    fn parameter_range(&self) -> (f64, f64) {
        (0.0, self.tau_max)
    }

    fn label(&self) -> String {
        "score".into()
    }
}
