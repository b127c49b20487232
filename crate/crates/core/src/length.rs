//! Expected length of a membership family and its lower bound.
//!
//! `EL(ψ, θ) = Σ_ω P(ω | θ) ∫ ψ(ω | τ) dτ`. The inner integral does not
//! depend on `θ`, so curves compute it once per outcome.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::DiscreteFamily;
use crate::quadrature::integrate;

pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_DEPTH: u32 = 40;

/// Integration range and accuracy for `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub lower: f64,
    pub upper: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl QuadratureSpec {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        Self::with_options(lower, upper, DEFAULT_REL_TOL, DEFAULT_MAX_DEPTH)
    }

    pub fn with_options(lower: f64, upper: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::domain(format!("integration range needs lower < upper, got [{lower}, {upper}]")));
        }
        if !(rel_tol > 0.0 && rel_tol <= 1e-4) {
            return Err(Error::domain(format!("rel_tol must be in (0, 1e-4], got {rel_tol}")));
        }
        if max_depth == 0 {
            return Err(Error::domain("max_depth must be positive"));
        }
        Ok(QuadratureSpec {
            lower,
            upper,
            rel_tol,
            max_depth,
        })
    }

    /// The family's own parameter range with default accuracy.
    pub fn for_family<F: DiscreteFamily + ?Sized>(family: &F) -> Result<Self> {
        let (lo, hi) = family.parameter_range();
        Self::new(lo, hi)
    }
}

/// Expected length of one method over a grid of `θ`, with the lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ELCurve {
    pub theta_grid: Vec<f64>,
    pub el: Vec<f64>,
    pub lower_bound: Vec<f64>,
    pub method_label: String,
}

impl ELCurve {
    pub fn new(theta_grid: Vec<f64>, el: Vec<f64>, lower_bound: Vec<f64>, method_label: String) -> Result<Self> {
        if el.len() != theta_grid.len() || lower_bound.len() != theta_grid.len() {
            return Err(Error::Size(format!(
                "curve lengths differ: {} thetas, {} values, {} bounds",
                theta_grid.len(),
                el.len(),
                lower_bound.len()
            )));
        }
        if el.iter().chain(&lower_bound).any(|v| !(*v >= -1e-12)) {
            return Err(Error::domain("expected lengths must be nonnegative"));
        }
        Ok(ELCurve {
            theta_grid,
            el,
            lower_bound,
            method_label,
        })
    }

    pub fn len(&self) -> usize {
        self.theta_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta_grid.is_empty()
    }

    /// Smallest `el − lower_bound` over the grid (`+∞` when empty).
    pub fn min_gap(&self) -> f64 {
        self.el
            .iter()
            .zip(&self.lower_bound)
            .map(|(e, l)| e - l)
            .fold(f64::INFINITY, f64::min)
    }
}

/// `∫ ψ(ω | τ) dτ` over the quadrature range, split at the family's breakpoints.
pub fn interval_mass<F: DiscreteFamily + ?Sized>(family: &F, omega: u64, quad: &QuadratureSpec) -> Result<f64> {
    let mut points = vec![quad.lower];
    points.extend(
        family
            .breakpoints(omega)?
            .into_iter()
            .filter(|&p| p > quad.lower && p < quad.upper),
    );
    points.push(quad.upper);
    integrate(|tau| family.membership(omega, tau), &points, quad.rel_tol, quad.max_depth)
}

fn expected_length_cached<F: DiscreteFamily + ?Sized>(
    family: &F,
    theta: f64,
    quad: &QuadratureSpec,
    cache: &mut HashMap<u64, f64>,
) -> Result<f64> {
    let mut total = 0.0;
    for omega in family.support(theta)? {
        let p = family.pmf(omega, theta)?;
        if p == 0.0 {
            continue;
        }
        let mass = match cache.get(&omega) {
            Some(&m) => m,
            None => {
                let m = interval_mass(family, omega, quad)?;
                cache.insert(omega, m);
                m
            }
        };
        total += p * mass;
    }
    Ok(total)
}

/// `Σ_ω P(ω | θ) · interval_mass(ω)` over the family's support at `θ`.
pub fn expected_length<F: DiscreteFamily + ?Sized>(family: &F, theta: f64, quad: &QuadratureSpec) -> Result<f64> {
    expected_length_cached(family, theta, quad, &mut HashMap::new())
}

/// Expected length at every `θ` in `thetas`, reusing interval masses.
pub fn el_values<F: DiscreteFamily + ?Sized>(family: &F, thetas: &[f64], quad: &QuadratureSpec) -> Result<Vec<f64>> {
    let mut cache = HashMap::new();
    thetas
        .iter()
        .map(|&t| expected_length_cached(family, t, quad, &mut cache))
        .collect()
}

/// Lower bound at every `θ`: the expected length at `θ` of the family
/// built by `make(θ)`, i.e. with reference point `o = θ`.
pub fn lower_bound_values<F, M>(make: M, thetas: &[f64], quad: &QuadratureSpec) -> Result<Vec<f64>>
where
    F: DiscreteFamily,
    M: Fn(f64) -> Result<F>,
{
    thetas.iter().map(|&t| expected_length(&make(t)?, t, quad)).collect()
}

/// Curve of `family` together with the lower bound from `make`.
pub fn el_curve<F, G, M>(family: &F, make: M, thetas: &[f64], quad: &QuadratureSpec) -> Result<ELCurve>
where
    F: DiscreteFamily + ?Sized,
    G: DiscreteFamily,
    M: Fn(f64) -> Result<G>,
{
    let el = el_values(family, thetas, quad)?;
    let lower = lower_bound_values(make, thetas, quad)?;
    ELCurve::new(thetas.to_vec(), el, lower, family.label())
}

/// Lower-bound curve on its own (`el` and `lower_bound` coincide).
pub fn lower_bound_curve<F, M>(make: M, thetas: &[f64], quad: &QuadratureSpec) -> Result<ELCurve>
where
    F: DiscreteFamily,
    M: Fn(f64) -> Result<F>,
{
    let lower = lower_bound_values(make, thetas, quad)?;
    ELCurve::new(thetas.to_vec(), lower.clone(), lower, "lower_bound".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::{AgrestiCoull, BinomialFamily};
    use std::ops::RangeInclusive;

    /// `ψ ≡ γ` on `[0, 1]` with a two-point model.
    struct Constant(f64);

    impl DiscreteFamily for Constant {
        fn pmf(&self, omega: u64, theta: f64) -> Result<f64> {
            Ok(if omega == 0 { 1.0 - theta } else { theta })
        }
        fn support(&self, _: f64) -> Result<RangeInclusive<u64>> {
            Ok(0..=1)
        }
        fn membership(&self, _: u64, _: f64) -> Result<f64> {
            Ok(self.0)
        }
        fn breakpoints(&self, _: u64) -> Result<Vec<f64>> {
            Ok(vec![])
        }
        fn parameter_range(&self) -> (f64, f64) {
            (0.0, 1.0)
        }
        fn label(&self) -> String {
            "constant".into()
        }
    }

    #[test]
    fn constant_membership() {
        let q = QuadratureSpec::new(0.0, 1.0).unwrap();
        let f = Constant(0.9);
        assert!((interval_mass(&f, 0, &q).unwrap() - 0.9).abs() < 1e-15);
        for &t in &[0.1, 0.5, 0.8] {
            assert!((expected_length(&f, t, &q).unwrap() - 0.9).abs() < 1e-15);
        }
    }

    #[test]
    fn crisp_interval_mass_is_its_width() {
        let ac = AgrestiCoull::new(10, 0.95).unwrap();
        let q = QuadratureSpec::for_family(&ac).unwrap();
        let (lo, hi) = ac.interval(5).unwrap();
        assert!((interval_mass(&ac, 5, &q).unwrap() - (hi - lo)).abs() < 1e-13);
    }

    #[test]
    fn tangency_and_dominance_on_a_coarse_grid() {
        let fam = BinomialFamily::new(10, 0.5, 0.95).unwrap();
        let q = QuadratureSpec::new(0.0, 1.0).unwrap();
        let thetas: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
        let curve = el_curve(&fam, |t| BinomialFamily::new(10, t, 0.95), &thetas, &q).unwrap();
        assert!(curve.min_gap() > -1e-9);
        let mid = thetas.iter().position(|&t| t == 0.5).unwrap();
        assert!((curve.el[mid] - curve.lower_bound[mid]).abs() < 1e-12);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(1.0, 0.0).is_err());
        assert!(QuadratureSpec::with_options(0.0, 1.0, 1e-3, 10).is_err());
        assert!(QuadratureSpec::with_options(0.0, 1.0, 1e-6, 0).is_err());
        assert!(ELCurve::new(vec![0.0], vec![], vec![], "x".into()).is_err());
    }
}
