//! Special-function kernels: incomplete beta and gamma, chi-square, normal,
//! binomial and Poisson distributions.
//!
//! Everything here is pure and reentrant. Iterative routines take a
//! [`Tolerance`] and report non-convergence as [`Error::Convergence`]
//! instead of returning an unconverged value.

mod beta;
mod discrete;
mod gamma;
mod normal;

pub use beta::{beta_density, inv_reg_inc_beta, inv_reg_inc_beta_with, ln_beta, reg_inc_beta, reg_inc_beta_with};
pub use discrete::{binom_cdf, binom_ln_pmf, binom_pmf, binom_sf, pois_cdf, pois_ln_pmf, pois_pmf, pois_sf};
pub use gamma::{chisq_cdf, chisq_quantile, chisq_quantile_with, ln_gamma, reg_lower_gamma, reg_upper_gamma};
pub use normal::{normal_cdf, normal_pdf, normal_quantile, normal_sf};

use crate::error::Error;

/// Stopping rule for iterative special-function solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Bound on the residual `|F(x) − p|` of an inverse. Forward
    /// evaluations always run to machine precision.
    pub abs_tol: f64,
    pub max_iter: usize,
}

impl Tolerance {
    /// Default for CDF evaluations.
    pub const CDF: Tolerance = Tolerance {
        abs_tol: 1e-12,
        max_iter: 10_000,
    };

    /// Default for quantile (inverse) evaluations.
    pub const QUANTILE: Tolerance = Tolerance {
        abs_tol: 1e-10,
        max_iter: 400,
    };

    pub fn new(abs_tol: f64, max_iter: usize) -> crate::Result<Self> {
        if !(abs_tol > 0.0) || max_iter == 0 {
            return Err(Error::domain(format!(
                "tolerance needs abs_tol > 0 and max_iter > 0, got {abs_tol}, {max_iter}"
            )));
        }
        Ok(Tolerance { abs_tol, max_iter })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::CDF
    }
}

/// Smallest magnitude kept in modified Lentz recurrences.
pub(crate) const FPMIN: f64 = 1e-300;

/// Hybrid Newton/bisection root finder for a monotone increasing function
/// on `[lo, hi]`, with `f(lo) <= 0 <= f(hi)`.
///
/// `eval` returns `(f(x), f'(x))`. A Newton step is taken when it lands
/// strictly inside the current bracket, otherwise the bracket is bisected.
/// Iteration stops once `|f|` is well inside `tol.abs_tol`, the bracket has
/// collapsed to a few ulps, or the Newton step drops below rounding.
pub(crate) fn solve_increasing(
    mut eval: impl FnMut(f64) -> crate::Result<(f64, f64)>,
    mut lo: f64,
    mut hi: f64,
    start: f64,
    tol: &Tolerance,
    routine: &'static str,
) -> crate::Result<f64> {
    let mut x = if start > lo && start < hi { start } else { 0.5 * (lo + hi) };
    for _ in 0..tol.max_iter {
        let (f, df) = eval(x)?;
        if f.abs() <= 1e-3 * tol.abs_tol {
            return Ok(x);
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(f64::MIN_POSITIVE) {
            return Ok(0.5 * (lo + hi));
        }
        let usable = df > 0.0 && df.is_finite();
        if usable && (f / df).abs() <= 2.0 * f64::EPSILON * x.abs() {
            // Newton step below rounding: x is as good as it gets.
            return Ok(x);
        }
        let newton = x - f / df;
        x = if usable && newton.is_finite() && newton > lo && newton < hi {
            newton
        } else if lo > 0.0 && hi / lo > 16.0 {
            // Geometric bisection for brackets spanning many decades.
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::Convergence {
        routine,
        iterations: tol.max_iter,
    })
}
