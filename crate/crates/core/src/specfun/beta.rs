use super::{gamma::ln_gamma, solve_increasing, Tolerance, FPMIN};
use crate::error::{Error, Result};

/// ln B(a, b).
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

fn check_shapes(a: f64, b: f64) -> Result<()> {
    if !(a >= 0.0) || !(b >= 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "beta shape parameters must be finite and >= 0, got a = {a}, b = {b}"
        )));
    }
    if a == 0.0 && b == 0.0 {
        return Err(Error::domain("beta shape parameters cannot both be zero"));
    }
    Ok(())
}

/// Continued fraction for I(x, a, b) (modified Lentz), valid for
/// x < (a + 1) / (a + b + 2).
fn beta_fraction(x: f64, a: f64, b: f64, tol: &Tolerance) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=tol.max_iter {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= f64::EPSILON {
            let front = (a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b)).exp();
            return Ok(front * h / a);
        }
    }
    Err(Error::Convergence {
        routine: "incomplete beta continued fraction",
        iterations: tol.max_iter,
    })
}

/// Regularized incomplete beta function I(x, a, b).
///
/// A zero shape parameter is read as the limit of the beta family: `a = 0`
/// is a point mass at 0 (so `I = 1` everywhere) and `b = 0` a point mass at
/// 1 (so `I = 0` for `x < 1`).
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    reg_inc_beta_with(x, a, b, &Tolerance::CDF)
}

pub fn reg_inc_beta_with(x: f64, a: f64, b: f64, tol: &Tolerance) -> Result<f64> {
    check_shapes(a, b)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("incomplete beta needs x in [0, 1], got {x}")));
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    if b == 0.0 {
        return Ok(if x < 1.0 { 0.0 } else { 1.0 });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        beta_fraction(x, a, b, tol)
    } else {
        Ok(1.0 - beta_fraction(1.0 - x, b, a, tol)?)
    }
}

/// Beta(a, b) density at x.
pub fn beta_density(x: f64, a: f64, b: f64) -> f64 {
    if !(x > 0.0 && x < 1.0) {
        return 0.0;
    }
    ((a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_beta(a, b)).exp()
}

/// Inverse of [`reg_inc_beta`] in `x`: returns x with I(x, a, b) = p.
///
/// Conventions follow the zero-shape limits: `inv(p, 0, b) = 0` and
/// `inv(p, a, 0) = 1`.
pub fn inv_reg_inc_beta(p: f64, a: f64, b: f64) -> Result<f64> {
    inv_reg_inc_beta_with(p, a, b, &Tolerance::QUANTILE)
}

pub fn inv_reg_inc_beta_with(p: f64, a: f64, b: f64, tol: &Tolerance) -> Result<f64> {
    check_shapes(a, b)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("inverse incomplete beta needs p in [0, 1], got {p}")));
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    if b == 0.0 {
        return Ok(1.0);
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    let start = initial_guess(p, a, b);
    let lnb = ln_beta(a, b);
    solve_increasing(
        |x| {
            let f = reg_inc_beta(x, a, b)? - p;
            let density = if x > 0.0 && x < 1.0 {
                ((a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - lnb).exp()
            } else {
                f64::INFINITY
            };
            Ok((f, density))
        },
        0.0,
        1.0,
        start,
        tol,
        "inverse incomplete beta",
    )
}

/// Starting point for the inverse (normal approximation for a, b >= 1,
/// power-law tails otherwise).
fn initial_guess(p: f64, a: f64, b: f64) -> f64 {
    if a >= 1.0 && b >= 1.0 {
        let pp = if p < 0.5 { p } else { 1.0 - p };
        let t = (-2.0 * pp.ln()).sqrt();
        let mut x = (2.307_53 + t * 0.270_61) / (1.0 + t * (0.992_29 + t * 0.044_81)) - t;
        if p < 0.5 {
            x = -x;
        }
        let al = (x * x - 3.0) / 6.0;
        let h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
        let w = x * (al + h).sqrt() / h
            - (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
        a / (a + b * (2.0 * w).exp())
    } else {
        let lna = (a / (a + b)).ln();
        let lnb = (b / (a + b)).ln();
        let t = (a * lna).exp() / a;
        let u = (b * lnb).exp() / b;
        let w = t + u;
        if p < t / w {
            (a * w * p).powf(1.0 / a)
        } else {
            1.0 - (b * w * (1.0 - p)).powf(1.0 / b)
        }
    }
}
