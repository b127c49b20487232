use super::{solve_increasing, Tolerance, FPMIN};
use crate::error::{Error, Result};

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

fn check_gamma_args(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("incomplete gamma needs a > 0, got {a}")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(format!("incomplete gamma needs x >= 0, got {x}")));
    }
    Ok(())
}

fn gamma_prefactor(a: f64, x: f64) -> f64 {
    (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Series for P(a, x), accurate for x < a + 1.
fn lower_series(a: f64, x: f64, tol: &Tolerance) -> Result<f64> {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..tol.max_iter {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * f64::EPSILON {
            return Ok(sum * gamma_prefactor(a, x));
        }
    }
    Err(Error::Convergence {
        routine: "incomplete gamma series",
        iterations: tol.max_iter,
    })
}

/// Continued fraction for Q(a, x), accurate for x >= a + 1.
fn upper_fraction(a: f64, x: f64, tol: &Tolerance) -> Result<f64> {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=tol.max_iter {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            return Ok(gamma_prefactor(a, x) * h);
        }
    }
    Err(Error::Convergence {
        routine: "incomplete gamma continued fraction",
        iterations: tol.max_iter,
    })
}

pub(crate) fn reg_gamma_pair(a: f64, x: f64, tol: &Tolerance) -> Result<(f64, f64)> {
    check_gamma_args(a, x)?;
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    if x < a + 1.0 {
        let p = lower_series(a, x, tol)?;
        Ok((p, 1.0 - p))
    } else {
        let q = upper_fraction(a, x, tol)?;
        Ok((1.0 - q, q))
    }
}

/// Regularized lower incomplete gamma P(a, x).
pub fn reg_lower_gamma(a: f64, x: f64) -> Result<f64> {
    check_gamma_args(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        lower_series(a, x, &Tolerance::CDF)
    } else {
        Ok(1.0 - upper_fraction(a, x, &Tolerance::CDF)?)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 − P(a, x), computed
/// without cancellation in the upper tail.
pub fn reg_upper_gamma(a: f64, x: f64) -> Result<f64> {
    check_gamma_args(a, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < a + 1.0 {
        Ok(1.0 - lower_series(a, x, &Tolerance::CDF)?)
    } else {
        upper_fraction(a, x, &Tolerance::CDF)
    }
}

fn check_even_dof(k: u32) -> Result<()> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::domain(format!(
            "chi-square degrees of freedom must be even and >= 2, got {k}"
        )));
    }
    Ok(())
}

/// Chi-square CDF with `k` (even) degrees of freedom.
pub fn chisq_cdf(x: f64, k: u32) -> Result<f64> {
    check_even_dof(k)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    reg_lower_gamma(0.5 * k as f64, 0.5 * x)
}

/// Chi-square quantile χ²_{k,p}: the x with CDF(x) = p.
pub fn chisq_quantile(p: f64, k: u32) -> Result<f64> {
    chisq_quantile_with(p, k, &Tolerance::QUANTILE)
}

pub fn chisq_quantile_with(p: f64, k: u32, tol: &Tolerance) -> Result<f64> {
    check_even_dof(k)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("chi-square quantile needs p in (0, 1), got {p}")));
    }
    let a = 0.5 * k as f64;
    if k == 2 {
        // Exponential with mean 2.
        return Ok(-2.0 * (-p).ln_1p());
    }
    // Wilson–Hilferty start.
    let z = super::normal_quantile(p)?;
    let h = 2.0 / (9.0 * k as f64);
    let start = (k as f64 * (1.0 - h + z * h.sqrt()).powi(3)).max(1e-3);

    let mut hi = start.max(1.0);
    while reg_gamma_pair(a, 0.5 * hi, &Tolerance::CDF)?.0 < p {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Convergence {
                routine: "chi-square quantile bracketing",
                iterations: 2048,
            });
        }
    }
    let ln_norm = a * 2f64.ln() + ln_gamma(a);
    // Solve in whichever tail keeps f well conditioned.
    let upper_tail = p > 0.5;
    let q = 1.0 - p;
    solve_increasing(
        |x| {
            let (lower, upper) = reg_gamma_pair(a, 0.5 * x, &Tolerance::CDF)?;
            let f = if upper_tail { q - upper } else { lower - p };
            let density = if x > 0.0 {
                ((a - 1.0) * x.ln() - 0.5 * x - ln_norm).exp()
            } else {
                0.0
            };
            Ok((f, density))
        },
        0.0,
        hi,
        start,
        tol,
        "chi-square quantile",
    )
}
