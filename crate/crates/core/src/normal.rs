//! Crisp memberships for a normal mean with known `σ`.
//!
//! Everything is expressed through the sample mean `x ~ N(θ, s²)` with
//! `s = σ/√n`. The proposed membership is the indicator of
//! `τ ∈ (min(o, x − Z_γ s), max(o, x + Z_γ s))`; the comparison is the usual
//! two-sided interval `x ± Z_{(1+γ)/2} s`. With a bounded parameter space
//! `[a, b]` both are intersected with it, and the expected lengths have the
//! closed forms below.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::length::ELCurve;
use crate::quadrature::{composite_gauss_legendre, gauss_legendre};
use crate::specfun::{normal_cdf, normal_pdf, normal_quantile, normal_sf};

/// Which normal membership to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalMethod {
    /// `ψ_o`, anchored at the reference point.
    Proposed,
    /// `ψ^N`, or `ψ^NL` when the parameter space is bounded.
    Standard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalFamily {
    o: f64,
    gamma: f64,
    sigma: f64,
    n: u64,
    bounds: Option<(f64, f64)>,
    /// `Z_γ`
    z_one: f64,
    /// `Z_{(1+γ)/2}`
    z_two: f64,
}

impl NormalFamily {
    pub fn new(o: f64, gamma: f64, sigma: f64, n: u64) -> Result<Self> {
        if !o.is_finite() {
            return Err(Error::domain(format!("reference point must be finite, got {o}")));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::domain(format!("confidence level must be in (0, 1), got {gamma}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
        }
        if n == 0 {
            return Err(Error::domain("sample size must be at least 1"));
        }
        Ok(NormalFamily {
            o,
            gamma,
            sigma,
            n,
            bounds: None,
            z_one: normal_quantile(gamma)?,
            z_two: normal_quantile(0.5 * (1.0 + gamma))?,
        })
    }

    /// Restricts the parameter space to `[a, b]`, which must contain `o`.
    pub fn with_bounds(mut self, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::domain(format!("bounds need a < b, got [{a}, {b}]")));
        }
        if !(self.o >= a && self.o <= b) {
            return Err(Error::domain(format!("reference point {} outside [{a}, {b}]", self.o)));
        }
        self.bounds = Some((a, b));
        Ok(self)
    }

    /// Same family with a different reference point (bounds kept).
    pub fn with_o(&self, o: f64) -> Result<Self> {
        let fam = NormalFamily {
            o,
            ..self.clone()
        };
        match self.bounds {
            Some((a, b)) => NormalFamily { bounds: None, ..fam }.with_bounds(a, b),
            None => Ok(fam),
        }
    }

    pub fn o(&self) -> f64 {
        self.o
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }

    /// Standard error `σ/√n`.
    pub fn std_error(&self) -> f64 {
        self.sigma / (self.n as f64).sqrt()
    }

    fn clip(&self, lo: f64, hi: f64) -> (f64, f64) {
        match self.bounds {
            Some((a, b)) => (lo.max(a), hi.min(b)),
            None => (lo, hi),
        }
    }

    fn in_bounds(&self, tau: f64) -> bool {
        self.bounds.map_or(true, |(a, b)| tau >= a && tau <= b)
    }

    /// Endpoints of the open interval where `ψ_o(x, ·) = 1`.
    pub fn interval_o(&self, x: f64) -> (f64, f64) {
        let h = self.z_one * self.std_error();
        self.clip(self.o.min(x - h), self.o.max(x + h))
    }

    /// Endpoints of the closed interval where `ψ^N(x, ·) = 1` (or `ψ^NL`).
    pub fn interval_standard(&self, x: f64) -> (f64, f64) {
        let h = self.z_two * self.std_error();
        self.clip(x - h, x + h)
    }

    pub fn psi_o(&self, x: f64, tau: f64) -> f64 {
        let (lo, hi) = self.interval_o(x);
        if tau > lo && tau < hi && self.in_bounds(tau) {
            1.0
        } else {
            0.0
        }
    }

    pub fn psi_standard(&self, x: f64, tau: f64) -> f64 {
        let (lo, hi) = self.interval_standard(x);
        if tau >= lo && tau <= hi {
            1.0
        } else {
            0.0
        }
    }

    pub fn membership(&self, method: NormalMethod, x: f64, tau: f64) -> f64 {
        match method {
            NormalMethod::Proposed => self.psi_o(x, tau),
            NormalMethod::Standard => self.psi_standard(x, tau),
        }
    }

    /// Lebesgue measure of `{τ : ψ(x, τ) = 1}`.
    pub fn interval_length(&self, method: NormalMethod, x: f64) -> f64 {
        let (lo, hi) = match method {
            NormalMethod::Proposed => self.interval_o(x),
            NormalMethod::Standard => self.interval_standard(x),
        };
        (hi - lo).max(0.0)
    }

    /// `P_τ(ψ_o = 1)`. Equal to `γ` for every `τ ≠ o` in the parameter space.
    pub fn coverage(&self, tau: f64) -> f64 {
        if !self.in_bounds(tau) || tau == self.o {
            return 0.0;
        }
        let s = self.std_error();
        // For τ < o the membership is 1 iff x < τ + Z s, for τ > o iff x > τ − Z s.
        if tau < self.o {
            normal_cdf((tau + self.z_one * s - tau) / s)
        } else {
            normal_sf((tau - self.z_one * s - tau) / s)
        }
    }

    /// `P_τ(ψ^N = 1)`.
    pub fn coverage_standard(&self, tau: f64) -> f64 {
        if !self.in_bounds(tau) {
            return 0.0;
        }
        let s = self.std_error();
        let h = self.z_two * s;
        normal_cdf((tau + h - tau) / s) - normal_cdf((tau - h - tau) / s)
    }

    fn require_bounds(&self) -> Result<(f64, f64)> {
        self.bounds
            .ok_or_else(|| Error::domain("closed-form expected length needs a bounded parameter space"))
    }

    /// Closed-form expected length of `ψ_o` on `[a, b]`.
    pub fn el_psi_o_closed(&self, theta: f64) -> Result<f64> {
        let (a, b) = self.require_bounds()?;
        let o = self.o;
        let s = self.std_error();
        let h = self.z_one * s;
        let u = |t: f64| (t - theta) / s;
        let phi = |t: f64| normal_cdf(u(t));
        let dens = |t: f64| s * normal_pdf(u(t));
        Ok((b - o) * normal_sf(u(b - h))
            + (o - a) * phi(a + h)
            + (theta - (o - h)) * (phi(b - h) - phi(o - h))
            + (dens(o - h) - dens(b - h))
            + (o + h - theta) * (phi(o + h) - phi(a + h))
            - (dens(a + h) - dens(o + h)))
    }

    /// Closed-form lower bound: the expected length of `ψ_θ` at `θ`.
    pub fn el_lower_bound(&self, theta: f64) -> Result<f64> {
        let (a, b) = self.require_bounds()?;
        let s = self.std_error();
        let z = self.z_one;
        let h = z * s;
        let u = |t: f64| (t - theta) / s;
        let phi = |t: f64| normal_cdf(u(t));
        let dens = |t: f64| s * normal_pdf(u(t));
        let peak = s * normal_pdf(z);
        Ok((b - theta) * normal_sf(u(b - h))
            + (theta - a) * phi(a + h)
            + h * (phi(b - h) - 1.0 + self.gamma)
            + (peak - dens(b - h))
            + h * (self.gamma - phi(a + h))
            - (dens(a + h) - peak))
    }

    /// True when `a + z s ≤ b − z s`, i.e. the interior fixed-width region
    /// of `ψ^NL` is nonempty. Equality is treated as the first case.
    pub fn nl_first_case(&self) -> Result<bool> {
        let (a, b) = self.require_bounds()?;
        let h = self.z_two * self.std_error();
        Ok(a + h <= b - h)
    }

    /// Expected length of `ψ^NL` when `a + z s ≤ b − z s`.
    pub fn el_psi_nl_case1(&self, theta: f64) -> Result<f64> {
        let (a, b) = self.require_bounds()?;
        let s = self.std_error();
        let z = self.z_two;
        let h = z * s;
        let (ua, ub) = ((a - theta) / s, (b - theta) / s);
        let dens = |t: f64| s * normal_pdf((t - theta) / s);
        Ok((theta - a + h) * (normal_cdf(ua + z) - normal_cdf(ua - z))
            + (dens(a - h) - dens(a + h))
            + 2.0 * h * (normal_cdf(ub - z) - normal_cdf(ua + z))
            + (b + h - theta) * (normal_cdf(ub + z) - normal_cdf(ub - z))
            - (dens(b - h) - dens(b + h)))
    }

    /// Expected length of `ψ^NL` when `a + z s > b − z s`.
    pub fn el_psi_nl_case2(&self, theta: f64) -> Result<f64> {
        let (a, b) = self.require_bounds()?;
        let s = self.std_error();
        let z = self.z_two;
        let h = z * s;
        let (ua, ub) = ((a - theta) / s, (b - theta) / s);
        let dens = |t: f64| s * normal_pdf((t - theta) / s);
        Ok((theta - a + h) * (normal_cdf(ub - z) - normal_cdf(ua - z))
            + dens(a - h)
            - dens(b - h)
            + (b - a) * (normal_cdf(ua + z) - normal_cdf(ub - z))
            + (b + h - theta) * (normal_cdf(ub + z) - normal_cdf(ua + z))
            - dens(a + h)
            + dens(b + h))
    }

    /// Closed-form expected length of `ψ^NL`, choosing the case.
    pub fn el_psi_nl_closed(&self, theta: f64) -> Result<f64> {
        if self.nl_first_case()? {
            self.el_psi_nl_case1(theta)
        } else {
            self.el_psi_nl_case2(theta)
        }
    }

    pub fn el_closed(&self, method: NormalMethod, theta: f64) -> Result<f64> {
        match method {
            NormalMethod::Proposed => self.el_psi_o_closed(theta),
            NormalMethod::Standard => self.el_psi_nl_closed(theta),
        }
    }

    /// Expected length by composite Gauss–Legendre over `x ∈ θ ± 8s`, with
    /// the interval length evaluated from its endpoints. Panels are split
    /// where the length changes formula.
    pub fn el_quadrature(&self, method: NormalMethod, theta: f64) -> f64 {
        let s = self.std_error();
        let (lo, hi) = (theta - 8.0 * s, theta + 8.0 * s);
        let mut points = vec![lo, hi];
        let (h, anchors) = match method {
            NormalMethod::Proposed => (self.z_one * s, vec![self.o]),
            NormalMethod::Standard => (self.z_two * s, vec![]),
        };
        let mut edges = anchors;
        if let Some((a, b)) = self.bounds {
            edges.extend([a, b]);
        }
        for e in edges {
            points.extend([e - h, e + h]);
        }
        points.retain(|&p| p >= lo && p <= hi);
        points.sort_by(f64::total_cmp);
        let rule = gauss_legendre(20);
        composite_gauss_legendre(
            |x| normal_pdf((x - theta) / s) / s * self.interval_length(method, x),
            &points,
            &rule,
            0.25 * s,
        )
    }

    /// Expected-length curve of `method` over `thetas`, with the closed-form
    /// lower bound alongside.
    pub fn el_curve(&self, method: NormalMethod, thetas: &[f64]) -> Result<ELCurve> {
        let mut el = Vec::with_capacity(thetas.len());
        let mut lower = Vec::with_capacity(thetas.len());
        for &theta in thetas {
            el.push(self.el_closed(method, theta)?);
            lower.push(self.el_lower_bound(theta)?);
        }
        let label = match method {
            NormalMethod::Proposed => format!("proposed(o={})", self.o),
            NormalMethod::Standard => "standard".to_string(),
        };
        ELCurve::new(thetas.to_vec(), el, lower, label)
    }
}
