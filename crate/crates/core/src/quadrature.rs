//! Numerical integration on panels with known breakpoints.
//!
//! [`integrate`] runs adaptive 7/15-point Gauss–Kronrod on every panel
//! between consecutive breakpoints, so kinks and jumps of the integrand
//! are never straddled. [`gauss_legendre`] provides fixed rules for
//! composite integration of smooth panels.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Absolute error floor per unit of panel width.
const ABS_FLOOR: f64 = 1e-14;

/// One Gauss–Kronrod 7/15 evaluation: (Kronrod estimate, |K − G|).
pub fn gauss_kronrod_15(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &wk)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += wk * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// Integrates `f` over `[points[0], points[last]]`, splitting at every
/// interior point. Each panel is refined by bisection until the
/// Kronrod–Gauss difference is below `rel_tol · |I|` (or a tiny absolute
/// floor proportional to the panel width).
pub fn integrate(
    mut f: impl FnMut(f64) -> Result<f64>,
    points: &[f64],
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::domain("integration needs at least two points"));
    }
    if points.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::domain("integration breakpoints must be nondecreasing"));
    }
    let mut total = 0.0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            total += adapt(&mut f, w[0], w[1], rel_tol, max_depth)?;
        }
    }
    Ok(total)
}

fn adapt(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64, rel_tol: f64, max_depth: u32) -> Result<f64> {
    // Explicit stack of (a, b, depth, estimate, error).
    let (k, e) = gauss_kronrod_15(f, a, b)?;
    let mut stack = vec![(a, b, 0u32, k, e)];
    let mut total = 0.0;
    while let Some((lo, hi, depth, k, e)) = stack.pop() {
        if e <= rel_tol * k.abs() || e <= ABS_FLOOR * (hi - lo) {
            total += k;
            continue;
        }
        if depth >= max_depth {
            return Err(Error::Quadrature {
                lower: lo,
                upper: hi,
                estimate: e,
            });
        }
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            // Panel collapsed to adjacent floats.
            total += k;
            continue;
        }
        let (kl, el) = gauss_kronrod_15(f, lo, mid)?;
        let (kr, er) = gauss_kronrod_15(f, mid, hi)?;
        stack.push((lo, mid, depth + 1, kl, el));
        stack.push((mid, hi, depth + 1, kr, er));
    }
    Ok(total)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre: every panel between consecutive `points` is
/// cut into pieces no wider than `max_width`, each integrated with the
/// given rule.
pub fn composite_gauss_legendre(
    mut f: impl FnMut(f64) -> f64,
    points: &[f64],
    rule: &(Vec<f64>, Vec<f64>),
    max_width: f64,
) -> f64 {
    let (nodes, weights) = rule;
    let mut total = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let pieces = ((b - a) / max_width).ceil().max(1.0) as usize;
        let h = (b - a) / pieces as f64;
        for p in 0..pieces {
            let lo = a + p as f64 * h;
            let center = lo + 0.5 * h;
            let half = 0.5 * h;
            let s: f64 = nodes.iter().zip(weights).map(|(x, w)| w * f(center + half * x)).sum();
            total += s * half;
        }
    }
    total
}
