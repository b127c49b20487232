//! Optimal membership for a pair of finite discrete measures.
//!
//! Given a coverage measure `μ`, a cost measure `ν` and a level `γ`, the
//! membership `ψ*` minimizes `Σ ψ ν` subject to `Σ ψ μ ≥ γ` over
//! `ψ ∈ [0, 1]^Ω`. It is built from the likelihood ratio `Y = dν/dμ`:
//! points with `Y` below the `γ`-quantile of `Y` under `μ` get 1, points
//! above it get 0, and the points exactly at the quantile share the mass
//! left over. Points that `μ` does not charge carry no coverage and get 0.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Masses must sum to one within this tolerance.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Relative tolerance under which two likelihood ratios are considered tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Largest support accepted by [`feasible_optimum_oracle`].
pub const ORACLE_MAX_SUPPORT: usize = 25;

/// Probability measure on a finite set of point identifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    support: Vec<u64>,
    mass: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(support: Vec<u64>, mass: Vec<f64>) -> Result<Self> {
        if support.len() != mass.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} support points but {} masses",
                support.len(),
                mass.len()
            )));
        }
        if support.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &id in &support {
            if !seen.insert(id) {
                return Err(Error::InvalidMeasure(format!("duplicate support point {id}")));
            }
        }
        if let Some(m) = mass.iter().find(|m| !(**m >= 0.0) || !m.is_finite()) {
            return Err(Error::InvalidMeasure(format!("mass {m} is not a finite nonnegative number")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMeasure(format!("masses sum to {total}, not 1")));
        }
        Ok(DiscreteMeasure { support, mass })
    }

    /// Measure on `0..mass.len()`.
    pub fn from_masses(mass: Vec<f64>) -> Result<Self> {
        let support = (0..mass.len() as u64).collect();
        DiscreteMeasure::new(support, mass)
    }

    /// Normalizes nonnegative weights into a measure on `0..weights.len()`.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        DiscreteMeasure::from_masses(weights.iter().map(|w| w / total).collect())
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Mass at `id`, zero off the support.
    pub fn mass_at(&self, id: u64) -> f64 {
        self.support
            .iter()
            .position(|&s| s == id)
            .map_or(0.0, |i| self.mass[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.support.iter().copied().zip(self.mass.iter().copied())
    }

    fn as_map(&self) -> BTreeMap<u64, f64> {
        self.iter().collect()
    }
}

/// Sorted union of two supports, with each measure's mass aligned to it.
fn align(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> (Vec<u64>, Vec<f64>, Vec<f64>) {
    let mu_map = mu.as_map();
    let nu_map = nu.as_map();
    let mut ids: Vec<u64> = mu_map.keys().chain(nu_map.keys()).copied().collect();
    ids.sort_unstable();
    ids.dedup();
    let m = ids.iter().map(|id| mu_map.get(id).copied().unwrap_or(0.0)).collect();
    let v = ids.iter().map(|id| nu_map.get(id).copied().unwrap_or(0.0)).collect();
    (ids, m, v)
}

/// Lebesgue decomposition of `ν` with respect to `μ` on a finite set.
#[derive(Debug, Clone, PartialEq)]
pub struct RadonNikodym {
    /// Union of both supports, ascending.
    pub support: Vec<u64>,
    /// `ν(i) / μ(i)` where `μ(i) > 0`, `None` elsewhere.
    pub density: Vec<Option<f64>>,
    /// Points charged by `ν` but not by `μ` (the singular part).
    pub singular: Vec<u64>,
}

pub fn radon_nikodym(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> RadonNikodym {
    let (support, m, v) = align(mu, nu);
    let density = m
        .iter()
        .zip(&v)
        .map(|(&mi, &vi)| (mi > 0.0).then(|| vi / mi))
        .collect();
    let singular = support
        .iter()
        .zip(m.iter().zip(&v))
        .filter(|(_, (&mi, &vi))| mi == 0.0 && vi > 0.0)
        .map(|(&id, _)| id)
        .collect();
    RadonNikodym {
        support,
        density,
        singular,
    }
}

/// Role of a point in the optimal membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Partition {
    /// Likelihood ratio below the quantile: ψ = 1.
    A,
    /// Likelihood ratio above the quantile: ψ = 0.
    B,
    /// Likelihood ratio at the quantile: ψ = the splitting constant.
    C,
    /// Not charged by μ: ψ = 0.
    D,
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Partition::A => "A",
            Partition::B => "B",
            Partition::C => "C",
            Partition::D => "D",
        };
        f.write_str(s)
    }
}

/// The optimal membership together with the partition that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiStar {
    pub support: Vec<u64>,
    pub psi: Vec<f64>,
    pub partition: Vec<Partition>,
    /// γ-quantile of the likelihood ratio under μ.
    pub q_gamma: f64,
    /// Membership value shared by the points of C.
    pub c_value: f64,
    pub gamma: f64,
}

impl PsiStar {
    pub fn value_at(&self, id: u64) -> Option<f64> {
        self.support.binary_search(&id).ok().map(|i| self.psi[i])
    }

    /// `Σ ψ m` for a measure on (a subset of) the same support.
    pub fn integral(&self, measure: &DiscreteMeasure) -> f64 {
        measure
            .iter()
            .map(|(id, m)| self.value_at(id).unwrap_or(0.0) * m)
            .sum()
    }

    /// Total `measure` mass of the points labelled `part`.
    pub fn part_mass(&self, part: Partition, measure: &DiscreteMeasure) -> f64 {
        self.support
            .iter()
            .zip(&self.partition)
            .filter(|(_, p)| **p == part)
            .map(|(&id, _)| measure.mass_at(id))
            .sum()
    }
}

fn check_level(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain(format!("confidence level must be in (0, 1), got {gamma}")));
    }
    Ok(())
}

pub(crate) fn ratios_tied(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs())
}

/// Builds the membership minimizing `Σ ψ ν` subject to `Σ ψ μ ≥ γ`.
pub fn construct_psi_star(mu: &DiscreteMeasure, nu: &DiscreteMeasure, gamma: f64) -> Result<PsiStar> {
    check_level(gamma)?;
    let (support, m, _) = align(mu, nu);
    let rn = radon_nikodym(mu, nu);

    // (ratio, id, index) for μ-charged points, ordered by (ratio, id).
    let mut charged: Vec<(f64, u64, usize)> = rn
        .density
        .iter()
        .enumerate()
        .filter_map(|(i, y)| y.map(|y| (y, support[i], i)))
        .collect();
    charged.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut groups: Vec<std::ops::Range<usize>> = Vec::new();
    let mut start = 0;
    for j in 1..=charged.len() {
        if j == charged.len() || !ratios_tied(charged[start].0, charged[j].0) {
            groups.push(start..j);
            start = j;
        }
    }

    let mut partition = vec![Partition::D; support.len()];
    let mut psi = vec![0.0; support.len()];
    let mut below = 0.0;
    let mut split: Option<(usize, f64, f64)> = None;
    for (g, range) in groups.iter().enumerate() {
        let gmass: f64 = charged[range.clone()].iter().map(|&(_, _, i)| m[i]).sum();
        if below + gmass >= gamma || g + 1 == groups.len() {
            let c = ((gamma - below) / gmass).clamp(0.0, 1.0);
            split = Some((g, charged[range.start].0, c));
            break;
        }
        below += gmass;
    }
    let (c_group, q_gamma, c_value) =
        split.ok_or_else(|| Error::InvalidMeasure("μ charges no point".into()))?;

    for (g, range) in groups.iter().enumerate() {
        let (label, value) = match g.cmp(&c_group) {
            Ordering::Less => (Partition::A, 1.0),
            Ordering::Equal => (Partition::C, c_value),
            Ordering::Greater => (Partition::B, 0.0),
        };
        for &(_, _, i) in &charged[range.clone()] {
            partition[i] = label;
            psi[i] = value;
        }
    }

    Ok(PsiStar {
        support,
        psi,
        partition,
        q_gamma,
        c_value,
        gamma,
    })
}

/// Minimum of `Σ ψ ν` over `ψ ∈ [0,1]^n` with `Σ ψ μ ≥ γ`, by filling
/// points in ascending `ν/μ` order with a fractional last point. Used as an
/// independent check on [`construct_psi_star`].
pub fn feasible_optimum_oracle(mu: &DiscreteMeasure, nu: &DiscreteMeasure, gamma: f64) -> Result<f64> {
    check_level(gamma)?;
    let (ids, m, v) = align(mu, nu);
    if ids.len() > ORACLE_MAX_SUPPORT {
        return Err(Error::Size(format!(
            "oracle accepts at most {ORACLE_MAX_SUPPORT} points, got {}",
            ids.len()
        )));
    }
    let mut order: Vec<usize> = (0..ids.len()).filter(|&i| m[i] > 0.0).collect();
    order.sort_by(|&i, &j| (v[i] / m[i]).total_cmp(&(v[j] / m[j])));
    let mut needed = gamma;
    let mut cost = 0.0;
    for i in order {
        if needed <= 0.0 {
            break;
        }
        let take = (needed / m[i]).min(1.0);
        cost += take * v[i];
        needed -= take * m[i];
    }
    Ok(cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform4() -> DiscreteMeasure {
        DiscreteMeasure::from_masses(vec![0.25; 4]).unwrap()
    }

    fn point_mass_at_first() -> DiscreteMeasure {
        DiscreteMeasure::from_masses(vec![1.0, 0.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn measure_validation() {
        assert!(DiscreteMeasure::new(vec![1, 2], vec![0.5]).is_err());
        assert!(DiscreteMeasure::new(vec![1, 1], vec![0.5, 0.5]).is_err());
        assert!(DiscreteMeasure::new(vec![1, 2], vec![0.6, 0.6]).is_err());
        assert!(DiscreteMeasure::new(vec![1, 2], vec![-0.5, 1.5]).is_err());
        assert!(DiscreteMeasure::new(vec![], vec![]).is_err());
        assert!(DiscreteMeasure::new(vec![3, 9], vec![0.5, 0.5]).is_ok());
    }

    #[test]
    fn identical_measures_give_unit_ratio() {
        let rn = radon_nikodym(&uniform4(), &uniform4());
        assert!(rn.density.iter().all(|y| *y == Some(1.0)));
        assert!(rn.singular.is_empty());
    }

    #[test]
    fn point_mass_ratio() {
        let rn = radon_nikodym(&uniform4(), &point_mass_at_first());
        let y: Vec<f64> = rn.density.iter().map(|y| y.unwrap()).collect();
        assert_eq!(y, vec![4.0, 0.0, 0.0, 0.0]);
        assert!(rn.singular.is_empty());
    }

    #[test]
    fn disjoint_supports_are_singular() {
        let mu = DiscreteMeasure::new(vec![1], vec![1.0]).unwrap();
        let nu = DiscreteMeasure::new(vec![2], vec![1.0]).unwrap();
        let rn = radon_nikodym(&mu, &nu);
        assert_eq!(rn.singular, vec![2]);
        let star = construct_psi_star(&mu, &nu, 0.7).unwrap();
        assert_eq!(star.value_at(2), Some(0.0));
        assert_eq!(star.partition[1], Partition::D);
        assert_eq!(star.value_at(1), Some(0.7));
    }

    #[test]
    fn identical_measures_split_evenly() {
        let star = construct_psi_star(&uniform4(), &uniform4(), 0.5).unwrap();
        assert!(star.psi.iter().all(|&p| (p - 0.5).abs() < 1e-15));
        assert!(star.partition.iter().all(|&p| p == Partition::C));
        assert_eq!(star.q_gamma, 1.0);
    }

    #[test]
    fn point_mass_alternative() {
        let star = construct_psi_star(&uniform4(), &point_mass_at_first(), 0.5).unwrap();
        let expected = [0.0, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
        for (p, e) in star.psi.iter().zip(expected) {
            assert!((p - e).abs() < 1e-15);
        }
        assert_eq!(star.integral(&point_mass_at_first()), 0.0);
        assert!((star.integral(&uniform4()) - 0.5).abs() < 1e-15);
        let oracle = feasible_optimum_oracle(&uniform4(), &point_mass_at_first(), 0.5).unwrap();
        assert_eq!(oracle, 0.0);
    }

    #[test]
    fn oracle_on_identical_measures_is_gamma() {
        for &g in &[0.1, 0.5, 0.95] {
            let v = feasible_optimum_oracle(&uniform4(), &uniform4(), g).unwrap();
            assert!((v - g).abs() < 1e-15);
        }
    }

    #[test]
    fn oracle_size_limit() {
        let big = DiscreteMeasure::from_masses(vec![1.0 / 30.0; 30]).unwrap();
        assert!(matches!(feasible_optimum_oracle(&big, &big, 0.5), Err(Error::Size(_))));
    }

    #[test]
    fn level_must_be_interior() {
        assert!(construct_psi_star(&uniform4(), &uniform4(), 1.0).is_err());
        assert!(construct_psi_star(&uniform4(), &uniform4(), 0.0).is_err());
    }
}
