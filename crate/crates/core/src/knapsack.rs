//! Fractional knapsack and its correspondence with the two-measure problem.
//!
//! Items are ranked by value per unit weight. Whole groups are packed while
//! they fit; the first group that does not fit is packed fractionally and
//! the rest are left out. Items with tied ratios always move together.
//!
//! Normalizing weights into `μ`, values into `ν` and setting
//! `γ = 1 − W / Σw` turns the same instance into the problem solved by
//! [`construct_psi_star`](crate::np::construct_psi_star); the optimal
//! selections are related by `x_i = 1 − ψ*_i`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::np::{construct_psi_star, ratios_tied, DiscreteMeasure, Partition, PsiStar};

/// Budget on `n · W` for the exact dynamic program.
pub const DP_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnapsackInstance {
    weights: Vec<f64>,
    values: Vec<f64>,
    capacity: f64,
}

impl KnapsackInstance {
    pub fn new(weights: Vec<f64>, values: Vec<f64>, capacity: f64) -> Result<Self> {
        if weights.len() != values.len() {
            return Err(Error::domain(format!(
                "{} weights but {} values",
                weights.len(),
                values.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::domain(format!("weights must be finite and > 0, got {w}")));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::domain(format!("values must be finite and >= 0, got {v}")));
        }
        if !(capacity >= 0.0) || !capacity.is_finite() {
            return Err(Error::domain(format!("capacity must be finite and >= 0, got {capacity}")));
        }
        Ok(KnapsackInstance {
            weights,
            values,
            capacity,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn total_value(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Fractional selection. Labels: `A` packed whole, `C` packed partially,
/// `B` left out.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnapsackSolution {
    pub x: Vec<f64>,
    pub total_value: f64,
    pub total_weight: f64,
    pub partition: Vec<Partition>,
}

/// Item indices grouped by tied value/weight ratio, best ratio first.
fn ratio_groups(instance: &KnapsackInstance) -> Vec<Vec<usize>> {
    let ratio = |i: usize| instance.values[i] / instance.weights[i];
    let mut order: Vec<usize> = (0..instance.len()).collect();
    order.sort_by(|&i, &j| ratio(j).total_cmp(&ratio(i)).then(i.cmp(&j)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some(g) if ratios_tied(ratio(g[0]), ratio(i)) => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

pub fn solve_fractional(instance: &KnapsackInstance) -> KnapsackSolution {
    let n = instance.len();
    let mut x = vec![0.0; n];
    let mut partition = vec![Partition::B; n];
    let mut packed = 0.0;
    for group in ratio_groups(instance) {
        let gw: f64 = group.iter().map(|&i| instance.weights[i]).sum();
        if packed + gw <= instance.capacity {
            for &i in &group {
                x[i] = 1.0;
                partition[i] = Partition::A;
            }
            packed += gw;
        } else {
            let frac = ((instance.capacity - packed) / gw).clamp(0.0, 1.0);
            if frac > 0.0 {
                for &i in &group {
                    x[i] = frac;
                    partition[i] = Partition::C;
                }
            }
            break;
        }
    }
    let total_weight = x.iter().zip(&instance.weights).map(|(x, w)| x * w).sum();
    let total_value = x.iter().zip(&instance.values).map(|(x, v)| x * v).sum();
    KnapsackSolution {
        x,
        total_value,
        total_weight,
        partition,
    }
}

/// Exact 0/1 optimum by dynamic programming over integer capacities.
/// Returns the chosen item indices (ascending) and their total value.
pub fn solve_01_dp(instance: &KnapsackInstance) -> Result<(Vec<usize>, f64)> {
    let integral = |v: f64| v.fract() == 0.0;
    if !instance.weights.iter().all(|&w| integral(w)) || !integral(instance.capacity) {
        return Err(Error::domain("dynamic program needs integer weights and capacity"));
    }
    let n = instance.len();
    let cap = instance.capacity as u64;
    if (n as u64).saturating_mul(cap + 1) > DP_BUDGET {
        return Err(Error::Size(format!(
            "n * (W + 1) = {} exceeds the budget of {DP_BUDGET}",
            (n as u64).saturating_mul(cap + 1)
        )));
    }
    let cap = cap as usize;
    let width = cap + 1;
    let mut best = vec![0.0f64; width];
    let mut take = vec![false; n * width];
    for (i, (&w, &v)) in instance.weights.iter().zip(&instance.values).enumerate() {
        let w = w as usize;
        if w > cap {
            continue;
        }
        for c in (w..=cap).rev() {
            let with = best[c - w] + v;
            if with > best[c] {
                best[c] = with;
                take[i * width + c] = true;
            }
        }
    }
    let mut chosen = Vec::new();
    let mut c = cap;
    for i in (0..n).rev() {
        if take[i * width + c] {
            chosen.push(i);
            c -= instance.weights[i] as usize;
        }
    }
    chosen.reverse();
    Ok((chosen, best[cap]))
}

/// The knapsack instance restated as a two-measure problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureProblem {
    pub mu: DiscreteMeasure,
    pub nu: DiscreteMeasure,
    pub gamma: f64,
}

/// `μ(i) = w_i / Σw`, `ν(i) = v_i / Σv`, `γ = 1 − W / Σw`.
pub fn to_measure_problem(instance: &KnapsackInstance) -> Result<MeasureProblem> {
    let total_w = instance.total_weight();
    if !(instance.capacity > 0.0 && instance.capacity < total_w) {
        return Err(Error::domain(format!(
            "capacity must lie strictly between 0 and the total weight {total_w}, got {}",
            instance.capacity
        )));
    }
    if !(instance.total_value() > 0.0) {
        return Err(Error::domain("values must not all be zero"));
    }
    Ok(MeasureProblem {
        mu: DiscreteMeasure::from_weights(&instance.weights)?,
        nu: DiscreteMeasure::from_weights(&instance.values)?,
        gamma: 1.0 - instance.capacity / total_w,
    })
}

/// Both routes to the same instance and their item-wise discrepancy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundTrip {
    pub problem: MeasureProblem,
    pub psi_star: PsiStar,
    pub solution: KnapsackSolution,
    /// `max_i |x_i − (1 − ψ*_i)|`.
    pub max_deviation: f64,
}

pub fn round_trip(instance: &KnapsackInstance) -> Result<RoundTrip> {
    let problem = to_measure_problem(instance)?;
    let psi_star = construct_psi_star(&problem.mu, &problem.nu, problem.gamma)?;
    let solution = solve_fractional(instance);
    let max_deviation = solution
        .x
        .iter()
        .enumerate()
        .map(|(i, x)| (x - (1.0 - psi_star.value_at(i as u64).unwrap_or(0.0))).abs())
        .fold(0.0, f64::max);
    Ok(RoundTrip {
        problem,
        psi_star,
        solution,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(w: &[f64], v: &[f64], cap: f64) -> KnapsackInstance {
        KnapsackInstance::new(w.to_vec(), v.to_vec(), cap).unwrap()
    }

    #[test]
    fn single_item_fits_exactly() {
        let s = solve_fractional(&inst(&[2.0], &[3.0], 2.0));
        assert_eq!(s.x, vec![1.0]);
        assert_eq!(s.total_value, 3.0);
        assert_eq!(solve_01_dp(&inst(&[2.0], &[3.0], 2.0)).unwrap(), (vec![0], 3.0));
    }

    #[test]
    fn dominant_ratio_wins() {
        let k = inst(&[1.0, 1.0], &[1.0, 2.0], 1.0);
        let s = solve_fractional(&k);
        assert_eq!(s.x, vec![0.0, 1.0]);
        assert_eq!(s.total_value, 2.0);
        assert_eq!(s.partition, vec![Partition::B, Partition::A]);
        assert_eq!(solve_01_dp(&k).unwrap().1, 2.0);
    }

    #[test]
    fn tied_group_is_split_evenly() {
        // Ratios 5/3, 1.5, 1.5: the tied pair shares the leftover capacity 1.
        let s = solve_fractional(&inst(&[3.0, 2.0, 2.0], &[5.0, 3.0, 3.0], 4.0));
        assert_eq!(s.x, vec![1.0, 0.25, 0.25]);
        assert!((s.total_value - 6.5).abs() < 1e-15);
        assert_eq!(s.partition, vec![Partition::A, Partition::C, Partition::C]);
    }

    #[test]
    fn slack_capacity_takes_everything() {
        let s = solve_fractional(&inst(&[1.0, 2.0], &[0.0, 1.0], 10.0));
        assert_eq!(s.x, vec![1.0, 1.0]);
        assert_eq!(s.total_weight, 3.0);
    }

    #[test]
    fn zero_value_items_stay_out_when_capacity_binds() {
        let s = solve_fractional(&inst(&[1.0, 1.0, 1.0], &[0.0, 2.0, 1.0], 2.0));
        assert_eq!(s.x, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn measure_mapping_for_two_items() {
        let k = inst(&[1.0, 1.0], &[1.0, 2.0], 1.0);
        let p = to_measure_problem(&k).unwrap();
        assert_eq!(p.gamma, 0.5);
        assert_eq!(p.mu.mass(), &[0.5, 0.5]);
        assert!((p.nu.mass()[0] - 1.0 / 3.0).abs() < 1e-15);
        let rt = round_trip(&k).unwrap();
        assert_eq!(rt.psi_star.psi, vec![1.0, 0.0]);
        assert_eq!(rt.max_deviation, 0.0);
    }

    #[test]
    fn symmetric_instance_round_trips() {
        let k = inst(&[1.0; 4], &[1.0; 4], 2.0);
        let rt = round_trip(&k).unwrap();
        assert!(rt.psi_star.psi.iter().all(|&p| (p - 0.5).abs() < 1e-15));
        assert!(rt.solution.x.iter().all(|&x| (x - 0.5).abs() < 1e-15));
    }

    #[test]
    fn mapping_rejects_degenerate_capacity() {
        assert!(to_measure_problem(&inst(&[1.0, 1.0], &[1.0, 1.0], 0.0)).is_err());
        assert!(to_measure_problem(&inst(&[1.0, 1.0], &[1.0, 1.0], 2.0)).is_err());
        assert!(to_measure_problem(&inst(&[1.0, 1.0], &[0.0, 0.0], 1.0)).is_err());
    }

    #[test]
    fn dp_input_checks() {
        assert!(matches!(solve_01_dp(&inst(&[1.5], &[1.0], 2.0)), Err(Error::Domain(_))));
        let big = inst(&[1.0; 11], &[1.0; 11], 1_000_000.0);
        assert!(matches!(solve_01_dp(&big), Err(Error::Size(_))));
    }

    #[test]
    fn instance_validation() {
        assert!(KnapsackInstance::new(vec![1.0], vec![], 1.0).is_err());
        assert!(KnapsackInstance::new(vec![0.0], vec![1.0], 1.0).is_err());
        assert!(KnapsackInstance::new(vec![1.0], vec![-1.0], 1.0).is_err());
        assert!(KnapsackInstance::new(vec![1.0], vec![1.0], -1.0).is_err());
    }
}
