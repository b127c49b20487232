use fuzzyci_core::knapsack::{round_trip, solve_01_dp, solve_fractional, to_measure_problem};
use fuzzyci_core::np::{feasible_optimum_oracle, radon_nikodym};
use fuzzyci_core::{construct_psi_star, DiscreteMeasure, KnapsackInstance, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform4() -> DiscreteMeasure {
    DiscreteMeasure::new(vec![1, 2, 3, 4], vec![0.25; 4]).unwrap()
}

fn point_at_1() -> DiscreteMeasure {
    DiscreteMeasure::new(vec![1], vec![1.0]).unwrap()
}

#[test]
fn radon_nikodym_examples() {
    let rn = radon_nikodym(&uniform4(), &uniform4());
    assert!(rn.density.iter().all(|y| *y == Some(1.0)));
    assert!(rn.singular.is_empty());

    let rn = radon_nikodym(&uniform4(), &point_at_1());
    let y: Vec<f64> = rn.density.iter().map(|y| y.unwrap()).collect();
    assert_eq!(y, vec![4.0, 0.0, 0.0, 0.0]);

    let rn = radon_nikodym(&point_at_1(), &DiscreteMeasure::new(vec![2], vec![1.0]).unwrap());
    assert_eq!(rn.singular, vec![2]);
}

#[test]
fn psi_star_examples() {
    let psi = construct_psi_star(&uniform4(), &uniform4(), 0.5).unwrap();
    assert!(psi.psi.iter().all(|&p| (p - 0.5).abs() < 1e-15));
    assert!(psi.partition.iter().all(|&p| p == Partition::C));

    let psi = construct_psi_star(&uniform4(), &point_at_1(), 0.5).unwrap();
    let expected = [0.0, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
    for (got, want) in psi.psi.iter().zip(expected) {
        assert!((got - want).abs() < 1e-15);
    }
    assert_eq!(psi.integral(&point_at_1()), 0.0);
    assert_eq!(feasible_optimum_oracle(&uniform4(), &point_at_1(), 0.5).unwrap(), 0.0);

    let nu = DiscreteMeasure::new(vec![1, 5], vec![0.5, 0.5]).unwrap();
    let psi = construct_psi_star(&uniform4(), &nu, 0.3).unwrap();
    assert_eq!(psi.value_at(5), Some(0.0));
    assert_eq!(psi.partition[psi.support.iter().position(|&s| s == 5).unwrap()], Partition::D);
}

#[test]
fn oracle_for_identical_measures_is_gamma() {
    let mu = DiscreteMeasure::from_weights(&[1.0, 3.0, 2.0]).unwrap();
    for gamma in [0.1, 0.5, 0.93] {
        assert!((feasible_optimum_oracle(&mu, &mu, gamma).unwrap() - gamma).abs() < 1e-15);
    }
}

#[test]
fn random_ten_point_instances_match_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let w: Vec<f64> = (0..10).map(|_| rng.gen_range(0.0..1.0)).collect();
        let v: Vec<f64> = (0..10).map(|_| rng.gen_range(0.0..1.0)).collect();
        let (mu, nu) = (DiscreteMeasure::from_weights(&w).unwrap(), DiscreteMeasure::from_weights(&v).unwrap());
        let gamma = rng.gen_range(0.05..0.95);
        let psi = construct_psi_star(&mu, &nu, gamma).unwrap();
        let oracle = feasible_optimum_oracle(&mu, &nu, gamma).unwrap();
        assert!((psi.integral(&nu) - oracle).abs() < 1e-12);
        assert!((psi.integral(&mu) - gamma).abs() < 1e-12);
    }
}

#[test]
fn measure_and_gamma_validation() {
    assert!(DiscreteMeasure::new(vec![0, 1], vec![0.5, 0.6]).is_err());
    assert!(DiscreteMeasure::new(vec![0], vec![-1.0]).is_err());
    assert!(DiscreteMeasure::from_weights(&[0.0, 0.0]).is_err());
    assert!(construct_psi_star(&uniform4(), &uniform4(), 1.0).is_err());
    assert!(construct_psi_star(&uniform4(), &uniform4(), 0.0).is_err());
}

/// Best 0/1 value by enumerating all subsets.
fn brute_force_01(w: &[f64], v: &[f64], cap: f64) -> f64 {
    let n = w.len();
    (0u32..1 << n)
        .filter_map(|mask| {
            let (mut tw, mut tv) = (0.0, 0.0);
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    tw += w[i];
                    tv += v[i];
                }
            }
            (tw <= cap).then_some(tv)
        })
        .fold(0.0, f64::max)
}

/// LP optimum by enumerating vertices: a whole subset plus at most one
/// partially packed item.
fn lp_vertices(w: &[f64], v: &[f64], cap: f64) -> f64 {
    let n = w.len();
    let mut best: f64 = 0.0;
    for mask in 0u32..1 << n {
        let (mut tw, mut tv) = (0.0, 0.0);
        for i in 0..n {
            if mask & (1 << i) != 0 {
                tw += w[i];
                tv += v[i];
            }
        }
        if tw > cap {
            continue;
        }
        best = best.max(tv);
        for j in (0..n).filter(|j| mask & (1 << j) == 0) {
            let frac = ((cap - tw) / w[j]).min(1.0);
            best = best.max(tv + frac * v[j]);
        }
    }
    best
}

#[test]
fn knapsack_examples() {
    let one = KnapsackInstance::new(vec![2.0], vec![3.0], 2.0).unwrap();
    let s = solve_fractional(&one);
    assert_eq!(s.x, vec![1.0]);
    assert_eq!(s.total_value, 3.0);
    assert_eq!(solve_01_dp(&one).unwrap(), (vec![0], 3.0));

    let two = KnapsackInstance::new(vec![1.0, 1.0], vec![1.0, 2.0], 1.0).unwrap();
    let s = solve_fractional(&two);
    assert_eq!(s.x, vec![0.0, 1.0]);
    assert_eq!(s.total_value, 2.0);
    assert_eq!(solve_01_dp(&two).unwrap().1, 2.0);

    let p = to_measure_problem(&two).unwrap();
    assert_eq!(p.gamma, 0.5);
    assert_eq!(p.mu.mass(), &[0.5, 0.5]);
    assert!((p.nu.mass()[0] - 1.0 / 3.0).abs() < 1e-15);
    let rt = round_trip(&two).unwrap();
    assert_eq!(rt.psi_star.psi, vec![1.0, 0.0]);
    assert_eq!(rt.max_deviation, 0.0);

    let three = KnapsackInstance::new(vec![3.0, 2.0, 2.0], vec![5.0, 3.0, 3.0], 4.0).unwrap();
    let s = solve_fractional(&three);
    assert!((s.total_value - lp_vertices(&[3.0, 2.0, 2.0], &[5.0, 3.0, 3.0], 4.0)).abs() < 1e-12);
    assert_eq!(s.partition, vec![Partition::A, Partition::C, Partition::C]);
}

#[test]
fn symmetric_instance_splits_evenly() {
    let inst = KnapsackInstance::new(vec![2.0; 6], vec![5.0; 6], 6.0).unwrap();
    let rt = round_trip(&inst).unwrap();
    assert!(rt.solution.x.iter().all(|&x| (x - 0.5).abs() < 1e-15));
    assert!(rt.psi_star.psi.iter().all(|&p| (p - 0.5).abs() < 1e-15));
}

#[test]
fn dp_and_fractional_against_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let n = 12;
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=15u32) as f64).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
        let cap = rng.gen_range(1..(w.iter().sum::<f64>() as u32)) as f64;
        let inst = KnapsackInstance::new(w.clone(), v.clone(), cap).unwrap();
        let (chosen, value) = solve_01_dp(&inst).unwrap();
        assert!((value - brute_force_01(&w, &v, cap)).abs() < 1e-9);
        assert!(chosen.iter().map(|&i| w[i]).sum::<f64>() <= cap);
        let s = solve_fractional(&inst);
        assert!((s.total_value - lp_vertices(&w, &v, cap)).abs() < 1e-9);
        assert!((s.total_weight - cap).abs() < 1e-12 * cap);
    }
}

#[test]
fn random_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let n = 10;
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..5.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
        let cap = rng.gen_range(0.05..0.95) * w.iter().sum::<f64>();
        let rt = round_trip(&KnapsackInstance::new(w, v, cap).unwrap()).unwrap();
        assert!(rt.max_deviation < 1e-10);
    }
}

#[test]
fn knapsack_validation() {
    assert!(KnapsackInstance::new(vec![1.0], vec![1.0, 2.0], 1.0).is_err());
    assert!(KnapsackInstance::new(vec![0.0], vec![1.0], 1.0).is_err());
    assert!(KnapsackInstance::new(vec![1.0], vec![-1.0], 1.0).is_err());
    let full = KnapsackInstance::new(vec![1.0, 2.0], vec![1.0, 1.0], 3.0).unwrap();
    assert!(to_measure_problem(&full).is_err());
    let frac = KnapsackInstance::new(vec![1.5, 2.0], vec![1.0, 1.0], 2.0).unwrap();
    assert!(solve_01_dp(&frac).is_err());
    let huge = KnapsackInstance::new(vec![1.0; 20], vec![1.0; 20], 1e7).unwrap();
    assert!(solve_01_dp(&huge).is_err());
}
