use std::path::Path;

use fuzzyci_core::binomial::{AgrestiCoull, BinomialFamily};
use fuzzyci_core::knapsack::{round_trip, solve_01_dp, solve_fractional};
use fuzzyci_core::length::{el_curve, lower_bound_curve};
use fuzzyci_core::normal::{NormalFamily, NormalMethod};
use fuzzyci_core::poisson::{default_tau_max, PoissonFamily, PoissonScore};
use fuzzyci_core::verify::run_all;
use fuzzyci_core::{coverage, DiscreteFamily, ELCurve, Grid, KnapsackInstance, QuadratureSpec};

use crate::args::*;
use crate::error::{CliError, Result};
use crate::table::{emit, Cell, Table};

/// Reference point substituted for a Poisson `o = 0`, which lies outside
/// the parameter space.
pub const POISSON_ZERO_O: f64 = 1e-6;

/// Largest round-trip discrepancy accepted by `knapsack --mode roundtrip`.
pub const ROUND_TRIP_TOL: f64 = 1e-10;

/// Validated family parameters.
#[derive(Debug, Clone)]
enum Model {
    Binomial { n: u64, o: Option<f64> },
    Poisson { o: Option<f64>, tau_max: Option<f64> },
    Normal { o: Option<f64>, sigma: f64, n: u64, bounds: Option<(f64, f64)> },
}

#[derive(Debug, Clone)]
struct Spec {
    model: Model,
    method: Method,
    gamma: f64,
}

fn reject(flag: &str, given: bool, family: &str) -> Result<()> {
    if given {
        return Err(CliError::usage(format!("--{flag} does not apply to the {family} family")));
    }
    Ok(())
}

fn validate(args: &FamilyArgs, needs_o: bool) -> Result<Spec> {
    let f = args;
    if !(f.gamma > 0.0 && f.gamma < 1.0) {
        return Err(CliError::usage(format!("--gamma must lie in (0, 1), got {}", f.gamma)));
    }
    let model = match f.family {
        Family::Binomial => {
            reject("sigma", f.sigma.is_some(), "binomial")?;
            reject("a", f.a.is_some(), "binomial")?;
            reject("b", f.b.is_some(), "binomial")?;
            reject("tau-max", f.tau_max.is_some(), "binomial")?;
            let n = f.n.ok_or_else(|| CliError::usage("the binomial family needs --n"))?;
            if n == 0 {
                return Err(CliError::usage("--n must be at least 1"));
            }
            if !matches!(f.method, Method::Proposed | Method::AgrestiCoull) {
                return Err(CliError::usage("binomial methods are proposed and agresti_coull"));
            }
            Model::Binomial { n, o: f.o }
        }
        Family::Poisson => {
            reject("n", f.n.is_some(), "poisson")?;
            reject("sigma", f.sigma.is_some(), "poisson")?;
            reject("a", f.a.is_some(), "poisson")?;
            reject("b", f.b.is_some(), "poisson")?;
            if !matches!(f.method, Method::Proposed | Method::Score) {
                return Err(CliError::usage("poisson methods are proposed and score"));
            }
            Model::Poisson { o: f.o, tau_max: f.tau_max }
        }
        Family::Normal => {
            reject("tau-max", f.tau_max.is_some(), "normal")?;
            let bounds = match (f.a, f.b) {
                (Some(a), Some(b)) => Some((a, b)),
                (None, None) => None,
                _ => return Err(CliError::usage("give both --a and --b, or neither")),
            };
            if !matches!(f.method, Method::Proposed | Method::Standard | Method::TruncatedStandard) {
                return Err(CliError::usage("normal methods are proposed, standard and truncated_standard"));
            }
            if f.method == Method::TruncatedStandard && bounds.is_none() {
                return Err(CliError::usage("truncated_standard needs --a and --b"));
            }
            Model::Normal { o: f.o, sigma: f.sigma.unwrap_or(1.0), n: f.n.unwrap_or(1), bounds }
        }
    };
    if needs_o && f.method == Method::Proposed && f.o.is_none() {
        return Err(CliError::usage("the proposed method needs --o"));
    }
    Ok(Spec { model, method: f.method, gamma: f.gamma })
}

impl Spec {
    /// Membership family for the discrete models.
    fn discrete(&self, tau_max: f64) -> Result<Box<dyn DiscreteFamily>> {
        Ok(match (&self.model, self.method) {
            (Model::Binomial { n, o: Some(o) }, Method::Proposed) => Box::new(BinomialFamily::new(*n, *o, self.gamma)?),
            (Model::Binomial { n, .. }, _) => Box::new(AgrestiCoull::new(*n, self.gamma)?),
            (Model::Poisson { o: Some(o), .. }, Method::Proposed) => {
                Box::new(PoissonFamily::new(*o, self.gamma)?.with_tau_max(tau_max)?)
            }
            (Model::Poisson { .. }, _) => Box::new(PoissonScore::new(self.gamma, tau_max)?),
            (Model::Normal { .. }, _) => unreachable!("normal is not discrete"),
        })
    }

    /// Normal family; the plain standard method ignores the bounds.
    fn normal(&self) -> Result<(NormalFamily, NormalMethod)> {
        let Model::Normal { o, sigma, n, bounds } = self.model else {
            unreachable!("not a normal model")
        };
        let anchor = o.or(bounds.map(|(a, b)| 0.5 * (a + b))).unwrap_or(0.0);
        let fam = NormalFamily::new(anchor, self.gamma, sigma, n)?;
        let method = if self.method == Method::Proposed { NormalMethod::Proposed } else { NormalMethod::Standard };
        let fam = match bounds {
            Some((a, b)) if self.method != Method::Standard => fam.with_bounds(a, b)?,
            _ => fam,
        };
        Ok((fam, method))
    }

    fn poisson_tau_max(&self, largest_theta: f64) -> f64 {
        let Model::Poisson { o, tau_max } = self.model else {
            unreachable!("not a poisson model")
        };
        tau_max.unwrap_or_else(|| default_tau_max(o.unwrap_or(0.0).max(largest_theta)))
    }
}

pub fn membership(args: &MembershipArgs) -> Result<()> {
    let spec = validate(&args.family, true)?;
    let taus = args.tau_grid.points();
    let mut table = Table::new(&["tau", "omega", "psi"]);
    match spec.model {
        Model::Normal { .. } => {
            let xs = args
                .x_grid
                .ok_or_else(|| CliError::usage("the normal family needs --x-grid"))?
                .points();
            let (fam, method) = spec.normal()?;
            for &x in &xs {
                for &tau in &taus {
                    table.push(vec![Cell::Real(tau), Cell::Real(x), Cell::Real(fam.membership(method, x, tau))]);
                }
            }
        }
        _ => {
            if args.x_grid.is_some() {
                return Err(CliError::usage("--x-grid applies only to the normal family"));
            }
            let (omegas, tau_max) = match spec.model {
                Model::Binomial { n, .. } => (0..=n, 1.0),
                _ => {
                    let top = taus.iter().copied().fold(0.0, f64::max);
                    (0..=args.omega_max, spec.poisson_tau_max(top))
                }
            };
            let fam = spec.discrete(tau_max)?;
            for w in omegas {
                for &tau in &taus {
                    table.push(vec![Cell::Real(tau), Cell::Int(w), Cell::Real(fam.membership(w, tau)?)]);
                }
            }
        }
    }
    table.write(&args.output)
}

fn theta_grid(spec: &Spec, grid: Option<Grid>) -> Result<Vec<f64>> {
    let grid = match (grid, &spec.model) {
        (Some(g), _) => g,
        (None, Model::Binomial { .. }) => Grid::new(0.001, 0.999, 401)?,
        (None, Model::Poisson { .. }) => Grid::new(0.01, 20.0, 401)?,
        (None, Model::Normal { bounds: Some((a, b)), .. }) => Grid::new(*a, *b, 401)?,
        (None, Model::Normal { .. }) => return Err(CliError::usage("expected lengths need --a and --b")),
    };
    let thetas = grid.points();
    let inside = match spec.model {
        Model::Binomial { .. } => thetas.iter().all(|&t| t > 0.0 && t < 1.0),
        Model::Poisson { .. } => thetas.iter().all(|&t| t > 0.0),
        Model::Normal { .. } => true,
    };
    if !inside {
        return Err(CliError::usage("--theta-grid must lie inside the parameter space (binomial (0, 1), poisson (0, ∞))"));
    }
    Ok(thetas)
}

fn curve(spec: &Spec, thetas: &[f64], bound_only: bool) -> Result<(ELCurve, Option<&'static str>)> {
    let gamma = spec.gamma;
    let mut note = None;
    let curve = match spec.model {
        Model::Binomial { n, .. } => {
            let quad = QuadratureSpec::new(0.0, 1.0)?;
            let make = |t: f64| BinomialFamily::new(n, t, gamma);
            if bound_only {
                lower_bound_curve(make, thetas, &quad)?
            } else {
                el_curve(spec.discrete(1.0)?.as_ref(), make, thetas, &quad)?
            }
        }
        Model::Poisson { o, tau_max } => {
            let mut spec = spec.clone();
            if o == Some(0.0) {
                spec.model = Model::Poisson { o: Some(POISSON_ZERO_O), tau_max };
                note = Some("o = 0 lies outside the parameter space; curve uses o = 1e-6 as an approximation");
            }
            let top = thetas.iter().copied().fold(0.0, f64::max);
            let tau_max = spec.poisson_tau_max(top);
            let quad = QuadratureSpec::new(0.0, tau_max)?;
            let make = |t: f64| PoissonFamily::new(t, gamma)?.with_tau_max(tau_max);
            if bound_only {
                lower_bound_curve(make, thetas, &quad)?
            } else {
                el_curve(spec.discrete(tau_max)?.as_ref(), make, thetas, &quad)?
            }
        }
        Model::Normal { bounds, .. } => {
            if bounds.is_none() {
                return Err(CliError::usage("expected lengths need --a and --b"));
            }
            if spec.method == Method::Standard {
                return Err(CliError::usage("use truncated_standard for expected lengths on [a, b]"));
            }
            let (fam, method) = spec.normal()?;
            if bound_only {
                let lower = thetas.iter().map(|&t| fam.el_lower_bound(t)).collect::<fuzzyci_core::Result<Vec<_>>>()?;
                ELCurve::new(thetas.to_vec(), lower.clone(), lower, "lower_bound".into())?
            } else {
                let mut c = fam.el_curve(method, thetas)?;
                if method == NormalMethod::Standard {
                    c.method_label = "truncated_standard".into();
                }
                c
            }
        }
    };
    Ok((curve, note))
}

pub fn el_curve_cmd(args: &CurveArgs, bound_only: bool) -> Result<()> {
    let spec = validate(&args.family, !bound_only)?;
    let thetas = theta_grid(&spec, args.theta_grid)?;
    let (curve, note) = curve(&spec, &thetas, bound_only)?;
    let mut table = if bound_only { Table::new(&["theta", "lower_bound"]) } else { Table::new(&["theta", "el", "lower_bound"]) };
    for i in 0..curve.len() {
        let mut row = vec![Cell::Real(curve.theta_grid[i])];
        if !bound_only {
            row.push(Cell::Real(curve.el[i]));
        }
        row.push(Cell::Real(curve.lower_bound[i]));
        table.push(row);
    }
    let mut table = table.meta("label", Cell::Text(curve.method_label.clone()));
    if let Some(note) = note {
        table = table.meta("note", Cell::Text(note.into()));
    }
    table.write(&args.output)
}

pub fn coverage_cmd(args: &CoverageArgs) -> Result<()> {
    let spec = validate(&args.family, true)?;
    let taus = args.tau_grid.points();
    let mut table = Table::new(&["tau", "coverage"]);
    match spec.model {
        Model::Normal { .. } => {
            let (fam, method) = spec.normal()?;
            for &tau in &taus {
                let c = match method {
                    NormalMethod::Proposed => fam.coverage(tau),
                    NormalMethod::Standard => fam.coverage_standard(tau),
                };
                table.push(vec![Cell::Real(tau), Cell::Real(c)]);
            }
        }
        _ => {
            let top = taus.iter().copied().fold(0.0, f64::max);
            let tau_max = if matches!(spec.model, Model::Poisson { .. }) { spec.poisson_tau_max(top) } else { 1.0 };
            let fam = spec.discrete(tau_max)?;
            for &tau in &taus {
                table.push(vec![Cell::Real(tau), Cell::Real(coverage(fam.as_ref(), tau)?)]);
            }
        }
    }
    table.meta("gamma", Cell::Real(spec.gamma)).write(&args.output)
}

fn read_instance(path: &Path, capacity: f64) -> Result<KnapsackInstance> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let (mut weights, mut values) = (Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        if i == 0 && record.get(0).is_some_and(|s| s.eq_ignore_ascii_case("weight")) {
            continue;
        }
        let field = |k: usize| -> Result<f64> {
            let raw = record.get(k).unwrap_or("");
            raw.parse::<f64>()
                .map_err(|_| CliError::usage(format!("{} row {}: expected weight,value, got {:?}", path.display(), i + 1, raw)))
        };
        if record.len() != 2 {
            return Err(CliError::usage(format!("{} row {}: expected 2 fields, got {}", path.display(), i + 1, record.len())));
        }
        weights.push(field(0)?);
        values.push(field(1)?);
    }
    Ok(KnapsackInstance::new(weights, values, capacity)?)
}

pub fn knapsack(args: &KnapsackArgs) -> Result<()> {
    let inst = read_instance(&args.input, args.capacity)?;
    let (w, v) = (inst.weights(), inst.values());
    let table = match args.mode {
        KnapsackMode::Fractional => {
            let s = solve_fractional(&inst);
            let mut t = Table::new(&["item", "weight", "value", "x", "partition"]);
            for i in 0..inst.len() {
                t.push(vec![Cell::Int(i as u64), Cell::Real(w[i]), Cell::Real(v[i]), Cell::Real(s.x[i]), Cell::Text(s.partition[i].to_string())]);
            }
            t.meta("total_value", Cell::Real(s.total_value))
                .meta("total_weight", Cell::Real(s.total_weight))
                .meta("capacity", Cell::Real(inst.capacity()))
        }
        KnapsackMode::Dp => {
            let (chosen, value) = solve_01_dp(&inst)?;
            let mut t = Table::new(&["item", "weight", "value", "x"]);
            for i in 0..inst.len() {
                let x = if chosen.contains(&i) { 1 } else { 0 };
                t.push(vec![Cell::Int(i as u64), Cell::Real(w[i]), Cell::Real(v[i]), Cell::Int(x)]);
            }
            let weight: f64 = chosen.iter().map(|&i| w[i]).sum();
            t.meta("total_value", Cell::Real(value))
                .meta("total_weight", Cell::Real(weight))
                .meta("capacity", Cell::Real(inst.capacity()))
        }
        KnapsackMode::Roundtrip => {
            let rt = round_trip(&inst)?;
            let (mu, nu) = (rt.problem.mu.mass(), rt.problem.nu.mass());
            let mut t = Table::new(&["item", "weight", "value", "mu", "nu", "psi_star", "x", "one_minus_psi_star"]);
            for i in 0..inst.len() {
                let psi = rt.psi_star.psi[i];
                t.push(vec![
                    Cell::Int(i as u64),
                    Cell::Real(w[i]),
                    Cell::Real(v[i]),
                    Cell::Real(mu[i]),
                    Cell::Real(nu[i]),
                    Cell::Real(psi),
                    Cell::Real(rt.solution.x[i]),
                    Cell::Real(1.0 - psi),
                ]);
            }
            let t = t
                .meta("gamma", Cell::Real(rt.problem.gamma))
                .meta("total_value", Cell::Real(rt.solution.total_value))
                .meta("max_deviation", Cell::Real(rt.max_deviation));
            if rt.max_deviation > ROUND_TRIP_TOL {
                t.write(&args.output)?;
                return Err(CliError::Check(format!(
                    "round trip failed: max |x - (1 - psi*)| = {:e} exceeds {ROUND_TRIP_TOL:e}",
                    rt.max_deviation
                )));
            }
            t
        }
    };
    table.write(&args.output)
}

pub fn self_test(args: &SelfTestArgs) -> Result<()> {
    let reports = run_all(args.seed);
    emit(&args.output, |w, format| {
        match format {
            Format::Csv => {
                for r in &reports {
                    writeln!(w, "{r}")?;
                }
            }
            Format::Json => {
                serde_json::to_writer(&mut *w, &reports)?;
                writeln!(w)?;
            }
        }
        Ok(())
    })?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(CliError::Check(format!("{failed} of {} criteria failed", reports.len())));
    }
    Ok(())
}
