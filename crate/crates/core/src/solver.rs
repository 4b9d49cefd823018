//! Behavioral-risk minimization over the achievable region.
//!
//! The achievable region is `{(x, y) : lower_roc(x) <= y <= upper_roc(x)}`.
//! Because the risk splits as `g(x) + h(y)`, the inner problem at fixed `x`
//! is a one-dimensional minimization of `h` over an interval. Neither term is
//! assumed convex, so both levels use a grid scan followed by golden-section
//! refinement around the best grid point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::ObservationModel;
use crate::risk::{
    classify_costs, detection_component, false_alarm_component, risk_at, OperatingPoint,
    PerceivedCosts, Priors, Prop1Case,
};
use crate::rules::{Direction, RandomizedRule};
use crate::search::{argmin_first, refine_bracket, Minimum};
use crate::weighting::WeightFunction;

/// Slack for membership in the achievable region.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub priors: Priors,
    pub weight: WeightFunction,
    pub costs: PerceivedCosts,
    pub model: ObservationModel,
}

impl Problem {
    pub fn new(
        priors: Priors,
        weight: WeightFunction,
        costs: PerceivedCosts,
        model: ObservationModel,
    ) -> Result<Self> {
        let p = Problem {
            priors,
            weight,
            costs,
            model,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.priors.validate()?;
        self.weight.validate()?;
        self.costs.validate()?;
        self.model.validate()
    }

    pub fn false_alarm_component(&self, x: f64) -> f64 {
        false_alarm_component(&self.weight, &self.priors, &self.costs, x)
    }

    pub fn detection_component(&self, y: f64) -> f64 {
        detection_component(&self.weight, &self.priors, &self.costs, y)
    }

    pub fn risk_at(&self, point: &OperatingPoint) -> f64 {
        risk_at(&self.weight, &self.priors, &self.costs, point)
    }

    pub fn with_model(&self, model: ObservationModel) -> Result<Self> {
        Problem::new(self.priors, self.weight, self.costs, model)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Points in the uniform false-alarm grid.
    pub outer_grid: usize,
    /// Points in the uniform detection grid.
    pub inner_grid: usize,
    /// Final bracket width for golden-section refinement.
    pub tolerance: f64,
    /// Grid used for the weight-monotonicity check.
    pub monotone_grid: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            outer_grid: 2001,
            inner_grid: 2001,
            tolerance: 1e-9,
            monotone_grid: 10_000,
        }
    }
}

impl SolverOptions {
    pub fn with_grid(grid: usize) -> Self {
        SolverOptions {
            outer_grid: grid,
            inner_grid: grid,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.outer_grid < 3 {
            return Err(Error::validation(
                "solver.grid",
                "outer grid needs at least 3 points",
            ));
        }
        if self.inner_grid < 3 {
            return Err(Error::validation(
                "solver.grid",
                "inner grid needs at least 3 points",
            ));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::validation("solver.tolerance", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub x_star: f64,
    pub y_star: f64,
    pub risk: f64,
    pub rule: RandomizedRule,
    pub nu: f64,
    /// Detection probability of the upper test at `x_star`.
    pub y1_star: f64,
    /// Detection probability of the lower test at `x_star`.
    pub y2_star: f64,
    pub case: Prop1Case,
    /// False when the weight failed the monotonicity scan; the minimizer is
    /// still computed.
    pub weight_monotone: bool,
}

/// Output of [`synthesize_optimal_rule`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesizedRule {
    pub rule: RandomizedRule,
    pub nu: f64,
    pub y1_star: f64,
    pub y2_star: f64,
}

/// Build the mixture of the upper and lower tests at false-alarm `x_star`
/// whose detection probability is `y_star`.
pub fn synthesize_optimal_rule(
    model: &ObservationModel,
    x_star: f64,
    y_star: f64,
) -> Result<SynthesizedRule> {
    let y1 = model.upper_roc(x_star);
    let y2 = model.lower_roc(x_star);
    if y_star < y2 - FEASIBILITY_TOLERANCE || y_star > y1 + FEASIBILITY_TOLERANCE {
        return Err(Error::Range(format!(
            "detection probability {y_star} outside [{y2}, {y1}] at false alarm {x_star}"
        )));
    }
    let upper = model.lrt_for_false_alarm(x_star, Direction::Upper);
    if y1 - y2 <= 1e-12 {
        return Ok(SynthesizedRule {
            rule: RandomizedRule::pure(upper),
            nu: 1.0,
            y1_star: y1,
            y2_star: y2,
        });
    }
    let lower = model.lrt_for_false_alarm(x_star, Direction::Lower);
    let y = y_star.clamp(y2, y1);
    let mut nu = ((y - y2) / (y1 - y2)).clamp(0.0, 1.0);
    if nu <= FEASIBILITY_TOLERANCE {
        nu = 0.0;
    } else if nu >= 1.0 - FEASIBILITY_TOLERANCE {
        nu = 1.0;
    }
    let rule = if nu == 1.0 {
        RandomizedRule::pure(upper)
    } else if nu == 0.0 {
        RandomizedRule {
            nu: 0.0,
            first: upper,
            second: lower,
        }
    } else {
        RandomizedRule::mixture(nu, upper, lower)?
    };
    Ok(SynthesizedRule {
        rule,
        nu,
        y1_star: y1,
        y2_star: y2,
    })
}

fn uniform_grid(n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n).map(|i| i as f64 / last).collect()
}

/// Detection term tabulated on a uniform grid, reused across all inner
/// problems.
struct DetectionTable<'a> {
    problem: &'a Problem,
    ys: Vec<f64>,
    values: Vec<f64>,
    tolerance: f64,
}

impl<'a> DetectionTable<'a> {
    fn new(problem: &'a Problem, n: usize, tolerance: f64) -> Self {
        let ys = uniform_grid(n);
        let values = ys.iter().map(|&y| problem.detection_component(y)).collect();
        DetectionTable {
            problem,
            ys,
            values,
            tolerance,
        }
    }

    /// Minimize the detection term over `[lo, hi]`.
    fn minimize(&self, lo: f64, hi: f64) -> Minimum {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let h = |y: f64| self.problem.detection_component(y);
        let n = self.ys.len() - 1;
        // Grid points strictly inside (lo, hi), bracketed by the endpoints.
        let first = ((lo * n as f64).floor() as usize + 1).min(n + 1);
        let mut points = Vec::with_capacity(2);
        let mut values = Vec::with_capacity(2);
        points.push(lo);
        values.push(h(lo));
        for j in first..=n {
            let y = self.ys[j];
            if y <= lo {
                continue;
            }
            if y >= hi {
                break;
            }
            points.push(y);
            values.push(self.values[j]);
        }
        if hi > lo {
            points.push(hi);
            values.push(h(hi));
        }
        let k = argmin_first(&values).unwrap_or(0);
        refine_bracket(h, &points, k, values[k], self.tolerance)
    }
}

/// Extreme `x` in `[0, 1]` where the nondecreasing `roc` is `>= y` (smallest)
/// or `<= y` (largest).
fn roc_level_crossing(roc: impl Fn(f64) -> f64, y: f64, smallest: bool) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let go_left = if smallest {
            roc(mid) >= y
        } else {
            roc(mid) > y
        };
        if go_left {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if smallest {
        hi
    } else {
        lo
    }
}

/// At fixed detection probability the achievable false alarms form an
/// interval whose ends are single tests. Returns the better end when it is
/// no worse than `point`, so a pure test is reported whenever one is optimal.
fn boundary_at_same_detection(problem: &Problem, point: &OperatingPoint) -> Option<OperatingPoint> {
    let model = &problem.model;
    let left = roc_level_crossing(|x| model.upper_roc(x), point.y, true);
    let right = roc_level_crossing(|x| model.lower_roc(x), point.y, false);
    let current = problem.risk_at(point);
    [
        OperatingPoint {
            x: left,
            y: model.upper_roc(left),
        },
        OperatingPoint {
            x: right,
            y: model.lower_roc(right),
        },
    ]
    .into_iter()
    .map(|p| (problem.risk_at(&p), p))
    .filter(|(risk, _)| *risk <= current + 1e-12)
    .min_by(|a, b| a.0.total_cmp(&b.0))
    .map(|(_, p)| p)
}

/// Global minimizer of the behavioral risk over the achievable region,
/// together with the two-test rule that attains it.
pub fn solve_optimal(problem: &Problem, opts: &SolverOptions) -> Result<Solution> {
    problem.validate()?;
    opts.validate()?;
    let weight_monotone = problem.weight.is_monotone(opts.monotone_grid);
    if !weight_monotone {
        log::warn!("weight function is not monotone; optimality guarantees for tests do not apply");
    }
    let model = &problem.model;
    let table = DetectionTable::new(problem, opts.inner_grid, opts.tolerance);

    let inner = |x: f64| table.minimize(model.lower_roc(x), model.upper_roc(x));
    let outer = |x: f64| problem.false_alarm_component(x) + inner(x).value;

    let xs = uniform_grid(opts.outer_grid);
    let values: Vec<f64> = xs.par_iter().map(|&x| outer(x)).collect();
    let k = argmin_first(&values).ok_or_else(|| Error::Domain("objective is NaN".into()))?;
    let best = refine_bracket(outer, &xs, k, values[k], opts.tolerance);

    let mut point = OperatingPoint {
        x: best.at,
        y: inner(best.at).at,
    };
    let mut synth = synthesize_optimal_rule(model, point.x, point.y)?;
    if !synth.rule.is_pure() {
        if let Some(edge) = boundary_at_same_detection(problem, &point) {
            point = edge;
            synth = synthesize_optimal_rule(model, point.x, point.y)?;
        }
    }
    let (x_star, y_star) = (point.x, point.y);
    Ok(Solution {
        x_star,
        y_star,
        risk: problem.risk_at(&point),
        rule: synth.rule,
        nu: synth.nu,
        y1_star: synth.y1_star,
        y2_star: synth.y2_star,
        case: classify_costs(&problem.costs),
        weight_monotone,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LrtFamily {
    /// Upper tests with tie randomization (the whole upper ROC).
    UpperRandomized,
    /// Lower tests with tie randomization (the whole lower ROC).
    LowerRandomized,
    /// Deterministic upper tests of a discrete model.
    DeterministicOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrtBaseline {
    pub risk: f64,
    pub point: OperatingPoint,
    pub rule: RandomizedRule,
}

/// Smallest risk reachable by a single test of `family`.
pub fn best_lrt_risk(
    problem: &Problem,
    family: LrtFamily,
    opts: &SolverOptions,
) -> Result<LrtBaseline> {
    problem.validate()?;
    opts.validate()?;
    let model = &problem.model;
    let direction = match family {
        LrtFamily::UpperRandomized => Direction::Upper,
        LrtFamily::LowerRandomized => Direction::Lower,
        LrtFamily::DeterministicOnly => {
            let tests = model.deterministic_tests().ok_or_else(|| {
                Error::validation(
                    "family",
                    "deterministic-only baseline needs a discrete model; use upper_randomized",
                )
            })?;
            let risks: Vec<f64> = tests.iter().map(|(_, p)| problem.risk_at(p)).collect();
            let k = argmin_first(&risks).unwrap_or(0);
            let (test, point) = tests[k];
            return Ok(LrtBaseline {
                risk: risks[k],
                point,
                rule: RandomizedRule::pure(test),
            });
        }
    };
    let along = |x: f64| {
        problem.risk_at(&OperatingPoint {
            x,
            y: model.roc(x, direction),
        })
    };
    let xs = uniform_grid(opts.outer_grid);
    let values: Vec<f64> = xs.par_iter().map(|&x| along(x)).collect();
    let k = argmin_first(&values).ok_or_else(|| Error::Domain("objective is NaN".into()))?;
    let best = refine_bracket(along, &xs, k, values[k], opts.tolerance);
    let point = OperatingPoint {
        x: best.at,
        y: model.roc(best.at, direction),
    };
    Ok(LrtBaseline {
        risk: best.value,
        point,
        rule: RandomizedRule::pure(model.lrt_for_false_alarm(best.at, direction)),
    })
}

/// Exhaustive search over the `(grid_n + 1)^2` lattice intersected with the
/// achievable region. No refinement; used to cross-check [`solve_optimal`].
pub fn brute_force_oracle(problem: &Problem, grid_n: usize) -> Result<Solution> {
    problem.validate()?;
    if grid_n < 10 {
        return Err(Error::validation("grid_n", "must be at least 10"));
    }
    let model = &problem.model;
    let n = grid_n as f64;
    let h: Vec<f64> = (0..=grid_n)
        .map(|j| problem.detection_component(j as f64 / n))
        .collect();
    let rows: Vec<Option<(f64, usize)>> = (0..=grid_n)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 / n;
            let lo = model.lower_roc(x) - 1e-12;
            let hi = model.upper_roc(x) + 1e-12;
            let j0 = (lo * n).ceil().max(0.0) as usize;
            let j1 = ((hi * n).floor() as usize).min(grid_n);
            if j0 > j1 {
                return None;
            }
            let j = j0 + argmin_first(&h[j0..=j1])?;
            Some((problem.false_alarm_component(x) + h[j], j))
        })
        .collect();
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, row) in rows.iter().enumerate() {
        if let Some((v, j)) = *row {
            if best.is_none_or(|(b, _, _)| v < b) {
                best = Some((v, i, j));
            }
        }
    }
    let (_, i, j) = best.ok_or_else(|| Error::Domain("no lattice point in region".into()))?;
    let (x_star, y_star) = (i as f64 / n, j as f64 / n);
    let synth = synthesize_optimal_rule(model, x_star, y_star)?;
    Ok(Solution {
        x_star,
        y_star,
        risk: problem.risk_at(&OperatingPoint {
            x: x_star,
            y: y_star,
        }),
        rule: synth.rule,
        nu: synth.nu,
        y1_star: synth.y1_star,
        y2_star: synth.y2_star,
        case: classify_costs(&problem.costs),
        weight_monotone: problem.weight.is_monotone(10_000),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub mu1: f64,
    pub f_lrt: f64,
    pub f_opt: f64,
    pub nu: f64,
    pub x_star: f64,
    pub y_star: f64,
}

/// Best-test and optimal risks of a Gaussian problem as `mu1` varies.
pub fn mu1_sweep(
    template: &Problem,
    mu1_values: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<SweepRow>> {
    let base = match template.model {
        ObservationModel::Gaussian(m) => m,
        _ => {
            return Err(Error::validation(
                "model.kind",
                "mu1 sweep requires a gaussian model",
            ))
        }
    };
    mu1_values
        .par_iter()
        .map(|&mu1| {
            let mut m = base;
            m.mu1 = mu1;
            let problem = template.with_model(m.into())?;
            let lrt = best_lrt_risk(&problem, LrtFamily::UpperRandomized, opts)?;
            let opt = solve_optimal(&problem, opts)?;
            Ok(SweepRow {
                mu1,
                f_lrt: lrt.risk,
                f_opt: opt.risk,
                nu: opt.nu,
                x_star: opt.x_star,
                y_star: opt.y_star,
            })
        })
        .collect()
}

/// Evenly spaced values from `from` to `to` inclusive. The count is rounded
/// so accumulated floating-point error cannot drop the last value.
pub fn sweep_values(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) || to < from {
        return Err(Error::validation("sweep", "need finite from <= to"));
    }
    if from == to {
        return Ok(vec![from]);
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::validation("sweep.step", "must be positive"));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| from + i as f64 * step).collect())
}

/// Upper-family risk curve of a discrete problem, sampled on a uniform
/// false-alarm grid: `(x, risk, upper_roc(x))`.
pub fn randomized_lrt_curve(problem: &Problem, points: usize) -> Result<Vec<(f64, f64, f64)>> {
    problem.validate()?;
    if points < 2 {
        return Err(Error::validation("grid", "need at least 2 points"));
    }
    Ok(uniform_grid(points)
        .into_iter()
        .map(|x| {
            let y = problem.model.upper_roc(x);
            (x, problem.risk_at(&OperatingPoint { x, y }), y)
        })
        .collect())
}
