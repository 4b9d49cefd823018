//! Seeded Monte Carlo estimates of operating points and behavioral risk.
//!
//! Draws are split into fixed-size shards; shard `k` uses its own ChaCha
//! stream seeded with `seed + k`. Shards run in parallel and only integer
//! counts are merged, so a report depends on `(n, seed)` alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{Hypothesis, ObservationModel};
use crate::risk::{behavioral_risk_joint, JointProbabilities};
use crate::rules::RandomizedRule;
use crate::solver::Problem;

const SHARD_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    /// Observations drawn under H0.
    pub n_h0: u64,
    /// Observations drawn under H1.
    pub n_h1: u64,
    pub x_hat: f64,
    pub y_hat: f64,
    /// Three-sigma binomial half-widths.
    pub x_ci_halfwidth: f64,
    pub y_ci_halfwidth: f64,
    /// Plug-in behavioral risk, when the estimator samples the joint.
    pub risk_hat: Option<f64>,
    pub seed: u64,
}

/// `3 * sqrt(p (1 - p) / n)`.
pub fn three_sigma(p: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}

#[derive(Debug, Default, Clone, Copy)]
struct Counts {
    // [selected][true]
    joint: [[u64; 2]; 2],
}

impl Counts {
    fn merge(mut self, other: Counts) -> Counts {
        for i in 0..2 {
            for j in 0..2 {
                self.joint[i][j] += other.joint[i][j];
            }
        }
        self
    }

    fn under(&self, j: usize) -> u64 {
        self.joint[0][j] + self.joint[1][j]
    }

    fn total(&self) -> u64 {
        self.under(0) + self.under(1)
    }
}

fn index(h: Hypothesis) -> usize {
    match h {
        Hypothesis::H0 => 0,
        Hypothesis::H1 => 1,
    }
}

fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(shard))
}

fn run_shards<F>(n: u64, seed: u64, body: F) -> Result<Counts>
where
    F: Fn(u64, &mut ChaCha8Rng, &mut Counts) -> Result<()> + Sync,
{
    let shards = n.div_ceil(SHARD_SIZE);
    (0..shards)
        .into_par_iter()
        .map(|k| {
            let len = SHARD_SIZE.min(n - k * SHARD_SIZE);
            let mut rng = shard_rng(seed, k);
            let mut counts = Counts::default();
            body(len, &mut rng, &mut counts)?;
            Ok(counts)
        })
        .try_reduce(Counts::default, |a, b| Ok(a.merge(b)))
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::validation("n", "must be at least 1"));
    }
    Ok(())
}

fn report(counts: &Counts, seed: u64, risk_hat: Option<f64>) -> SimulationReport {
    let (n0, n1) = (counts.under(0), counts.under(1));
    let rate = |hits: u64, n: u64| if n == 0 { 0.0 } else { hits as f64 / n as f64 };
    let x_hat = rate(counts.joint[1][0], n0);
    let y_hat = rate(counts.joint[1][1], n1);
    SimulationReport {
        n_h0: n0,
        n_h1: n1,
        x_hat,
        y_hat,
        x_ci_halfwidth: three_sigma(x_hat, n0),
        y_ci_halfwidth: three_sigma(y_hat, n1),
        risk_hat,
        seed,
    }
}

fn draw<R: Rng>(
    model: &ObservationModel,
    rule: &RandomizedRule,
    truth: Hypothesis,
    rng: &mut R,
    counts: &mut Counts,
) -> Result<()> {
    let r = model.sample(truth, rng);
    let selected = rule.decide(model, r, rng)?;
    counts.joint[index(selected)][index(truth)] += 1;
    Ok(())
}

/// Empirical false-alarm and detection rates from `n` draws under each
/// hypothesis.
pub fn estimate_operating_point(
    model: &ObservationModel,
    rule: &RandomizedRule,
    n: u64,
    seed: u64,
) -> Result<SimulationReport> {
    check_n(n)?;
    model.validate()?;
    let counts = run_shards(n, seed, |len, rng, counts| {
        for _ in 0..len {
            draw(model, rule, Hypothesis::H0, rng, counts)?;
        }
        for _ in 0..len {
            draw(model, rule, Hypothesis::H1, rng, counts)?;
        }
        Ok(())
    })?;
    Ok(report(&counts, seed, None))
}

/// Plug-in behavioral risk: hypotheses drawn from the priors, `n` draws in
/// total, and the weight applied to the empirical joint frequencies.
pub fn estimate_behavioral_risk(
    problem: &Problem,
    rule: &RandomizedRule,
    n: u64,
    seed: u64,
) -> Result<SimulationReport> {
    check_n(n)?;
    problem.validate()?;
    let model = &problem.model;
    let pi1 = problem.priors.pi1;
    let counts = run_shards(n, seed, |len, rng, counts| {
        for _ in 0..len {
            let truth = if rng.random::<f64>() < pi1 {
                Hypothesis::H1
            } else {
                Hypothesis::H0
            };
            draw(model, rule, truth, rng, counts)?;
        }
        Ok(())
    })?;
    let total = counts.total() as f64;
    let freq = |i: usize, j: usize| counts.joint[i][j] as f64 / total;
    let joints = JointProbabilities {
        p00: freq(0, 0),
        p10: freq(1, 0),
        p01: freq(0, 1),
        p11: freq(1, 1),
    };
    let risk = behavioral_risk_joint(&problem.weight, &problem.costs, &joints);
    Ok(report(&counts, seed, Some(risk)))
}

/// Delta-method standard deviation of the plug-in risk estimator at the
/// analytic joint probabilities, for `n` total draws.
pub fn risk_estimator_sd(problem: &Problem, joints: &JointProbabilities, n: u64) -> f64 {
    let w = &problem.weight;
    let c = &problem.costs;
    let p = [joints.p00, joints.p10, joints.p01, joints.p11];
    let v = [c.v00, c.v10, c.v01, c.v11];
    let grad: Vec<f64> = p
        .iter()
        .zip(v)
        .map(|(&pk, vk)| {
            // Cells with probability 0 or 1 are never sampled differently.
            if pk <= 0.0 || pk >= 1.0 {
                return 0.0;
            }
            let step = 1e-6_f64.min(pk / 2.0).min((1.0 - pk) / 2.0);
            vk * (w.eval(pk + step) - w.eval(pk - step)) / (2.0 * step)
        })
        .collect();
    // Multinomial covariance diag(p) - p p^T.
    let mean: f64 = grad.iter().zip(&p).map(|(g, pk)| g * pk).sum();
    let var: f64 = grad
        .iter()
        .zip(&p)
        .map(|(g, pk)| pk * (g - mean).powi(2))
        .sum();
    (var / n as f64).sqrt()
}
