//! Probability weighting.
//!
//! A behavioral decision-maker perceives a probability `p` as `w(p)`. The
//! distortion family used here is
//!
//! ```text
//! w(p) = p^a / (p^a + (1 - p)^a)^(1/a),   a > 0
//! ```
//!
//! which reduces to the identity at `a = 1`. For small `a` the curve is not
//! monotone; [`WeightFunction::is_monotone`] checks that numerically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for accepting probabilities slightly outside `[0, 1]`.
pub const PROB_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFunction {
    Identity,
    Distortion { alpha: f64 },
}

impl WeightFunction {
    pub fn identity() -> Self {
        WeightFunction::Identity
    }

    /// Distortion weight with parameter `alpha`. Fails unless `alpha` is a
    /// finite positive number.
    pub fn distortion(alpha: f64) -> Result<Self> {
        let w = WeightFunction::Distortion { alpha };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightFunction::Identity => Ok(()),
            WeightFunction::Distortion { alpha } if alpha.is_finite() && alpha > 0.0 => Ok(()),
            WeightFunction::Distortion { alpha } => Err(Error::validation(
                "weight.alpha",
                format!("must be a finite positive number, got {alpha}"),
            )),
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            WeightFunction::Identity => None,
            WeightFunction::Distortion { alpha } => Some(alpha),
        }
    }

    /// Perceived weight of probability `p`.
    ///
    /// Inputs within [`PROB_TOLERANCE`] of `[0, 1]` are clamped; anything
    /// further out is a domain error.
    pub fn try_eval(&self, p: f64) -> Result<f64> {
        let p = clamp_probability(p)?;
        Ok(self.eval_unchecked(p))
    }

    /// Like [`try_eval`](Self::try_eval) but for callers that already hold a
    /// valid probability. Out-of-range input is clamped silently.
    pub fn eval(&self, p: f64) -> f64 {
        self.eval_unchecked(p.clamp(0.0, 1.0))
    }

    fn eval_unchecked(&self, p: f64) -> f64 {
        match *self {
            WeightFunction::Identity => p,
            WeightFunction::Distortion { alpha } => distortion(alpha, p),
        }
    }

    /// True iff the weight is nondecreasing on a uniform grid of `grid_n + 1`
    /// points over `[0, 1]`, allowing drops of at most `1e-12`.
    pub fn is_monotone(&self, grid_n: usize) -> bool {
        let n = grid_n.max(2);
        let mut prev = self.eval(0.0);
        for i in 1..=n {
            let cur = self.eval(i as f64 / n as f64);
            if cur < prev - 1e-12 {
                return false;
            }
            prev = cur;
        }
        true
    }
}

fn clamp_probability(p: f64) -> Result<f64> {
    if !(-PROB_TOLERANCE..=1.0 + PROB_TOLERANCE).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

fn distortion(alpha: f64, p: f64) -> f64 {
    let q = 1.0 - p;
    if p <= 1e-300 {
        return 0.0;
    }
    if q <= 1e-300 {
        return 1.0;
    }
    // ln w = a ln p - (1/a) ln(p^a + q^a), with the sum done as a log-sum-exp.
    let lp = alpha * p.ln();
    let lq = alpha * q.ln();
    let hi = lp.max(lq);
    let lse = hi + ((lp - hi).exp() + (lq - hi).exp()).ln();
    (lp - lse / alpha).exp().min(1.0)
}
