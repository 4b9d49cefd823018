//! Decision rules: single likelihood-ratio tests and two-test mixtures.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{Hypothesis, ObservationModel};

/// Relative tolerance used when deciding that a likelihood ratio equals the
/// test threshold.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Which side of the threshold selects H1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Select H1 when the likelihood ratio exceeds the threshold.
    Upper,
    /// Select H1 when the likelihood ratio falls below the threshold.
    Lower,
}

/// One likelihood-ratio test. At equality the test selects H1 with
/// probability `tie_prob`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrtSpec {
    pub direction: Direction,
    /// Threshold in likelihood-ratio space; may be `+inf`.
    pub lr_threshold: f64,
    pub tie_prob: f64,
}

impl LrtSpec {
    pub fn new(direction: Direction, lr_threshold: f64, tie_prob: f64) -> Result<Self> {
        let spec = LrtSpec {
            direction,
            lr_threshold,
            tie_prob,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lr_threshold.is_nan() || self.lr_threshold < 0.0 {
            return Err(Error::validation(
                "rule.lr_threshold",
                format!("must be nonnegative, got {}", self.lr_threshold),
            ));
        }
        if !(0.0..=1.0).contains(&self.tie_prob) {
            return Err(Error::validation(
                "rule.tie_prob",
                format!("must lie in [0, 1], got {}", self.tie_prob),
            ));
        }
        Ok(())
    }

    /// Rule that always selects H0.
    pub fn always_h0() -> Self {
        LrtSpec {
            direction: Direction::Upper,
            lr_threshold: f64::INFINITY,
            tie_prob: 0.0,
        }
    }

    /// Rule that always selects H1.
    pub fn always_h1() -> Self {
        LrtSpec {
            direction: Direction::Upper,
            lr_threshold: 0.0,
            tie_prob: 1.0,
        }
    }

    /// Probability of selecting H1 given how the likelihood ratio at the
    /// observation compares with the threshold.
    pub fn accept_given(&self, lr_vs_threshold: Ordering) -> f64 {
        match (self.direction, lr_vs_threshold) {
            (_, Ordering::Equal) => self.tie_prob,
            (Direction::Upper, Ordering::Greater) | (Direction::Lower, Ordering::Less) => 1.0,
            _ => 0.0,
        }
    }

    pub fn accept_probability(&self, model: &ObservationModel, r: f64) -> Result<f64> {
        let ord = model.compare_lr(r, self.lr_threshold)?;
        Ok(self.accept_given(ord))
    }
}

/// Compare two likelihood ratios with a relative tolerance.
pub fn compare_ratio(lr: f64, threshold: f64) -> Ordering {
    if lr == threshold {
        return Ordering::Equal;
    }
    if lr.is_infinite() || threshold.is_infinite() {
        return lr.partial_cmp(&threshold).unwrap_or(Ordering::Equal);
    }
    if (lr - threshold).abs() <= TIE_TOLERANCE * lr.abs().max(threshold.abs()) {
        Ordering::Equal
    } else if lr > threshold {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Mixture that applies `first` with probability `nu` and `second` otherwise.
/// A single test is stored with `nu = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomizedRule {
    pub nu: f64,
    pub first: LrtSpec,
    pub second: LrtSpec,
}

impl RandomizedRule {
    pub fn pure(test: LrtSpec) -> Self {
        RandomizedRule {
            nu: 1.0,
            first: test,
            second: test,
        }
    }

    pub fn mixture(nu: f64, first: LrtSpec, second: LrtSpec) -> Result<Self> {
        if !(0.0..=1.0).contains(&nu) {
            return Err(Error::validation(
                "rule.nu",
                format!("must lie in [0, 1], got {nu}"),
            ));
        }
        first.validate()?;
        second.validate()?;
        Ok(RandomizedRule { nu, first, second })
    }

    pub fn is_pure(&self) -> bool {
        self.nu == 1.0 || self.nu == 0.0 || self.first == self.second
    }

    /// `phi(r)`: probability of selecting H1 at observation `r`.
    pub fn accept_probability(&self, model: &ObservationModel, r: f64) -> Result<f64> {
        let a = self.first.accept_probability(model, r)?;
        if self.nu == 1.0 {
            return Ok(a);
        }
        let b = self.second.accept_probability(model, r)?;
        Ok((self.nu * a + (1.0 - self.nu) * b).clamp(0.0, 1.0))
    }

    /// Randomized decision at `r` using the caller's random stream.
    pub fn decide<R: Rng + ?Sized>(
        &self,
        model: &ObservationModel,
        r: f64,
        rng: &mut R,
    ) -> Result<Hypothesis> {
        let phi = self.accept_probability(model, r)?;
        Ok(if phi >= 1.0 {
            Hypothesis::H1
        } else if phi <= 0.0 {
            Hypothesis::H0
        } else if rng.random::<f64>() < phi {
            Hypothesis::H1
        } else {
            Hypothesis::H0
        })
    }
}
