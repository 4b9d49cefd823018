//! Observation models: Gaussian location testing and the binary channel.
//!
//! Each model exposes its likelihood ratio, the upper and lower boundaries of
//! the achievable operating-point region, the likelihood-ratio test of either
//! family that hits a requested false-alarm probability, exact operating
//! points of rules, and sampling.

pub mod normal;

use std::cmp::Ordering;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::risk::OperatingPoint;
use crate::rules::{compare_ratio, Direction, LrtSpec, RandomizedRule, TIE_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    H0,
    H1,
}

/// Scalar observation distributed `N(mu_i, sigma^2)` under hypothesis `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianLocationModel {
    pub mu0: f64,
    pub mu1: f64,
    pub sigma: f64,
}

impl GaussianLocationModel {
    pub fn new(mu0: f64, mu1: f64, sigma: f64) -> Result<Self> {
        let m = GaussianLocationModel { mu0, mu1, sigma };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu0.is_finite() {
            return Err(Error::validation("model.mu0", "must be finite"));
        }
        if !self.mu1.is_finite() {
            return Err(Error::validation("model.mu1", "must be finite"));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::validation(
                "model.sigma",
                format!("must be a finite positive number, got {}", self.sigma),
            ));
        }
        if self.mu0 == self.mu1 {
            return Err(Error::validation("model.mu1", "must differ from model.mu0"));
        }
        Ok(())
    }

    /// Separation `|mu1 - mu0| / sigma`.
    pub fn separation(&self) -> f64 {
        (self.mu1 - self.mu0).abs() / self.sigma
    }

    /// +1 when large observations favour H1, -1 otherwise.
    fn orientation(&self) -> f64 {
        if self.mu1 > self.mu0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn ln_likelihood_ratio(&self, r: f64) -> f64 {
        (self.mu1 - self.mu0) * (r - 0.5 * (self.mu0 + self.mu1)) / (self.sigma * self.sigma)
    }

    /// Observation at which the likelihood ratio equals `lr_threshold`.
    pub fn decision_threshold(&self, lr_threshold: f64) -> f64 {
        self.sigma * self.sigma * lr_threshold.ln() / (self.mu1 - self.mu0)
            + 0.5 * (self.mu0 + self.mu1)
    }

    /// Standardized position `z` of the threshold, measured from the H0 mean
    /// along the direction in which the likelihood ratio grows.
    fn standardized_threshold(&self, lr_threshold: f64) -> f64 {
        let d = self.separation();
        lr_threshold.ln() / d + 0.5 * d
    }

    fn upper_roc(&self, x: f64) -> f64 {
        normal::q(normal::q_inv(x) - self.separation())
    }

    fn lower_roc(&self, x: f64) -> f64 {
        normal::q(normal::q_inv(x) + self.separation())
    }

    fn lrt_for_false_alarm(&self, x: f64, direction: Direction) -> LrtSpec {
        let d = self.separation();
        let z = normal::q_inv(x);
        let ln_threshold = match direction {
            Direction::Upper => d * (z - 0.5 * d),
            Direction::Lower => d * (-z - 0.5 * d),
        };
        LrtSpec {
            direction,
            lr_threshold: ln_threshold.exp(),
            tie_prob: 0.0,
        }
    }

    fn lrt_operating_point(&self, test: &LrtSpec) -> OperatingPoint {
        let d = self.separation();
        let z = self.standardized_threshold(test.lr_threshold);
        match test.direction {
            Direction::Upper => OperatingPoint {
                x: normal::q(z),
                y: normal::q(z - d),
            },
            Direction::Lower => OperatingPoint {
                x: normal::q(-z),
                y: normal::q(d - z),
            },
        }
    }

    /// Observation-space view of a test: the threshold and whether H1 is
    /// selected above it.
    pub fn observation_rule(&self, test: &LrtSpec) -> ObservationThreshold {
        let upward = match test.direction {
            Direction::Upper => self.orientation() > 0.0,
            Direction::Lower => self.orientation() < 0.0,
        };
        ObservationThreshold {
            threshold: self.decision_threshold(test.lr_threshold),
            selects_h1_above: upward,
        }
    }
}

/// Observation-space form of a Gaussian likelihood-ratio test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservationThreshold {
    pub threshold: f64,
    /// `true`: select H1 when `r >= threshold`; `false`: when `r < threshold`.
    pub selects_h1_above: bool,
}

/// Binary channel flipping bit `i` with probability `lambda_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryChannelModel {
    pub lambda0: f64,
    pub lambda1: f64,
}

impl BinaryChannelModel {
    pub fn new(lambda0: f64, lambda1: f64) -> Result<Self> {
        let m = BinaryChannelModel { lambda0, lambda1 };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("model.lambda0", self.lambda0),
            ("model.lambda1", self.lambda1),
        ] {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::validation(
                    field,
                    format!("must lie in [0, 1), got {v}"),
                ));
            }
        }
        if self.lambda0 + self.lambda1 >= 1.0 {
            return Err(Error::validation(
                "model.lambda1",
                format!(
                    "lambda0 + lambda1 must be below 1, got {}",
                    self.lambda0 + self.lambda1
                ),
            ));
        }
        Ok(())
    }

    /// `P(r | H)` for a bit `r`.
    pub fn probability(&self, r: u8, hypothesis: Hypothesis) -> f64 {
        match (hypothesis, r) {
            (Hypothesis::H0, 0) => 1.0 - self.lambda0,
            (Hypothesis::H0, _) => self.lambda0,
            (Hypothesis::H1, 0) => self.lambda1,
            (Hypothesis::H1, _) => 1.0 - self.lambda1,
        }
    }

    pub fn likelihood_ratio_bit(&self, r: u8) -> f64 {
        if r == 0 {
            self.lambda1 / (1.0 - self.lambda0)
        } else if self.lambda0 == 0.0 {
            f64::INFINITY
        } else {
            (1.0 - self.lambda1) / self.lambda0
        }
    }

    fn upper_roc(&self, x: f64) -> f64 {
        let (l0, l1) = (self.lambda0, self.lambda1);
        if x <= l0 {
            if l0 == 0.0 {
                0.0
            } else {
                x * (1.0 - l1) / l0
            }
        } else {
            (1.0 - l1) + (x - l0) * l1 / (1.0 - l0)
        }
    }

    fn lower_roc(&self, x: f64) -> f64 {
        let (l0, l1) = (self.lambda0, self.lambda1);
        let split = 1.0 - l0;
        if x <= split {
            x * l1 / split
        } else {
            l1 + (x - split) * (1.0 - l1) / l0
        }
    }

    fn lrt_for_false_alarm(&self, x: f64, direction: Direction) -> LrtSpec {
        let l0 = self.lambda0;
        if x <= 0.0 {
            return match direction {
                Direction::Upper => LrtSpec::always_h0(),
                Direction::Lower => LrtSpec {
                    direction,
                    lr_threshold: 0.0,
                    tie_prob: 0.0,
                },
            };
        }
        if x >= 1.0 {
            return match direction {
                Direction::Upper => LrtSpec::always_h1(),
                Direction::Lower => LrtSpec {
                    direction,
                    lr_threshold: f64::INFINITY,
                    tie_prob: 1.0,
                },
            };
        }
        let (lr0, lr1) = (self.likelihood_ratio_bit(0), self.likelihood_ratio_bit(1));
        match direction {
            // Upper tests admit r = 1 first (false-alarm mass l0), then r = 0.
            Direction::Upper if x <= l0 => LrtSpec {
                direction,
                lr_threshold: lr1,
                tie_prob: (x / l0).clamp(0.0, 1.0),
            },
            Direction::Upper => LrtSpec {
                direction,
                lr_threshold: lr0,
                tie_prob: ((x - l0) / (1.0 - l0)).clamp(0.0, 1.0),
            },
            // Lower tests admit r = 0 first (false-alarm mass 1 - l0), then r = 1.
            Direction::Lower if x <= 1.0 - l0 => LrtSpec {
                direction,
                lr_threshold: lr0,
                tie_prob: (x / (1.0 - l0)).clamp(0.0, 1.0),
            },
            Direction::Lower => LrtSpec {
                direction,
                lr_threshold: lr1,
                tie_prob: ((x - (1.0 - l0)) / l0).clamp(0.0, 1.0),
            },
        }
    }

    fn lrt_operating_point(&self, test: &LrtSpec) -> OperatingPoint {
        let mut point = OperatingPoint { x: 0.0, y: 0.0 };
        for r in [0u8, 1] {
            let phi = test.accept_given(compare_ratio(
                self.likelihood_ratio_bit(r),
                test.lr_threshold,
            ));
            point.x += phi * self.probability(r, Hypothesis::H0);
            point.y += phi * self.probability(r, Hypothesis::H1);
        }
        point
    }

    /// Operating points reachable by deterministic upper tests.
    pub fn deterministic_points(&self) -> [OperatingPoint; 3] {
        [
            OperatingPoint { x: 0.0, y: 0.0 },
            OperatingPoint { x: 1.0, y: 1.0 },
            OperatingPoint {
                x: self.lambda0,
                y: 1.0 - self.lambda1,
            },
        ]
    }

    fn deterministic_tests(&self) -> [LrtSpec; 3] {
        [
            LrtSpec::always_h0(),
            LrtSpec::always_h1(),
            LrtSpec {
                direction: Direction::Upper,
                lr_threshold: self.likelihood_ratio_bit(1),
                tie_prob: 1.0,
            },
        ]
    }
}

/// A concrete observation model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObservationModel {
    Gaussian(GaussianLocationModel),
    BinaryChannel(BinaryChannelModel),
}

impl From<GaussianLocationModel> for ObservationModel {
    fn from(m: GaussianLocationModel) -> Self {
        ObservationModel::Gaussian(m)
    }
}

impl From<BinaryChannelModel> for ObservationModel {
    fn from(m: BinaryChannelModel) -> Self {
        ObservationModel::BinaryChannel(m)
    }
}

fn bit(r: f64) -> Result<u8> {
    if r == 0.0 {
        Ok(0)
    } else if r == 1.0 {
        Ok(1)
    } else {
        Err(Error::Domain(format!(
            "binary channel observation must be 0 or 1, got {r}"
        )))
    }
}

impl ObservationModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            ObservationModel::Gaussian(m) => m.validate(),
            ObservationModel::BinaryChannel(m) => m.validate(),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, ObservationModel::BinaryChannel(_))
    }

    /// `p1(r) / p0(r)`; may be `+inf` for the channel.
    pub fn likelihood_ratio(&self, r: f64) -> Result<f64> {
        match self {
            ObservationModel::Gaussian(m) => {
                if r.is_nan() {
                    return Err(Error::Domain("observation is NaN".into()));
                }
                Ok(m.ln_likelihood_ratio(r).exp())
            }
            ObservationModel::BinaryChannel(m) => Ok(m.likelihood_ratio_bit(bit(r)?)),
        }
    }

    /// How the likelihood ratio at `r` compares with `threshold`, with ties
    /// detected at relative tolerance [`TIE_TOLERANCE`].
    pub fn compare_lr(&self, r: f64, threshold: f64) -> Result<Ordering> {
        match self {
            ObservationModel::Gaussian(m) => {
                if r.is_nan() {
                    return Err(Error::Domain("observation is NaN".into()));
                }
                // Log space avoids overflow of exp() far from the threshold.
                let ln_lr = m.ln_likelihood_ratio(r);
                let ln_t = threshold.ln();
                if ln_t.is_infinite() {
                    return Ok(ln_lr.partial_cmp(&ln_t).unwrap_or(Ordering::Equal));
                }
                let diff = ln_lr - ln_t;
                Ok(if diff.abs() <= TIE_TOLERANCE {
                    Ordering::Equal
                } else if diff > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                })
            }
            ObservationModel::BinaryChannel(m) => {
                Ok(compare_ratio(m.likelihood_ratio_bit(bit(r)?), threshold))
            }
        }
    }

    /// Largest detection probability achievable at false-alarm `x`.
    pub fn upper_roc(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        if x == 0.0 {
            return 0.0;
        }
        if x == 1.0 {
            return 1.0;
        }
        let y = match self {
            ObservationModel::Gaussian(m) => m.upper_roc(x),
            ObservationModel::BinaryChannel(m) => m.upper_roc(x),
        };
        y.clamp(0.0, 1.0)
    }

    /// Smallest detection probability achievable at false-alarm `x`.
    pub fn lower_roc(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        if x == 0.0 {
            return 0.0;
        }
        if x == 1.0 {
            return 1.0;
        }
        let y = match self {
            ObservationModel::Gaussian(m) => m.lower_roc(x),
            ObservationModel::BinaryChannel(m) => m.lower_roc(x),
        };
        y.clamp(0.0, 1.0)
    }

    pub fn roc(&self, x: f64, direction: Direction) -> f64 {
        match direction {
            Direction::Upper => self.upper_roc(x),
            Direction::Lower => self.lower_roc(x),
        }
    }

    /// Test of the given family whose false-alarm probability is `x`.
    pub fn lrt_for_false_alarm(&self, x: f64, direction: Direction) -> LrtSpec {
        let x = x.clamp(0.0, 1.0);
        match self {
            ObservationModel::Gaussian(m) => m.lrt_for_false_alarm(x, direction),
            ObservationModel::BinaryChannel(m) => m.lrt_for_false_alarm(x, direction),
        }
    }

    pub fn lrt_operating_point(&self, test: &LrtSpec) -> OperatingPoint {
        match self {
            ObservationModel::Gaussian(m) => m.lrt_operating_point(test),
            ObservationModel::BinaryChannel(m) => m.lrt_operating_point(test),
        }
    }

    /// Exact false-alarm and detection probabilities of `rule`.
    pub fn operating_point_of(&self, rule: &RandomizedRule) -> OperatingPoint {
        let a = self.lrt_operating_point(&rule.first);
        if rule.nu == 1.0 {
            return a;
        }
        let b = self.lrt_operating_point(&rule.second);
        OperatingPoint {
            x: rule.nu * a.x + (1.0 - rule.nu) * b.x,
            y: rule.nu * a.y + (1.0 - rule.nu) * b.y,
        }
    }

    /// Deterministic tests and their operating points, for discrete models.
    pub fn deterministic_tests(&self) -> Option<Vec<(LrtSpec, OperatingPoint)>> {
        match self {
            ObservationModel::Gaussian(_) => None,
            ObservationModel::BinaryChannel(m) => Some(
                m.deterministic_tests()
                    .into_iter()
                    .zip(m.deterministic_points())
                    .collect(),
            ),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, hypothesis: Hypothesis, rng: &mut R) -> f64 {
        match self {
            ObservationModel::Gaussian(m) => {
                let mean = match hypothesis {
                    Hypothesis::H0 => m.mu0,
                    Hypothesis::H1 => m.mu1,
                };
                Normal::new(mean, m.sigma)
                    .expect("validated sigma")
                    .sample(rng)
            }
            ObservationModel::BinaryChannel(m) => {
                let p_one = m.probability(1, hypothesis);
                if rng.random::<f64>() < p_one {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}
