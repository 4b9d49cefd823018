//! Behavioral risk.
//!
//! The risk of a rule is `sum_ij w(P(select i & true j)) * v_ij`. Writing the
//! joint probabilities through the false-alarm and detection probabilities
//! splits it into a term in `x` alone plus a term in `y` alone, which is what
//! the solver exploits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weighting::WeightFunction;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Priors {
    pub pi0: f64,
    pub pi1: f64,
}

impl Priors {
    pub fn new(pi0: f64, pi1: f64) -> Result<Self> {
        let p = Priors { pi0, pi1 };
        p.validate()?;
        Ok(p)
    }

    /// Priors with `pi1 = 1 - pi0`.
    pub fn from_pi0(pi0: f64) -> Result<Self> {
        Priors::new(pi0, 1.0 - pi0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.pi0) {
            return Err(Error::validation(
                "priors.pi0",
                format!("must lie in [0, 1], got {}", self.pi0),
            ));
        }
        if !(0.0..=1.0).contains(&self.pi1) {
            return Err(Error::validation(
                "priors.pi1",
                format!("must lie in [0, 1], got {}", self.pi1),
            ));
        }
        if (self.pi0 + self.pi1 - 1.0).abs() > 1e-12 {
            return Err(Error::validation(
                "priors.pi1",
                format!("pi0 + pi1 must equal 1, got {}", self.pi0 + self.pi1),
            ));
        }
        Ok(())
    }
}

/// Perceived costs `v_ij` of selecting H_i when H_j is true. Negative values
/// are perceived as gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerceivedCosts {
    pub v00: f64,
    pub v10: f64,
    pub v01: f64,
    pub v11: f64,
}

impl PerceivedCosts {
    pub fn new(v00: f64, v10: f64, v01: f64, v11: f64) -> Result<Self> {
        let c = PerceivedCosts { v00, v10, v01, v11 };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("costs.v00", self.v00),
            ("costs.v10", self.v10),
            ("costs.v01", self.v01),
            ("costs.v11", self.v11),
        ] {
            if !v.is_finite() {
                return Err(Error::validation(field, format!("must be finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// False-alarm probability `x` and detection probability `y` of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub x: f64,
    pub y: f64,
}

impl OperatingPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        for (name, v) in [("x", x), ("y", y)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} = {v} outside [0, 1]")));
            }
        }
        Ok(OperatingPoint { x, y })
    }
}

/// `p_ij = P(select H_i & H_j true)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointProbabilities {
    pub p00: f64,
    pub p10: f64,
    pub p01: f64,
    pub p11: f64,
}

impl JointProbabilities {
    pub fn from_operating_point(priors: &Priors, point: &OperatingPoint) -> Self {
        JointProbabilities {
            p00: priors.pi0 * (1.0 - point.x),
            p10: priors.pi0 * point.x,
            p01: priors.pi1 * (1.0 - point.y),
            p11: priors.pi1 * point.y,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.p00, self.p10, self.p01, self.p11];
        if all.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Domain(format!(
                "joint probabilities {all:?} outside [0, 1]"
            )));
        }
        let total: f64 = all.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("joint probabilities sum to {total}")));
        }
        Ok(())
    }

    /// Checks the joint against the priors: `p_0j + p_1j` must match `pi_j`.
    pub fn validate_against(&self, priors: &Priors) -> Result<()> {
        self.validate()?;
        for (j, (a, b, pi)) in [
            (self.p00, self.p10, priors.pi0),
            (self.p01, self.p11, priors.pi1),
        ]
        .into_iter()
        .enumerate()
        {
            if a > pi + 1e-9 || b > pi + 1e-9 || (a + b - pi).abs() > 1e-9 {
                return Err(Error::Domain(format!(
                    "joint probabilities under H{j} do not match prior {pi}"
                )));
            }
        }
        Ok(())
    }
}

/// Classification of a cost structure by the signs of `v10*v00` and
/// `v11*v01`. Any strictly negative product guarantees that a
/// likelihood-ratio test is optimal when the weight is increasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Prop1Case {
    CaseAFalseAlarmSide,
    CaseADetectionSide,
    CaseABoth,
    CaseB,
}

impl Prop1Case {
    /// True for the classes in which a single likelihood-ratio test is known
    /// to be optimal.
    pub fn lrt_guaranteed(&self) -> bool {
        !matches!(self, Prop1Case::CaseB)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Prop1Case::CaseAFalseAlarmSide => "case-a (false-alarm side)",
            Prop1Case::CaseADetectionSide => "case-a (detection side)",
            Prop1Case::CaseABoth => "case-a (both sides)",
            Prop1Case::CaseB => "case-b",
        }
    }
}

pub fn classify_costs(costs: &PerceivedCosts) -> Prop1Case {
    let fa = costs.v10 * costs.v00 < 0.0;
    let det = costs.v11 * costs.v01 < 0.0;
    match (fa, det) {
        (true, true) => Prop1Case::CaseABoth,
        (true, false) => Prop1Case::CaseAFalseAlarmSide,
        (false, true) => Prop1Case::CaseADetectionSide,
        (false, false) => Prop1Case::CaseB,
    }
}

pub fn behavioral_risk_joint(
    w: &WeightFunction,
    costs: &PerceivedCosts,
    joints: &JointProbabilities,
) -> f64 {
    w.eval(joints.p00) * costs.v00
        + w.eval(joints.p10) * costs.v10
        + w.eval(joints.p01) * costs.v01
        + w.eval(joints.p11) * costs.v11
}

/// Part of the risk decided under H0, as a function of the false-alarm
/// probability.
pub fn false_alarm_component(
    w: &WeightFunction,
    priors: &Priors,
    costs: &PerceivedCosts,
    x: f64,
) -> f64 {
    w.eval(priors.pi0 * (1.0 - x)) * costs.v00 + w.eval(priors.pi0 * x) * costs.v10
}

/// Part of the risk decided under H1, as a function of the detection
/// probability.
pub fn detection_component(
    w: &WeightFunction,
    priors: &Priors,
    costs: &PerceivedCosts,
    y: f64,
) -> f64 {
    w.eval(priors.pi1 * (1.0 - y)) * costs.v01 + w.eval(priors.pi1 * y) * costs.v11
}

pub fn risk_at(
    w: &WeightFunction,
    priors: &Priors,
    costs: &PerceivedCosts,
    point: &OperatingPoint,
) -> f64 {
    false_alarm_component(w, priors, costs, point.x)
        + detection_component(w, priors, costs, point.y)
}
