//! Problem configuration files.
//!
//! A config is a TOML document with `model`, `priors`, `weight` and `costs`
//! tables and an optional `solver` table:
//!
//! ```toml
//! [model]
//! kind = "gaussian"      # or "binary_channel" with lambda0, lambda1
//! mu0 = 0.0
//! mu1 = 1.5
//! sigma = 1.0
//!
//! [priors]
//! pi0 = 0.5              # pi1 = 1 - pi0
//!
//! [weight]
//! kind = "distortion"    # or "identity"
//! alpha = 2.0
//!
//! [costs]
//! v00 = 0.5
//! v10 = 1.2
//! v01 = 1.0
//! v11 = 0.8
//!
//! [solver]
//! grid = 2001
//! tolerance = 1e-9
//! ```
//!
//! Validation errors name the offending field, e.g. `priors.pi0`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{BinaryChannelModel, GaussianLocationModel, ObservationModel};
use crate::risk::{PerceivedCosts, Priors};
use crate::solver::{Problem, SolverOptions};
use crate::weighting::WeightFunction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub model: ModelSection,
    pub priors: PriorsSection,
    pub weight: WeightSection,
    pub costs: CostsSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorsSection {
    pub pi0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSection {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostsSection {
    pub v00: f64,
    pub v10: f64,
    pub v01: f64,
    pub v11: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

fn required(value: Option<f64>, field: &str) -> Result<f64> {
    value.ok_or_else(|| Error::validation(field, "missing"))
}

fn forbid(value: Option<f64>, field: &str, kind: &str) -> Result<()> {
    match value {
        Some(_) => Err(Error::validation(
            field,
            format!("not used by model kind \"{kind}\""),
        )),
        None => Ok(()),
    }
}

impl ProblemConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn model(&self) -> Result<ObservationModel> {
        let m = &self.model;
        match m.kind.as_str() {
            "gaussian" => {
                forbid(m.lambda0, "model.lambda0", "gaussian")?;
                forbid(m.lambda1, "model.lambda1", "gaussian")?;
                let g = GaussianLocationModel::new(
                    required(m.mu0, "model.mu0")?,
                    required(m.mu1, "model.mu1")?,
                    required(m.sigma, "model.sigma")?,
                )?;
                Ok(g.into())
            }
            "binary_channel" => {
                forbid(m.mu0, "model.mu0", "binary_channel")?;
                forbid(m.mu1, "model.mu1", "binary_channel")?;
                forbid(m.sigma, "model.sigma", "binary_channel")?;
                let c = BinaryChannelModel::new(
                    required(m.lambda0, "model.lambda0")?,
                    required(m.lambda1, "model.lambda1")?,
                )?;
                Ok(c.into())
            }
            other => Err(Error::validation(
                "model.kind",
                format!("expected \"gaussian\" or \"binary_channel\", got \"{other}\""),
            )),
        }
    }

    pub fn weight(&self) -> Result<WeightFunction> {
        match self.weight.kind.as_str() {
            "identity" => {
                forbid(self.weight.alpha, "weight.alpha", "identity")?;
                Ok(WeightFunction::Identity)
            }
            "distortion" => {
                WeightFunction::distortion(required(self.weight.alpha, "weight.alpha")?)
            }
            other => Err(Error::validation(
                "weight.kind",
                format!("expected \"identity\" or \"distortion\", got \"{other}\""),
            )),
        }
    }

    pub fn problem(&self) -> Result<Problem> {
        let pi0 = self.priors.pi0;
        if !(0.0..=1.0).contains(&pi0) {
            return Err(Error::validation(
                "priors.pi0",
                format!("must lie in [0, 1], got {pi0}"),
            ));
        }
        let c = &self.costs;
        Problem::new(
            Priors::from_pi0(pi0)?,
            self.weight()?,
            PerceivedCosts::new(c.v00, c.v10, c.v01, c.v11)?,
            self.model()?,
        )
    }

    pub fn solver_options(&self) -> Result<SolverOptions> {
        let mut opts = SolverOptions::default();
        if let Some(s) = &self.solver {
            if let Some(grid) = s.grid {
                if grid < 3 {
                    return Err(Error::validation("solver.grid", "must be at least 3"));
                }
                opts.outer_grid = grid;
                opts.inner_grid = grid;
            }
            if let Some(tol) = s.tolerance {
                if !(tol > 0.0 && tol.is_finite()) {
                    return Err(Error::validation("solver.tolerance", "must be positive"));
                }
                opts.tolerance = tol;
            }
        }
        Ok(opts)
    }

    /// Config describing an existing problem.
    pub fn from_problem(problem: &Problem) -> Self {
        let mut model = ModelSection {
            kind: String::new(),
            mu0: None,
            mu1: None,
            sigma: None,
            lambda0: None,
            lambda1: None,
        };
        match problem.model {
            ObservationModel::Gaussian(g) => {
                model.kind = "gaussian".into();
                model.mu0 = Some(g.mu0);
                model.mu1 = Some(g.mu1);
                model.sigma = Some(g.sigma);
            }
            ObservationModel::BinaryChannel(c) => {
                model.kind = "binary_channel".into();
                model.lambda0 = Some(c.lambda0);
                model.lambda1 = Some(c.lambda1);
            }
        }
        let weight = match problem.weight {
            WeightFunction::Identity => WeightSection {
                kind: "identity".into(),
                alpha: None,
            },
            WeightFunction::Distortion { alpha } => WeightSection {
                kind: "distortion".into(),
                alpha: Some(alpha),
            },
        };
        let c = problem.costs;
        ProblemConfig {
            model,
            priors: PriorsSection {
                pi0: problem.priors.pi0,
            },
            weight,
            costs: CostsSection {
                v00: c.v00,
                v10: c.v10,
                v01: c.v01,
                v11: c.v11,
            },
            solver: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAUSSIAN: &str = r#"
[model]
kind = "gaussian"
mu0 = 0.0
mu1 = 1.5
sigma = 1.0

[priors]
pi0 = 0.5

[weight]
kind = "distortion"
alpha = 2.0

[costs]
v00 = 0.5
v10 = 1.2
v01 = 1.0
v11 = 0.8
"#;

    fn field_of(err: Error) -> String {
        match err {
            Error::Validation { field, .. } => field,
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn parses_gaussian_example() {
        let cfg = ProblemConfig::parse(GAUSSIAN).unwrap();
        let p = cfg.problem().unwrap();
        assert_eq!(p.priors.pi1, 0.5);
        assert_eq!(p.weight.alpha(), Some(2.0));
        assert!(matches!(p.model, ObservationModel::Gaussian(_)));
        assert_eq!(cfg.solver_options().unwrap(), SolverOptions::default());
    }

    #[test]
    fn bad_prior_names_field() {
        let text = GAUSSIAN.replace("pi0 = 0.5", "pi0 = 1.2");
        let err = ProblemConfig::parse(&text).unwrap().problem().unwrap_err();
        assert_eq!(field_of(err), "priors.pi0");
    }

    #[test]
    fn missing_and_foreign_fields() {
        let text = GAUSSIAN.replace("sigma = 1.0\n", "");
        let err = ProblemConfig::parse(&text).unwrap().problem().unwrap_err();
        assert_eq!(field_of(err), "model.sigma");

        let text = GAUSSIAN.replace("sigma = 1.0", "sigma = 1.0\nlambda0 = 0.2");
        let err = ProblemConfig::parse(&text).unwrap().problem().unwrap_err();
        assert_eq!(field_of(err), "model.lambda0");

        let text = GAUSSIAN.replace("kind = \"gaussian\"", "kind = \"poisson\"");
        let err = ProblemConfig::parse(&text).unwrap().problem().unwrap_err();
        assert_eq!(field_of(err), "model.kind");
    }

    #[test]
    fn unknown_key_is_a_config_error() {
        let text = GAUSSIAN.replace("[priors]", "[priors]\npi2 = 0.1");
        assert!(matches!(ProblemConfig::parse(&text), Err(Error::Config(_))));
    }

    #[test]
    fn channel_constraint() {
        let text = r#"
[model]
kind = "binary_channel"
lambda0 = 0.6
lambda1 = 0.5
[priors]
pi0 = 0.5
[weight]
kind = "identity"
[costs]
v00 = 0.0
v10 = 1.0
v01 = 1.0
v11 = 0.0
"#;
        let err = ProblemConfig::parse(text).unwrap().problem().unwrap_err();
        assert_eq!(field_of(err), "model.lambda1");
    }

    #[test]
    fn from_problem_round_trips() {
        let cfg = ProblemConfig::parse(GAUSSIAN).unwrap();
        let p = cfg.problem().unwrap();
        assert_eq!(ProblemConfig::from_problem(&p).problem().unwrap(), p);
    }
}
