//! Optimal decision rules for binary hypothesis testing with a
//! prospect-theory decision-maker.
//!
//! The decision-maker distorts probabilities through a weight function and
//! perceives costs `v_ij`. Its behavioral risk depends on a rule only through
//! the rule's false-alarm and detection probabilities, so the optimum is
//! found over the achievable operating-point region and realized as a
//! mixture of at most two likelihood-ratio tests.
//!
//! ```
//! use ptlrt::{solve_optimal, GaussianLocationModel, PerceivedCosts, Priors, Problem,
//!             SolverOptions, WeightFunction};
//!
//! let problem = Problem::new(
//!     Priors::from_pi0(0.5).unwrap(),
//!     WeightFunction::distortion(2.0).unwrap(),
//!     PerceivedCosts::new(0.5, 1.2, 1.0, 0.8).unwrap(),
//!     GaussianLocationModel::new(0.0, 1.5, 1.0).unwrap().into(),
//! ).unwrap();
//! let sol = solve_optimal(&problem, &SolverOptions::default()).unwrap();
//! assert!((sol.risk - 0.2545).abs() < 5e-4);
//! ```

pub mod cli;
pub mod config;
pub mod error;
pub mod format;
pub mod models;
pub mod montecarlo;
pub mod risk;
pub mod rules;
mod search;
pub mod solver;
pub mod weighting;

pub use config::ProblemConfig;
pub use error::{Error, Result};
pub use models::{BinaryChannelModel, GaussianLocationModel, Hypothesis, ObservationModel};
pub use montecarlo::{estimate_behavioral_risk, estimate_operating_point, SimulationReport};
pub use risk::{
    behavioral_risk_joint, classify_costs, detection_component, false_alarm_component, risk_at,
    JointProbabilities, OperatingPoint, PerceivedCosts, Priors, Prop1Case,
};
pub use rules::{Direction, LrtSpec, RandomizedRule};
pub use solver::{
    best_lrt_risk, brute_force_oracle, mu1_sweep, solve_optimal, synthesize_optimal_rule,
    LrtBaseline, LrtFamily, Problem, Solution, SolverOptions, SweepRow, SynthesizedRule,
};
pub use weighting::WeightFunction;
