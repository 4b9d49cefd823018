#![allow(dead_code)]

use std::path::PathBuf;

use ptlrt::{
    BinaryChannelModel, GaussianLocationModel, ObservationModel, PerceivedCosts, Priors, Problem,
    WeightFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn gaussian_example() -> Problem {
    Problem::new(
        Priors::from_pi0(0.5).unwrap(),
        WeightFunction::distortion(2.0).unwrap(),
        PerceivedCosts::new(0.5, 1.2, 1.0, 0.8).unwrap(),
        GaussianLocationModel::new(0.0, 1.5, 1.0).unwrap().into(),
    )
    .unwrap()
}

pub fn channel_example() -> Problem {
    Problem::new(
        Priors::from_pi0(0.5).unwrap(),
        WeightFunction::distortion(0.7).unwrap(),
        PerceivedCosts::new(-3.0, 1.5, -0.2, -1.5).unwrap(),
        BinaryChannelModel::new(0.25, 0.1).unwrap().into(),
    )
    .unwrap()
}

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

pub fn random_model(rng: &mut ChaCha8Rng) -> ObservationModel {
    if rng.random_bool(0.5) {
        let mu1 = rng.random_range(0.2..3.0);
        let sigma = rng.random_range(0.5..2.0);
        GaussianLocationModel::new(0.0, mu1, sigma).unwrap().into()
    } else {
        let lambda0 = rng.random_range(0.0..0.45);
        let lambda1 = rng.random_range(0.0..0.45);
        BinaryChannelModel::new(lambda0, lambda1).unwrap().into()
    }
}

/// Random problem with a monotone distortion weight.
pub fn random_problem(rng: &mut ChaCha8Rng) -> Problem {
    let model = random_model(rng);
    let costs = PerceivedCosts::new(
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
    )
    .unwrap();
    random_problem_with_costs(rng, model, costs)
}

/// Random problem whose costs have opposite signs on the false-alarm side.
pub fn random_case_a_problem(rng: &mut ChaCha8Rng) -> Problem {
    let model = random_model(rng);
    let a = rng.random_range(0.1..3.0);
    let b = rng.random_range(0.1..3.0);
    let (v00, v10) = if rng.random_bool(0.5) {
        (-a, b)
    } else {
        (a, -b)
    };
    let costs = PerceivedCosts::new(
        v00,
        v10,
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
    )
    .unwrap();
    random_problem_with_costs(rng, model, costs)
}

/// Random problem on which a 2000-step lattice resolves the optimum to a
/// few 1e-4: weight exponent at least 1 (finite slope at the endpoints),
/// moderate separations and unit-scale costs in [-1, 1].
pub fn random_smooth_problem(rng: &mut ChaCha8Rng) -> Problem {
    let model: ObservationModel = if rng.random_bool(0.5) {
        GaussianLocationModel::new(0.0, rng.random_range(0.5..2.5), 1.0)
            .unwrap()
            .into()
    } else {
        BinaryChannelModel::new(rng.random_range(0.05..0.4), rng.random_range(0.05..0.4))
            .unwrap()
            .into()
    };
    let costs = PerceivedCosts::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    )
    .unwrap();
    Problem::new(
        Priors::from_pi0(rng.random_range(0.1..0.9)).unwrap(),
        WeightFunction::distortion(rng.random_range(1.0..2.5)).unwrap(),
        costs,
        model,
    )
    .unwrap()
}

fn random_problem_with_costs(
    rng: &mut ChaCha8Rng,
    model: ObservationModel,
    costs: PerceivedCosts,
) -> Problem {
    let pi0 = rng.random_range(0.1..0.9);
    let alpha = rng.random_range(0.4..2.5);
    Problem::new(
        Priors::from_pi0(pi0).unwrap(),
        WeightFunction::distortion(alpha).unwrap(),
        costs,
        model,
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Closed-form minimum error probability with identity weight and 0/1 costs.
pub fn min_error_probability(problem: &Problem) -> f64 {
    let (pi0, pi1) = (problem.priors.pi0, problem.priors.pi1);
    match problem.model {
        ObservationModel::Gaussian(g) => {
            let d = g.separation();
            let z = (pi0 / pi1).ln() / d + d / 2.0;
            pi0 * ptlrt::models::normal::q(z) + pi1 * (1.0 - ptlrt::models::normal::q(z - d))
        }
        ObservationModel::BinaryChannel(c) => c
            .deterministic_points()
            .iter()
            .map(|p| pi0 * p.x + pi1 * (1.0 - p.y))
            .fold(f64::INFINITY, f64::min),
    }
}
