mod common;

use common::{channel_example, gaussian_example};
use ptlrt::montecarlo::risk_estimator_sd;
use ptlrt::{
    estimate_behavioral_risk, estimate_operating_point, solve_optimal, JointProbabilities,
    SolverOptions,
};

#[test]
fn estimates_shrink_with_sample_size() {
    let p = gaussian_example();
    let sol = solve_optimal(&p, &SolverOptions::default()).unwrap();
    let exact = p.model.operating_point_of(&sol.rule);
    let halfwidths: Vec<f64> = [10_000u64, 100_000, 1_000_000]
        .iter()
        .map(|&n| {
            let r = estimate_operating_point(&p.model, &sol.rule, n, 5).unwrap();
            assert!((r.x_hat - exact.x).abs() <= r.x_ci_halfwidth);
            assert!((r.y_hat - exact.y).abs() <= r.y_ci_halfwidth);
            r.x_ci_halfwidth
        })
        .collect();
    // Each tenfold increase in n narrows the interval by sqrt(10).
    for pair in halfwidths.windows(2) {
        assert!(
            (pair[0] / pair[1] - 10f64.sqrt()).abs() < 0.05,
            "{halfwidths:?}"
        );
    }
}

#[test]
fn risk_estimate_is_within_three_sigma() {
    for p in [gaussian_example(), channel_example()] {
        let sol = solve_optimal(&p, &SolverOptions::default()).unwrap();
        let n = 400_000;
        let r = estimate_behavioral_risk(&p, &sol.rule, n, 9).unwrap();
        let exact = p.model.operating_point_of(&sol.rule);
        let joints = JointProbabilities::from_operating_point(&p.priors, &exact);
        let sd = risk_estimator_sd(&p, &joints, n);
        let risk_hat = r.risk_hat.unwrap();
        assert!(
            (risk_hat - p.risk_at(&exact)).abs() <= 3.0 * sd,
            "{risk_hat} vs {}",
            sol.risk
        );
    }
}

#[test]
fn same_seed_same_report_different_seed_different_counts() {
    let p = channel_example();
    let sol = solve_optimal(&p, &SolverOptions::default()).unwrap();
    let a = estimate_operating_point(&p.model, &sol.rule, 150_000, 3).unwrap();
    let b = estimate_operating_point(&p.model, &sol.rule, 150_000, 3).unwrap();
    let c = estimate_operating_point(&p.model, &sol.rule, 150_000, 4).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.x_hat, c.x_hat);
}
