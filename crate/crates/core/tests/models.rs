mod common;

use approx::assert_abs_diff_eq;
use ptlrt::models::normal::{q, q_inv};
use ptlrt::{
    BinaryChannelModel, Direction, GaussianLocationModel, ObservationModel, RandomizedRule,
};

fn models() -> Vec<ObservationModel> {
    vec![
        GaussianLocationModel::new(0.0, 1.5, 1.0).unwrap().into(),
        GaussianLocationModel::new(2.0, -1.0, 3.0).unwrap().into(),
        BinaryChannelModel::new(0.25, 0.1).unwrap().into(),
        BinaryChannelModel::new(0.0, 0.3).unwrap().into(),
    ]
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |i| i as f64 / n as f64)
}

#[test]
fn lower_roc_is_point_reflection_of_upper() {
    for m in models() {
        for x in grid(1000) {
            let lhs = m.lower_roc(x);
            let rhs = 1.0 - m.upper_roc(1.0 - x);
            assert!((lhs - rhs).abs() <= 1e-12, "{m:?} x={x}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn upper_roc_dominates_diagonal_and_lower_roc() {
    for m in models() {
        for x in grid(1000) {
            assert!(m.upper_roc(x) >= x - 1e-12);
            assert!(m.lower_roc(x) <= x + 1e-12);
        }
    }
}

#[test]
fn upper_roc_is_midpoint_concave() {
    for m in models() {
        let n = 1000;
        for i in 1..n {
            let (a, b, c) = (
                (i - 1) as f64 / n as f64,
                i as f64 / n as f64,
                (i + 1) as f64 / n as f64,
            );
            let mid = 0.5 * (m.upper_roc(a) + m.upper_roc(c));
            assert!(m.upper_roc(b) >= mid - 1e-12, "{m:?} at {b}");
        }
    }
}

#[test]
fn lrt_round_trip_reproduces_operating_point() {
    for m in models() {
        for x in grid(1000) {
            for dir in [Direction::Upper, Direction::Lower] {
                let test = m.lrt_for_false_alarm(x, dir);
                let p = m.lrt_operating_point(&test);
                assert!((p.x - x).abs() <= 1e-9, "{m:?} {dir:?} x={x} got {}", p.x);
                assert!((p.y - m.roc(x, dir)).abs() <= 1e-9, "{m:?} {dir:?} x={x}");
            }
        }
    }
}

#[test]
fn channel_corners() {
    let m: ObservationModel = BinaryChannelModel::new(0.25, 0.1).unwrap().into();
    assert_abs_diff_eq!(m.upper_roc(0.25), 0.9, epsilon = 1e-12);
    assert_abs_diff_eq!(m.upper_roc(0.0), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(m.upper_roc(1.0), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(m.lower_roc(0.75), 0.1, epsilon = 1e-12);
    let ObservationModel::BinaryChannel(c) = m else {
        unreachable!()
    };
    let pts = c.deterministic_points();
    let mut xy: Vec<(f64, f64)> = pts.iter().map(|p| (p.x, p.y)).collect();
    xy.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    assert_eq!(xy, vec![(0.0, 0.0), (0.25, 0.9), (1.0, 1.0)]);
}

#[test]
fn channel_likelihood_ratios() {
    let c = BinaryChannelModel::new(0.25, 0.1).unwrap();
    assert_abs_diff_eq!(c.likelihood_ratio_bit(0), 0.1 / 0.75, epsilon = 1e-15);
    assert_abs_diff_eq!(c.likelihood_ratio_bit(1), 3.6, epsilon = 1e-12);
    let perfect = BinaryChannelModel::new(0.0, 0.1).unwrap();
    assert!(perfect.likelihood_ratio_bit(1).is_infinite());
}

#[test]
fn channel_test_for_small_false_alarm_randomizes_at_the_one_bit() {
    let m: ObservationModel = BinaryChannelModel::new(0.25, 0.1).unwrap().into();
    let test = m.lrt_for_false_alarm(0.0908, Direction::Upper);
    assert_abs_diff_eq!(test.lr_threshold, 3.6, epsilon = 1e-9);
    assert_abs_diff_eq!(test.tie_prob, 0.0908 / 0.25, epsilon = 1e-12);
    let p = m.operating_point_of(&RandomizedRule::pure(test));
    assert_abs_diff_eq!(p.y, 0.9 * 0.0908 / 0.25, epsilon = 1e-12);
}

#[test]
fn gaussian_test_threshold_matches_observation_space() {
    let g = GaussianLocationModel::new(0.0, 1.5, 1.0).unwrap();
    let m: ObservationModel = g.into();
    let test = m.lrt_for_false_alarm(q(1.164), Direction::Upper);
    let obs = g.observation_rule(&test);
    assert_abs_diff_eq!(obs.threshold, 1.164, epsilon = 1e-9);
    assert!(obs.selects_h1_above);
    let lower = m.lrt_for_false_alarm(q(1.164), Direction::Lower);
    let obs = g.observation_rule(&lower);
    assert!(!obs.selects_h1_above);
    assert_abs_diff_eq!(obs.threshold, -1.164, epsilon = 1e-9);
}

#[test]
fn gaussian_roc_matches_q_shift() {
    let m: ObservationModel = GaussianLocationModel::new(1.0, 3.0, 2.0).unwrap().into();
    for x in [1e-6, 0.01, 0.3, 0.5, 0.9] {
        assert_abs_diff_eq!(m.upper_roc(x), q(q_inv(x) - 1.0), epsilon = 1e-13);
    }
}
