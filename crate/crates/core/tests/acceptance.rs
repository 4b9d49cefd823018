//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are pinned next to each check.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    channel_example, gaussian_example, min_error_probability, random_case_a_problem,
    random_smooth_problem, rng,
};
use ptlrt::solver::sweep_values;
use ptlrt::{
    best_lrt_risk, brute_force_oracle, estimate_operating_point, mu1_sweep, solve_optimal,
    BinaryChannelModel, Direction, GaussianLocationModel, LrtFamily, ObservationModel,
    PerceivedCosts, Problem, SolverOptions, WeightFunction,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    check(
        (got - want).abs() <= tol,
        format!("{name} = {got} not within {tol} of {want}"),
    )
}

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn err(e: ptlrt::Error) -> String {
    e.to_string()
}

fn gaussian_example_values() -> Outcome {
    let p = gaussian_example();
    let ObservationModel::Gaussian(g) = p.model else {
        unreachable!()
    };
    let lrt = best_lrt_risk(&p, LrtFamily::UpperRandomized, &opts()).map_err(err)?;
    let tau = g.observation_rule(&lrt.rule.first).threshold;
    within("best test risk", lrt.risk, 0.2864, 5e-4)?;
    within("best test threshold", tau, 1.164, 5e-3)?;
    let sol = solve_optimal(&p, &opts()).map_err(err)?;
    within("optimal risk", sol.risk, 0.2545, 5e-4)?;
    within("nu", sol.nu, 0.627, 5e-3)?;
    let upper = g.observation_rule(&sol.rule.first);
    let lower = g.observation_rule(&sol.rule.second);
    check(
        sol.rule.first.direction == Direction::Upper
            && sol.rule.second.direction == Direction::Lower,
        "mixture components are not upper/lower",
    )?;
    within("upper threshold", upper.threshold, 0.4461, 5e-3)?;
    within("lower threshold", lower.threshold, -0.4461, 5e-3)?;
    Ok(format!(
        "best test {:.4} at r>={:.4}; optimum {:.4}, nu {:.4}, thresholds {:+.4}/{:+.4}",
        lrt.risk, tau, sol.risk, sol.nu, upper.threshold, lower.threshold
    ))
}

fn sweep_crossover() -> Outcome {
    let values = sweep_values(0.05, 3.0, 0.05).map_err(err)?;
    check(values.len() == 60, format!("{} sweep values", values.len()))?;
    let rows = mu1_sweep(&gaussian_example(), &values, &opts()).map_err(err)?;
    for r in &rows {
        check(
            r.f_opt <= r.f_lrt + 1e-9,
            format!("f_opt > f_lrt at mu1 = {}", r.mu1),
        )?;
    }
    let first = rows
        .iter()
        .find(|r| r.f_opt < r.f_lrt - 1e-6)
        .ok_or("mixing never helps")?;
    // Grid values are accumulated in floating point; allow 1e-9 slack.
    check(
        (0.50 - 1e-9..=0.60 + 1e-9).contains(&first.mu1),
        format!("first strict gain at mu1 = {}", first.mu1),
    )?;
    Ok(format!(
        "first mu1 with strict gain {:.2} (gap {:.2e})",
        first.mu1,
        first.f_lrt - first.f_opt
    ))
}

fn channel_example_values() -> Outcome {
    let p = channel_example();
    let det = best_lrt_risk(&p, LrtFamily::DeterministicOnly, &opts()).map_err(err)?;
    within("deterministic risk", det.risk, -1.504, 2e-3)?;
    let sol = solve_optimal(&p, &opts()).map_err(err)?;
    within("optimal risk", sol.risk, -1.542, 2e-3)?;
    let test = if sol.nu >= 0.5 {
        sol.rule.first
    } else {
        sol.rule.second
    };
    check(
        test.direction == Direction::Upper,
        "active test is not upper",
    )?;
    within("tie probability", test.tie_prob, 0.3632, 2e-3)?;
    within("x*", sol.x_star, 0.0908, 2e-3)?;
    within("y*", sol.y_star, 0.3269, 2e-3)?;
    Ok(format!(
        "deterministic {:.4}; optimum {:.4} at ({:.4}, {:.4}), tie {:.4}",
        det.risk, sol.risk, sol.x_star, sol.y_star, test.tie_prob
    ))
}

fn case_a_is_pure() -> Outcome {
    let mut problems = vec![channel_example()];
    let mut r = rng(401);
    problems.extend((0..25).map(|_| random_case_a_problem(&mut r)));
    for p in &problems {
        check(
            ptlrt::classify_costs(&p.costs).lrt_guaranteed(),
            format!("not case A: {p:?}"),
        )?;
        check(
            p.weight.is_monotone(10_000),
            format!("weight not monotone: {p:?}"),
        )?;
        let sol = solve_optimal(p, &opts()).map_err(err)?;
        check(
            sol.nu.abs() <= 1e-6 || (sol.nu - 1.0).abs() <= 1e-6,
            format!("nu = {} for {p:?}", sol.nu),
        )?;
    }
    Ok(format!("{} problems, all nu in {{0, 1}}", problems.len()))
}

fn bayes_reduction() -> Outcome {
    let models: Vec<ObservationModel> = vec![
        GaussianLocationModel::new(0.0, 1.5, 1.0).unwrap().into(),
        GaussianLocationModel::new(0.0, 0.4, 2.0).unwrap().into(),
        BinaryChannelModel::new(0.25, 0.1).unwrap().into(),
        BinaryChannelModel::new(0.4, 0.05).unwrap().into(),
    ];
    let mut worst: f64 = 0.0;
    for model in models {
        for pi0 in [0.2, 0.5, 0.7] {
            let p = Problem::new(
                ptlrt::Priors::from_pi0(pi0).unwrap(),
                WeightFunction::Identity,
                PerceivedCosts::new(0.0, 1.0, 1.0, 0.0).unwrap(),
                model,
            )
            .map_err(err)?;
            let sol = solve_optimal(&p, &opts()).map_err(err)?;
            let want = min_error_probability(&p);
            within("Bayes risk", sol.risk, want, 1e-8)?;
            worst = worst.max((sol.risk - want).abs());
        }
    }
    Ok(format!("12 problems, max deviation {worst:.1e}"))
}

fn oracle_equivalence() -> Outcome {
    let mut problems = vec![gaussian_example(), channel_example()];
    let mut r = rng(601);
    problems.extend((0..50).map(|_| random_smooth_problem(&mut r)));
    let mut worst: f64 = 0.0;
    for p in &problems {
        let sol = solve_optimal(p, &opts()).map_err(err)?;
        let oracle = brute_force_oracle(p, 2000).map_err(err)?;
        within("oracle risk", oracle.risk, sol.risk, 5e-4)?;
        worst = worst.max((oracle.risk - sol.risk).abs());
    }
    Ok(format!(
        "{} problems, max |oracle - solver| {worst:.2e}",
        problems.len()
    ))
}

fn roc_invariants() -> Outcome {
    let models: Vec<ObservationModel> = vec![
        GaussianLocationModel::new(0.0, 1.5, 1.0).unwrap().into(),
        BinaryChannelModel::new(0.25, 0.1).unwrap().into(),
    ];
    let n = 1000;
    for m in &models {
        for i in 0..=n {
            let x = i as f64 / n as f64;
            let sym = (m.lower_roc(x) - (1.0 - m.upper_roc(1.0 - x))).abs();
            check(sym <= 1e-12, format!("symmetry off by {sym} at x = {x}"))?;
            if i > 0 && i < n {
                let (a, c) = ((i - 1) as f64 / n as f64, (i + 1) as f64 / n as f64);
                let mid = 0.5 * (m.upper_roc(a) + m.upper_roc(c));
                check(
                    m.upper_roc(x) >= mid - 1e-12,
                    format!("not concave at x = {x}"),
                )?;
            }
            for dir in [Direction::Upper, Direction::Lower] {
                let pt = m.lrt_operating_point(&m.lrt_for_false_alarm(x, dir));
                check(
                    (pt.x - x).abs() <= 1e-9 && (pt.y - m.roc(x, dir)).abs() <= 1e-9,
                    format!("round trip off at x = {x}, {dir:?}"),
                )?;
            }
        }
    }
    Ok("symmetry 1e-12, concavity, round trip 1e-9 on 1001 points, both models".into())
}

fn monte_carlo() -> Outcome {
    let p = channel_example();
    let sol = solve_optimal(&p, &opts()).map_err(err)?;
    let n = 1_000_000;
    let a = estimate_operating_point(&p.model, &sol.rule, n, 2024).map_err(err)?;
    within("x_hat", a.x_hat, 0.0908, a.x_ci_halfwidth)?;
    within("y_hat", a.y_hat, 0.3269, a.y_ci_halfwidth)?;
    let b = estimate_operating_point(&p.model, &sol.rule, n, 2024).map_err(err)?;
    check(a == b, "same seed gave different estimates")?;
    Ok(format!(
        "x_hat {:.5} +/- {:.5}, y_hat {:.5} +/- {:.5}, reproducible",
        a.x_hat, a.x_ci_halfwidth, a.y_hat, a.y_ci_halfwidth
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "1 gaussian example",
            gaussian_example_values,
            Some(Duration::from_secs(1)),
        ),
        (
            "2 sweep crossover",
            sweep_crossover,
            Some(Duration::from_secs(30)),
        ),
        (
            "3 binary channel example",
            channel_example_values,
            Some(Duration::from_secs(1)),
        ),
        ("4 case A needs no mixing", case_a_is_pure, None),
        ("5 Bayes reduction", bayes_reduction, None),
        ("6 oracle equivalence", oracle_equivalence, None),
        ("7 ROC invariants", roc_invariants, None),
        ("8 Monte Carlo", monte_carlo, None),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, budget) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} [{elapsed:.2?}]");
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
