//! Solve the Gaussian and binary-channel example problems and compare the
//! optimal rule with the best single likelihood-ratio test.
//!
//! Run with `cargo run --release --example worked_examples`.

use ptlrt::{
    best_lrt_risk, solve_optimal, BinaryChannelModel, GaussianLocationModel, LrtFamily,
    ObservationModel, PerceivedCosts, Priors, Problem, SolverOptions, WeightFunction,
};

fn report(name: &str, problem: &Problem, family: LrtFamily) -> ptlrt::Result<()> {
    let opts = SolverOptions::default();
    let sol = solve_optimal(problem, &opts)?;
    let baseline = best_lrt_risk(problem, family, &opts)?;
    println!("{name} ({})", sol.case.label());
    println!(
        "  best single test: risk {:.4} at (x, y) = ({:.4}, {:.4})",
        baseline.risk, baseline.point.x, baseline.point.y
    );
    println!(
        "  optimal rule:     risk {:.4} at (x, y) = ({:.4}, {:.4}), nu = {:.4}",
        sol.risk, sol.x_star, sol.y_star, sol.nu
    );
    for (weight, test) in [(sol.nu, sol.rule.first), (1.0 - sol.nu, sol.rule.second)] {
        if weight <= 0.0 {
            continue;
        }
        print!(
            "    {:.4} x {:?} test, lr threshold {:.4}, tie probability {:.4}",
            weight, test.direction, test.lr_threshold, test.tie_prob
        );
        if let ObservationModel::Gaussian(g) = problem.model {
            let obs = g.observation_rule(&test);
            let rel = if obs.selects_h1_above { ">=" } else { "<" };
            print!(" (H1 when r {rel} {:.4})", obs.threshold);
        }
        println!();
    }
    Ok(())
}

fn main() -> ptlrt::Result<()> {
    let gaussian = Problem::new(
        Priors::from_pi0(0.5)?,
        WeightFunction::distortion(2.0)?,
        PerceivedCosts::new(0.5, 1.2, 1.0, 0.8)?,
        GaussianLocationModel::new(0.0, 1.5, 1.0)?.into(),
    )?;
    report("Gaussian location", &gaussian, LrtFamily::UpperRandomized)?;

    let channel = Problem::new(
        Priors::from_pi0(0.5)?,
        WeightFunction::distortion(0.7)?,
        PerceivedCosts::new(-3.0, 1.5, -0.2, -1.5)?,
        BinaryChannelModel::new(0.25, 0.1)?.into(),
    )?;
    report("Binary channel", &channel, LrtFamily::DeterministicOnly)?;
    Ok(())
}
