//! Command-line front end: `solve`, `sweep`, `channel-curve`, `simulate`.
//!
//! Exit codes: 0 success, 1 a Monte Carlo check failed, 2 invalid input.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::ProblemConfig;
use crate::error::{Error, Result};
use crate::format::sig;
use crate::models::ObservationModel;
use crate::montecarlo::{
    estimate_behavioral_risk, estimate_operating_point, risk_estimator_sd, SimulationReport,
};
use crate::risk::{JointProbabilities, OperatingPoint};
use crate::rules::{Direction, LrtSpec};
use crate::solver::{
    best_lrt_risk, mu1_sweep, randomized_lrt_curve, solve_optimal, sweep_values, LrtBaseline,
    LrtFamily, Problem, Solution, SolverOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ptlrt",
    version,
    about = "Optimal decision rules for prospect-theory hypothesis testing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Output file (CSV for sweep and channel-curve, report otherwise).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit JSON instead of the text report.
    #[arg(long)]
    pub json: bool,
    /// Seed for Monte Carlo runs.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Draws per Monte Carlo estimate.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    /// Grid size (solver grid, or curve points for channel-curve).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Significant digits in text and CSV output.
    #[arg(long, default_value_t = 6)]
    pub precision: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem and report the optimal rule with test baselines.
    Solve {
        config: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep a model parameter and write optimal and best-test risks as CSV.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        step: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Risk along the randomized upper tests of a binary channel.
    ChannelCurve {
        config: PathBuf,
        /// Also list the deterministic test points and their risks.
        #[arg(long)]
        corners: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve, then check the optimal rule by simulation.
    Simulate {
        config: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match dispatch(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn dispatch(command: &Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve { config, common } => cmd_solve(config, common, stdout),
        Command::Sweep {
            config,
            param,
            from,
            to,
            step,
            common,
        } => cmd_sweep(config, param, *from, *to, *step, common, stdout),
        Command::ChannelCurve {
            config,
            corners,
            common,
        } => cmd_channel_curve(config, *corners, common, stdout),
        Command::Simulate { config, common } => cmd_simulate(config, common, stdout),
    }
}

fn load(config: &Path, common: &CommonArgs) -> Result<(Problem, SolverOptions)> {
    let cfg = ProblemConfig::load(config)?;
    let problem = cfg.problem()?;
    let mut opts = cfg.solver_options()?;
    if let Some(grid) = common.grid {
        if grid < 3 {
            return Err(Error::validation("--grid", "must be at least 3"));
        }
        opts.outer_grid = grid;
        opts.inner_grid = grid;
    }
    Ok((problem, opts))
}

/// Write to `--out` when given, else to stdout.
fn emit(common: &CommonArgs, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => File::create(path)?.write_all(text.as_bytes())?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Io(e.to_string()))
}

#[derive(Debug, Clone, Serialize)]
pub struct TestReport {
    pub direction: Direction,
    pub lr_threshold: f64,
    pub tie_prob: f64,
    /// Mixture weight of this test in the optimal rule.
    pub weight: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observation_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selects_h1_above: Option<bool>,
}

impl TestReport {
    fn new(model: &ObservationModel, test: &LrtSpec, weight: f64) -> Self {
        let obs = match model {
            ObservationModel::Gaussian(g) => Some(g.observation_rule(test)),
            ObservationModel::BinaryChannel(_) => None,
        };
        TestReport {
            direction: test.direction,
            lr_threshold: test.lr_threshold,
            tie_prob: test.tie_prob,
            weight,
            observation_threshold: obs.map(|o| o.threshold),
            selects_h1_above: obs.map(|o| o.selects_h1_above),
        }
    }

    fn describe(&self, p: usize) -> String {
        let mut s = format!(
            "{:?} test: weight={} lr_threshold={} tie_prob={}",
            self.direction,
            sig(self.weight, p),
            sig(self.lr_threshold, p),
            sig(self.tie_prob, p),
        );
        if let (Some(t), Some(above)) = (self.observation_threshold, self.selects_h1_above) {
            let rel = if above { ">=" } else { "<" };
            s.push_str(&format!(" (select H1 when r {rel} {})", sig(t, p)));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BaselineReport {
    pub family: LrtFamily,
    pub risk: f64,
    pub x: f64,
    pub y: f64,
    pub test: TestReport,
}

impl BaselineReport {
    fn new(model: &ObservationModel, family: LrtFamily, b: &LrtBaseline) -> Self {
        BaselineReport {
            family,
            risk: b.risk,
            x: b.point.x,
            y: b.point.y,
            test: TestReport::new(model, &b.rule.first, 1.0),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub problem: Problem,
    pub case: String,
    pub weight_monotone: bool,
    pub solution: Solution,
    pub tests: Vec<TestReport>,
    pub baselines: Vec<BaselineReport>,
}

pub fn solve_report(problem: &Problem, opts: &SolverOptions) -> Result<SolveReport> {
    let solution = solve_optimal(problem, opts)?;
    let model = &problem.model;
    let mut tests = Vec::new();
    if solution.nu > 0.0 {
        tests.push(TestReport::new(model, &solution.rule.first, solution.nu));
    }
    if solution.nu < 1.0 {
        tests.push(TestReport::new(
            model,
            &solution.rule.second,
            1.0 - solution.nu,
        ));
    }
    let mut families = vec![LrtFamily::UpperRandomized, LrtFamily::LowerRandomized];
    if model.is_discrete() {
        families.push(LrtFamily::DeterministicOnly);
    }
    let baselines = families
        .into_iter()
        .map(|f| best_lrt_risk(problem, f, opts).map(|b| BaselineReport::new(model, f, &b)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SolveReport {
        problem: *problem,
        case: solution.case.label().to_string(),
        weight_monotone: solution.weight_monotone,
        solution,
        tests,
        baselines,
    })
}

fn render_solve(r: &SolveReport, p: usize) -> String {
    let s = &r.solution;
    let mut out = String::new();
    out.push_str(&format!("case: {}\n", r.case));
    if !r.weight_monotone {
        out.push_str("warning: weight function is not monotone\n");
    }
    out.push_str(&format!("x* = {}\n", sig(s.x_star, p)));
    out.push_str(&format!("y* = {}\n", sig(s.y_star, p)));
    out.push_str(&format!("risk = {}\n", sig(s.risk, p)));
    out.push_str(&format!("nu = {}\n", sig(s.nu, p)));
    out.push_str(&format!(
        "y1* = {} (upper test), y2* = {} (lower test)\n",
        sig(s.y1_star, p),
        sig(s.y2_star, p)
    ));
    for t in &r.tests {
        out.push_str(&t.describe(p));
        out.push('\n');
    }
    for b in &r.baselines {
        let name = serde_json::to_value(b.family)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        out.push_str(&format!(
            "baseline {name}: risk = {} at x = {}, y = {}; {}\n",
            sig(b.risk, p),
            sig(b.x, p),
            sig(b.y, p),
            b.test.describe(p)
        ));
    }
    out
}

pub fn cmd_solve(config: &Path, common: &CommonArgs, stdout: &mut dyn Write) -> Result<i32> {
    let (problem, opts) = load(config, common)?;
    let report = solve_report(&problem, &opts)?;
    let text = if common.json {
        to_json(&report)?
    } else {
        render_solve(&report, common.precision)
    };
    emit(common, stdout, &text)?;
    Ok(EXIT_OK)
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn write_csv<W: Write>(w: W, header: &[&str], rows: &[Vec<f64>], p: usize) -> Result<()> {
    let mut wtr = csv_writer(w);
    wtr.write_record(header).map_err(csv_error)?;
    for row in rows {
        wtr.write_record(row.iter().map(|&v| sig(v, p)))
            .map_err(csv_error)?;
    }
    wtr.flush()?;
    Ok(())
}

fn write_table(
    common: &CommonArgs,
    stdout: &mut dyn Write,
    header: &[&str],
    rows: &[Vec<f64>],
) -> Result<()> {
    match &common.out {
        Some(path) => write_csv(File::create(path)?, header, rows, common.precision),
        None => write_csv(stdout, header, rows, common.precision),
    }
}

pub const SWEEP_HEADER: [&str; 6] = ["mu1", "f_lrt", "f_opt", "nu", "x_star", "y_star"];
pub const CURVE_HEADER: [&str; 3] = ["x", "risk_randomized_lrt", "y_on_upper_roc"];

pub fn cmd_sweep(
    config: &Path,
    param: &str,
    from: f64,
    to: f64,
    step: f64,
    common: &CommonArgs,
    stdout: &mut dyn Write,
) -> Result<i32> {
    if param != "mu1" {
        return Err(Error::validation(
            "--param",
            format!("unsupported parameter \"{param}\"; only mu1"),
        ));
    }
    let (problem, opts) = load(config, common)?;
    let values = sweep_values(from, to, step)?;
    let rows = mu1_sweep(&problem, &values, &opts)?;
    let table: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| vec![r.mu1, r.f_lrt, r.f_opt, r.nu, r.x_star, r.y_star])
        .collect();
    write_table(common, stdout, &SWEEP_HEADER, &table)?;
    if common.json {
        stdout.write_all(to_json(&rows)?.as_bytes())?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize)]
struct CurveSummary {
    curve_min_risk: f64,
    curve_min_x: f64,
    corners: Vec<(f64, f64, f64)>,
}

pub fn cmd_channel_curve(
    config: &Path,
    corners: bool,
    common: &CommonArgs,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let cfg = ProblemConfig::load(config)?;
    let problem = cfg.problem()?;
    let ObservationModel::BinaryChannel(channel) = problem.model else {
        return Err(Error::validation(
            "model.kind",
            "channel-curve requires a binary_channel model",
        ));
    };
    let points = common.grid.unwrap_or(1001);
    let curve = randomized_lrt_curve(&problem, points)?;
    let table: Vec<Vec<f64>> = curve.iter().map(|&(x, r, y)| vec![x, r, y]).collect();
    write_table(common, stdout, &CURVE_HEADER, &table)?;

    let corner_rows: Vec<(f64, f64, f64)> = channel
        .deterministic_points()
        .iter()
        .map(|pt| (pt.x, pt.y, problem.risk_at(pt)))
        .collect();
    if common.json {
        let (curve_min_x, curve_min_risk) =
            curve
                .iter()
                .fold((f64::NAN, f64::INFINITY), |acc, &(x, r, _)| {
                    if r < acc.1 {
                        (x, r)
                    } else {
                        acc
                    }
                });
        let summary = CurveSummary {
            curve_min_risk,
            curve_min_x,
            corners: if corners { corner_rows } else { Vec::new() },
        };
        stdout.write_all(to_json(&summary)?.as_bytes())?;
    } else if corners {
        if common.out.is_none() {
            stdout.write_all(b"\n")?;
        }
        let rows: Vec<Vec<f64>> = corner_rows.iter().map(|&(x, y, r)| vec![x, y, r]).collect();
        write_csv(&mut *stdout, &["x", "y", "risk"], &rows, common.precision)?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub analytic: f64,
    pub estimate: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, analytic: f64, estimate: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            analytic,
            estimate,
            tolerance,
            pass: (estimate - analytic).abs() <= tolerance + 1e-12,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateReport {
    pub solution: Solution,
    pub operating_point: SimulationReport,
    pub risk: SimulationReport,
    pub checks: Vec<Check>,
    pub pass: bool,
}

pub fn simulate_report(
    problem: &Problem,
    opts: &SolverOptions,
    n: u64,
    seed: u64,
) -> Result<SimulateReport> {
    let solution = solve_optimal(problem, opts)?;
    let op = estimate_operating_point(&problem.model, &solution.rule, n, seed)?;
    let risk = estimate_behavioral_risk(problem, &solution.rule, n, seed)?;
    // Analytic operating point of the synthesized rule.
    let exact = problem.model.operating_point_of(&solution.rule);
    let joints = JointProbabilities::from_operating_point(
        &problem.priors,
        &OperatingPoint {
            x: exact.x,
            y: exact.y,
        },
    );
    let risk_sd = risk_estimator_sd(problem, &joints, n);
    let checks = vec![
        Check::new("false_alarm", exact.x, op.x_hat, op.x_ci_halfwidth),
        Check::new("detection", exact.y, op.y_hat, op.y_ci_halfwidth),
        Check::new(
            "behavioral_risk",
            problem.risk_at(&exact),
            risk.risk_hat.unwrap_or(f64::NAN),
            3.0 * risk_sd,
        ),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(SimulateReport {
        solution,
        operating_point: op,
        risk,
        checks,
        pass,
    })
}

fn render_simulate(r: &SimulateReport, n: u64, p: usize) -> String {
    let mut out = format!(
        "seed = {}, n = {n}\nx* = {}, y* = {}, risk = {}, nu = {}\n",
        r.operating_point.seed,
        sig(r.solution.x_star, p),
        sig(r.solution.y_star, p),
        sig(r.solution.risk, p),
        sig(r.solution.nu, p),
    );
    for c in &r.checks {
        out.push_str(&format!(
            "{}: analytic = {}, estimate = {}, tolerance = {} {}\n",
            c.name,
            sig(c.analytic, p),
            sig(c.estimate, p),
            sig(c.tolerance, p),
            if c.pass { "PASS" } else { "FAIL" }
        ));
    }
    out.push_str(if r.pass {
        "overall: PASS\n"
    } else {
        "overall: FAIL\n"
    });
    out
}

pub fn cmd_simulate(config: &Path, common: &CommonArgs, stdout: &mut dyn Write) -> Result<i32> {
    let (problem, opts) = load(config, common)?;
    let report = simulate_report(&problem, &opts, common.n, common.seed)?;
    let text = if common.json {
        to_json(&report)?
    } else {
        render_simulate(&report, common.n, common.precision)
    };
    emit(common, stdout, &text)?;
    Ok(if report.pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

/// Entry point used by the binary.
pub fn main_with_io() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
