//! Python bindings for the `ptlrt` solver.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ptlrt::{
    BinaryChannelModel, Direction, GaussianLocationModel, LrtFamily, LrtSpec, ObservationModel,
    OperatingPoint, PerceivedCosts, Priors, ProblemConfig, RandomizedRule, SolverOptions,
    WeightFunction,
};

fn py_err(e: ptlrt::Error) -> PyErr {
    match e {
        ptlrt::Error::Io(msg) => PyRuntimeError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn direction(name: &str) -> PyResult<Direction> {
    match name {
        "upper" => Ok(Direction::Upper),
        "lower" => Ok(Direction::Lower),
        other => Err(PyValueError::new_err(format!(
            "direction must be \"upper\" or \"lower\", got \"{other}\""
        ))),
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Upper => "upper",
        Direction::Lower => "lower",
    }
}

fn weight_from(alpha: Option<f64>) -> PyResult<WeightFunction> {
    match alpha {
        None => Ok(WeightFunction::Identity),
        Some(a) => WeightFunction::distortion(a).map_err(py_err),
    }
}

/// Observation model: Gaussian location or binary channel.
#[pyclass(name = "Model", frozen, from_py_object)]
#[derive(Clone)]
struct PyModel(ObservationModel);

#[pymethods]
impl PyModel {
    #[staticmethod]
    #[pyo3(signature = (mu0, mu1, sigma=1.0))]
    fn gaussian(mu0: f64, mu1: f64, sigma: f64) -> PyResult<Self> {
        let m = GaussianLocationModel::new(mu0, mu1, sigma).map_err(py_err)?;
        Ok(PyModel(m.into()))
    }

    #[staticmethod]
    fn binary_channel(lambda0: f64, lambda1: f64) -> PyResult<Self> {
        let m = BinaryChannelModel::new(lambda0, lambda1).map_err(py_err)?;
        Ok(PyModel(m.into()))
    }

    fn likelihood_ratio(&self, r: f64) -> PyResult<f64> {
        self.0.likelihood_ratio(r).map_err(py_err)
    }

    fn upper_roc(&self, x: f64) -> f64 {
        self.0.upper_roc(x)
    }

    fn lower_roc(&self, x: f64) -> f64 {
        self.0.lower_roc(x)
    }

    #[pyo3(signature = (x, direction="upper"))]
    fn lrt_for_false_alarm(&self, x: f64, direction: &str) -> PyResult<PyLrt> {
        Ok(PyLrt(
            self.0.lrt_for_false_alarm(x, self::direction(direction)?),
        ))
    }

    /// Exact `(x, y)` of a rule.
    fn operating_point_of(&self, rule: &PyRule) -> (f64, f64) {
        let p = self.0.operating_point_of(&rule.0);
        (p.x, p.y)
    }

    /// Observation threshold of a Gaussian test, `None` for the channel.
    fn observation_threshold(&self, test: &PyLrt) -> Option<f64> {
        match &self.0 {
            ObservationModel::Gaussian(g) => Some(g.observation_rule(&test.0).threshold),
            ObservationModel::BinaryChannel(_) => None,
        }
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// A single likelihood-ratio test.
#[pyclass(name = "Lrt", frozen, from_py_object)]
#[derive(Clone)]
struct PyLrt(LrtSpec);

#[pymethods]
impl PyLrt {
    #[new]
    #[pyo3(signature = (direction, lr_threshold, tie_prob=0.0))]
    fn new(direction: &str, lr_threshold: f64, tie_prob: f64) -> PyResult<Self> {
        LrtSpec::new(self::direction(direction)?, lr_threshold, tie_prob)
            .map(PyLrt)
            .map_err(py_err)
    }

    #[getter]
    fn direction(&self) -> &'static str {
        direction_name(self.0.direction)
    }

    #[getter]
    fn lr_threshold(&self) -> f64 {
        self.0.lr_threshold
    }

    #[getter]
    fn tie_prob(&self) -> f64 {
        self.0.tie_prob
    }

    fn __repr__(&self) -> String {
        format!(
            "Lrt(direction={:?}, lr_threshold={}, tie_prob={})",
            direction_name(self.0.direction),
            self.0.lr_threshold,
            self.0.tie_prob
        )
    }
}

/// Mixture of two tests: `first` with probability `nu`.
#[pyclass(name = "Rule", frozen, from_py_object)]
#[derive(Clone)]
struct PyRule(RandomizedRule);

#[pymethods]
impl PyRule {
    #[new]
    #[pyo3(signature = (first, second=None, nu=1.0))]
    fn new(first: &PyLrt, second: Option<PyLrt>, nu: f64) -> PyResult<Self> {
        let second = second.map(|s| s.0).unwrap_or(first.0);
        RandomizedRule::mixture(nu, first.0, second)
            .map(PyRule)
            .map_err(py_err)
    }

    #[getter]
    fn nu(&self) -> f64 {
        self.0.nu
    }

    #[getter]
    fn first(&self) -> PyLrt {
        PyLrt(self.0.first)
    }

    #[getter]
    fn second(&self) -> PyLrt {
        PyLrt(self.0.second)
    }

    fn accept_probability(&self, model: &PyModel, r: f64) -> PyResult<f64> {
        self.0.accept_probability(&model.0, r).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// A complete detection problem.
#[pyclass(name = "Problem", frozen, from_py_object)]
#[derive(Clone)]
struct PyProblem(ptlrt::Problem);

#[pymethods]
impl PyProblem {
    /// `costs` is `(v00, v10, v01, v11)`; `alpha=None` selects the identity
    /// weight.
    #[new]
    #[pyo3(signature = (model, pi0, costs, alpha=None))]
    fn new(
        model: &PyModel,
        pi0: f64,
        costs: (f64, f64, f64, f64),
        alpha: Option<f64>,
    ) -> PyResult<Self> {
        let priors = Priors::from_pi0(pi0).map_err(py_err)?;
        let costs = PerceivedCosts::new(costs.0, costs.1, costs.2, costs.3).map_err(py_err)?;
        ptlrt::Problem::new(priors, weight_from(alpha)?, costs, model.0)
            .map(PyProblem)
            .map_err(py_err)
    }

    #[staticmethod]
    fn from_config(path: &str) -> PyResult<Self> {
        ProblemConfig::load(std::path::Path::new(path))
            .and_then(|c| c.problem())
            .map(PyProblem)
            .map_err(py_err)
    }

    #[getter]
    fn model(&self) -> PyModel {
        PyModel(self.0.model)
    }

    fn risk_at(&self, x: f64, y: f64) -> PyResult<f64> {
        let p = OperatingPoint::new(x, y).map_err(py_err)?;
        Ok(self.0.risk_at(&p))
    }

    fn case(&self) -> &'static str {
        ptlrt::classify_costs(&self.0.costs).label()
    }
}

#[pyclass(name = "Solution", frozen, get_all)]
struct PySolution {
    x_star: f64,
    y_star: f64,
    risk: f64,
    nu: f64,
    y1_star: f64,
    y2_star: f64,
    case: &'static str,
    weight_monotone: bool,
    rule: PyRule,
}

impl From<ptlrt::Solution> for PySolution {
    fn from(s: ptlrt::Solution) -> Self {
        PySolution {
            x_star: s.x_star,
            y_star: s.y_star,
            risk: s.risk,
            nu: s.nu,
            y1_star: s.y1_star,
            y2_star: s.y2_star,
            case: s.case.label(),
            weight_monotone: s.weight_monotone,
            rule: PyRule(s.rule),
        }
    }
}

#[pymethods]
impl PySolution {
    fn __repr__(&self) -> String {
        format!(
            "Solution(x_star={}, y_star={}, risk={}, nu={}, case={:?})",
            self.x_star, self.y_star, self.risk, self.nu, self.case
        )
    }
}

/// `(mu1, f_lrt, f_opt, nu, x_star, y_star)`.
type SweepTuple = (f64, f64, f64, f64, f64, f64);

fn options(grid: Option<usize>) -> SolverOptions {
    grid.map(SolverOptions::with_grid).unwrap_or_default()
}

/// Perceived weight of probability `p`; `alpha=None` is the identity.
#[pyfunction]
#[pyo3(signature = (p, alpha=None))]
fn weight(p: f64, alpha: Option<f64>) -> PyResult<f64> {
    weight_from(alpha)?.try_eval(p).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (alpha, grid_n=1000))]
fn weight_is_monotone(alpha: f64, grid_n: usize) -> PyResult<bool> {
    Ok(weight_from(Some(alpha))?.is_monotone(grid_n))
}

#[pyfunction]
fn classify_costs(v00: f64, v10: f64, v01: f64, v11: f64) -> PyResult<&'static str> {
    let c = PerceivedCosts::new(v00, v10, v01, v11).map_err(py_err)?;
    Ok(ptlrt::classify_costs(&c).label())
}

#[pyfunction]
#[pyo3(signature = (problem, grid=None))]
fn solve_optimal(py: Python<'_>, problem: &PyProblem, grid: Option<usize>) -> PyResult<PySolution> {
    let p = problem.0;
    py.detach(|| ptlrt::solve_optimal(&p, &options(grid)))
        .map(PySolution::from)
        .map_err(py_err)
}

/// `(risk, x, y, rule)` of the best single test in `family`
/// (`"upper"`, `"lower"` or `"deterministic"`).
#[pyfunction]
#[pyo3(signature = (problem, family="upper", grid=None))]
fn best_lrt_risk(
    problem: &PyProblem,
    family: &str,
    grid: Option<usize>,
) -> PyResult<(f64, f64, f64, PyRule)> {
    let family = match family {
        "upper" => LrtFamily::UpperRandomized,
        "lower" => LrtFamily::LowerRandomized,
        "deterministic" => LrtFamily::DeterministicOnly,
        other => return Err(PyValueError::new_err(format!("unknown family \"{other}\""))),
    };
    let b = ptlrt::best_lrt_risk(&problem.0, family, &options(grid)).map_err(py_err)?;
    Ok((b.risk, b.point.x, b.point.y, PyRule(b.rule)))
}

#[pyfunction]
#[pyo3(signature = (problem, grid_n=2000))]
fn brute_force_oracle(problem: &PyProblem, grid_n: usize) -> PyResult<PySolution> {
    ptlrt::brute_force_oracle(&problem.0, grid_n)
        .map(PySolution::from)
        .map_err(py_err)
}

#[pyfunction]
fn synthesize_optimal_rule(
    model: &PyModel,
    x_star: f64,
    y_star: f64,
) -> PyResult<(PyRule, f64, f64, f64)> {
    let s = ptlrt::synthesize_optimal_rule(&model.0, x_star, y_star).map_err(py_err)?;
    Ok((PyRule(s.rule), s.nu, s.y1_star, s.y2_star))
}

/// Rows `(mu1, f_lrt, f_opt, nu, x_star, y_star)`.
#[pyfunction]
#[pyo3(signature = (problem, mu1_values, grid=None))]
fn mu1_sweep(
    py: Python<'_>,
    problem: &PyProblem,
    mu1_values: Vec<f64>,
    grid: Option<usize>,
) -> PyResult<Vec<SweepTuple>> {
    let p = problem.0;
    let rows = py
        .detach(|| ptlrt::mu1_sweep(&p, &mu1_values, &options(grid)))
        .map_err(py_err)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.mu1, r.f_lrt, r.f_opt, r.nu, r.x_star, r.y_star))
        .collect())
}

/// `(x_hat, y_hat, x_halfwidth, y_halfwidth)` from `n` draws per hypothesis.
#[pyfunction]
#[pyo3(signature = (model, rule, n, seed=1))]
fn estimate_operating_point(
    model: &PyModel,
    rule: &PyRule,
    n: u64,
    seed: u64,
) -> PyResult<(f64, f64, f64, f64)> {
    let r = ptlrt::estimate_operating_point(&model.0, &rule.0, n, seed).map_err(py_err)?;
    Ok((r.x_hat, r.y_hat, r.x_ci_halfwidth, r.y_ci_halfwidth))
}

#[pyfunction]
#[pyo3(signature = (problem, rule, n, seed=1))]
fn estimate_behavioral_risk(
    problem: &PyProblem,
    rule: &PyRule,
    n: u64,
    seed: u64,
) -> PyResult<f64> {
    let r = ptlrt::estimate_behavioral_risk(&problem.0, &rule.0, n, seed).map_err(py_err)?;
    Ok(r.risk_hat.unwrap_or(f64::NAN))
}

#[pymodule]
fn ptlrt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PyLrt>()?;
    m.add_class::<PyRule>()?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(weight, m)?)?;
    m.add_function(wrap_pyfunction!(weight_is_monotone, m)?)?;
    m.add_function(wrap_pyfunction!(classify_costs, m)?)?;
    m.add_function(wrap_pyfunction!(solve_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(best_lrt_risk, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize_optimal_rule, m)?)?;
    m.add_function(wrap_pyfunction!(mu1_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_operating_point, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_behavioral_risk, m)?)?;
    Ok(())
}
