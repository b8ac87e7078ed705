//! Python bindings: scenario configs, episode runs, trajectory export, and
//! the affect mapping functions.

use pyo3::exceptions::{PyIOError, PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use affect_engine::affect::{self, AffectConfig, DEFAULT_NEUTRAL_RADIUS};
use affect_engine::io;
use affect_engine::scenario::{self, Outcome};
use affect_engine::{Error, SelectionMode};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io { .. } => PyIOError::new_err(err.to_string()),
        Error::Suite { .. } => PyRuntimeError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

#[pyclass(name = "Categorical", module = "affect_engine_py", from_py_object)]
#[derive(Clone)]
struct PyCategorical(affect_engine::Categorical);

#[pymethods]
impl PyCategorical {
    /// Normalizes non-negative weights.
    #[new]
    fn new(weights: Vec<f64>) -> PyResult<Self> {
        affect_engine::Categorical::normalize(&weights)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn uniform(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("n must be positive"));
        }
        Ok(Self(affect_engine::Categorical::uniform(n)))
    }

    #[staticmethod]
    #[pyo3(signature = (values, precision = 1.0))]
    fn softmax(values: Vec<f64>, precision: f64) -> PyResult<Self> {
        affect_engine::Categorical::softmax(&values, precision)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn probs(&self) -> Vec<f64> {
        self.0.probs().to_vec()
    }

    fn entropy(&self) -> f64 {
        self.0.entropy()
    }

    fn kl_divergence(&self, other: &PyCategorical) -> PyResult<f64> {
        if other.0.len() != self.0.len() {
            return Err(PyValueError::new_err("distributions differ in length"));
        }
        Ok(self.0.kl_divergence(&other.0))
    }

    fn argmax(&self) -> usize {
        self.0.argmax()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Categorical({:?})", self.0.probs())
    }
}

#[pyclass(name = "ScenarioConfig", module = "affect_engine_py", from_py_object)]
#[derive(Clone)]
struct PyScenarioConfig(scenario::ScenarioConfig);

#[pymethods]
impl PyScenarioConfig {
    /// The built-in config for scenario 1-5.
    #[staticmethod]
    fn preset(id: u8) -> PyResult<Self> {
        scenario::ScenarioConfig::preset(id)
            .map(Self)
            .map_err(to_py)
    }

    /// Parses one config object; omitted fields take preset defaults.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let mut configs = io::parse_config_str(text).map_err(to_py)?;
        if configs.len() != 1 {
            return Err(PyValueError::new_err(format!(
                "expected one config, got {}",
                configs.len()
            )));
        }
        Ok(Self(configs.remove(0)))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn scenario_id(&self) -> Option<u8> {
        self.0.scenario_id
    }

    #[getter]
    fn object_location(&self) -> Option<usize> {
        self.0.object_location
    }

    #[getter]
    fn prior_location(&self) -> Option<usize> {
        self.0.prior_location
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    #[setter]
    fn set_seed(&mut self, seed: u64) {
        self.0.seed = seed;
    }

    #[getter]
    fn horizon(&self) -> usize {
        self.0.horizon
    }

    #[setter]
    fn set_horizon(&mut self, horizon: usize) -> PyResult<()> {
        let mut next = self.0.clone();
        next.horizon = horizon;
        next.validate().map_err(to_py)?;
        self.0 = next;
        Ok(())
    }

    #[getter]
    fn max_steps(&self) -> usize {
        self.0.max_steps
    }

    #[setter]
    fn set_max_steps(&mut self, max_steps: usize) -> PyResult<()> {
        let mut next = self.0.clone();
        next.max_steps = max_steps;
        next.validate().map_err(to_py)?;
        self.0 = next;
        Ok(())
    }

    #[getter]
    fn policy_precision(&self) -> f64 {
        self.0.policy_precision
    }

    #[setter]
    fn set_policy_precision(&mut self, precision: f64) -> PyResult<()> {
        let mut next = self.0.clone();
        next.policy_precision = precision;
        next.validate().map_err(to_py)?;
        self.0 = next;
        Ok(())
    }

    /// `"argmax"` or `"sample"`.
    #[getter]
    fn selection(&self) -> &'static str {
        match self.0.selection {
            SelectionMode::Argmax => "argmax",
            SelectionMode::Sample => "sample",
        }
    }

    #[setter]
    fn set_selection(&mut self, mode: &str) -> PyResult<()> {
        self.0.selection = match mode {
            "argmax" => SelectionMode::Argmax,
            "sample" => SelectionMode::Sample,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown selection mode {other:?}"
                )))
            }
        };
        Ok(())
    }

    fn name(&self) -> String {
        self.0.name()
    }

    fn __repr__(&self) -> String {
        format!("ScenarioConfig({})", self.0.name())
    }
}

#[pyclass(
    name = "TrajectoryLog",
    module = "affect_engine_py",
    skip_from_py_object
)]
struct PyTrajectoryLog(scenario::TrajectoryLog);

#[pymethods]
impl PyTrajectoryLog {
    #[getter]
    fn config(&self) -> PyScenarioConfig {
        PyScenarioConfig(self.0.config.clone())
    }

    /// `"found"` or `"exhausted"`.
    #[getter]
    fn outcome(&self) -> &'static str {
        match self.0.outcome {
            Outcome::Found => "found",
            Outcome::Exhausted => "exhausted",
        }
    }

    fn labels(&self) -> Vec<&'static str> {
        self.0.labels().into_iter().map(|l| l.as_str()).collect()
    }

    /// One step as a dict of plain Python values.
    fn step<'py>(&self, py: Python<'py>, index: usize) -> PyResult<Bound<'py, PyDict>> {
        let s = self
            .0
            .steps
            .get(index)
            .ok_or_else(|| PyIndexError::new_err(format!("step {index} out of range")))?;
        let a = &s.affect;
        let d = PyDict::new(py);
        d.set_item("t", s.t)?;
        d.set_item("agent_location", s.agent_location)?;
        d.set_item("action", s.action)?;
        d.set_item("visibility", s.observation.visibility.as_str())?;
        d.set_item("object_belief", s.object_belief.probs().to_vec())?;
        d.set_item("free_energy", s.free_energy.total)?;
        d.set_item("selected_policy_g", s.selected_policy_g)?;
        d.set_item("utility", a.utility)?;
        d.set_item("expected_utility", a.expected_utility)?;
        d.set_item("valence_raw", a.valence_raw)?;
        d.set_item("arousal_raw", a.arousal_raw)?;
        d.set_item("valence_norm", a.valence_norm)?;
        d.set_item("arousal_norm", a.arousal_norm)?;
        d.set_item("radius", a.radius)?;
        d.set_item("angle_deg", a.angle_deg)?;
        d.set_item("label", a.label.as_str())?;
        Ok(d)
    }

    fn to_csv(&self) -> String {
        io::render_csv(&self.0)
    }

    fn to_json(&self) -> PyResult<String> {
        io::render_json(&self.0).map_err(to_py)
    }

    fn to_svg(&self) -> String {
        io::render_circumplex_svg(&self.0)
    }

    fn __len__(&self) -> usize {
        self.0.steps.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "TrajectoryLog({}, {} steps, {})",
            self.0.config.name(),
            self.0.steps.len(),
            self.outcome()
        )
    }
}

/// Runs one episode. The GIL is released while it runs.
#[pyfunction]
fn run_scenario(py: Python<'_>, config: PyScenarioConfig) -> PyResult<PyTrajectoryLog> {
    py.detach(|| scenario::run_config(&config.0))
        .map(PyTrajectoryLog)
        .map_err(to_py)
}

/// Runs several episodes in parallel; fails if any of them fails.
#[pyfunction]
fn run_suite(py: Python<'_>, configs: Vec<PyScenarioConfig>) -> PyResult<Vec<PyTrajectoryLog>> {
    let configs: Vec<_> = configs.into_iter().map(|c| c.0).collect();
    py.detach(|| scenario::run_suite(&configs))
        .map(|logs| logs.into_iter().map(PyTrajectoryLog).collect())
        .map_err(to_py)
}

#[pyfunction]
fn presets() -> Vec<PyScenarioConfig> {
    scenario::ScenarioConfig::presets()
        .into_iter()
        .map(PyScenarioConfig)
        .collect()
}

/// Parses a config file's text (one object or an array).
#[pyfunction]
fn parse_config(text: &str) -> PyResult<Vec<PyScenarioConfig>> {
    io::parse_config_str(text)
        .map(|cs| cs.into_iter().map(PyScenarioConfig).collect())
        .map_err(to_py)
}

#[pyfunction]
fn valence(utility: f64, expected_utility: f64) -> f64 {
    affect::valence(utility, expected_utility)
}

/// `E_Q[ln C]` for a predictive distribution and preference vector.
#[pyfunction]
fn expected_utility(predictive: &PyCategorical, preferences: &PyCategorical) -> PyResult<f64> {
    affect::expected_utility(&predictive.0, &preferences.0).map_err(to_py)
}

/// `(radius, angle_deg)` of a normalized (valence, arousal) point.
#[pyfunction]
fn to_polar(valence: f64, arousal: f64) -> (f64, f64) {
    affect::to_polar(valence, arousal)
}

#[pyfunction]
#[pyo3(signature = (radius, angle_deg, neutral_radius = DEFAULT_NEUTRAL_RADIUS))]
fn label_emotion(radius: f64, angle_deg: f64, neutral_radius: f64) -> PyResult<&'static str> {
    let config = AffectConfig::new(1.0, 1.0, neutral_radius).map_err(to_py)?;
    Ok(affect::label_emotion(radius, angle_deg, &config).as_str())
}

#[pymodule]
fn affect_engine_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCategorical>()?;
    m.add_class::<PyScenarioConfig>()?;
    m.add_class::<PyTrajectoryLog>()?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(parse_config, m)?)?;
    m.add_function(wrap_pyfunction!(valence, m)?)?;
    m.add_function(wrap_pyfunction!(expected_utility, m)?)?;
    m.add_function(wrap_pyfunction!(to_polar, m)?)?;
    m.add_function(wrap_pyfunction!(label_emotion, m)?)?;
    Ok(())
}
