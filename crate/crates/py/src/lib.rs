//! Python bindings. Results come back as plain dicts and lists mirroring the
//! CLI's JSON reports; networks are built from lists or NetworkDocument JSON.

use netequil::keyplayer::{impact_measure, katz_centrality, Centrality, KeyPlayerError};
use netequil::matgraph::{self, MatrixError};
use netequil::oracle::{enumerate_equilibria, multiplicity_rate, OracleError, ShockSampler};
use netequil::solver::{
    self, multiplicity_probe, solve_algorithm1, solve_auto, solve_banach, solve_tarski, Direction,
    SolveError,
};
use netequil::{InteractionFunction, Matrix, Network};
use netequil_cli::NetworkDocument;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList};
use serde_json::Value;

create_exception!(netequil, NetequilError, PyException);
create_exception!(netequil, SolverError, NetequilError);
create_exception!(netequil, PreconditionError, NetequilError);

fn matrix_err(e: MatrixError) -> PyErr {
    match e {
        MatrixError::Singular { .. } | MatrixError::NoConvergence(_) => SolverError::new_err(e.to_string()),
        _ => PreconditionError::new_err(e.to_string()),
    }
}

fn solve_err(e: SolveError) -> PyErr {
    match e {
        SolveError::NotMonotone | SolveError::NoLattice | SolveError::PreconditionViolated(_) => {
            PreconditionError::new_err(e.to_string())
        }
        SolveError::Matrix(m) => matrix_err(m),
        other => SolverError::new_err(other.to_string()),
    }
}

fn oracle_err(e: OracleError) -> PyErr {
    PreconditionError::new_err(e.to_string())
}

fn keyplayer_err(e: KeyPlayerError) -> PyErr {
    match e {
        KeyPlayerError::NotStable(_) => PreconditionError::new_err(e.to_string()),
        KeyPlayerError::Matrix(m) => matrix_err(m),
        other => SolverError::new_err(other.to_string()),
    }
}

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn report<'py>(py: Python<'py>, r: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(r).map_err(value_err)?)
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    Matrix::from_rows(&rows).map_err(value_err)
}

/// An interactive network `x = f(xW + ε)`.
#[pyclass(name = "Network", module = "netequil", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyNetwork {
    inner: Network,
}

#[pymethods]
impl PyNetwork {
    /// Every agent gets `min(max(offset + gain·t, lower), upper)`; omitted
    /// offsets, gains and bounds default to 0, 1 and unbounded.
    #[new]
    #[pyo3(signature = (w, shock, lower=None, upper=None, gain=None, offset=None))]
    fn new(
        w: Vec<Vec<f64>>,
        shock: Vec<f64>,
        lower: Option<Vec<f64>>,
        upper: Option<Vec<f64>>,
        gain: Option<Vec<f64>>,
        offset: Option<Vec<f64>>,
    ) -> PyResult<Self> {
        let n = shock.len();
        let pick = |v: &Option<Vec<f64>>, i: usize, default: f64| -> PyResult<f64> {
            match v {
                Some(v) if v.len() != n => Err(value_err(format!("expected {n} values, got {}", v.len()))),
                Some(v) => Ok(v[i]),
                None => Ok(default),
            }
        };
        let functions = (0..n)
            .map(|i| {
                InteractionFunction::clamped_affine(
                    pick(&offset, i, 0.0)?,
                    pick(&gain, i, 1.0)?,
                    pick(&lower, i, f64::NEG_INFINITY)?,
                    pick(&upper, i, f64::INFINITY)?,
                )
                .map_err(value_err)
            })
            .collect::<PyResult<Vec<_>>>()?;
        let inner = Network::new(matrix(w)?, functions, shock).map_err(value_err)?;
        Ok(PyNetwork { inner })
    }

    /// Parses a NetworkDocument (explicit or model form).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc = NetworkDocument::parse(text).map_err(|e| value_err(e.message()))?;
        let inner = doc.network().map_err(|e| value_err(e.message()))?;
        Ok(PyNetwork { inner })
    }

    fn to_json(&self) -> String {
        NetworkDocument::from_network(&self.inner).to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn w(&self) -> Vec<Vec<f64>> {
        self.inner.w().to_rows()
    }

    #[getter]
    fn shock(&self) -> Vec<f64> {
        self.inner.shock().to_vec()
    }

    fn with_shock(&self, shock: Vec<f64>) -> PyResult<Self> {
        let inner = self.inner.with_shock(shock).map_err(value_err)?;
        Ok(PyNetwork { inner })
    }

    /// `T(x) = f(xW + ε)`.
    fn apply(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.check_len(&x)?;
        Ok(self.inner.apply(&x))
    }

    /// `‖T(x) − x‖∞`.
    fn residual(&self, x: Vec<f64>) -> PyResult<f64> {
        self.check_len(&x)?;
        Ok(self.inner.residual(&x))
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        report(py, &solver::classify(&self.inner))
    }

    fn uniqueness_certificate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        report(py, &solver::uniqueness_certificate(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("Network(n={})", self.inner.n())
    }
}

impl PyNetwork {
    fn check_len(&self, x: &[f64]) -> PyResult<()> {
        if x.len() != self.inner.n() {
            return Err(value_err(format!("expected {} values, got {}", self.inner.n(), x.len())));
        }
        Ok(())
    }
}

/// Computes an equilibrium. `method` is one of auto, banach, tarski-above,
/// tarski-below, algorithm1.
#[pyfunction]
#[pyo3(signature = (net, method="auto", tol=1e-10, max_iter=1_000_000, x0=None))]
fn solve<'py>(
    py: Python<'py>,
    net: &PyNetwork,
    method: &str,
    tol: f64,
    max_iter: usize,
    x0: Option<Vec<f64>>,
) -> PyResult<Bound<'py, PyAny>> {
    let net = &net.inner;
    let zeros = vec![0.0; net.n()];
    let start = x0.as_deref().unwrap_or(&zeros);
    if start.len() != net.n() {
        return Err(value_err("x0 has the wrong length"));
    }
    let r = match method {
        "auto" => solve_auto(net, Some(start), tol, max_iter),
        "banach" => solve_banach(net, start, tol, max_iter),
        "tarski-above" => solve_tarski(net, Direction::Above, tol, max_iter),
        "tarski-below" => solve_tarski(net, Direction::Below, tol, max_iter),
        "algorithm1" => solve_algorithm1(net, tol),
        other => return Err(value_err(format!("unknown method {other:?}"))),
    }
    .map_err(solve_err)?;
    report(py, &r)
}

/// Looks for a continuum of equilibria through `x`.
#[pyfunction]
#[pyo3(signature = (net, x, tol=1e-9))]
fn probe<'py>(py: Python<'py>, net: &PyNetwork, x: Vec<f64>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    net.check_len(&x)?;
    report(py, &multiplicity_probe(&net.inner, &x, tol).map_err(solve_err)?)
}

/// Every equilibrium of a bounded-identity network with n ≤ 12.
#[pyfunction]
#[pyo3(signature = (net, tol=1e-9))]
fn enumerate<'py>(py: Python<'py>, net: &PyNetwork, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    report(py, &enumerate_equilibria(&net.inner, tol).map_err(oracle_err)?)
}

/// Total impact σ of each agent at the equilibrium `x`.
#[pyfunction]
fn impact<'py>(py: Python<'py>, net: &PyNetwork, x: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    net.check_len(&x)?;
    report(py, &impact_measure(&net.inner, &x).map_err(keyplayer_err)?)
}

/// Katz centrality; `side` is "hub" or "authority".
#[pyfunction]
#[pyo3(signature = (w, alpha, side="hub"))]
fn katz(w: Vec<Vec<f64>>, alpha: f64, side: &str) -> PyResult<Vec<f64>> {
    let side = match side {
        "hub" => Centrality::Hub,
        "authority" => Centrality::Authority,
        other => return Err(value_err(format!("unknown side {other:?}"))),
    };
    katz_centrality(&matrix(w)?, alpha, side).map_err(keyplayer_err)
}

#[pyfunction]
#[pyo3(signature = (a, tol=1e-12))]
fn spectral_radius(a: Vec<Vec<f64>>, tol: f64) -> PyResult<f64> {
    matgraph::spectral_radius(&matrix(a)?, tol, 200).map_err(matrix_err)
}

#[pyfunction]
fn contraction_modulus(w: Vec<Vec<f64>>, beta: Vec<f64>) -> PyResult<f64> {
    matgraph::contraction_modulus(&matrix(w)?, &beta).map_err(matrix_err)
}

/// Fraction of sampled shocks admitting several equilibria. Pass either
/// `support` (discrete uniform over the listed shocks) or `lower` and
/// `upper` (continuous uniform on the box).
#[pyfunction]
#[pyo3(signature = (net, trials, seed, support=None, lower=None, upper=None))]
fn multiplicity_rate_of(
    net: &PyNetwork,
    trials: usize,
    seed: u64,
    support: Option<Vec<Vec<f64>>>,
    lower: Option<Vec<f64>>,
    upper: Option<Vec<f64>>,
) -> PyResult<f64> {
    let sampler = match (support, lower, upper) {
        (Some(points), None, None) => ShockSampler::DiscreteUniform { points },
        (None, Some(lower), Some(upper)) => ShockSampler::ContinuousUniform { lower, upper },
        _ => return Err(value_err("give either support or both lower and upper")),
    };
    multiplicity_rate(&net.inner, &sampler, trials, seed).map_err(oracle_err)
}

/// A built-in worked example and its reference equilibrium (or None).
#[pyfunction]
fn demo(name: &str) -> PyResult<(PyNetwork, Option<Vec<f64>>)> {
    let d = netequil::demos::demo(name).ok_or_else(|| value_err(format!("unknown demo {name:?}")))?;
    Ok((PyNetwork { inner: d.network }, d.expected))
}

#[pymodule]
#[pyo3(name = "netequil")]
fn netequil_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyNetwork>()?;
    m.add("NetequilError", py.get_type::<NetequilError>())?;
    m.add("SolverError", py.get_type::<SolverError>())?;
    m.add("PreconditionError", py.get_type::<PreconditionError>())?;
    m.add("DEMO_NAMES", netequil::demos::DEMO_NAMES.to_vec())?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(probe, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(impact, m)?)?;
    m.add_function(wrap_pyfunction!(katz, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_radius, m)?)?;
    m.add_function(wrap_pyfunction!(contraction_modulus, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicity_rate_of, m)?)?;
    m.add_function(wrap_pyfunction!(demo, m)?)?;
    Ok(())
}
