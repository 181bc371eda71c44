//! Interaction functions, the [`Network`] type and model-family builders.

mod function;
mod model;

use thiserror::Error;

use crate::matgraph::{Matrix, MatrixError};

pub use function::InteractionFunction;
pub use model::{build_network, closed_form_equilibrium, ModelSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },
    #[error("dimension mismatch in `{field}`: expected {expected}, found {found}")]
    DimensionMismatch {
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("closed form unsupported for this family")]
    Unsupported,
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl ModelError {
    pub(crate) fn invalid(field: &str, reason: &str) -> Self {
        ModelError::InvalidParameter {
            field: field.to_string(),
            reason: reason.to_string(),
        }
    }

    pub(crate) fn dims(field: &str, expected: usize, found: usize) -> Self {
        ModelError::DimensionMismatch {
            field: field.to_string(),
            expected,
            found,
        }
    }
}

/// `(f, W, ε)`: the object every solver consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    w: Matrix,
    functions: Vec<InteractionFunction>,
    shock: Vec<f64>,
}

impl Network {
    pub fn new(
        w: Matrix,
        functions: Vec<InteractionFunction>,
        shock: Vec<f64>,
    ) -> Result<Self, ModelError> {
        let n = w.n();
        if functions.len() != n {
            return Err(ModelError::dims("functions", n, functions.len()));
        }
        if shock.len() != n {
            return Err(ModelError::dims("shock", n, shock.len()));
        }
        if shock.iter().any(|e| !e.is_finite()) {
            return Err(ModelError::invalid("shock", "entries must be finite"));
        }
        Ok(Network {
            w,
            functions,
            shock,
        })
    }

    /// Every agent gets `min(max(t, lower_j), upper_j)`.
    pub fn bounded_identity(
        w: Matrix,
        lower: &[f64],
        upper: &[f64],
        shock: Vec<f64>,
    ) -> Result<Self, ModelError> {
        if lower.len() != upper.len() {
            return Err(ModelError::dims("upper", lower.len(), upper.len()));
        }
        let functions = lower
            .iter()
            .zip(upper)
            .map(|(&l, &u)| InteractionFunction::bounded_identity(l, u))
            .collect::<Result<Vec<_>, _>>()?;
        Network::new(w, functions, shock)
    }

    pub fn n(&self) -> usize {
        self.w.n()
    }

    pub fn w(&self) -> &Matrix {
        &self.w
    }

    pub fn functions(&self) -> &[InteractionFunction] {
        &self.functions
    }

    pub fn shock(&self) -> &[f64] {
        &self.shock
    }

    /// Same `(f, W)` with a different shock.
    pub fn with_shock(&self, shock: Vec<f64>) -> Result<Self, ModelError> {
        Network::new(self.w.clone(), self.functions.clone(), shock)
    }

    /// `xW + ε`.
    pub fn inputs(&self, x: &[f64]) -> Vec<f64> {
        let mut t = self.w.vec_mul(x);
        for (ti, e) in t.iter_mut().zip(&self.shock) {
            *ti += e;
        }
        t
    }

    /// `T(x) = f(xW + ε)`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.inputs(x)
            .iter()
            .zip(&self.functions)
            .map(|(&t, f)| f.eval(t))
            .collect()
    }

    /// `max_j |x_j − f_j((xW)_j + ε_j)|`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.apply(x)
            .iter()
            .zip(x)
            .fold(0.0, |m, (tx, xi)| m.max((tx - xi).abs()))
    }

    /// Lattice bounds `(ℓ, u)` when every function is bounded.
    pub fn lattice(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let bounds: Option<Vec<(f64, f64)>> =
            self.functions.iter().map(|f| f.range_bounds()).collect();
        bounds.map(|b| b.into_iter().unzip())
    }

    /// Lipschitz constants, when every function has one.
    pub fn lipschitz(&self) -> Option<Vec<f64>> {
        self.functions.iter().map(|f| f.lipschitz()).collect()
    }

    pub fn is_bounded_identity(&self) -> bool {
        self.functions.iter().all(|f| f.is_bounded_identity())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkMetadata {
    pub beta: Option<Vec<f64>>,
    pub bounded: bool,
    pub monotone: bool,
    pub lattice: Option<(Vec<f64>, Vec<f64>)>,
}

pub fn network_metadata(net: &Network) -> NetworkMetadata {
    NetworkMetadata {
        beta: net.lipschitz(),
        bounded: net.functions.iter().all(|f| f.is_bounded()),
        monotone: net.functions.iter().all(|f| f.is_monotone()),
        lattice: net.lattice(),
    }
}
