//! Equilibrium solvers, uniqueness certificates and multiplicity probing.

mod algorithm1;
mod iterate;
mod linear;
mod probe;

use serde::Serialize;
use thiserror::Error;

use crate::matgraph::{
    contraction_modulus, is_acyclic, scc_condensation, spectral_radius, weakly_chained_check,
    BlockKind, ChainWitness, Condensation, MatrixError, Orientation,
};
use crate::netmodel::{InteractionFunction, Network};
use crate::SPECTRAL_TOL;

pub use algorithm1::solve_algorithm1;
pub use iterate::{solve_banach, solve_tarski, solve_tarski_from, Direction};
pub use linear::{linear_system_solvability, lp_verify, LinearSolvability};
pub use probe::{multiplicity_probe, MultiplicityCertificate, ProbeResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("network is not contracting (modulus {0})")]
    NotContracting(f64),
    #[error("no convergence within {0} iterations")]
    MaxIterations(usize),
    #[error("interaction functions are not all monotone")]
    NotMonotone,
    #[error("no lattice bounds available")]
    NoLattice,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no equilibrium found after {guesses} guesses")]
    NoEquilibriumFound { guesses: usize },
    #[error("residual {0} exceeds tolerance")]
    ResidualTooLarge(f64),
    #[error("singular system outside the irreducible unit-radius case")]
    UnhandledSingularity,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl SolveError {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        SolveError::PreconditionViolated(msg.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Banach,
    TarskiAbove,
    TarskiBelow,
    Algorithm1,
}

/// Why the equilibrium is known to be unique, if it is.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Contraction { modulus: f64 },
    WeaklyChained { witness: ChainWitness },
    Acyclic,
    #[serde(rename = "en_positive_cash")]
    ENPositiveCash,
    NoneFound,
}

impl Certificate {
    pub fn is_unique(&self) -> bool {
        !matches!(self, Certificate::NoneFound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub x: Vec<f64>,
    pub residual: f64,
    pub method: Method,
    pub iterations: usize,
    /// Guesses tried by Algorithm 1, including skipped ones.
    pub outer_guesses: Option<usize>,
    /// Banach a-priori bound on the last step.
    pub error_bound: Option<f64>,
    pub certificate: Certificate,
    /// Set when the output is only a greatest-fixed-point candidate (Tarski
    /// on a discontinuous network).
    pub candidate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub contracting: bool,
    /// `r(|W| diag β)` when every function is Lipschitz.
    pub modulus: Option<f64>,
    pub noncontracting: bool,
    /// `r(W)` when `W ≥ 0`.
    pub spectral_radius: Option<f64>,
}

impl Classification {
    pub fn neither(&self) -> bool {
        !self.contracting && !self.noncontracting
    }
}

pub(crate) fn modulus(net: &Network) -> Option<f64> {
    let beta = net.lipschitz()?;
    contraction_modulus(net.w(), &beta).ok()
}

pub fn classify(net: &Network) -> Classification {
    let modulus = modulus(net);
    let contracting = modulus.is_some_and(|r| r < 1.0 - SPECTRAL_TOL);
    let radius = if net.w().is_nonnegative() {
        spectral_radius(net.w(), 1e-12, 200).ok()
    } else {
        None
    };
    let shape_ok = net.functions().iter().all(|f| {
        f.is_monotone() && f.is_bounded() && f.lipschitz().is_some_and(|b| b <= 1.0)
    });
    let noncontracting = shape_ok && radius.is_some_and(|r| (r - 1.0).abs() <= SPECTRAL_TOL);
    Classification {
        contracting,
        modulus,
        noncontracting,
        spectral_radius: radius,
    }
}

/// `max_j |x_j − f_j((xW)_j + ε_j)|`.
pub fn verify_equilibrium(net: &Network, x: &[f64]) -> f64 {
    net.residual(x)
}

/// First applicable of: contraction, weak chaining (β ≤ 1), acyclicity,
/// clearing network with positive cash.
pub fn uniqueness_certificate(net: &Network) -> Certificate {
    if let Some(r) = modulus(net) {
        if r < 1.0 - SPECTRAL_TOL {
            return Certificate::Contraction { modulus: r };
        }
    }
    let beta = net.lipschitz();
    if beta.as_ref().is_some_and(|b| b.iter().all(|&x| x <= 1.0)) && net.w().is_nonnegative() {
        for orientation in [Orientation::Row, Orientation::Column] {
            if let Ok(witness) = weakly_chained_check(net.w(), orientation) {
                return Certificate::WeaklyChained { witness };
            }
        }
    }
    if beta.is_some() && is_acyclic(net.w()) {
        return Certificate::Acyclic;
    }
    if en_positive_cash(net) {
        return Certificate::ENPositiveCash;
    }
    Certificate::NoneFound
}

fn is_en_shaped(f: &InteractionFunction) -> bool {
    matches!(*f, InteractionFunction::ClampedAffine { offset, gain, lower, upper }
        if offset == 0.0 && gain == 1.0 && lower == 0.0 && upper.is_finite() && upper > 0.0)
}

/// Clearing-network uniqueness: `f_j = clamp(·, 0, p̄_j)`, `W` row-stochastic,
/// `ε ≥ 0`, and every closed block receives cash from some `ε_i > 0`.
fn en_positive_cash(net: &Network) -> bool {
    if !net.functions().iter().all(is_en_shaped)
        || !net.w().is_row_stochastic(1e-9)
        || net.shock().iter().any(|&e| e < 0.0)
    {
        return false;
    }
    let sources: Vec<usize> = (0..net.n()).filter(|&i| net.shock()[i] > 0.0).collect();
    if sources.is_empty() {
        return false;
    }
    let reach = Condensation::reachable_from(net.w(), &sources);
    let cond = scc_condensation(net.w());
    cond.blocks
        .iter()
        .zip(&cond.kinds)
        .filter(|(_, k)| **k == BlockKind::InSubgraph)
        .all(|(b, _)| b.iter().any(|&v| reach[v]))
}

/// Picks a solver by strength of guarantee: Banach on contracting networks,
/// then Algorithm 1 when its preconditions hold, then monotone iteration
/// from the top of the lattice. `x0` seeds Banach only (default zeros).
pub fn solve_auto(
    net: &Network,
    x0: Option<&[f64]>,
    tol: f64,
    kmax: usize,
) -> Result<SolveReport, SolveError> {
    if classify(net).contracting {
        let zeros = vec![0.0; net.n()];
        return solve_banach(net, x0.unwrap_or(&zeros), tol, kmax);
    }
    match solve_algorithm1(net, tol) {
        Err(SolveError::PreconditionViolated(_)) => solve_tarski(net, Direction::Above, tol, kmax),
        other => other,
    }
}

/// Lower and upper bounds for bounded-identity networks.
pub(crate) fn identity_bounds(net: &Network) -> Result<(Vec<f64>, Vec<f64>), SolveError> {
    if !net.is_bounded_identity() {
        return Err(SolveError::precondition(
            "every function must be a bounded identity with finite bounds",
        ));
    }
    net.lattice()
        .ok_or_else(|| SolveError::precondition("bounds must be finite"))
}
