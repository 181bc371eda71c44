use serde::Serialize;

use crate::matgraph::{
    linear_solve, perron_vector, scc_condensation, spectral_radius, Matrix, MatrixError, Side,
};
use crate::netmodel::Network;
use crate::SPECTRAL_TOL;

use super::{identity_bounds, SolveError};

/// Orthogonality tolerance for `ε·eᵀ = 0`.
const ORTHOGONALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinearSolvability {
    Solvable { x: Vec<f64> },
    Unsolvable,
    /// Solutions form a line along the left Perron direction.
    Underdetermined { direction: Vec<f64> },
}

/// Solvability of `x = xW + ε`.
///
/// Nonsingular `I − W` gives the unique solution. For irreducible `W ≥ 0`
/// with `r(W) = 1` the system is solvable iff `ε` is orthogonal to the right
/// Perron vector; other singular cases are not handled.
pub fn linear_system_solvability(w: &Matrix, eps: &[f64]) -> Result<LinearSolvability, SolveError> {
    if eps.len() != w.n() {
        return Err(MatrixError::DimensionMismatch {
            expected: w.n(),
            found: eps.len(),
        }
        .into());
    }
    match linear_solve(&Matrix::identity(w.n()).sub(w), eps) {
        Ok(x) => return Ok(LinearSolvability::Solvable { x }),
        Err(MatrixError::Singular { .. }) => {}
        Err(e) => return Err(e.into()),
    }
    if !w.is_nonnegative() || scc_condensation(w).blocks.len() != 1 {
        return Err(SolveError::UnhandledSingularity);
    }
    let r = spectral_radius(w, 1e-12, 200)?;
    if (r - 1.0).abs() > SPECTRAL_TOL {
        return Err(SolveError::UnhandledSingularity);
    }
    let (_, right) = perron_vector(w, Side::Right, 1e-13, 100)?;
    let dot: f64 = eps.iter().zip(&right).map(|(a, b)| a * b).sum();
    if dot.abs() > ORTHOGONALITY_TOL {
        return Ok(LinearSolvability::Unsolvable);
    }
    let (_, left) = perron_vector(w, Side::Left, 1e-13, 100)?;
    Ok(LinearSolvability::Underdetermined { direction: left })
}

/// Checks that `x` solves the maximization program whose optimum is the
/// greatest equilibrium of a bounded-identity network: `x ∈ [ℓ, u]`,
/// `0 ≤ max{xW + ε − x, ℓ − x}` componentwise, and for each `j` either
/// `x_j = u_j` or `x_j = clamp((xW + ε)_j)`.
pub fn lp_verify(net: &Network, x: &[f64], tol: f64) -> Result<bool, SolveError> {
    let (l, u) = identity_bounds(net)?;
    if x.len() != net.n() {
        return Err(SolveError::precondition("x has the wrong length"));
    }
    let inputs = net.inputs(x);
    let ok = (0..net.n()).all(|j| {
        let in_box = x[j] >= l[j] - tol && x[j] <= u[j] + tol;
        let feasible = (inputs[j] - x[j]).max(l[j] - x[j]) >= -tol;
        let maximal = (x[j] - u[j]).abs() <= tol
            || (x[j] - inputs[j].max(l[j]).min(u[j])).abs() <= tol;
        in_box && feasible && maximal
    });
    Ok(ok)
}
