//! Katz centralities and the total-impact measure σ.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matgraph::{contraction_modulus, linear_solve, spectral_radius, Matrix, MatrixError};
use crate::netmodel::{InteractionFunction, Network};
use crate::SPECTRAL_TOL;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KeyPlayerError {
    #[error("alpha·r(|W|) = {0} is not below one")]
    NotConvergent(f64),
    #[error("stability condition fails: {0}")]
    NotStable(String),
    #[error("singular system")]
    Singular,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Centrality {
    Hub,
    Authority,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpactReport {
    pub sigma: Vec<f64>,
    pub key_player: usize,
    pub stability_certified: bool,
    /// `f'_j((x*W + ε)_j)` as used in σ.
    pub derivatives: Vec<f64>,
    /// Agents evaluated exactly at a clamp breakpoint, where the one-sided
    /// derivative from the unclamped side is used.
    pub at_breakpoint: Vec<usize>,
}

fn solve_row(a: &Matrix, b: &[f64]) -> Result<Vec<f64>, KeyPlayerError> {
    linear_solve(a, b).map_err(|e| match e {
        MatrixError::Singular { .. } => KeyPlayerError::Singular,
        other => other.into(),
    })
}

/// `κ_h = 1(I − αW)⁻¹` or `κ_a = 1(I − αWᵀ)⁻¹`.
pub fn katz_centrality(w: &Matrix, alpha: f64, side: Centrality) -> Result<Vec<f64>, KeyPlayerError> {
    let r = spectral_radius(&w.abs(), 1e-12, 200)?;
    let scaled = alpha.abs() * r;
    if scaled >= 1.0 - SPECTRAL_TOL || !scaled.is_finite() {
        return Err(KeyPlayerError::NotConvergent(scaled));
    }
    let m = match side {
        Centrality::Hub => w.scale(alpha),
        Centrality::Authority => w.transpose().scale(alpha),
    };
    solve_row(&Matrix::identity(w.n()).sub(&m), &vec![1.0; w.n()])
}

/// `r(|W| diag β) < 1` for monotone Lipschitz networks.
pub fn stability_certificate(net: &Network) -> bool {
    if !net.functions().iter().all(InteractionFunction::is_monotone) {
        return false;
    }
    let Some(beta) = net.lipschitz() else {
        return false;
    };
    contraction_modulus(net.w(), &beta).is_ok_and(|r| r < 1.0 - SPECTRAL_TOL)
}

fn at_breakpoint(f: &InteractionFunction, t: f64) -> bool {
    match *f {
        InteractionFunction::ClampedAffine {
            offset,
            gain,
            lower,
            upper,
        } => {
            let y = offset + gain * t;
            gain != 0.0 && (y == lower || y == upper)
        }
        InteractionFunction::RogersVeraart { .. } => false,
    }
}

/// `σ = 1(I − diag(f')Wᵀ)⁻¹ diag(x*)` and its argmax.
pub fn impact_measure(net: &Network, x_star: &[f64]) -> Result<ImpactReport, KeyPlayerError> {
    let n = net.n();
    if x_star.len() != n {
        return Err(MatrixError::DimensionMismatch {
            expected: n,
            found: x_star.len(),
        }
        .into());
    }
    let beta = net.lipschitz().ok_or_else(|| {
        KeyPlayerError::NotStable("interaction functions are not differentiable".into())
    })?;
    let rho = contraction_modulus(net.w(), &beta)?;
    if rho >= 1.0 - SPECTRAL_TOL {
        return Err(KeyPlayerError::NotStable(format!("contraction modulus {rho}")));
    }
    let inputs = net.inputs(x_star);
    let derivatives: Vec<f64> = net
        .functions()
        .iter()
        .zip(&inputs)
        .map(|(f, &t)| f.derivative(t).expect("Lipschitz functions are clamped affine"))
        .collect();
    let at_kink = net
        .functions()
        .iter()
        .zip(&inputs)
        .enumerate()
        .filter(|(_, (f, &t))| at_breakpoint(f, t))
        .map(|(j, _)| j)
        .collect();
    let m = net.w().transpose().scale_rows(&derivatives);
    let y = solve_row(&Matrix::identity(n).sub(&m), &vec![1.0; n])?;
    let sigma: Vec<f64> = y.iter().zip(x_star).map(|(a, b)| a * b).collect();
    let key_player = sigma
        .iter()
        .enumerate()
        .fold(0, |best, (i, &s)| if s > sigma[best] { i } else { best });
    Ok(ImpactReport {
        sigma,
        key_player,
        stability_certified: stability_certificate(net),
        derivatives,
        at_breakpoint: at_kink,
    })
}
