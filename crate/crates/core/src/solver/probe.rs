use serde::Serialize;

use crate::matgraph::{perron_vector, scc_condensation, spectral_radius, Condensation, Side};
use crate::netmodel::{InteractionFunction, Network};
use crate::SPECTRAL_TOL;

use super::SolveError;

/// A second equilibrium on the segment `x* + t·ê`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicityCertificate {
    /// The unit-radius block the family lives on.
    pub scc: Vec<usize>,
    /// Left Perron vector of `W_S`, unit sum, zero outside the block.
    pub direction: Vec<f64>,
    /// Every `t` in this closed interval keeps `x* + t·ê` an equilibrium.
    pub t_range: (f64, f64),
    pub t_witness: f64,
    pub witness: Vec<f64>,
    pub witness_residual: f64,
    /// Agents reachable from the block (outside it); their values may also
    /// vary across equilibria.
    pub affected: Vec<usize>,
}

impl MultiplicityCertificate {
    /// `x* + t·ê` at both ends of the range.
    pub fn endpoints(&self, x_star: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let at = |t: f64| -> Vec<f64> {
            x_star
                .iter()
                .zip(&self.direction)
                .map(|(x, e)| x + t * e)
                .collect()
        };
        (at(self.t_range.0), at(self.t_range.1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProbeResult {
    Unique,
    Multiple(MultiplicityCertificate),
}

fn unit_clamp(f: &InteractionFunction) -> Option<(f64, f64)> {
    match *f {
        InteractionFunction::ClampedAffine {
            offset,
            gain,
            lower,
            upper,
        } if offset == 0.0 && gain == 1.0 => Some((lower, upper)),
        _ => None,
    }
}

/// Looks for a unit-radius strongly connected block along which `x*` can be
/// shifted by the block's left Perron vector without leaving the solution
/// set.
///
/// A block qualifies when every member satisfies `x*_i = (x*W + ε)_i` within
/// `tol` (agents on a clamp with zero excess are allowed). Agents outside the
/// block that the shift feeds into must stay saturated at a bound, which
/// narrows the admissible `t`; an unsaturated agent fed by the block pins
/// `t = 0`.
pub fn multiplicity_probe(
    net: &Network,
    x_star: &[f64],
    tol: f64,
) -> Result<ProbeResult, SolveError> {
    let bounds: Vec<(f64, f64)> = net
        .functions()
        .iter()
        .map(unit_clamp)
        .collect::<Option<_>>()
        .ok_or_else(|| SolveError::precondition("functions must be unit-gain clamps"))?;
    if !net.w().is_nonnegative() {
        return Err(SolveError::precondition("W must be nonnegative"));
    }
    if x_star.len() != net.n() {
        return Err(SolveError::precondition("x_star has the wrong length"));
    }
    let residual = net.residual(x_star);
    if residual > tol {
        return Err(SolveError::ResidualTooLarge(residual));
    }

    let n = net.n();
    let inputs = net.inputs(x_star);
    let cond = scc_condensation(net.w());
    for block in &cond.blocks {
        let ws = net.w().submatrix(block);
        let r = spectral_radius(&ws, 1e-12, 200)?;
        if (r - 1.0).abs() > SPECTRAL_TOL {
            continue;
        }
        if block.iter().any(|&i| (x_star[i] - inputs[i]).abs() > tol) {
            continue;
        }
        let (_, e) = perron_vector(&ws, Side::Left, 1e-13, 100)?;
        let mut dir = vec![0.0; n];
        for (k, &i) in block.iter().enumerate() {
            dir[i] = e[k];
        }
        let shift = net.w().vec_mul(&dir);

        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for j in 0..n {
            let (l, u) = bounds[j];
            if dir[j] > 0.0 {
                // identity must keep holding inside [ℓ, u]
                lo = lo.max((l - x_star[j]) / dir[j]);
                hi = hi.min((u - x_star[j]) / dir[j]);
                continue;
            }
            let c = shift[j];
            if c == 0.0 {
                continue;
            }
            let at_upper = (x_star[j] - u).abs() <= tol && inputs[j] >= u - tol;
            let at_lower = (x_star[j] - l).abs() <= tol && inputs[j] <= l + tol;
            if at_upper {
                // inputs + t·c ≥ u
                let t0 = (u - tol - inputs[j]) / c;
                if c > 0.0 {
                    lo = lo.max(t0);
                } else {
                    hi = hi.min(t0);
                }
            } else if at_lower {
                // inputs + t·c ≤ ℓ
                let t0 = (l + tol - inputs[j]) / c;
                if c > 0.0 {
                    hi = hi.min(t0);
                } else {
                    lo = lo.max(t0);
                }
            } else {
                lo = lo.max(0.0);
                hi = hi.min(0.0);
            }
        }
        lo = lo.min(0.0);
        hi = hi.max(0.0);
        if !(hi - lo > tol) || !lo.is_finite() || !hi.is_finite() {
            continue;
        }

        // midpoint of the range, or of its longer half when the midpoint
        // would reproduce x*
        let mid = 0.5 * (lo + hi);
        let t = if mid.abs() > tol {
            mid
        } else if -lo > hi {
            0.5 * lo
        } else {
            0.5 * hi
        };
        let witness: Vec<f64> = x_star.iter().zip(&dir).map(|(x, d)| x + t * d).collect();
        let witness_residual = net.residual(&witness);
        if witness_residual > tol {
            continue;
        }
        let reach = Condensation::reachable_from(net.w(), block);
        let affected = (0..n).filter(|&j| reach[j] && dir[j] == 0.0).collect();
        return Ok(ProbeResult::Multiple(MultiplicityCertificate {
            scc: block.clone(),
            direction: dir,
            t_range: (lo, hi),
            t_witness: t,
            witness,
            witness_residual,
            affected,
        }));
    }
    Ok(ProbeResult::Unique)
}
