use serde::{Deserialize, Serialize};

use super::graph::scc_condensation;
use super::linsolve::linear_solve;
use super::{norm_inf_vec, Matrix, MatrixError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Spectral radius of a nonnegative matrix.
///
/// `r(A)` is the largest radius over the strongly connected blocks. For a
/// block `B` of size ≥ 2 the primitive shift `C = B/s + I` (with `s = ‖B‖∞`)
/// is power-iterated from the left, the iterate being advanced by repeated
/// squaring of `C`; the Collatz-Wielandt ratios `min_j (xC)_j/x_j` and
/// `max_j (xC)_j/x_j` bracket `r(C)`, and iteration stops once the bracket
/// maps to a width of at most `tol` on `r(B)`. `kmax` bounds the number of
/// squarings per block.
pub fn spectral_radius(a: &Matrix, tol: f64, kmax: usize) -> Result<f64, MatrixError> {
    a.check_nonnegative()?;
    let mut r: f64 = 0.0;
    for block in scc_condensation(a).blocks {
        if block.len() == 1 {
            r = r.max(a[(block[0], block[0])]);
            continue;
        }
        let sub = a.submatrix(&block);
        // a block can't beat the current best if its row sums are below it
        if sub.norm_inf() <= r {
            continue;
        }
        r = r.max(irreducible_radius(&sub, tol, kmax)?);
    }
    Ok(r)
}

fn irreducible_radius(b: &Matrix, tol: f64, kmax: usize) -> Result<f64, MatrixError> {
    let n = b.n();
    let s = b.norm_inf();
    let c = b.scale(1.0 / s).add(&Matrix::identity(n));
    // rounding keeps the bracket from closing much below a few ulps of r(C) ≤ 2
    let width = (tol / s).max(16.0 * n as f64 * f64::EPSILON);
    let mut x = vec![1.0 / n as f64; n];
    let mut p = c.clone();
    for _ in 0..=kmax {
        let y = c.vec_mul(&x);
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for (yj, xj) in y.iter().zip(&x) {
            if *xj > 0.0 {
                lo = lo.min(yj / xj);
                hi = hi.max(yj / xj);
            } else {
                hi = f64::INFINITY;
            }
        }
        if hi - lo <= width {
            return Ok(s * (0.5 * (lo + hi) - 1.0));
        }
        x = p.vec_mul(&x);
        let total: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= total);
        let sq = p.mul(&p);
        let norm = sq.norm_inf();
        p = sq.scale(1.0 / norm);
    }
    Err(MatrixError::NoConvergence(kmax))
}

/// `r(|W| diag(β))`.
pub fn contraction_modulus(w: &Matrix, beta: &[f64]) -> Result<f64, MatrixError> {
    if beta.len() != w.n() {
        return Err(MatrixError::DimensionMismatch {
            expected: w.n(),
            found: beta.len(),
        });
    }
    if let Some(i) = beta.iter().position(|b| !(*b >= 0.0) || !b.is_finite()) {
        return Err(MatrixError::NonNegativityViolated { row: i, col: i });
    }
    spectral_radius(&w.abs().scale_columns(beta), 1e-12, 200)
}

/// Perron root and unit-sum Perron vector of an irreducible nonnegative
/// matrix.
///
/// The root comes from [`spectral_radius`]; the vector solves
/// `v(rI − A) = 0` with one equation replaced by `Σv = 1`, then is polished
/// by inverse iteration until the residual `‖vA − rv‖∞` is within `tol`.
pub fn perron_vector(
    a: &Matrix,
    side: Side,
    tol: f64,
    kmax: usize,
) -> Result<(f64, Vec<f64>), MatrixError> {
    a.check_nonnegative()?;
    let n = a.n();
    if n > 1 && scc_condensation(a).blocks.len() != 1 {
        return Err(MatrixError::NotIrreducible);
    }
    // right eigenvectors of A are left eigenvectors of Aᵀ
    let a = match side {
        Side::Left => a.clone(),
        Side::Right => a.transpose(),
    };
    let r = spectral_radius(&a, tol.min(1e-12), 200)?;
    if n == 1 {
        return Ok((r, vec![1.0]));
    }

    let mut sys = Matrix::identity(n).scale(r).sub(&a);
    for i in 0..n {
        sys[(i, n - 1)] = 1.0;
    }
    let mut rhs = vec![0.0; n];
    rhs[n - 1] = 1.0;
    let mut v = linear_solve(&sys, &rhs)?;
    normalize(&mut v);

    let residual = |v: &[f64]| {
        let va = a.vec_mul(v);
        norm_inf_vec(&va.iter().zip(v).map(|(x, y)| x - r * y).collect::<Vec<_>>())
    };
    // inverse iteration around a slightly shifted root
    let shifted = Matrix::identity(n).scale(r * (1.0 + 1e-10) + 1e-14).sub(&a);
    let mut steps = 0;
    while residual(&v) > tol {
        if steps == kmax {
            return Err(MatrixError::NoConvergence(kmax));
        }
        v = linear_solve(&shifted, &v)?;
        normalize(&mut v);
        steps += 1;
    }
    Ok((r, v))
}

fn normalize(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= s;
        if *x < 0.0 && *x > -1e-15 {
            *x = 0.0;
        }
    }
}
