use super::{Matrix, MatrixError};

/// Pivots smaller than this times the largest entry of `A` count as zero.
pub const PIVOT_REL_TOL: f64 = 1e-12;

/// Solves `xA = b` for the row vector `x` by Gaussian elimination with
/// partial pivoting on `Aᵀ`.
pub fn linear_solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>, MatrixError> {
    let n = a.n();
    if b.len() != n {
        return Err(MatrixError::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let scale = a.max_abs();
    let threshold = PIVOT_REL_TOL * scale;
    // augmented [Aᵀ | bᵀ], one row per unknown equation
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut row: Vec<f64> = (0..n).map(|i| a[(i, j)]).collect();
            row.push(b[j]);
            row
        })
        .collect();

    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|r| (r, m[r][k].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot > threshold) {
            return Err(MatrixError::Singular { pivot: k });
        }
        m.swap(k, p);
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest {
            let factor = row[k] / pivot_row[k];
            if factor == 0.0 {
                continue;
            }
            for (a, b) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *a -= factor * b;
            }
        }
    }

    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|c| m[k][c] * x[c]).sum();
        x[k] = (m[k][n] - s) / m[k][k];
    }
    Ok(x)
}
