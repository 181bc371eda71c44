use crate::netmodel::Network;

use super::{lex, max_diff, OracleError, DEDUP_TOL};

const MAX_DIM: usize = 3;
const MAX_NODES: usize = 20_000_000;
const REFINE_STEPS: usize = 200;

/// Approximate fixed points of any small network.
///
/// Evaluates the residual on a `resolution^n` grid over `[lower, upper]`,
/// refines each grid-local minimum by the damped iteration
/// `x ← x + ½(Tx − x)` and keeps refined points that have residual ≤ `tol`
/// and still lie in the box.
pub fn grid_search(
    net: &Network,
    lower: &[f64],
    upper: &[f64],
    resolution: usize,
    tol: f64,
) -> Result<Vec<Vec<f64>>, OracleError> {
    let n = net.n();
    if n > MAX_DIM {
        return Err(OracleError::TooLarge(n));
    }
    if lower.len() != n || upper.len() != n {
        return Err(OracleError::PreconditionViolated("box has the wrong dimension".into()));
    }
    if resolution < 2 || lower.iter().zip(upper).any(|(l, u)| !(l <= u)) {
        return Err(OracleError::PreconditionViolated(
            "resolution must be at least 2 and lower ≤ upper".into(),
        ));
    }
    let total = resolution
        .checked_pow(n as u32)
        .filter(|&t| t <= MAX_NODES)
        .ok_or(OracleError::TooLarge(n))?;

    let coord = |idx: &[usize]| -> Vec<f64> {
        (0..n)
            .map(|d| lower[d] + (upper[d] - lower[d]) * idx[d] as f64 / (resolution - 1) as f64)
            .collect()
    };
    let unflatten = |mut k: usize| -> Vec<usize> {
        (0..n)
            .map(|_| {
                let r = k % resolution;
                k /= resolution;
                r
            })
            .collect()
    };
    let flatten = |idx: &[usize]| idx.iter().rev().fold(0, |k, &i| k * resolution + i);
    let residuals: Vec<f64> = (0..total).map(|k| net.residual(&coord(&unflatten(k)))).collect();

    let mut found: Vec<Vec<f64>> = Vec::new();
    for k in 0..total {
        let idx = unflatten(k);
        if !is_local_min(&idx, &residuals, resolution, &flatten) {
            continue;
        }
        let mut x = coord(&idx);
        let mut best = (residuals[k], x.clone());
        for _ in 0..REFINE_STEPS {
            if best.0 <= f64::EPSILON * 4.0 {
                break;
            }
            let tx = net.apply(&x);
            for (xi, ti) in x.iter_mut().zip(&tx) {
                *xi += 0.5 * (ti - *xi);
            }
            let r = net.residual(&x);
            if r < best.0 {
                best = (r, x.clone());
            }
        }
        let in_box = (0..n).all(|d| best.1[d] >= lower[d] - tol && best.1[d] <= upper[d] + tol);
        if best.0 <= tol && in_box && found.iter().all(|y| max_diff(y, &best.1) > DEDUP_TOL) {
            found.push(best.1);
        }
    }
    found.sort_by(|a, b| lex(a, b));
    Ok(found)
}

fn is_local_min(
    idx: &[usize],
    residuals: &[f64],
    resolution: usize,
    flatten: &impl Fn(&[usize]) -> usize,
) -> bool {
    let n = idx.len();
    let here = residuals[flatten(idx)];
    let mut nb = idx.to_vec();
    // all 3^n − 1 neighbours
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let mut inside = true;
        for d in 0..n {
            let step = (c % 3) as isize - 1;
            c /= 3;
            let v = idx[d] as isize + step;
            if v < 0 || v >= resolution as isize {
                inside = false;
                break;
            }
            nb[d] = v as usize;
        }
        if inside && residuals[flatten(&nb)] < here {
            return false;
        }
    }
    true
}
