use crate::matgraph::{linear_solve, Matrix, MatrixError};
use crate::netmodel::Network;

use super::{identity_bounds, uniqueness_certificate, Method, SolveError, SolveReport};

/// `A(x) = {j : (xW + ε)_j ≥ u_j}`.
fn upper_set(net: &Network, x: &[f64], u: &[f64]) -> Vec<bool> {
    net.inputs(x).iter().zip(u).map(|(t, u)| t >= u).collect()
}

/// `B(x) = {j : (xW + ε)_j ≤ ℓ_j}`.
fn lower_set(net: &Network, x: &[f64], l: &[f64]) -> Vec<bool> {
    net.inputs(x).iter().zip(l).map(|(t, l)| t <= l).collect()
}

/// Subsets of `items`, largest first, lexicographic within a size.
fn guesses(items: &[usize]) -> Vec<Vec<usize>> {
    let k = items.len();
    let mut subsets: Vec<Vec<usize>> = (0..1usize << k)
        .map(|mask| (0..k).filter(|b| mask >> b & 1 == 1).map(|b| items[b]).collect())
        .collect();
    subsets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    subsets
}

/// Fixed point of the inner system with `A` pinned at `u`, `P` at `ℓ`:
/// `x(I − DWD) = c + (cW + ε)D` where `c = uΛ^A + ℓΛ^P`, `D = I − Λ^A − Λ^P`.
fn inner_solve(
    net: &Network,
    upper: &[bool],
    lower: &[bool],
    l: &[f64],
    u: &[f64],
) -> Result<Vec<f64>, MatrixError> {
    let n = net.n();
    let free: Vec<f64> = (0..n)
        .map(|j| if upper[j] || lower[j] { 0.0 } else { 1.0 })
        .collect();
    let c: Vec<f64> = (0..n)
        .map(|j| {
            if upper[j] {
                u[j]
            } else if lower[j] {
                l[j]
            } else {
                0.0
            }
        })
        .collect();
    let dwd = net.w().scale_rows(&free).scale_columns(&free);
    let a = Matrix::identity(n).sub(&dwd);
    let cw = net.w().vec_mul(&c);
    let b: Vec<f64> = (0..n)
        .map(|j| c[j] + (cw[j] + net.shock()[j]) * free[j])
        .collect();
    linear_solve(&a, &b)
}

/// Guess-and-verify solver for bounded-identity networks.
///
/// Guesses the set of agents at their lower bound among subsets of `B(ℓ)`,
/// then runs the fictitious-default loop on the remaining agents. A guess
/// whose linear system is singular is skipped. `iterations` counts
/// successful inner solves and never exceeds `n·2^(n−1)`.
pub fn solve_algorithm1(net: &Network, tol: f64) -> Result<SolveReport, SolveError> {
    let (l, u) = identity_bounds(net)?;
    let w = net.w();
    if !w.is_nonnegative() {
        return Err(SolveError::precondition("W must be nonnegative"));
    }
    if !w.is_row_stochastic(1e-9) && !w.is_col_stochastic(1e-9) {
        return Err(SolveError::precondition("W must be row- or column-stochastic"));
    }
    let n = net.n();
    let report = |x: Vec<f64>, iterations, outer| SolveReport {
        residual: net.residual(&x),
        x,
        method: Method::Algorithm1,
        iterations,
        outer_guesses: Some(outer),
        error_bound: None,
        certificate: uniqueness_certificate(net),
        candidate: false,
    };

    if upper_set(net, &u, &u).iter().all(|&a| a) {
        return Ok(report(u, 0, 0));
    }
    let b_low = lower_set(net, &l, &l);
    if b_low.iter().all(|&b| b) {
        return Ok(report(l, 0, 0));
    }

    let candidates: Vec<usize> = (0..n).filter(|&j| b_low[j]).collect();
    let mut t = 0;
    let mut outer = 0;
    for p in guesses(&candidates) {
        outer += 1;
        let mut in_p = vec![false; n];
        for &j in &p {
            in_p[j] = true;
        }
        let u_hat: Vec<f64> = (0..n).map(|j| if in_p[j] { l[j] } else { u[j] }).collect();
        let mut a_prev: Vec<bool> = upper_set(net, &u_hat, &u)
            .into_iter()
            .zip(&in_p)
            .map(|(a, &pj)| a && !pj)
            .collect();
        let mut x = None;
        for _ in 0..n {
            let Ok(xt) = inner_solve(net, &a_prev, &in_p, &l, &u) else {
                break;
            };
            t += 1;
            let a_next: Vec<bool> = upper_set(net, &xt, &u)
                .into_iter()
                .zip(&in_p)
                .map(|(a, &pj)| a && !pj)
                .collect();
            let settled = a_next == a_prev;
            x = Some(xt);
            if settled {
                break;
            }
            a_prev = a_next;
        }
        if let Some(x) = x {
            if net.residual(&x) <= tol {
                return Ok(report(x, t, outer));
            }
        }
    }
    Err(SolveError::NoEquilibriumFound { guesses: outer })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{clamp_net, m, seven_node_net, wa};
    use super::*;
    use crate::netmodel::{InteractionFunction, Network};

    #[test]
    fn guess_order() {
        assert_eq!(
            guesses(&[2, 5, 6]),
            vec![
                vec![2, 5, 6],
                vec![2, 5],
                vec![2, 6],
                vec![5, 6],
                vec![2],
                vec![5],
                vec![6],
                vec![],
            ]
        );
    }

    #[test]
    fn seven_node_example() {
        let net = seven_node_net();
        let (l, u) = net.lattice().unwrap();
        let b: Vec<usize> = (0..7).filter(|&j| lower_set(&net, &l, &l)[j]).collect();
        let a: Vec<usize> = (0..7).filter(|&j| upper_set(&net, &u, &u)[j]).collect();
        assert_eq!(b, vec![2, 5, 6]);
        assert_eq!(a, vec![0, 3, 4, 5, 6]);

        let r = solve_algorithm1(&net, 1e-12).unwrap();
        let expected = [2.857e-5, 2.143e-5, 0.0, 8.0, 8.00003, 0.0, 0.0];
        for (x, e) in r.x.iter().zip(expected) {
            assert!((x - e).abs() <= 1e-4, "{x} vs {e}");
        }
        // exact values: x1 = 2e-4/7, x5 = 8 + 0.4·x1 + 2e-5
        assert!((r.x[0] - 2e-4 / 7.0).abs() < 1e-15);
        assert!((r.x[4] - (8.0 + 0.4 * 2e-4 / 7.0 + 2e-5)).abs() < 1e-12);
        assert_eq!(r.outer_guesses, Some(1));
        assert!(r.iterations <= 7 * 64);
        assert!(r.residual <= 1e-12);
    }

    #[test]
    fn early_exits() {
        let w = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let hi = solve_algorithm1(&clamp_net(w.clone(), 0.0, 1.0, &[5.0, 5.0]), 1e-12).unwrap();
        assert_eq!((hi.x, hi.iterations), (vec![1.0, 1.0], 0));
        let lo = solve_algorithm1(&clamp_net(w, 0.0, 1.0, &[-5.0, -5.0]), 1e-12).unwrap();
        assert_eq!((lo.x, lo.iterations), (vec![0.0, 0.0], 0));
    }

    #[test]
    fn comparative_d_by_algorithm1_requires_stochastic() {
        // W^a is neither row- nor column-stochastic
        let net = clamp_net(wa(), 0.0, 2.0, &[0.2, 0.0, -0.2, 0.2]);
        assert!(matches!(
            solve_algorithm1(&net, 1e-9),
            Err(SolveError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn rejects_non_identity_functions() {
        let net = Network::new(
            m(&[&[0.0, 1.0], &[1.0, 0.0]]),
            vec![InteractionFunction::identity(); 2],
            vec![0.0, 0.0],
        )
        .unwrap();
        assert!(matches!(
            solve_algorithm1(&net, 1e-9),
            Err(SolveError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn zero_shock_ring_exits_at_top() {
        // every point of the diagonal is an equilibrium; A(u) = N picks u
        let net = clamp_net(m(&[&[0.0, 1.0], &[1.0, 0.0]]), 0.0, 1.0, &[0.0, 0.0]);
        let r = solve_algorithm1(&net, 1e-12).unwrap();
        assert_eq!(r.x, vec![1.0, 1.0]);
    }
}
