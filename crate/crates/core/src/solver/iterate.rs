use serde::Serialize;

use crate::matgraph::Matrix;
use crate::netmodel::{InteractionFunction, Network};

use super::{classify, uniqueness_certificate, Method, SolveError, SolveReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Above,
    Below,
}

fn diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Norm induced by `‖·‖∞` on row vectors: `‖vM‖∞ ≤ ‖v‖∞ · max column sum`.
fn row_operator_norm(m: &Matrix) -> f64 {
    m.col_sums().into_iter().fold(0.0, f64::max)
}

fn matrix_power(m: &Matrix, mut k: usize) -> Matrix {
    let mut result = Matrix::identity(m.n());
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = result.mul(&base);
        }
        base = base.mul(&base);
        k >>= 1;
    }
    result
}

/// Picard iteration `x ← f(xW + ε)` on a contracting network.
///
/// Stops at the first `x_k` with `‖T x_k − x_k‖∞ ≤ tol`. The reported
/// `error_bound` is `‖(|W| diag β)^k‖ · ‖T x_0 − x_0‖∞`, which bounds that
/// last step.
pub fn solve_banach(
    net: &Network,
    x0: &[f64],
    tol: f64,
    kmax: usize,
) -> Result<SolveReport, SolveError> {
    if x0.len() != net.n() {
        return Err(SolveError::precondition(format!(
            "x0 has length {}, expected {}",
            x0.len(),
            net.n()
        )));
    }
    let class = classify(net);
    if !class.contracting {
        return Err(SolveError::NotContracting(class.modulus.unwrap_or(f64::INFINITY)));
    }
    let beta = net.lipschitz().expect("contracting networks are Lipschitz");
    let a = net.w().abs().scale_columns(&beta);

    let mut x = x0.to_vec();
    let mut first_step = None;
    for k in 0..=kmax {
        let tx = net.apply(&x);
        let step = diff(&tx, &x);
        let d0 = *first_step.get_or_insert(step);
        if step <= tol {
            return Ok(SolveReport {
                residual: step,
                x,
                method: Method::Banach,
                iterations: k,
                outer_guesses: None,
                error_bound: Some(row_operator_norm(&matrix_power(&a, k)) * d0),
                certificate: uniqueness_certificate(net),
                candidate: false,
            });
        }
        x = tx;
    }
    Err(SolveError::MaxIterations(kmax))
}

/// Monotone iteration from the lattice top (`Above`) or bottom (`Below`).
///
/// For Rogers-Veraart functions only `Above` is offered, started from each
/// function's supremum; the result is flagged as a candidate.
pub fn solve_tarski(
    net: &Network,
    direction: Direction,
    tol: f64,
    kmax: usize,
) -> Result<SolveReport, SolveError> {
    check_monotone(net)?;
    let start = match (net.lattice(), direction) {
        (Some((_, u)), Direction::Above) => u,
        (Some((l, _)), Direction::Below) => l,
        (None, Direction::Above) if has_rogers_veraart(net) => {
            let sup: Vec<f64> = net.functions().iter().map(InteractionFunction::sup).collect();
            if sup.iter().any(|s| !s.is_finite()) {
                return Err(SolveError::NoLattice);
            }
            sup
        }
        (None, Direction::Below) if has_rogers_veraart(net) => {
            return Err(SolveError::precondition(
                "only iteration from above is offered for discontinuous functions",
            ))
        }
        (None, _) => return Err(SolveError::NoLattice),
    };
    iterate_monotone(net, direction, start, tol, kmax)
}

/// Monotone iteration from a caller-supplied bound. `start` must satisfy
/// `T(start) ≤ start` for `Above` and `T(start) ≥ start` for `Below`.
pub fn solve_tarski_from(
    net: &Network,
    direction: Direction,
    start: &[f64],
    tol: f64,
    kmax: usize,
) -> Result<SolveReport, SolveError> {
    check_monotone(net)?;
    if start.len() != net.n() {
        return Err(SolveError::precondition("start has the wrong length"));
    }
    let t = net.apply(start);
    let ok = t.iter().zip(start).all(|(a, b)| match direction {
        Direction::Above => a <= b,
        Direction::Below => a >= b,
    });
    if !ok {
        return Err(SolveError::NoLattice);
    }
    iterate_monotone(net, direction, start.to_vec(), tol, kmax)
}

fn has_rogers_veraart(net: &Network) -> bool {
    net.functions()
        .iter()
        .any(|f| matches!(f, InteractionFunction::RogersVeraart { .. }))
}

fn check_monotone(net: &Network) -> Result<(), SolveError> {
    if net.functions().iter().all(InteractionFunction::is_monotone) && net.w().is_nonnegative() {
        Ok(())
    } else {
        Err(SolveError::NotMonotone)
    }
}

fn iterate_monotone(
    net: &Network,
    direction: Direction,
    mut x: Vec<f64>,
    tol: f64,
    kmax: usize,
) -> Result<SolveReport, SolveError> {
    for k in 1..=kmax {
        let next = net.apply(&x);
        let step = diff(&next, &x);
        x = next;
        if step <= tol {
            let residual = net.residual(&x);
            if residual <= tol {
                return Ok(SolveReport {
                    x,
                    residual,
                    method: match direction {
                        Direction::Above => Method::TarskiAbove,
                        Direction::Below => Method::TarskiBelow,
                    },
                    iterations: k,
                    outer_guesses: None,
                    error_bound: None,
                    certificate: uniqueness_certificate(net),
                    candidate: has_rogers_veraart(net),
                });
            }
        }
    }
    Err(SolveError::MaxIterations(kmax))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{clamp_net, example_3_1, m, wa, wb};
    use crate::matgraph::norm_inf_vec;
    use super::*;
    use crate::netmodel::{build_network, ModelSpec};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64], eps: f64) -> bool {
        diff(a, b) <= eps
    }

    #[test]
    fn banach_scalar_input_output() {
        let net = build_network(&ModelSpec::InputOutput {
            w: m(&[&[0.5]]),
            final_demand: vec![1.0],
        })
        .unwrap();
        let r = solve_banach(&net, &[0.0], 1e-12, 1000).unwrap();
        assert_abs_diff_eq!(r.x[0], 2.0, epsilon = 1e-11);
        assert!(r.residual <= 1e-12);
        assert!(r.residual <= r.error_bound.unwrap() + 1e-15);
        assert!(r.certificate.is_unique());
    }

    #[test]
    fn banach_simple_game() {
        let net = build_network(&ModelSpec::SimpleGame {
            phi: 0.5,
            adjacency: m(&[&[0.0, 1.0], &[1.0, 0.0]]),
            characteristics: vec![1.0, 1.0],
        })
        .unwrap();
        let r = solve_banach(&net, &[0.0, 0.0], 1e-10, 1000).unwrap();
        assert!(close(&r.x, &[2.0, 2.0], 1e-8));
    }

    #[test]
    fn banach_zero_shock_linear_map() {
        let net = Network::new(
            m(&[&[0.0, 2.0], &[4.0 / 7.0, 0.0]]),
            vec![
                InteractionFunction::linear(1.25),
                InteractionFunction::linear(2.0 / 3.0),
            ],
            vec![0.0, 0.0],
        )
        .unwrap();
        let r = solve_banach(&net, &[1.0, -1.0], 1e-12, 10_000).unwrap();
        assert!(close(&r.x, &[0.0, 0.0], 1e-10));
    }

    #[test]
    fn banach_rejects_noncontracting() {
        let net = example_3_1(&[1.0, -1.0]);
        assert!(matches!(
            solve_banach(&net, &[0.0, 0.0], 1e-9, 10),
            Err(SolveError::NotContracting(_))
        ));
    }

    #[test]
    fn banach_max_iterations() {
        let net = build_network(&ModelSpec::InputOutput {
            w: m(&[&[0.9]]),
            final_demand: vec![1.0],
        })
        .unwrap();
        assert_eq!(
            solve_banach(&net, &[0.0], 1e-12, 3),
            Err(SolveError::MaxIterations(3))
        );
    }

    #[test]
    fn tarski_comparative_d() {
        let net = clamp_net(wa(), 0.0, 2.0, &[0.2, 0.0, -0.2, 0.2]);
        let hi = solve_tarski(&net, Direction::Above, 1e-12, 1_000_000).unwrap();
        let lo = solve_tarski(&net, Direction::Below, 1e-12, 1_000_000).unwrap();
        assert!(close(&hi.x, &[1.2, 2.0, 2.0, 1.8], 1e-9));
        assert!(close(&lo.x, &[1.2, 2.0, 2.0, 1.8], 1e-9));
        assert_eq!(hi.method, Method::TarskiAbove);
    }

    #[test]
    fn tarski_comparative_c() {
        let net = clamp_net(wb(), 0.0, 2.0, &[0.2, -0.6, -0.2, 0.2]);
        let r = solve_tarski(&net, Direction::Above, 1e-12, 1_000_000).unwrap();
        assert!(close(&r.x, &[0.2, 0.0, 0.7579, 1.0421], 1e-4));
    }

    #[test]
    fn tarski_example_3_1_extremes() {
        let net = example_3_1(&[1.0, -1.0]);
        let hi = solve_tarski(&net, Direction::Above, 1e-12, 1000).unwrap();
        let lo = solve_tarski(&net, Direction::Below, 1e-12, 1000).unwrap();
        assert!(close(&hi.x, &[2.0, 1.0], 1e-12));
        assert!(close(&lo.x, &[-1.0, -2.0], 1e-12));
    }

    #[test]
    fn tarski_saturates_in_one_step() {
        let net = example_3_1(&[10.0, 10.0]);
        let r = solve_tarski(&net, Direction::Above, 1e-12, 10).unwrap();
        assert_eq!(r.x, vec![2.0, 2.0]);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn tarski_errors() {
        let unbounded = build_network(&ModelSpec::InputOutput {
            w: m(&[&[0.5]]),
            final_demand: vec![1.0],
        })
        .unwrap();
        assert_eq!(
            solve_tarski(&unbounded, Direction::Above, 1e-9, 10),
            Err(SolveError::NoLattice)
        );
        let signed = clamp_net(m(&[&[0.0, -1.0], &[1.0, 0.0]]), 0.0, 1.0, &[0.0, 0.0]);
        assert_eq!(
            solve_tarski(&signed, Direction::Above, 1e-9, 10),
            Err(SolveError::NotMonotone)
        );
    }

    #[test]
    fn tarski_rogers_veraart_candidate() {
        let net = build_network(&ModelSpec::RogersVeraartNet {
            w: m(&[&[0.0, 1.0], &[1.0, 0.0]]),
            alpha: 0.5,
            beta: 0.8,
            cap: vec![1.0, 1.0],
            shock: vec![0.5, 0.5],
        })
        .unwrap();
        let r = solve_tarski(&net, Direction::Above, 1e-12, 1000).unwrap();
        assert!(r.candidate);
        assert!(r.residual <= 1e-12);
        assert!(solve_tarski(&net, Direction::Below, 1e-12, 1000).is_err());
    }

    #[test]
    fn tarski_from_caller_bound() {
        let net = example_3_1(&[1.0, -1.0]);
        let r = solve_tarski_from(&net, Direction::Above, &[1.5, 0.5], 1e-12, 100).unwrap();
        assert!(close(&r.x, &[1.5, 0.5], 1e-12));
        assert_eq!(
            solve_tarski_from(&net, Direction::Above, &[-2.0, -2.0], 1e-12, 100),
            Err(SolveError::NoLattice)
        );
    }

    #[test]
    fn row_operator_norm_bounds_row_vectors() {
        // row sums are 1/2 but a row vector can keep its norm
        let a = m(&[&[0.5, 0.0], &[0.5, 0.0]]);
        assert_eq!(row_operator_norm(&a), 1.0);
        assert_eq!(norm_inf_vec(&a.vec_mul(&[1.0, 1.0])), 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn tarski_iterates_are_monotone(
            w in proptest::collection::vec(0.0..1.0f64, 9),
            eps in proptest::collection::vec(-1.0..1.0f64, 3),
        ) {
            let w = Matrix::from_fn(3, |i, j| w[3 * i + j]);
            let sums = w.row_sums();
            let w = Matrix::from_fn(3, |i, j| if sums[i] > 0.0 { w[(i, j)] / sums[i] } else { 0.0 });
            let net = clamp_net(w, -1.0, 1.0, &eps);
            let mut x = vec![1.0; 3];
            for _ in 0..200 {
                let next = net.apply(&x);
                prop_assert!(next.iter().zip(&x).all(|(a, b)| a <= b));
                x = next;
            }
            let mut y = vec![-1.0; 3];
            for _ in 0..200 {
                let next = net.apply(&y);
                prop_assert!(next.iter().zip(&y).all(|(a, b)| a >= b));
                y = next;
            }
            prop_assert!(x.iter().zip(&y).all(|(a, b)| a >= b));
        }
    }
}
