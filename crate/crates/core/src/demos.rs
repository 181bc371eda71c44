//! Small worked networks with known equilibria.
//!
//! Each demo carries its inputs verbatim and, where one is known, the
//! printed equilibrium used as a reference value in tests and by the CLI.

use crate::matgraph::Matrix;
use crate::netmodel::Network;

/// A named network plus its reference equilibrium, if it has a single one.
#[derive(Debug, Clone)]
pub struct Demo {
    pub name: &'static str,
    pub network: Network,
    pub expected: Option<Vec<f64>>,
}

/// Names accepted by [`demo`].
pub const DEMO_NAMES: [&str; 8] = [
    "example-3-1",
    "comparative-a",
    "comparative-b",
    "comparative-c",
    "comparative-d",
    "comparative-e",
    "seven-node",
    "spectral-tightness",
];

fn clamp(w: Matrix, lo: f64, hi: f64, eps: &[f64]) -> Network {
    let n = w.n();
    Network::bounded_identity(w, &vec![lo; n], &vec![hi; n], eps.to_vec())
        .expect("demo inputs are valid")
}

/// The 4×4 matrix whose two blocks both have spectral radius one.
pub fn w_a() -> Matrix {
    Matrix::from_rows(&[
        [0.0, 2.0, 0.0, 0.0],
        [0.5, 0.0, 0.5, 0.0],
        [0.0, 0.0, 0.0, 0.8],
        [0.0, 0.0, 0.8, 0.0],
    ])
    .unwrap()
}

/// `w_a` with extra edges out of agents 0 and 1 and a heavier second block.
pub fn w_b() -> Matrix {
    Matrix::from_rows(&[
        [0.0, 2.0, 0.1, 0.8],
        [0.5, 0.0, 0.8, 0.1],
        [0.0, 0.0, 0.0, 0.9],
        [0.0, 0.0, 0.9, 0.0],
    ])
    .unwrap()
}

pub const EPS_A: [f64; 4] = [0.2, -0.6, -0.2, 0.2];
pub const EPS_B: [f64; 4] = [0.2, 0.0, -0.2, 0.2];

/// Two agents copying each other, clamped to `[-2, 2]`.
pub fn example_3_1(eps: &[f64]) -> Network {
    clamp(
        Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap(),
        -2.0,
        2.0,
        eps,
    )
}

/// The seven-bank network solved by the fictitious-default search.
pub fn seven_node() -> Network {
    let w = Matrix::from_rows(&[
        [0.0, 0.4, 0.15, 0.0, 0.4, 0.05, 0.0],
        [0.4, 0.0, 0.15, 0.25, 0.0, 0.2, 0.0],
        [0.3, 0.1, 0.0, 0.25, 0.15, 0.2, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    ])
    .unwrap();
    let eps = [2.0, 1.0, -1.0, 3.0, 2.0, -1.0, -2.0]
        .iter()
        .map(|e| e * 1e-5)
        .collect();
    Network::bounded_identity(w, &[0.0; 7], &[5.0, 10.0, 10.0, 8.0, 10.0, 10.0, 6.0], eps)
        .unwrap()
}

/// Builds a demo by name; `None` for unknown names.
pub fn demo(name: &str) -> Option<Demo> {
    let (network, expected) = match name {
        "example-3-1" => (example_3_1(&[1.0, -1.0]), None),
        "comparative-a" => (clamp(w_a(), 0.0, 2.0, &EPS_A), Some(vec![0.2, 0.0, 0.0, 0.2])),
        "comparative-b" => (clamp(w_a(), 0.1, 2.0, &EPS_A), Some(vec![0.25, 0.1, 0.1, 0.28])),
        "comparative-c" => (
            clamp(w_b(), 0.0, 2.0, &EPS_A),
            Some(vec![0.2, 0.0, 0.7579, 1.0421]),
        ),
        "comparative-d" => (clamp(w_a(), 0.0, 2.0, &EPS_B), Some(vec![1.2, 2.0, 2.0, 1.8])),
        "comparative-e" => (clamp(w_b(), 0.1, 2.0, &EPS_B), Some(vec![1.2, 2.0, 2.0, 2.0])),
        "seven-node" => (
            seven_node(),
            Some(vec![2.857e-5, 2.143e-5, 0.0, 8.0, 8.00003, 0.0, 0.0]),
        ),
        // r(W) = √6 > 1; both (0, 2) and (5, 5) are equilibria
        "spectral-tightness" => (
            clamp(
                Matrix::from_rows(&[[0.0, 2.0], [3.0, 0.0]]).unwrap(),
                0.0,
                5.0,
                &[-6.0, 2.0],
            ),
            None,
        ),
        _ => return None,
    };
    let name = DEMO_NAMES.iter().find(|n| **n == name)?;
    Some(Demo { name, network, expected })
}
