#![allow(dead_code)]

use netequil::{InteractionFunction, Matrix, Network};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type TestRng = Xoshiro256PlusPlus;

pub fn rng(seed: u64) -> TestRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Random nonnegative matrix with zero diagonal and roughly `density` of the
/// off-diagonal entries set.
pub fn random_nonneg(rng: &mut TestRng, n: usize, density: f64) -> Matrix {
    Matrix::from_fn(n, |i, j| {
        if i != j && rng.random_bool(density) {
            rng.random_range(0.1..1.0)
        } else {
            0.0
        }
    })
}

fn add_cycle(rng: &mut TestRng, w: &mut Matrix) {
    let n = w.n();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    for k in 0..n {
        let (a, b) = (order[k], order[(k + 1) % n]);
        if a != b {
            w[(a, b)] += rng.random_range(0.1..1.0);
        }
    }
}

/// Row-stochastic with zero diagonal (n ≥ 2). `irreducible` adds a random
/// Hamiltonian cycle; otherwise every row just gets at least one entry.
pub fn random_row_stochastic(rng: &mut TestRng, n: usize, irreducible: bool) -> Matrix {
    let density = rng.random_range(0.2..0.8);
    let mut w = random_nonneg(rng, n, density);
    if irreducible {
        add_cycle(rng, &mut w);
    }
    for i in 0..n {
        if w.row(i).iter().all(|&v| v == 0.0) {
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            w[(i, j)] = 1.0;
        }
    }
    let sums = w.row_sums();
    Matrix::from_fn(n, |i, j| w[(i, j)] / sums[i])
}

pub fn random_irreducible_nonneg(rng: &mut TestRng, n: usize) -> Matrix {
    let density = rng.random_range(0.1..0.6);
    let mut w = random_nonneg(rng, n, density);
    add_cycle(rng, &mut w);
    w
}

pub fn uniform_vec(rng: &mut TestRng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Bounded-identity network on a row-stochastic `W` with random bounds and
/// a continuous shock.
pub fn random_bounded_identity(rng: &mut TestRng, n: usize) -> Network {
    let irreducible = rng.random_bool(0.5);
    let w = random_row_stochastic(rng, n, irreducible);
    let lower = uniform_vec(rng, n, -1.0, 0.5);
    let upper: Vec<f64> = lower.iter().map(|l| l + rng.random_range(0.5..3.0)).collect();
    let shock = uniform_vec(rng, n, -1.5, 1.5);
    Network::bounded_identity(w, &lower, &upper, shock).unwrap()
}

pub fn clamped(offset: f64, gain: f64, lower: f64, upper: f64) -> InteractionFunction {
    InteractionFunction::clamped_affine(offset, gain, lower, upper).unwrap()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn leq(a: &[f64], b: &[f64], slack: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| *x <= y + slack)
}
