//! Brute-force checks: boundary-pattern enumeration, grid search and
//! empirical multiplicity rates.

mod elim;
mod grid;
mod rate;

use serde::Serialize;
use thiserror::Error;

use crate::netmodel::Network;

pub use grid::grid_search;
pub use rate::{multiplicity_rate, ShockSampler};

pub const MAX_ENUMERATION: usize = 12;
/// Isolated points closer than this are merged.
pub const DEDUP_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("n = {0} is too large for this oracle")]
    TooLarge(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Upper,
    Lower,
    Interior,
}

/// Equilibria `base + Σ t_k basis[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Family {
    pub pattern: Vec<Tag>,
    /// Midpoint of the segment for one-dimensional families.
    pub base: Vec<f64>,
    /// Each vector has max-norm one and a positive first nonzero entry.
    pub basis: Vec<Vec<f64>>,
    /// Admissible parameter box; `None` when the null space has dimension
    /// above one and the box was not explored.
    pub parameter_box: Option<Vec<(f64, f64)>>,
}

impl Family {
    pub fn point(&self, t: &[f64]) -> Vec<f64> {
        let mut x = self.base.clone();
        for (d, tk) in self.basis.iter().zip(t) {
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += tk * di;
            }
        }
        x
    }

    /// Both ends of a one-dimensional family.
    pub fn endpoints(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match (self.basis.len(), &self.parameter_box) {
            (1, Some(b)) => Some((self.point(&[b[0].0]), self.point(&[b[0].1]))),
            _ => None,
        }
    }

    fn distance_to(&self, x: &[f64]) -> Option<f64> {
        let (lo, hi) = self.parameter_box.as_ref().filter(|_| self.basis.len() == 1)?[0];
        let d = &self.basis[0];
        let diff: Vec<f64> = x.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        let t = dot(&diff, d) / dot(d, d);
        let p = self.point(&[t.clamp(lo, hi)]);
        Some(max_diff(&p, x))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumSet {
    pub points: Vec<Vec<f64>>,
    pub families: Vec<Family>,
}

impl EquilibriumSet {
    pub fn is_unique(&self) -> bool {
        self.families.is_empty() && self.points.len() == 1
    }

    pub fn is_multiple(&self) -> bool {
        !self.families.is_empty() || self.points.len() > 1
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

struct Context<'a> {
    net: &'a Network,
    l: Vec<f64>,
    u: Vec<f64>,
    tol: f64,
}

impl Context<'_> {
    /// Upper/Lower agents' inputs are on the right side of their bound.
    fn pinned_ok(&self, pattern: &[Tag], inputs: &[f64]) -> bool {
        pattern.iter().enumerate().all(|(j, tag)| match tag {
            Tag::Upper => inputs[j] >= self.u[j] - self.tol,
            Tag::Lower => inputs[j] <= self.l[j] + self.tol,
            Tag::Interior => true,
        })
    }

    fn examine(&self, pattern: &[Tag], points: &mut Vec<Vec<f64>>, families: &mut Vec<Family>) {
        let n = self.net.n();
        let w = self.net.w();
        let interior: Vec<usize> = (0..n).filter(|&j| pattern[j] == Tag::Interior).collect();
        let mut x: Vec<f64> = (0..n)
            .map(|j| match pattern[j] {
                Tag::Upper => self.u[j],
                Tag::Lower => self.l[j],
                Tag::Interior => 0.0,
            })
            .collect();
        if interior.is_empty() {
            if self.pinned_ok(pattern, &self.net.inputs(&x)) {
                points.push(x);
            }
            return;
        }

        // x_I (I − W_II) = ε_I + x_F W_FI, transposed to a column system
        let m = interior.len();
        let fixed_inputs = self.net.inputs(&x);
        let mut a = vec![0.0; m * m];
        for (r, &j) in interior.iter().enumerate() {
            for (c, &k) in interior.iter().enumerate() {
                a[r * m + c] = if r == c { 1.0 } else { 0.0 } - w[(k, j)];
            }
        }
        let b: Vec<f64> = interior.iter().map(|&j| fixed_inputs[j]).collect();
        let sol = elim::solve(a, b, m);
        let Some(y) = sol.particular else {
            return;
        };
        for (r, &j) in interior.iter().enumerate() {
            x[j] = y[r];
        }

        match sol.null.len() {
            0 => {
                let strictly_inside = interior.iter().all(|&j| self.l[j] < x[j] && x[j] < self.u[j]);
                if strictly_inside && self.pinned_ok(pattern, &self.net.inputs(&x)) {
                    points.push(x);
                }
            }
            1 => {
                let mut d = vec![0.0; n];
                for (r, &j) in interior.iter().enumerate() {
                    d[j] = sol.null[0][r];
                }
                if let Some(f) = self.segment(pattern, &x, d) {
                    families.push(f);
                }
            }
            _ => {
                if self.net.residual(&x) <= self.tol {
                    let basis = sol
                        .null
                        .iter()
                        .map(|v| {
                            let mut d = vec![0.0; n];
                            for (r, &j) in interior.iter().enumerate() {
                                d[j] = v[r];
                            }
                            canonical(d).0
                        })
                        .collect();
                    families.push(Family {
                        pattern: pattern.to_vec(),
                        base: x,
                        basis,
                        parameter_box: None,
                    });
                }
            }
        }
    }

    /// Largest segment `p + t·d` that keeps the pattern consistent.
    fn segment(&self, pattern: &[Tag], p: &[f64], d: Vec<f64>) -> Option<Family> {
        let (d, _) = canonical(d);
        let inputs = self.net.inputs(p);
        let c = self.net.w().vec_mul(&d);
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        let mut bound = |coef: f64, slack_lo: f64, slack_hi: f64| -> bool {
            // slack_lo ≤ coef·t ≤ slack_hi
            if coef.abs() <= 1e-12 {
                return slack_lo <= 0.0 && 0.0 <= slack_hi;
            }
            let (a, b) = (slack_lo / coef, slack_hi / coef);
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
            true
        };
        for j in 0..p.len() {
            let ok = match pattern[j] {
                Tag::Interior if d[j].abs() <= 1e-12 => self.l[j] < p[j] && p[j] < self.u[j],
                Tag::Interior => bound(d[j], self.l[j] - p[j], self.u[j] - p[j]),
                Tag::Upper => bound(c[j], self.u[j] - self.tol - inputs[j], f64::INFINITY),
                Tag::Lower => bound(c[j], f64::NEG_INFINITY, self.l[j] + self.tol - inputs[j]),
            };
            if !ok {
                return None;
            }
        }
        // zero-length segments are single points found by another pattern
        if !(hi - lo > 1e-9) {
            return None;
        }
        let mid = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        Some(Family {
            pattern: pattern.to_vec(),
            base: p.iter().zip(&d).map(|(x, di)| x + mid * di).collect(),
            basis: vec![d],
            parameter_box: Some(vec![(-h, h)]),
        })
    }
}

/// Scales to max-norm one with a positive first nonzero entry.
fn canonical(mut d: Vec<f64>) -> (Vec<f64>, f64) {
    let scale = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let first = d.iter().copied().find(|v| v.abs() > 1e-12 * scale).unwrap_or(1.0);
    let s = scale.copysign(first);
    for v in d.iter_mut() {
        *v /= s;
    }
    (d, s)
}

/// Every equilibrium of a bounded-identity network, found by trying each
/// Upper/Lower/Interior assignment and solving the interior linear block.
pub fn enumerate_equilibria(net: &Network, tol: f64) -> Result<EquilibriumSet, OracleError> {
    let n = net.n();
    if n > MAX_ENUMERATION {
        return Err(OracleError::TooLarge(n));
    }
    if !net.is_bounded_identity() {
        return Err(OracleError::PreconditionViolated(
            "every function must be a bounded identity".into(),
        ));
    }
    let (l, u) = net.lattice().expect("bounded identities have a lattice");
    let ctx = Context { net, l, u, tol };

    let mut points = Vec::new();
    let mut families = Vec::new();
    let mut pattern = vec![Tag::Upper; n];
    loop {
        ctx.examine(&pattern, &mut points, &mut families);
        // base-3 counter over patterns
        let mut k = 0;
        loop {
            if k == n {
                return Ok(finish(net, tol, points, families));
            }
            pattern[k] = match pattern[k] {
                Tag::Upper => Tag::Lower,
                Tag::Lower => Tag::Interior,
                Tag::Interior => Tag::Upper,
            };
            if pattern[k] != Tag::Upper {
                break;
            }
            k += 1;
        }
    }
}

fn finish(
    net: &Network,
    tol: f64,
    mut points: Vec<Vec<f64>>,
    mut families: Vec<Family>,
) -> EquilibriumSet {
    points.retain(|x| net.residual(x) <= tol);
    points.sort_by(|a, b| lex(a, b));
    let mut unique: Vec<Vec<f64>> = Vec::new();
    for x in points {
        if unique.iter().all(|y| max_diff(&x, y) > DEDUP_TOL) {
            unique.push(x);
        }
    }

    families.sort_by(|a, b| lex(&a.base, &b.base).then_with(|| lex(&a.basis[0], &b.basis[0])));
    let mut merged: Vec<Family> = Vec::new();
    for f in families {
        let dup = merged.iter().any(|g| {
            g.basis.len() == f.basis.len()
                && max_diff(&g.base, &f.base) <= DEDUP_TOL
                && g.basis.iter().zip(&f.basis).all(|(a, b)| max_diff(a, b) <= DEDUP_TOL)
        });
        if !dup {
            merged.push(f);
        }
    }
    unique.retain(|x| {
        merged
            .iter()
            .all(|f| f.distance_to(x).is_none_or(|d| d > DEDUP_TOL))
    });
    EquilibriumSet {
        points: unique,
        families: merged,
    }
}
