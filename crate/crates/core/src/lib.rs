//! Equilibria of interactive-network models `x = f(xW + ε)`.
//!
//! A network pairs a sensitivity matrix `W` (entry `w_ij` scales how agent
//! `i`'s state enters agent `j`'s input) with one interaction function per
//! agent and a shock vector `ε`. This crate computes equilibria, certifies
//! their uniqueness, detects and certifies multiplicity, and ranks agents by
//! their total impact on the steady state.
//!
//! Modules:
//!
//! * [`matgraph`]: dense matrices, spectral radius, Perron vectors, SCC
//!   condensation and weak-chain substochasticity.
//! * [`netmodel`]: interaction functions, the [`Network`] type and the
//!   model-family constructors.
//! * [`solver`]: classification, Banach and Tarski iteration, the finite
//!   fictitious-default search for bounded-identity networks, multiplicity
//!   probing and optimality verification.
//! * [`keyplayer`]: Katz centralities and the total-impact measure.
//! * [`demos`]: small worked networks with known equilibria.
//! * [`oracle`]: brute-force equilibrium enumeration used to check the
//!   solvers.
//!
//! Vectors are row vectors throughout; vertex indices are 0-based in the
//! library API.

// `!(a > b)` is used on purpose so NaN falls on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod demos;
pub mod keyplayer;
pub mod matgraph;
pub mod netmodel;
pub mod oracle;
pub mod solver;

pub use matgraph::{Matrix, MatrixError};
pub use netmodel::{InteractionFunction, ModelSpec, Network};
pub use solver::{Certificate, SolveReport};

/// Spectral comparisons against one use this slack.
pub const SPECTRAL_TOL: f64 = 1e-9;
