//! Quaternion-space meta-heuristic optimization with Minkowski p-norm
//! projection refinement.
//!
//! Candidate solutions live in hypercomplex space: each decision variable
//! is a quaternion whose coefficients are confined to `[0, 1]` and
//! projected onto the variable's real interval through a Minkowski p-norm.
//! The global phase runs particle swarm optimization over that space with
//! the Euclidean (`p = 2`) projection; a second, nearly free phase then
//! freezes the best solution and retunes the projection exponent itself
//! with a black-hole search, which often buys an extra fitness improvement
//! at a tiny fraction of the global phase's cost.
//!
//! The [`harness`] module adds the experiment protocol around the
//! pipeline: a run matrix over benchmark functions and dimensions,
//! append-only persistence, Wilcoxon signed-rank significance testing and
//! a plain-text report, all driven by the `qlio` command-line tool.

pub mod benchmarks;
pub mod error;
pub mod harness;
pub mod hypernum;
pub mod lio;
pub mod optimizers;

pub use error::{Error, Result};
