//! Numerical laboratory for the singularly perturbed, doubly degenerate
//! problem
//!
//! ```text
//! (|grad u|^p + a(x)|grad u|^q) F(D^2 u) = zeta_eps(x, u)   in the box
//!                                      u = g               on its boundary
//! ```
//!
//! and for the geometry of its transition layer. See the `examples/`
//! directory for one runnable program per capability.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barrier;
pub mod cli;
pub mod config;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod oned;
pub mod operators;
pub mod reaction;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{Grid, ScalarField, SymMatrix};
pub use operators::{DegeneracyParams, OperatorKind};
pub use reaction::ReactionParams;
pub use solver::{ProblemSpec, SolveConfig, SolveResult};
