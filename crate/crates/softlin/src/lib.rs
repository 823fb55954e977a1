//! Soft linear and soft normed linear spaces over finite parameter sets.
//!
//! A soft set assigns a subset of ℝⁿ to every label of a finite parameter
//! set; soft elements, soft real numbers and soft vectors are total maps on
//! the same labels. This crate implements the calculus of these objects —
//! set algebra, linear structure, per-parameter norm families with their
//! induced metric, sequence convergence, extremal constants and convexity —
//! together with randomized and oracle-backed verification of the defining
//! identities. Everything is pure and deterministic given explicit
//! tolerance/seed arguments.

// `!(x > 0.0)` is how validations reject NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod convex;
pub mod error;
mod linalg;
pub mod norm;
pub mod param;
pub mod real;
mod sampling;
pub mod selftest;
pub mod seq;
pub mod set;
pub mod space;
pub mod vector;

pub use error::{Result, SoftError};
pub use param::ParameterSet;
pub use real::{compare, Relation, SoftReal, SoftScalar, TriState, DEFAULT_TOL};
pub use set::{SetRelation, SoftSet, SoftSetKind};
pub use space::{
    intersect_spaces, is_linearly_independent, is_soft_subspace, is_soft_vector_space,
    scale_soft_set, sum_soft_sets, translate_soft_set, translate_soft_set_by,
    IndependenceVerdict, SoftVectorSpace,
};
pub use vector::SoftVector;
