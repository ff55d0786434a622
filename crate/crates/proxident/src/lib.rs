//! Composite convex optimization with structure identification.
//!
//! Solves min_x f(x) + lambda * g(x) where f is smooth least squares and
//! g a structure-inducing regularizer (l1, nuclear norm, distance to a
//! p-ball), via proximal gradient, its accelerated and monotone variants,
//! and a provisionally-accelerated method that suspends inertia when it
//! would disrupt the active structure. Tracks the exact structure of every
//! iterate as reported by the prox computations themselves.

pub mod error;
pub mod experiments;
pub mod identification;
pub mod inertia;
pub mod linalg;
pub mod regularizers;
pub mod report;
pub mod smooth;
pub mod solvers;

pub use error::Error;
