//! H-derivatives of functions of one quaternion variable.
//!
//! The derivative of `f` at `z⁰` is the quaternion `Σ A_k B_k` read off a
//! representation of the increment
//!
//! ```text
//! f(z⁰ + h) − f(z⁰) = Σ A_k·h·B_k + o(h)
//! ```
//!
//! This crate propagates such representations through expressions
//! ([`autodiff`]), evaluates `exp`, `sin`, `cos` by power series
//! ([`series`]), differentiates the principal logarithm ([`logarithm`]) and
//! checks everything against finite-difference oracles ([`diffops`]).
//! Expressions in `z` are parsed and checked by [`expr`] and [`check`].

// `!(x > 0.0)` is used on purpose so NaN is rejected; index loops mirror the matrix algebra.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod autodiff;
pub mod check;
pub mod diffops;
pub mod error;
pub mod expr;
pub mod logarithm;
pub mod matrix;
pub mod quat;
pub mod sandwich;
pub mod series;

pub use error::{Error, Result};
pub use matrix::RealMatrix4;
pub use quat::{CoordinateMethod, Quaternion};
pub use sandwich::{CanonicalSandwich, LinearMap, SandwichForm};

/// Which side a quaternion factor multiplies from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}
