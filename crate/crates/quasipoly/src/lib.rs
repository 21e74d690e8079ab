//! Exact-arithmetic toolkit for counting lattice points in parametric
//! polytopes and solutions of linear Diophantine systems whose coefficients
//! are polynomials in one integer parameter `n`.
//!
//! The closed forms produced by this crate are *eventually quasi-polynomial*:
//! for all `n` past an explicit threshold, the count agrees with one of `T`
//! polynomials selected by `n mod T`. Everything is computed over
//! arbitrary-precision integers and rationals; there is no floating point
//! anywhere.
//!
//! Module overview:
//!
//! - [`polyring`]: integer polynomials, rational functions, eventual
//!   sign/order decisions, base-`n` digit representation.
//! - [`eqp`]: the ring of eventually quasi-polynomial functions.
//! - [`gendiv`]: generalized division, gcd and Bezout certificates over
//!   `Z[x]` and over quasi-polynomials.
//! - [`gsnf`]: generalized Smith normal form with unimodular certificates.
//! - [`paramgeo`]: parametric polytopes over the rational function field.
//! - [`ehrhart`]: the counting pipeline (base-`n` carry reduction, recursive
//!   counting, dilation base case, top-level entry points).
//! - [`formulas`]: Popoviciu-style closed forms, generalized continued
//!   fractions and 2D signed unimodular cone decomposition.
//! - [`oracle`]: brute-force enumeration, quasi-polynomial fitting and
//!   verification reports.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ehrhart;
pub mod eqp;
mod error;
pub mod formulas;
pub mod gendiv;
pub mod gsnf;
pub mod oracle;
pub mod paramgeo;
pub mod polyring;

pub use eqp::EventualQP;
pub use error::{Error, Result};

pub use polyring::{IntPoly, QPoly, RatFunc, Sign};
