//! Units of the order `H(R)` in the quaternion algebra `(-1, -1 / Q(sqrt(-d)))`,
//! the hyperbolicity decision table for `U_1(RG)`, and ping-pong certificates
//! that powers of units generate free groups.
//!
//! Everything algebraic is exact (`num-bigint`); only the Möbius geometry in
//! [`freeness`] uses floating point, and it is cross-checked by an exact
//! relation search.

pub mod classify;
pub mod cli;
pub mod freeness;
mod json;
pub mod literal;
pub mod quadratic;
pub mod quaternion;
pub mod units;

pub use literal::{format_unit, parse_unit};
pub use quadratic::{
    PellNorm, PellSolution, QuadInt, QuadRat, QuadRing, SquareFreeD, ThreeSquares,
};
pub use quaternion::{Basis, Quaternion, TorsionKind, TorsionVerdict};
