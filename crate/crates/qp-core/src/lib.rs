//! Exact computation with quiver representations.
//!
//! The crate computes, over exact fields only (rationals and prime fields),
//! the combinatorial and homological data attached to a Dynkin quiver:
//! root systems, indecomposable representations and their Auslander-Reiten
//! quiver, the extended quivers that encode (strict) partial flags of
//! representations as single modules, quiver Grassmannians of those modules,
//! and affine pavings of the corresponding flag varieties.  Every paving the
//! engine produces can be cross-checked against brute-force point counts
//! over small prime fields: a paving with cells of dimensions `d_1..d_m`
//! forces the point count over `F_q` to be `q^{d_1} + ... + q^{d_m}`.
//!
//! There is no floating point and no numerical tolerance anywhere.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod artheory;
pub mod extended;
pub mod field;
pub mod grassmann;
pub mod matrix;
pub mod paving;
pub mod quiver;
pub mod rep;
pub mod rng;
pub mod roots;

pub use field::{Field, Fp, Rationals};
pub use matrix::Matrix;
pub use quiver::{DimVec, Quiver, QuiverShape};
pub use rep::Rep;
