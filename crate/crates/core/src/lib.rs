//! Exact classification of chains of linear maps (zigzag representations of
//! type `A_t` quivers) up to linear isomorphism.
//!
//! The crate is `no_std` and needs only `alloc`. Scalars are exact: rationals
//! with arbitrary-precision integers, or residues modulo a prime.
//!
//! - [`linalg`]: matrices and subspaces (RREF, kernel, image, preimage, sum).
//! - [`chain`]: the chain type, interval chains, direct sums, base changes.
//! - [`invariants`]: flags, invariant tables and interval decompositions.
//! - [`canon3`]: canonical block form for chains `U_1 -> U_2 <- U_3`.
//! - [`gadget`]: the `(M, N_X)` construction embedding unitary similarity of
//!   `X` into isometry of three-vertex chains.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod canon3;
pub mod chain;
pub mod field;
pub mod gadget;
pub mod invariants;
pub mod linalg;

pub use chain::{interval_chain, Chain, ChainError, ChainShape, Direction, LinearIso};
pub use field::{Field, FieldValue};
pub use invariants::{
    canonical_decomposition, flags, invariant_table, linearly_isomorphic, multiplicities_solve,
    multiplicities_sweep, Interval, IntervalMultiset, InvariantError, InvariantTable,
};
pub use linalg::{LinAlgError, Matrix, Subspace};
