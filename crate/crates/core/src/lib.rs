//! Exact and p-adic kernels for cup products at exceptional zeros.
//!
//! The crate is organised bottom-up: [`padic`] (precision-tracked Z/p^k and its
//! unramified extensions), [`cyclotomic`] (exact Q(ζ_M)), [`characters`]
//! (Dirichlet characters), [`lvalues`] (Bernoulli numbers, Kubota–Leopoldt
//! values, ℒ-invariants), [`reciprocity`] (trace sums and cup-product values)
//! and [`lambda`] (truncated Λ-adic series and the Eisenstein family).

pub mod arith;
pub mod characters;
pub mod context;
pub mod cyclotomic;
pub mod error;
pub mod lambda;
pub mod lvalues;
pub mod padic;
pub mod reciprocity;
pub mod verify;

pub use error::{Error, Result};
