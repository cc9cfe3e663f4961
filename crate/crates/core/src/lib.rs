//! Lattice-valued ultrametric spaces and lattice-indexed families of
//! equivalence relations.
//!
//! A structure carrying equivalence relations `E_λ` indexed by a bounded
//! lattice Λ (meet-preserving, with `E_0` equality and `E_1` trivial) is the
//! same thing as an ultrametric space whose distances live in the filter
//! lattice Φ(Λ). This crate implements both sides, the maps between them,
//! and finite-scale tooling around homogeneity, amalgamation and lattices of
//! automorphism-invariant equivalence relations.

pub mod correspondence;
pub mod definability;
pub mod error;
pub mod filter;
pub mod format;
pub mod homogeneity;
pub mod lattice;
pub mod partition;
pub mod structures;

pub use error::{Error, Result};
