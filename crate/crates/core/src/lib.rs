//! Neighbor-aware graph attention engine for implicit-feedback
//! recommendation on bipartite user-item interaction graphs.
//!
//! This crate is the algorithmic half of the project: graph construction,
//! k-core filtering and splitting, capped neighborhood sampling, the
//! attention model with exact reverse-mode gradients, BPR training with
//! sparse Adam updates, and all-ranking top-K evaluation. File formats and
//! the command-line interface live in the companion `ngat-cli` crate.
//!
//! Every randomized operation is driven by addressable seed streams (see
//! [`rng`]), so identical inputs and seeds produce identical outputs
//! regardless of evaluation order. The numeric code is generic over the
//! scalar type: training normally runs at `f32`, while verification paths
//! (reference-forward comparison, finite-difference gradient checks)
//! instantiate `f64`.
//!
//! The crate is `no_std` compatible (requires `alloc`); disable the
//! default `std` feature to embed it.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod eval;
pub mod graph;
pub mod model;
pub mod rng;
pub mod sampler;
pub mod synthetic;
pub mod trainer;

mod math;
mod real;

pub use real::Real;
