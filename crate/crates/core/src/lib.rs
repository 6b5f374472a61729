//! Mutually unbiased bases and the coherent-coin guessing game.
//!
//! Alice measures a probe state prepared by Bob in one of `d` bases drawn
//! from a set of `d` mutually unbiased bases (MUBs) in prime dimension `d`;
//! the basis choice is carried by a control ("coin") register. Bob then
//! measures the returned coin and tries to guess Alice's outcome. This crate
//! implements the whole pipeline:
//!
//! - [`numtheory`]: modular inverses, Legendre symbols and quadratic Gauss
//!   sums (the arithmetic behind the closed-form strategy),
//! - [`linalg`]: a small dense complex-matrix kernel with a cyclic-Jacobi
//!   Hermitian eigensolver,
//! - [`mub`]: Wootters-Fields and shifted (DPP) basis constructions, outcome
//!   relabellings and unbiasedness verification,
//! - [`game`]: guessing-probability evaluation for quantum and classical
//!   coins, the closed-form perfect strategy, and classical-coin bounds,
//! - [`optimize`]: the see-saw alternating optimization over probe states
//!   and POVMs with optimality certificates,
//! - [`search`]: exhaustive / cyclic / randomized searches over outcome
//!   relabellings and basis subsets,
//! - [`bounds`]: assembly of the quantum/classical bound table with CSV and
//!   JSON output.
//!
//! All randomized routines take explicit seeds and are bit-for-bit
//! reproducible; parallel scans reduce with order-independent operators so
//! thread count never changes a result.

pub mod bounds;
pub mod error;
pub mod game;
pub mod linalg;
pub mod mub;
pub mod numtheory;
pub mod optimize;
pub mod search;
mod wire;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use numtheory::PrimeDim;
