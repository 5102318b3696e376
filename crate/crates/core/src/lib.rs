//! Exact variational calculus on finite-order jet coordinates.
//!
//! The crate is organised bottom-up:
//!
//! * [`multiindex`] — symmetric multi-indices and the base manifold,
//! * [`symexpr`] — the exact coefficient ring (rational functions with atoms),
//! * [`jetops`] — total derivatives, the Euler–Lagrange operator and
//!   inversion of total divergences,
//! * [`contactforms`] — the finite-order variational bicomplex,
//! * [`symmetry`] — generalized vector fields, Lie derivatives, the first
//!   variational formula and Noether currents.

pub mod contactforms;
pub mod error;
pub mod jetops;
pub mod multiindex;
pub mod random;
pub mod selftest;
pub mod symexpr;
pub mod symmetry;

pub use error::{Error, Result};
