//! Finite, sparse models of the operator-algebraic objects around the index
//! of loop-group Dirac operators: twisted group algebras and their level
//! decomposition, truncated boson/fermion Fock spaces, the Dirac operators
//! `∂_R`, `∂_L` and `D`, Mishchenko projections, and the comparison of the
//! assembled index with the analytic index.
//!
//! Everything is desk-scale linear algebra over labeled bases; identities
//! are checked to machine precision at every truncation.

pub mod assembly;
pub mod dirac;
pub mod error;
pub mod fock;
pub mod limitspace;
pub mod opcore;
pub mod quad;
pub mod rng;
pub mod twistgroup;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Default relative tolerance for floating-point comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;
