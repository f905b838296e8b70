//! Labeled-basis sparse linear algebra.
//!
//! Bases carry an explicit Gram diagonal so that monomial conventions with
//! integer ladder coefficients can be kept; orthonormalization happens only
//! where a spectral computation needs it.

mod basis;
mod export;
mod operator;
mod product;
mod spectrum;
mod vector;

pub use basis::{Basis, BasisEntry, Label};
pub use export::{from_triplet_text, to_triplet_text};
pub use operator::{graded_commutator, Grade, SparseOperator};
pub use product::{ProductBasis, ProductTruncation};
pub use spectrum::{
    eigen_blocks, kernel, kernel_with_tol, spectral_apply, spectrum, spectrum_with_tol, EigenBlock, Spectrum,
};
pub use vector::{inner_product, Vector};
