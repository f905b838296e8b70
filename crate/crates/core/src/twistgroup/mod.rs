//! Finite twisted group algebras, central extensions by `μ_m`, crossed
//! products `G ⋉ C(X)` and the bimodule maps between them.

mod algebra;
mod crossed;
mod csv;
mod decompose;
mod group;
mod loops;
mod miso;
mod scalar;

pub use algebra::{
    convolve, level_project, level_suite, module_inner, module_left, module_right, GroupAlgebraElement, LevelCase,
    ModuleElement, TwistedRegular,
};
pub use crossed::{crossed_convolve, mishchenko, product_table, regular_rep, schatten_map, CrossedProductElement, GSet};
pub use csv::{algebra_csv, crossed_csv};
pub use decompose::decompose_twisted_algebra;
pub use group::{check_cocycle, parse_group_spec, Cocycle, Extension, FiniteAbelianGroup, GroupTable, Violation};
pub use loops::{loop_cocycle, loop_pairing, TrigLoop};
pub use miso::{bimodule_inner, bimodule_left, bimodule_right, m_iso, miso_trials, rank_one, transpose_iso, BimoduleElement, MisoReport};
pub use scalar::{cyclotomic_poly, Cyclotomic, Scalar, Q};
