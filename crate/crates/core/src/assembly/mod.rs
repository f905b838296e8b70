//! The descended cycle `∂̃ = D⊗₂id + id⊗₁∂_L`, its compression by the
//! Mishchenko projection `P_Ξ`, and the comparison with the analytic index.

mod analysis;
mod finite;
mod index;
mod jcycle;
mod kucerovsky;

pub use analysis::{
    commutator_bound, cross_mode_estimates, embed_prefix, mishchenko_xi, resolvent_compactness, xi_scalar_bound,
    CommutatorReport, CrossModeRow, RankOne, ResolventReport, XiProjection,
};
pub use jcycle::{build_j_cycle, build_j_cycle_with, ColumnCut, JCycle};
pub use index::{
    analytic_index, assemble, assemble_with, compare_indices, transpose_intertwiner, Assembled, IndexComparison,
    IndexCycle, IndexModel, ModuleAxioms,
};
pub use finite::{finite_assemble, finite_j_cycle, level_pattern, FiniteAssembly, FiniteCycle, LevelRow};
pub use kucerovsky::{default_generators, kucerovsky_check, xi_commutator_bound, KucerovskyRow};
