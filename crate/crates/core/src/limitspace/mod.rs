//! Inductive-limit model of `L²` over the based loop group: one 2-D
//! Hermite mode per Fourier mode, with the asymptotically constant unit
//! vectors `Ξ_σ` frozen beyond an active prefix.

mod dirac;
mod embed;
mod hermite;
mod sigma;

pub use dirac::{build_D, frozen_tail_norm, limit_dirac_on, tail_csv, tail_table, LimitDirac, TailRow};
pub(crate) use dirac::{active_xi, check_active, prefix_groups, xi_weight};
pub use embed::{embed_crossed, prefix_basis, trace};
pub use hermite::{
    accelerated_sum, dRz, dRz_norm_on_xi, dRzbar, drz_terms, ladder, laguerre_integrals, mode_basis, riesz_mean,
    xi_coeffs, xi_radial, xi_series, DrzReport, Ladder, ModeFunction, ModeTag, SeriesEstimate, DRZ_TOL,
};
pub use sigma::{check_sigma_condition, tail_bound, SigmaReport, SigmaSequence, Verdict};
