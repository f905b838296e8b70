use std::sync::Arc;

use crate::dirac::{dirac_on, Layout, TripleSpace};
use crate::fock::{self, Kind, Mode, TruncationSpec};
use crate::limitspace::{
    active_xi, check_active, dRz, dRzbar, limit_dirac_on, mode_basis, prefix_groups, xi_weight, ModeFunction,
    SigmaSequence,
};
use crate::opcore::{Basis, Grade, ProductBasis, ProductTruncation, SparseOperator};
use crate::{Error, Result, C64};

/// `∂̃ = D ⊗₂ id + id ⊗₁ ∂_L` on
/// (Hermite modes `1..=M`) ⊗ fermion ⊗ dual ⊗ boson.
///
/// The fermion factor is shared between the two summands. Hermite modes are
/// cut per mode at `cap`; fermion, dual and boson together at `E_max`, so the
/// last three factors form exactly the space of `build_dirac_L`.
#[derive(Debug)]
pub struct JCycle {
    pub spec: TruncationSpec,
    pub m_active: usize,
    pub cap: u32,
    pub cut: ColumnCut,
    pub seq: SigmaSequence,
    pub sigmas: Vec<f64>,
    /// Renormalized Ξ of each active mode.
    pub xi: Vec<ModeFunction>,
    pub product: ProductBasis,
    /// fermion ⊗ dual ⊗ boson, as in `build_dirac_L`.
    pub left: TripleSpace,
    /// `D ⊗₂ id`
    pub d_part: SparseOperator,
    /// `id ⊗₁ ∂_L`
    pub l_part: SparseOperator,
    pub operator: SparseOperator,
}

impl JCycle {
    pub fn hermite(&self) -> Vec<usize> {
        (0..self.m_active).collect()
    }

    pub fn fermion_pos(&self) -> usize {
        self.m_active
    }

    pub fn dual_pos(&self) -> usize {
        self.m_active + 1
    }

    pub fn boson_pos(&self) -> usize {
        self.m_active + 2
    }

    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    /// Index of the left-space tuple `(f, d, b)` part of a cycle tuple.
    fn left_tuple(&self, t: &[usize]) -> Vec<usize> {
        let m = self.m_active;
        let mut lt = vec![0; 3];
        lt[Layout::LEFT.fermion] = t[m];
        lt[Layout::LEFT.dual] = t[m + 1];
        lt[Layout::LEFT.boson] = t[m + 2];
        lt
    }

    /// `V: w ↦ Ξ ⊗ w` from the left space into the cycle space.
    pub fn xi_embedding(&self) -> Result<SparseOperator> {
        let h = self.hermite();
        let mut trip = Vec::new();
        for i in 0..self.product.dim() {
            let w = xi_weight(&self.product, &h, &self.xi, i);
            if w == C64::default() {
                continue;
            }
            let lt = self.left_tuple(self.product.tuple(i));
            let j = self
                .left
                .product
                .index_of_tuple(&lt)
                .ok_or_else(|| Error::BasisMismatch("cycle tuple has no left-space partner".into()))?;
            trip.push((i, j, w));
        }
        SparseOperator::from_triplets(self.left.basis().clone(), self.product.basis().clone(), Grade::Even, trip)
    }

    /// `{D⊗id, id⊗∂_L} = −2 Σ_n n (dR_{z_n} ⊗ id ⊗ dρ*(z̄_n) + dR_{z̄_n} ⊗ id ⊗ dρ*(z_n))`,
    /// assembled from the factor operators.
    pub fn cross_term(&self) -> Result<SparseOperator> {
        let k = self.product.factors().len();
        let db = self.product.factor(self.dual_pos());
        let mut total = SparseOperator::zero(self.product.basis().clone(), self.product.basis().clone(), Grade::Even);
        for n in 1..=self.m_active {
            let hb = self.product.factor(n - 1);
            let (z, zb) = (dRz(hb)?, dRzbar(hb)?);
            let up = fock::dual_raise(db, n as u32, Mode::Compressed)?;
            let down = fock::dual_lower(db, n as u32)?;
            for (a, b) in [(&z, &up), (&zb, &down)] {
                let mut ops: Vec<Option<&SparseOperator>> = vec![None; k];
                ops[n - 1] = Some(a);
                ops[self.dual_pos()] = Some(b);
                total = total.add(&self.product.lift(&ops)?.scale_real(-2.0 * n as f64))?;
            }
        }
        Ok(total)
    }

    /// Max entry of `∂̃² − (D² ⊗ id + id ⊗ ∂_L² + cross_term)`.
    pub fn square_residual(&self) -> Result<f64> {
        let sq = self.operator.compose(&self.operator)?;
        let rhs = self
            .d_part
            .compose(&self.d_part)?
            .add(&self.l_part.compose(&self.l_part)?)?
            .add(&self.cross_term()?)?;
        sq.max_abs_diff(&rhs)
    }
}

/// How fermion, dual and boson are cut together.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnCut {
    /// Total energy `≤ E_max`, as in `build_dirac_L`.
    Joint,
    /// fermion ⊗ dual `≤ E_max` and boson `≤ E_max` separately: a genuine
    /// tensor product with the boson column factor.
    Split,
}

impl ColumnCut {
    /// Truncation of a triple space with the given layout, offset by `shift`
    /// leading factors.
    pub fn truncation(self, spec: &TruncationSpec, layout: Layout, shift: usize) -> Vec<(Vec<usize>, u32)> {
        let e = spec.e_max;
        match self {
            ColumnCut::Joint => vec![(vec![shift, shift + 1, shift + 2], e)],
            ColumnCut::Split => vec![
                (vec![shift + layout.fermion, shift + layout.dual], e),
                (vec![shift + layout.boson], e),
            ],
        }
    }

    pub fn triple(self, spec: &TruncationSpec, layout: Layout) -> Result<TripleSpace> {
        match self {
            ColumnCut::Joint => TripleSpace::new(spec, layout, ProductTruncation::Joint(spec.e_max)),
            ColumnCut::Split => TripleSpace::new(spec, layout, ProductTruncation::Groups(self.truncation(spec, layout, 0))),
        }
    }
}

/// Assemble `∂̃` at `spec` with `m_active` Hermite modes cut at degree `cap`.
pub fn build_j_cycle(spec: &TruncationSpec, m_active: usize, seq: &SigmaSequence, cap: u32) -> Result<JCycle> {
    build_j_cycle_with(spec, m_active, seq, cap, ColumnCut::Joint)
}

pub fn build_j_cycle_with(
    spec: &TruncationSpec,
    m_active: usize,
    seq: &SigmaSequence,
    cap: u32,
    cut: ColumnCut,
) -> Result<JCycle> {
    check_active(spec, m_active)?;
    let (sigmas, xi) = active_xi(seq, m_active, cap)?;
    let left = cut.triple(spec, Layout::LEFT)?;
    let mut factors: Vec<Arc<Basis>> = (0..m_active).map(|_| mode_basis(cap)).collect();
    factors.push(fock::enumerate_basis(spec, Kind::Fermion));
    factors.push(fock::enumerate_basis(spec, Kind::DualBoson));
    factors.push(fock::enumerate_basis(spec, Kind::Boson));
    for (i, role) in [Layout::LEFT.fermion, Layout::LEFT.dual, Layout::LEFT.boson].into_iter().enumerate() {
        if !factors[m_active + i].same_as(left.product.factor(role)) {
            return Err(Error::BasisMismatch("cycle factors differ from the left space".into()));
        }
    }
    let rest = cut.truncation(spec, Layout::LEFT, m_active);
    let product = ProductBasis::new(factors, ProductTruncation::Groups(prefix_groups(m_active, cap, rest)))?;
    let hermite: Vec<usize> = (0..m_active).collect();
    let d_part = limit_dirac_on(&product, &hermite, m_active, 1..=m_active)?;
    let l_part = dirac_on(&product, m_active + 1, m_active, spec.n_max)?;
    let operator = d_part.add(&l_part)?;
    if operator.grade() != Grade::Odd || !operator.respects_grade() {
        return Err(Error::GradeMismatch("odd", operator.grade().name()));
    }
    let asym = operator.asymmetry()?;
    if asym > spec.tolerance * operator.max_abs_orthonormal().max(1.0) {
        return Err(Error::NotSelfAdjoint { asymmetry: asym });
    }
    Ok(JCycle {
        spec: *spec,
        m_active,
        cap,
        cut,
        seq: seq.clone(),
        sigmas,
        xi,
        product,
        left,
        d_part,
        l_part,
        operator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::build_dirac_L;

    fn small() -> JCycle {
        build_j_cycle(&TruncationSpec::new(2, 4).unwrap(), 2, &SigmaSequence::Pow2, 2).unwrap()
    }

    #[test]
    fn shape_and_symmetry() {
        let c = small();
        assert_eq!(c.dim(), 36 * 57);
        assert!(c.operator.is_self_adjoint(1e-12).unwrap());
        assert!(c.operator.respects_grade());
    }

    #[test]
    fn square_has_cross_term() {
        let c = small();
        assert!(c.square_residual().unwrap() < 1e-12);
        // the naive split misses a nonzero cross term
        assert!(c.cross_term().unwrap().max_abs() > 0.1);
    }

    #[test]
    fn split_cut_compresses_too() {
        let spec = TruncationSpec::new(2, 3).unwrap();
        let c = build_j_cycle_with(&spec, 1, &SigmaSequence::Pow2, 2, ColumnCut::Split).unwrap();
        let v = c.xi_embedding().unwrap();
        let got = v.adjoint().compose(&c.operator).unwrap().compose(&v).unwrap();
        assert!(got.max_abs_diff(&c.left.dirac().unwrap()).unwrap() < 1e-12);
        assert!(c.square_residual().unwrap() < 1e-12);
    }

    #[test]
    fn compression_is_left_dirac() {
        let spec = TruncationSpec::new(2, 4).unwrap();
        let c = small();
        let v = c.xi_embedding().unwrap();
        let got = v.adjoint().compose(&c.operator).unwrap().compose(&v).unwrap();
        let want = build_dirac_L(&spec).unwrap();
        assert!(got.max_abs_diff(&want).unwrap() < 1e-12);
    }
}
