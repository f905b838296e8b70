use super::analysis::{d_leg_estimate, embed_prefix, mishchenko_xi, xi_scalar_bound};
use super::jcycle::JCycle;
use crate::limitspace::prefix_basis;
use crate::opcore::{spectrum, Vector};
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct KucerovskyRow {
    pub label: String,
    /// `‖[[∂̃,0],[0,∂_L]], [[0,T],[T*,0]]]‖ = ‖∂̃T − T∂_L‖` for `T = φ ⊗ ·`.
    pub commutator: f64,
    /// `‖D(φ⊗·)‖` from per-mode ladder norms.
    pub bound: f64,
    /// Smallest eigenvalue of `T*{D⊗id, ∂̃}T`.
    pub positivity: f64,
}

/// Generators are prefix vectors `φ`, standing for `T_φ: w ↦ φ ⊗ w`.
///
/// The left class `[P_Ξ]` carries the zero operator, so the positivity
/// condition holds with margin 0; the reported form uses `D⊗id` in its
/// place as a sharper diagnostic.
pub fn kucerovsky_check(cycle: &JCycle, generators: &[(String, Vector)]) -> Result<Vec<KucerovskyRow>> {
    let prefix = prefix_basis(cycle.m_active, cycle.cap)?;
    let left_op = cycle.left.dirac()?;
    let sym = cycle.d_part.compose(&cycle.operator)?.add(&cycle.operator.compose(&cycle.d_part)?)?;
    let mut rows = Vec::new();
    for (label, phi) in generators {
        let t = embed_prefix(&cycle.product, &prefix, phi, &cycle.left.product)?;
        let c = cycle.operator.compose(&t)?.sub(&t.compose(&left_op)?)?;
        let form = t.adjoint().compose(&sym)?.compose(&t)?;
        let positivity = if form.nnz() == 0 {
            0.0
        } else {
            let h = form.add(&form.adjoint())?.scale_real(0.5);
            spectrum(&h)?.values().first().copied().unwrap_or(0.0).min(0.0)
        };
        rows.push(KucerovskyRow {
            label: label.clone(),
            commutator: c.op_norm(),
            bound: d_leg_estimate(&prefix, phi)?,
            positivity,
        });
    }
    Ok(rows)
}

/// The default generators: `Ξ`, a Hermite excitation of the first mode,
/// and zero.
pub fn default_generators(cycle: &JCycle) -> Result<Vec<(String, Vector)>> {
    let p = mishchenko_xi(&cycle.seq, cycle.m_active, cycle.cap)?;
    let b = p.prefix.basis().clone();
    let mut excited = Vec::new();
    for (i, c) in p.vector.iter() {
        let t = p.prefix.tuple(i);
        let l = p.prefix.factor(0).label(t[0]);
        let mut u = t.to_vec();
        if let Some(j) = p.prefix.factor(0).index_of(&[l[0] + 1, l[1]]) {
            u[0] = j;
            if let Some(k) = p.prefix.index_of_tuple(&u) {
                excited.push((k, c));
            }
        }
    }
    let excited = Vector::from_pairs(b.clone(), excited)?;
    let norm = excited.norm();
    let excited = if norm > 0.0 { excited.scale(crate::C64::new(1.0 / norm, 0.0)) } else { excited };
    Ok(vec![
        ("xi".into(), p.vector.clone()),
        ("xi_excited".into(), excited),
        ("zero".into(), Vector::zero(b)),
    ])
}

/// `xi_scalar_bound` applied to the Ξ generator: `‖∂̃V − V∂_L‖ ≤ 2(‖DΞ‖ + tail)`.
pub fn xi_commutator_bound(cycle: &JCycle) -> Result<f64> {
    xi_scalar_bound(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::build_j_cycle;
    use crate::fock::TruncationSpec;
    use crate::limitspace::SigmaSequence;

    #[test]
    fn xi_generator_is_bounded_and_positive() {
        let c = build_j_cycle(&TruncationSpec::new(2, 4).unwrap(), 2, &SigmaSequence::Pow2, 2).unwrap();
        let gens = default_generators(&c).unwrap();
        let rows = kucerovsky_check(&c, &gens).unwrap();
        let xi = &rows[0];
        assert!(xi.commutator > 0.0);
        assert!(xi.commutator <= xi.bound + 1e-12);
        assert!(xi.commutator <= xi_commutator_bound(&c).unwrap());
        assert!(rows.iter().all(|r| r.positivity >= -1e-8));
        assert_eq!(rows[2].commutator, 0.0);
        assert!(rows[1].commutator > 0.0);
    }
}
