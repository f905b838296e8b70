use nalgebra::{DMatrix, SymmetricEigen};

use super::jcycle::JCycle;
use crate::dirac::Layout;
use crate::fock::{self, Kind, Mode};
use crate::limitspace::{build_D, dRz, dRzbar, prefix_basis, tail_bound, ModeFunction, SigmaSequence};
use crate::opcore::{Grade, ProductBasis, ProductTruncation, SparseOperator, Vector};
use crate::{Error, Result, C64};

/// `θ_{φ,ψ} = |φ⟩⟨ψ|` on the Hermite prefix.
#[derive(Clone, Debug)]
pub struct RankOne {
    pub phi: Vector,
    pub psi: Vector,
}

/// `P_Ξ` on the active prefix.
#[derive(Debug)]
pub struct XiProjection {
    pub sigmas: Vec<f64>,
    pub xi: Vec<ModeFunction>,
    pub prefix: ProductBasis,
    pub vector: Vector,
    pub projection: SparseOperator,
}

impl XiProjection {
    pub fn idempotence_defect(&self) -> Result<f64> {
        self.projection.compose(&self.projection)?.max_abs_diff(&self.projection)
    }

    pub fn trace(&self) -> C64 {
        crate::limitspace::trace(&self.projection)
    }

    pub fn rank_one(&self) -> RankOne {
        RankOne {
            phi: self.vector.clone(),
            psi: self.vector.clone(),
        }
    }
}

pub fn mishchenko_xi(seq: &SigmaSequence, m_active: usize, cap: u32) -> Result<XiProjection> {
    let (sigmas, xi) = crate::limitspace::active_xi(seq, m_active, cap)?;
    let prefix = prefix_basis(m_active, cap)?;
    let parts: Vec<Vector> = xi.iter().zip(prefix.factors()).map(|(f, b)| f.to_vector(b)).collect();
    let refs: Vec<&Vector> = parts.iter().collect();
    let vector = prefix.tensor(&refs, true)?;
    let support: Vec<(usize, C64)> = vector.iter().filter(|(_, c)| *c != C64::default()).collect();
    let mut trip = Vec::new();
    for &(r, a) in &support {
        for &(c, b) in &support {
            trip.push((r, c, a * b.conj()));
        }
    }
    let projection =
        SparseOperator::from_triplets(prefix.basis().clone(), prefix.basis().clone(), Grade::Even, trip)?;
    Ok(XiProjection {
        sigmas,
        xi,
        prefix,
        vector,
        projection,
    })
}

/// `V_φ: w ↦ φ ⊗ w` from `rest` into `target`, whose first factors are the
/// prefix and whose remaining factors are those of `rest`, in order.
pub fn embed_prefix(target: &ProductBasis, prefix: &ProductBasis, phi: &Vector, rest: &ProductBasis) -> Result<SparseOperator> {
    let m = prefix.factors().len();
    let ok = target.factors().len() == m + rest.factors().len()
        && prefix.factors().iter().enumerate().all(|(i, f)| f.same_as(target.factor(i)))
        && rest.factors().iter().enumerate().all(|(i, f)| f.same_as(target.factor(m + i)));
    if !ok || !phi.basis().same_as(prefix.basis()) {
        return Err(Error::ContextMismatch("prefix and rest do not tile the target".into()));
    }
    let legs: Vec<(usize, C64)> = phi.iter().filter(|(_, c)| *c != C64::default()).collect();
    let mut trip = Vec::new();
    let mut t = Vec::with_capacity(target.factors().len());
    for j in 0..rest.dim() {
        for &(p, c) in &legs {
            t.clear();
            t.extend_from_slice(prefix.tuple(p));
            t.extend_from_slice(rest.tuple(j));
            if let Some(i) = target.index_of_tuple(&t) {
                trip.push((i, j, c));
            }
        }
    }
    SparseOperator::from_triplets(rest.basis().clone(), target.basis().clone(), Grade::Even, trip)
}

fn rank_one_sum(terms: &[RankOne], target: &ProductBasis, prefix: &ProductBasis, rest: &ProductBasis) -> Result<SparseOperator> {
    let mut total = SparseOperator::zero(target.basis().clone(), target.basis().clone(), Grade::Even);
    for t in terms {
        let vp = embed_prefix(target, prefix, &t.phi, rest)?;
        let vq = embed_prefix(target, prefix, &t.psi, rest)?;
        total = total.add(&vp.compose(&vq.adjoint())?)?;
    }
    Ok(total)
}

/// `Σ_n √(2n) (‖dR_{z_n}φ‖ + ‖dR_{z̄_n}φ‖)`, an upper bound for `‖D(φ⊗·)‖`.
pub(crate) fn d_leg_estimate(prefix: &ProductBasis, phi: &Vector) -> Result<f64> {
    let mut total = 0.0;
    for n in 1..=prefix.factors().len() {
        let b = prefix.factor(n - 1);
        let z = prefix.lift_one(n - 1, &dRz(b)?)?;
        let zb = prefix.lift_one(n - 1, &dRzbar(b)?)?;
        total += (2.0 * n as f64).sqrt() * (z.apply(phi)?.norm() + zb.apply(phi)?.norm());
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorReport {
    pub measured: f64,
    /// `2 Σ (‖D(φ⊗·)‖‖ψ‖ + ‖φ‖‖D(ψ⊗·)‖)` with per-mode ladder norms.
    pub bound: f64,
}

/// `‖[∂̃, a ⊗ id]‖` for `a = Σ θ_{φ,ψ}` on the prefix.
///
/// `a` commutes with `id ⊗ ∂_L`, and the dual and boson factors only shrink
/// the fermion cut, so the norm is attained on (prefix) ⊗ fermion.
pub fn commutator_bound(a: &[RankOne], cycle: &JCycle) -> Result<CommutatorReport> {
    let ld = build_D(&cycle.spec, cycle.m_active, &SigmaSequence::Explicit(cycle.sigmas.clone()), cycle.cap)?;
    let prefix = prefix_basis(cycle.m_active, cycle.cap)?;
    let rest = ProductBasis::new(vec![fock::enumerate_basis(&cycle.spec, Kind::Fermion)], ProductTruncation::Full)?;
    let op = rank_one_sum(a, &ld.product, &prefix, &rest)?;
    let c = ld.operator.compose(&op)?.sub(&op.compose(&ld.operator)?)?;
    let mut bound = 0.0;
    for t in a {
        bound += 2.0
            * (d_leg_estimate(&prefix, &t.phi)? * t.psi.norm() + t.phi.norm() * d_leg_estimate(&prefix, &t.psi)?);
    }
    Ok(CommutatorReport {
        measured: c.op_norm(),
        bound,
    })
}

/// `2 (Σ_{n≤M} √(2n) σ_n + Σ_{n>M} 2√(2n) σ_n)`: the scalar bound for the
/// Ξ generator, tail included.
pub fn xi_scalar_bound(cycle: &JCycle) -> Result<f64> {
    let head: f64 = cycle
        .sigmas
        .iter()
        .enumerate()
        .map(|(i, s)| (2.0 * (i + 1) as f64).sqrt() * s)
        .sum();
    Ok(2.0 * (head + tail_bound(cycle.m_active, &cycle.seq)?))
}

/// Solve `(1 + A²) x = b` by conjugate gradients, orthonormal coordinates.
fn resolvent_solve(a: &SparseOperator, b: &[C64]) -> Result<Vec<C64>> {
    let apply = |x: &[C64]| -> Vec<C64> {
        let ax = a.apply_orthonormal(x);
        let aax = a.apply_orthonormal(&ax);
        x.iter().zip(aax).map(|(u, v)| u + v).collect()
    };
    let dot = |u: &[C64], v: &[C64]| -> C64 { u.iter().zip(v).map(|(p, q)| p.conj() * q).sum() };
    let bnorm = dot(b, b).re.sqrt();
    let mut x = vec![C64::default(); b.len()];
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r).re;
    for _ in 0..10 * b.len().max(10) {
        if rr.sqrt() <= 1e-14 * bnorm {
            return Ok(x);
        }
        let ap = apply(&p);
        let alpha = rr / dot(&p, &ap).re;
        for i in 0..x.len() {
            x[i] += p[i] * alpha;
            r[i] -= ap[i] * alpha;
        }
        let rr2 = dot(&r, &r).re;
        let beta = rr2 / rr;
        for i in 0..p.len() {
            p[i] = r[i] + p[i] * beta;
        }
        rr = rr2;
    }
    Err(Error::Invalid("conjugate gradients did not converge".into()))
}

fn columns(op: &SparseOperator) -> Vec<Vec<C64>> {
    let mut cols = vec![vec![C64::default(); op.codomain().dim()]; op.domain().dim()];
    for &(r, c, v) in op.entries() {
        cols[c][r] = v * (op.codomain().gram(r) / op.domain().gram(c)).sqrt();
    }
    cols
}

/// Hermitian square root of a PSD matrix.
fn psd_sqrt(g: DMatrix<C64>) -> DMatrix<C64> {
    let e = SymmetricEigen::new(g);
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|v| C64::new(v.max(0.0).sqrt(), 0.0)));
    &e.eigenvectors * d * e.eigenvectors.adjoint()
}

/// Singular values of `Σ_i X_i V_{ψ_i}*`, where the `X_i` share `L` columns
/// and `V_ψ* V_ψ' = ⟨ψ,ψ'⟩ I_L`.
fn factored_singular_values(xs: &[Vec<Vec<C64>>], psis: &[&Vector]) -> Result<Vec<f64>> {
    let k = xs.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let l = xs[0].len();
    let n = xs[0].first().map(|c| c.len()).unwrap_or(0);
    let mut g = DMatrix::from_element(k, k, C64::default());
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = psis[i].inner(psis[j])?;
        }
    }
    let s = psd_sqrt(g);
    let mut y = DMatrix::from_element(n, k * l, C64::default());
    for (i, x) in xs.iter().enumerate() {
        for j in 0..k {
            let w = s[(i, j)];
            if w == C64::default() {
                continue;
            }
            for (c, col) in x.iter().enumerate() {
                for (r, v) in col.iter().enumerate() {
                    y[(r, j * l + c)] += v * w;
                }
            }
        }
    }
    let mut sv: Vec<f64> = y.singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolventReport {
    /// Singular values of `(1+∂̃²)^{-1}(a⊗id)`, descending.
    pub singular_values: Vec<f64>,
    /// The same for `(1+∂̃₀²)^{-1}(a⊗id)`, `∂̃₀ = id⊗∂_L`.
    pub shell_values: Vec<f64>,
    /// `(r, σ_{r+1})`: best rank-`r` error in operator norm.
    pub errors: Vec<(usize, f64)>,
    /// `‖∂_i (1+∂̃₀²)^{-1}(a⊗id)‖` for `∂₁ = D²⊗id`, `∂₂` the cross term, `∂₃ = id⊗∂_L²`.
    pub split: [f64; 3],
}

impl ResolventReport {
    /// `max_k s_k / s⁰_k` over the nonzero shell values.
    pub fn shell_ratio(&self) -> f64 {
        self.singular_values
            .iter()
            .zip(&self.shell_values)
            .filter(|(_, s0)| **s0 > 1e-300)
            .map(|(s, s0)| s / s0)
            .fold(0.0, f64::max)
    }
}

/// `1/(1 + 2(N + E_dual))` on the cycle space: `(1+∂̃₀²)^{-1}` by Weitzenböck.
fn shell_weights(cycle: &JCycle) -> Vec<f64> {
    (0..cycle.dim())
        .map(|i| {
            let t = cycle.product.tuple(i);
            let nf = cycle.product.factor(cycle.fermion_pos()).energy(t[cycle.fermion_pos()]);
            let ed = cycle.product.factor(cycle.dual_pos()).energy(t[cycle.dual_pos()]);
            1.0 / (1.0 + 2.0 * (nf + ed) as f64)
        })
        .collect()
}

pub fn resolvent_compactness(a: &[RankOne], cycle: &JCycle, ranks: &[usize]) -> Result<ResolventReport> {
    let prefix = prefix_basis(cycle.m_active, cycle.cap)?;
    let rest = &cycle.left.product;
    let weights = shell_weights(cycle);
    let parts = [
        cycle.d_part.compose(&cycle.d_part)?,
        cycle.cross_term()?,
        cycle.l_part.compose(&cycle.l_part)?,
    ];
    let mut xs = Vec::new();
    let mut x0s = Vec::new();
    let mut split_cols: [Vec<Vec<Vec<C64>>>; 3] = Default::default();
    for t in a {
        let cols = columns(&embed_prefix(&cycle.product, &prefix, &t.phi, rest)?);
        let mut x = Vec::with_capacity(cols.len());
        let mut x0 = Vec::with_capacity(cols.len());
        for col in &cols {
            x.push(resolvent_solve(&cycle.operator, col)?);
            x0.push(col.iter().zip(&weights).map(|(v, w)| v * *w).collect::<Vec<_>>());
        }
        for (i, part) in parts.iter().enumerate() {
            split_cols[i].push(x0.iter().map(|c| part.apply_orthonormal(c)).collect());
        }
        xs.push(x);
        x0s.push(x0);
    }
    let psis: Vec<&Vector> = a.iter().map(|t| &t.psi).collect();
    let singular_values = factored_singular_values(&xs, &psis)?;
    let shell_values = factored_singular_values(&x0s, &psis)?;
    let errors = ranks
        .iter()
        .map(|&r| (r, singular_values.get(r).copied().unwrap_or(0.0)))
        .collect();
    let mut split = [0.0; 3];
    for i in 0..3 {
        split[i] = factored_singular_values(&split_cols[i], &psis)?.first().copied().unwrap_or(0.0);
    }
    Ok(ResolventReport {
        singular_values,
        shell_values,
        errors,
        split,
    })
}

/// One row of the per-mode cross-term estimate, for `a = P_Ξ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossModeRow {
    pub n: usize,
    /// `‖(dR_{z_n} ⊗ id ⊗ dρ*(z̄_n))(1+∂̃₀²)^{-1}(P_Ξ⊗id)‖`
    pub measured: f64,
    /// `‖dρ*(z̄_n)(1+∂_L²)^{-1}‖` on the left space.
    pub resolvent_leg: f64,
    /// `√n σ_n ·` leg.
    pub mode_bound: f64,
    /// `2n ·` measured: the full mode-`n` term of `∂₂`.
    pub full_term: f64,
    /// `n σ_n ·` leg, which dominates `full_term`.
    pub full_bound: f64,
}

pub fn cross_mode_estimates(cycle: &JCycle) -> Result<Vec<CrossModeRow>> {
    let v = cycle.xi_embedding()?;
    let weights = shell_weights(cycle);
    let diag: Vec<C64> = weights.iter().map(|w| C64::new(*w, 0.0)).collect();
    let r0v = SparseOperator::diagonal(cycle.product.basis().clone(), &diag)?.compose(&v)?;
    let left = &cycle.left;
    let left_w: Vec<C64> = (0..left.basis().dim())
        .map(|i| {
            let t = left.product.tuple(i);
            let nf = left.product.factor(Layout::LEFT.fermion).energy(t[Layout::LEFT.fermion]);
            let ed = left.product.factor(Layout::LEFT.dual).energy(t[Layout::LEFT.dual]);
            C64::new(1.0 / (1.0 + 2.0 * (nf + ed) as f64), 0.0)
        })
        .collect();
    let left_r0 = SparseOperator::diagonal(left.basis().clone(), &left_w)?;
    let k = cycle.product.factors().len();
    let db = cycle.product.factor(cycle.dual_pos());
    let mut rows = Vec::new();
    for n in 1..=cycle.m_active {
        let up = fock::dual_raise(db, n as u32, Mode::Compressed)?;
        let z = dRz(cycle.product.factor(n - 1))?;
        let mut ops: Vec<Option<&SparseOperator>> = vec![None; k];
        ops[n - 1] = Some(&z);
        ops[cycle.dual_pos()] = Some(&up);
        let measured = cycle.product.lift(&ops)?.compose(&r0v)?.op_norm();
        let leg = left
            .product
            .lift_one(Layout::LEFT.dual, &up)?
            .compose(&left_r0)?
            .op_norm();
        let sigma = cycle.sigmas[n - 1];
        rows.push(CrossModeRow {
            n,
            measured,
            resolvent_leg: leg,
            mode_bound: (n as f64).sqrt() * sigma * leg,
            full_term: 2.0 * n as f64 * measured,
            full_bound: n as f64 * sigma * leg,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::build_j_cycle;
    use crate::fock::TruncationSpec;

    fn small() -> JCycle {
        build_j_cycle(&TruncationSpec::new(2, 4).unwrap(), 2, &SigmaSequence::Pow2, 2).unwrap()
    }

    #[test]
    fn xi_projection() {
        let p = mishchenko_xi(&SigmaSequence::Pow2, 3, 2).unwrap();
        assert!(p.idempotence_defect().unwrap() < 1e-14);
        assert!((p.trace() - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(p.projection.is_self_adjoint(1e-14).unwrap());
    }

    #[test]
    fn embedding_matches_cycle() {
        let c = small();
        let p = mishchenko_xi(&c.seq, c.m_active, c.cap).unwrap();
        let v = embed_prefix(&c.product, &p.prefix, &p.vector, &c.left.product).unwrap();
        assert!(v.max_abs_diff(&c.xi_embedding().unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn commutator_with_xi() {
        let c = small();
        let p = mishchenko_xi(&c.seq, c.m_active, c.cap).unwrap();
        let r = commutator_bound(&[p.rank_one()], &c).unwrap();
        assert!(r.measured > 0.0 && r.measured <= r.bound);
        assert!(r.measured <= xi_scalar_bound(&c).unwrap());
        let zero = RankOne {
            phi: Vector::zero(p.prefix.basis().clone()),
            psi: p.vector.clone(),
        };
        assert_eq!(commutator_bound(&[zero], &c).unwrap().measured, 0.0);
    }

    #[test]
    fn resolvent_singular_values() {
        let c = small();
        let p = mishchenko_xi(&c.seq, c.m_active, c.cap).unwrap();
        let full = c.left.basis().dim();
        let r = resolvent_compactness(&[p.rank_one()], &c, &[0, 5, 20, full]).unwrap();
        assert_eq!(r.singular_values.len(), full);
        assert_eq!(r.errors.last().unwrap().1, 0.0);
        assert!(r.errors.windows(2).all(|w| w[1].1 <= w[0].1));
        // without D the singular values are exactly 1/(1+λ²) on the left shells
        let mut oracle: Vec<f64> = (0..full)
            .map(|i| {
                let t = c.left.product.tuple(i);
                let e = c.left.product.factor(0).energy(t[0]) + c.left.product.factor(1).energy(t[1]);
                1.0 / (1.0 + 2.0 * e as f64)
            })
            .collect();
        oracle.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in r.shell_values.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(r.split.iter().all(|s| s.is_finite()));
    }

    #[test]
    fn cross_modes_within_bounds() {
        let c = small();
        for row in cross_mode_estimates(&c).unwrap() {
            assert!(row.measured <= row.mode_bound);
            assert!(row.full_term <= row.full_bound + 1e-15);
        }
    }
}
