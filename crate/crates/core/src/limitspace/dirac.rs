use std::fmt::Write as _;
use std::sync::Arc;

use super::hermite::{dRz, dRzbar, mode_basis, xi_coeffs, ModeFunction};
use super::sigma::{tail_bound, SigmaSequence};
use crate::fock::{self, Holo, Kind, Mode, TruncationSpec};
use crate::opcore::{Basis, Grade, ProductBasis, ProductTruncation, SparseOperator, Vector};
use crate::quad::integrate_adaptive;
use crate::{Error, Result, C64};

/// `Σ_{n∈modes} √n (dR_{z_n} ⊗ γ(z̄_n) + dR_{z̄_n} ⊗ γ(z_n))`, with mode `n`
/// acting on factor `hermite[n-1]` and the Clifford part on `fermion`.
pub fn limit_dirac_on(
    product: &ProductBasis,
    hermite: &[usize],
    fermion: usize,
    modes: std::ops::RangeInclusive<usize>,
) -> Result<SparseOperator> {
    let fb = product.factor(fermion);
    if fb.kind() != Kind::Fermion.tag() {
        return Err(Error::WrongKind {
            expected: Kind::Fermion.tag().into(),
            got: fb.kind().into(),
        });
    }
    let k = product.factors().len();
    let mut total = SparseOperator::zero(product.basis().clone(), product.basis().clone(), Grade::Odd);
    for n in modes {
        let pos = *hermite
            .get(n - 1)
            .ok_or_else(|| Error::InvalidTruncation(format!("mode {n} is not active")))?;
        let hb = product.factor(pos);
        let (z, zb) = (dRz(hb)?, dRzbar(hb)?);
        let gb = fock::clifford(fb, n as u32, Holo::ZBar, Mode::Compressed)?;
        let g = fock::clifford(fb, n as u32, Holo::Z, Mode::Compressed)?;
        for (a, b) in [(&z, &gb), (&zb, &g)] {
            let mut ops: Vec<Option<&SparseOperator>> = vec![None; k];
            ops[pos] = Some(a);
            ops[fermion] = Some(b);
            total = total.add(&product.lift(&ops)?.scale_real((n as f64).sqrt()))?;
        }
    }
    Ok(total)
}

/// Product state `Ξ_{σ_1} ⊗ … ⊗ Ξ_{σ_M} ⊗ w` coefficients: the Ξ factor of
/// a tuple, or zero.
pub(crate) fn xi_weight(product: &ProductBasis, hermite: &[usize], xi: &[ModeFunction], i: usize) -> C64 {
    let t = product.tuple(i);
    let mut w = C64::new(1.0, 0.0);
    for (pos, f) in hermite.iter().zip(xi) {
        let l = product.factor(*pos).label(t[*pos]);
        w *= f.coefficient(l[0], l[1]);
        if w == C64::default() {
            break;
        }
    }
    w
}

/// One cap per Hermite factor `0..m`, then `rest`.
pub(crate) fn prefix_groups(m: usize, cap: u32, rest: Vec<(Vec<usize>, u32)>) -> Vec<(Vec<usize>, u32)> {
    let mut g: Vec<(Vec<usize>, u32)> = (0..m).map(|i| (vec![i], cap)).collect();
    g.extend(rest);
    g
}

/// `D_1^M` on (active Hermite modes) ⊗ fermion.
#[derive(Debug)]
pub struct LimitDirac {
    pub spec: TruncationSpec,
    pub m_active: usize,
    /// Hermite degree cap of each active mode.
    pub cap: u32,
    pub sigmas: Vec<f64>,
    /// Renormalized Ξ at the prefix cap.
    pub xi: Vec<ModeFunction>,
    pub product: ProductBasis,
    pub operator: SparseOperator,
}

pub(crate) fn active_xi(seq: &SigmaSequence, m_active: usize, cap: u32) -> Result<(Vec<f64>, Vec<ModeFunction>)> {
    let sigmas = (1..=m_active)
        .map(|k| seq.get(k).ok_or_else(|| Error::InvalidTruncation(format!("no σ_{k} in {seq}"))))
        .collect::<Result<Vec<_>>>()?;
    let xi = sigmas
        .iter()
        .map(|&s| xi_coeffs(s, cap).map(|f| f.renormalized()))
        .collect::<Result<Vec<_>>>()?;
    Ok((sigmas, xi))
}

pub(crate) fn check_active(spec: &TruncationSpec, m_active: usize) -> Result<()> {
    if m_active == 0 || m_active > spec.n_max as usize {
        return Err(Error::InvalidTruncation(format!(
            "active modes must lie in 1..={}, got {m_active}",
            spec.n_max
        )));
    }
    Ok(())
}

#[allow(non_snake_case)]
pub fn build_D(spec: &TruncationSpec, m_active: usize, seq: &SigmaSequence, cap: u32) -> Result<LimitDirac> {
    check_active(spec, m_active)?;
    let (sigmas, xi) = active_xi(seq, m_active, cap)?;
    let mut factors: Vec<Arc<Basis>> = (0..m_active).map(|_| mode_basis(cap)).collect();
    factors.push(fock::enumerate_basis(spec, Kind::Fermion));
    let trunc = ProductTruncation::Groups(prefix_groups(m_active, cap, vec![(vec![m_active], spec.e_max)]));
    let product = ProductBasis::new(factors, trunc)?;
    let hermite: Vec<usize> = (0..m_active).collect();
    let operator = limit_dirac_on(&product, &hermite, m_active, 1..=m_active)?;
    Ok(LimitDirac {
        spec: *spec,
        m_active,
        cap,
        sigmas,
        xi,
        product,
        operator,
    })
}

impl LimitDirac {
    fn hermite(&self) -> Vec<usize> {
        (0..self.m_active).collect()
    }

    /// `Ξ ⊗ 1_f` on the prefix.
    pub fn xi_vacuum(&self) -> Result<Vector> {
        let b = self.product.basis();
        let h = self.hermite();
        let pairs = (0..b.dim())
            .filter(|&i| self.product.tuple(i)[self.m_active] == 0)
            .map(|i| (i, xi_weight(&self.product, &h, &self.xi, i)))
            .filter(|(_, w)| *w != C64::default());
        Vector::from_pairs(b.clone(), pairs)
    }

    /// `‖D_{from}^{M}(Ξ⊗1_f)‖` with the active-prefix truncation.
    pub fn partial_norm(&self, from: usize) -> Result<f64> {
        if from > self.m_active {
            return Ok(0.0);
        }
        let op = limit_dirac_on(&self.product, &self.hermite(), self.m_active, from..=self.m_active)?;
        Ok(op.apply(&self.xi_vacuum()?)?.norm())
    }
}

/// `‖dR_z Ξ_σ‖² = ∫₀^σ (r²/2)(1/πσ²) 2πr dr`, by quadrature.
fn drz_sq_radial(sigma: f64) -> Result<f64> {
    integrate_adaptive(|r| r * r * r / (sigma * sigma), 0.0, sigma, 1e-13)
}

/// `‖D_{M+1}^∞(Ξ⊗1_f)‖ = (Σ_{n>M} 2n ‖dR_{z_n}Ξ_{σ_n}‖²)^{1/2}`: the
/// `γ(z_n)` legs kill `1_f`, and distinct modes land in orthogonal
/// fermion states.
pub fn frozen_tail_norm(m: usize, seq: &SigmaSequence) -> Result<f64> {
    let mut total = 0.0;
    let mut n = m + 1;
    while let Some(s) = seq.get(n) {
        let t = 2.0 * n as f64 * drz_sq_radial(s)?;
        total += t;
        if t < 1e-32 || n > m + 100_000 {
            break;
        }
        n += 1;
    }
    Ok(total.sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailRow {
    pub m: usize,
    pub bound: f64,
    pub measured: f64,
}

impl TailRow {
    pub fn holds(&self) -> bool {
        self.measured <= self.bound
    }
}

pub fn tail_table(seq: &SigmaSequence, ms: impl IntoIterator<Item = usize>) -> Result<Vec<TailRow>> {
    ms.into_iter()
        .map(|m| {
            Ok(TailRow {
                m,
                bound: tail_bound(m, seq)?,
                measured: frozen_tail_norm(m, seq)?,
            })
        })
        .collect()
}

/// Columns `M,bound,measured`.
pub fn tail_csv(rows: &[TailRow]) -> String {
    let mut out = String::from("M,bound,measured\n");
    for r in rows {
        let _ = writeln!(out, "{},{:.16e},{:.16e}", r.m, r.bound, r.measured);
    }
    out
}
