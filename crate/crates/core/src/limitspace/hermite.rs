//! One mode of the limit space: `L²(ℝ²)` in the circular Hermite basis
//! `|j₊, j₋⟩` with `a_± = (a_x ∓ i a_y)/√2`. Then
//! `dR_z = (a₋ − a₊†)/√2` and `dR_z̄ = (a₊ − a₋†)/√2`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::opcore::{Basis, BasisEntry, Grade, SparseOperator, Vector};
use crate::quad::integrate_adaptive;
use crate::{Error, Result, C64};

/// Circular Hermite states of total degree `j₊ + j₋ ≤ cap`.
pub fn mode_basis(cap: u32) -> Arc<Basis> {
    let mut entries = Vec::new();
    for jp in 0..=cap {
        for jm in 0..=cap - jp {
            entries.push(BasisEntry::new(vec![jp, jm], 1.0, 0, jp + jm));
        }
    }
    Basis::new("hermite", entries).expect("distinct labels")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    PlusDown,
    PlusUp,
    MinusDown,
    MinusUp,
}

/// Ladder operator; raised states above the cap are dropped.
pub fn ladder(basis: &Arc<Basis>, which: Ladder) -> Result<SparseOperator> {
    let mut trip = Vec::new();
    for i in 0..basis.dim() {
        let l = basis.label(i);
        let (jp, jm) = (l[0] as i64, l[1] as i64);
        let (np, nm, c) = match which {
            Ladder::PlusDown => (jp - 1, jm, jp as f64),
            Ladder::PlusUp => (jp + 1, jm, (jp + 1) as f64),
            Ladder::MinusDown => (jp, jm - 1, jm as f64),
            Ladder::MinusUp => (jp, jm + 1, (jm + 1) as f64),
        };
        if np < 0 || nm < 0 {
            continue;
        }
        if let Some(j) = basis.index_of(&[np as u32, nm as u32]) {
            trip.push((j, i, C64::new(c.sqrt(), 0.0)));
        }
    }
    SparseOperator::from_triplets(basis.clone(), basis.clone(), Grade::Even, trip)
}

#[allow(non_snake_case)]
pub fn dRz(basis: &Arc<Basis>) -> Result<SparseOperator> {
    Ok(ladder(basis, Ladder::MinusDown)?
        .sub(&ladder(basis, Ladder::PlusUp)?)?
        .scale_real(std::f64::consts::FRAC_1_SQRT_2))
}

#[allow(non_snake_case)]
pub fn dRzbar(basis: &Arc<Basis>) -> Result<SparseOperator> {
    Ok(ladder(basis, Ladder::PlusDown)?
        .sub(&ladder(basis, Ladder::MinusUp)?)?
        .scale_real(std::f64::consts::FRAC_1_SQRT_2))
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModeTag {
    Xi { sigma: f64 },
    General,
}

/// Coefficients of a single-mode function on `|j₊, j₋⟩`, `j₊ + j₋ ≤ h_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeFunction {
    pub tag: ModeTag,
    pub h_max: u32,
    coeffs: BTreeMap<(u32, u32), C64>,
    /// `1 − Σ|c|²` for unit vectors cut at `h_max`.
    pub deficiency: f64,
}

impl ModeFunction {
    pub fn general(h_max: u32, coeffs: impl IntoIterator<Item = ((u32, u32), C64)>) -> Self {
        let coeffs: BTreeMap<_, _> = coeffs.into_iter().filter(|((a, b), _)| a + b <= h_max).collect();
        ModeFunction {
            tag: ModeTag::General,
            h_max,
            coeffs,
            deficiency: 0.0,
        }
    }

    pub fn coefficient(&self, jp: u32, jm: u32) -> C64 {
        self.coeffs.get(&(jp, jm)).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &C64)> {
        self.coeffs.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn renormalized(&self) -> ModeFunction {
        let n = self.norm_sqr().sqrt();
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c /= n;
        }
        out.deficiency = 0.0;
        out
    }

    /// Restriction to the states of `basis` (a [`mode_basis`]).
    pub fn to_vector(&self, basis: &Arc<Basis>) -> Vector {
        let pairs = self
            .coeffs
            .iter()
            .filter_map(|(&(a, b), &c)| basis.index_of(&[a, b]).map(|i| (i, c)))
            .collect::<Vec<_>>();
        Vector::from_pairs(basis.clone(), pairs).expect("indices come from the basis")
    }
}

/// `ℓ_n(s) = e^{-s/2} L_n(s)` for `n = 0..len`.
pub fn laguerre_functions(s: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let (mut prev, mut cur) = (0.0, (-0.5 * s).exp());
    for n in 0..len {
        out.push(cur);
        let next = ((2 * n + 1) as f64 - s) * cur / (n + 1) as f64 - n as f64 * prev / (n + 1) as f64;
        prev = cur;
        cur = next;
    }
    out
}

/// `I_j = ∫₀^{s} e^{-u/2} L_j(u) du` by the recurrence
/// `I_0 = 2(1 − e^{-s/2})`, `I_j + I_{j-1} = 2(ℓ_{j-1}(s) − ℓ_j(s))`.
pub fn laguerre_integrals(s: f64, len: usize) -> Vec<f64> {
    let l = laguerre_functions(s, len);
    let mut out = Vec::with_capacity(len);
    for j in 0..len {
        let v = if j == 0 {
            -2.0 * (-0.5 * s).exp_m1()
        } else {
            2.0 * (l[j - 1] - l[j]) - out[j - 1]
        };
        out.push(v);
    }
    out
}

/// Radial coefficients `ξ_j = ⟨|j,j⟩, Ξ_σ⟩ = I_j/σ` from the recurrence.
pub fn xi_radial(sigma: f64, len: usize) -> Vec<f64> {
    laguerre_integrals(sigma * sigma, len).into_iter().map(|i| i / sigma).collect()
}

fn laguerre(n: usize, u: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = ((2 * k + 1) as f64 - u) * cur / (k + 1) as f64 - k as f64 * prev / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Hermite coefficients of `Ξ_σ`, the Fourier transform of the unit
/// indicator `χ_σ = 1/√(πσ²)` on the disk `|x| ≤ σ`, cut at degree `h_max`.
///
/// Radial Hermite functions are Fourier eigenvectors, so the overlap is
/// `⟨ψ_j, χ_σ⟩ = (1/σ)∫₀^σ e^{-r²/2} L_j(r²) 2r dr` (adaptive quadrature),
/// cross-checked against the closed recurrence.
pub fn xi_coeffs(sigma: f64, h_max: u32) -> Result<ModeFunction> {
    if !(sigma > 0.0) {
        return Err(Error::Invalid(format!("σ must be positive, got {sigma}")));
    }
    let jmax = (h_max / 2) as usize;
    let rec = xi_radial(sigma, jmax + 1);
    let mut coeffs = BTreeMap::new();
    for (j, r) in rec.iter().enumerate() {
        let q = integrate_adaptive(
            |x| (-0.5 * x * x).exp() * laguerre(j, x * x) * 2.0 * x,
            0.0,
            sigma,
            1e-12,
        )? / sigma;
        if (q - r).abs() > 1e-10 * r.abs().max(1e-3) {
            return Err(Error::Quadrature(format!("ξ_{j}: quadrature {q} vs recurrence {r}")));
        }
        coeffs.insert((j as u32, j as u32), C64::new(q, 0.0));
    }
    let mut f = ModeFunction {
        tag: ModeTag::Xi { sigma },
        h_max,
        coeffs,
        deficiency: 0.0,
    };
    f.deficiency = 1.0 - f.norm_sqr();
    Ok(f)
}

/// Order-2 Riesz mean `Σ_{n<m} t_n (1 − n/m)²`.
pub fn riesz_mean(terms: &[f64], m: usize) -> f64 {
    let mf = m as f64;
    terms[..m.min(terms.len())]
        .iter()
        .enumerate()
        .map(|(n, t)| t * (1.0 - n as f64 / mf).powi(2))
        .sum()
}

/// Two Richardson steps on Riesz means at `n, 2n, 4n`, removing the
/// `m^{-1/2}` and `m^{-1}` error terms. Needs `4n` terms.
pub fn accelerated_sum(terms: &[f64], n: usize) -> f64 {
    let r2 = std::f64::consts::SQRT_2;
    let (a1, a2, a4) = (riesz_mean(terms, n), riesz_mean(terms, 2 * n), riesz_mean(terms, 4 * n));
    let a = (r2 * a2 - a1) / (r2 - 1.0);
    let b = (r2 * a4 - a2) / (r2 - 1.0);
    2.0 * b - a
}

/// `|⟨|n+1,n⟩, dR_z Ξ⟩|² = (n+1)/2 · (ξ_{n+1} − ξ_n)²`.
pub fn drz_terms(xi: &[f64]) -> Vec<f64> {
    xi.windows(2)
        .enumerate()
        .map(|(n, w)| 0.5 * (n + 1) as f64 * (w[1] - w[0]).powi(2))
        .collect()
}

/// Series evaluated at `n`, `2n`, `4n` terms.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesEstimate {
    pub terms: usize,
    pub raw: f64,
    pub accelerated: f64,
}

/// Raw and accelerated `Σ ξ_j²` and `‖dR_z Ξ_σ‖` at `n` radial terms.
pub fn xi_series(sigma: f64, n: usize) -> (SeriesEstimate, SeriesEstimate) {
    let xi = xi_radial(sigma, 4 * n + 1);
    let sq: Vec<f64> = xi.iter().map(|x| x * x).collect();
    let d = drz_terms(&xi);
    (
        SeriesEstimate {
            terms: n,
            raw: sq[..n].iter().sum(),
            accelerated: accelerated_sum(&sq, n),
        },
        SeriesEstimate {
            terms: n,
            raw: d[..n].iter().sum::<f64>().sqrt(),
            accelerated: accelerated_sum(&d, n).sqrt(),
        },
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct DrzReport {
    pub sigma: f64,
    /// `√(∫ (|x|²/2) χ_σ²)` by quadrature.
    pub radial: f64,
    /// Accelerated Hermite-series value.
    pub hermite: f64,
    /// Unaccelerated partial sum at the same cut.
    pub hermite_raw: f64,
    pub terms: usize,
    /// Accelerated `Σ ξ_j²` (should be 1).
    pub xi_norm: f64,
}

impl DrzReport {
    pub fn disagreement(&self) -> f64 {
        (self.radial - self.hermite).abs()
    }
}

pub const DRZ_TOL: f64 = 1e-6;

/// `‖dR_z Ξ_σ‖` two ways: the radial integral of `|x|²χ_σ²/2` and the
/// Hermite matrix applied to the radial coefficients. The Hermite cut doubles
/// from 2¹⁰ until consecutive accelerated values agree to 1e-10 or 2¹⁸.
#[allow(non_snake_case)]
pub fn dRz_norm_on_xi(sigma: f64) -> Result<DrzReport> {
    if !(sigma > 0.0) {
        return Err(Error::Invalid(format!("σ must be positive, got {sigma}")));
    }
    let c = 1.0 / (PI * sigma * sigma);
    let radial = integrate_adaptive(|r| 0.5 * r * r * c * 2.0 * PI * r, 0.0, sigma, 1e-12)?.sqrt();
    let mut n = 1 << 10;
    let mut last: Option<(SeriesEstimate, SeriesEstimate)> = None;
    loop {
        let cur = xi_series(sigma, n);
        let done = n >= 1 << 18
            || last
                .as_ref()
                .is_some_and(|(_, d)| (d.accelerated - cur.1.accelerated).abs() < 1e-10);
        if done {
            let report = DrzReport {
                sigma,
                radial,
                hermite: cur.1.accelerated,
                hermite_raw: cur.1.raw,
                terms: n,
                xi_norm: cur.0.accelerated,
            };
            if report.disagreement() > DRZ_TOL {
                return Err(Error::Disagreement(format!(
                    "‖dR_z Ξ‖ at σ = {sigma}: radial {radial} vs Hermite {}",
                    report.hermite
                )));
            }
            return Ok(report);
        }
        last = Some(cur);
        n *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_commutators() {
        let b = mode_basis(6);
        let safe = b.restrict(|i| b.energy(i) <= 4).unwrap();
        for (lo, up) in [(Ladder::PlusDown, Ladder::PlusUp), (Ladder::MinusDown, Ladder::MinusUp)] {
            let a = ladder(&b, lo).unwrap();
            let ad = ladder(&b, up).unwrap();
            let c = a.compose(&ad).unwrap().sub(&ad.compose(&a).unwrap()).unwrap();
            let c = c.compress(&safe).unwrap();
            let id = SparseOperator::identity(safe.clone());
            assert!(c.max_abs_diff(&id).unwrap() < 1e-14);
        }
        // dR_z* = −dR_z̄
        let z = dRz(&b).unwrap();
        let zb = dRzbar(&b).unwrap();
        assert!(z.adjoint().add(&zb).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn unit_indicator() {
        // ‖χ_σ‖² = ∫₀^σ (1/πσ²) 2πr dr
        for s in [0.3, 1.0, 2.5] {
            let n = integrate_adaptive(|r| 2.0 * PI * r / (PI * s * s), 0.0, s, 1e-13).unwrap();
            assert!((n - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn xi_is_radial_and_monotone() {
        let mut prev = 0.0;
        for h in [0, 2, 4, 8, 16, 32, 64] {
            let f = xi_coeffs(0.5, h).unwrap();
            for ((a, b), _) in f.iter() {
                assert_eq!(a, b);
            }
            assert_eq!(f.coefficient(1, 0), C64::default());
            let n = f.norm_sqr();
            assert!(n >= prev && n <= 1.0 + 1e-14);
            assert!((f.deficiency - (1.0 - n)).abs() < 1e-15);
            prev = n;
        }
        assert!(prev > 0.85, "{prev}");
        assert!((xi_coeffs(0.5, 8).unwrap().renormalized().norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn integrals_recurrence_first_terms() {
        let s: f64 = 0.7;
        let e = (-0.5 * s).exp();
        let i = laguerre_integrals(s, 2);
        assert!((i[0] - 2.0 * (1.0 - e)).abs() < 1e-15);
        assert!((i[1] - (2.0 * s * e - 2.0 * (1.0 - e))).abs() < 1e-15);
    }

    #[test]
    fn drz_norm_is_half_sigma() {
        for (s, want) in [(1.0, 0.5), (0.5, 0.25), (0.125, 0.0625)] {
            let r = dRz_norm_on_xi(s).unwrap();
            assert!((r.radial - want).abs() < 1e-12);
            assert!((r.hermite - want).abs() < 1e-6, "σ={s}: {}", r.hermite);
            assert!(r.hermite <= s);
            assert!((r.xi_norm - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn drz_matrix_matches_terms() {
        let b = mode_basis(40);
        let xi = xi_coeffs(1.0, 40).unwrap();
        let v = xi.to_vector(&b);
        let w = dRz(&b).unwrap().apply(&v).unwrap();
        let rad = xi_radial(1.0, 21);
        // images |n+1,n⟩ with n+1+n ≤ 40 see both contributions
        let d = drz_terms(&rad);
        for n in 0..19u32 {
            let i = b.index_of(&[n + 1, n]).unwrap();
            assert!((w.get(i).norm_sqr() - d[n as usize]).abs() < 1e-14);
        }
        assert!(v.inner(&w).unwrap().norm() < 1e-16);
    }
}
