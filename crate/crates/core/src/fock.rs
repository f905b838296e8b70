//! Truncated boson Fock space, its dual, and the fermionic spinor space.
//!
//! Boson and dual-boson labels are occupation tuples `(k_1, …, k_N)` with
//! Gram weight `Π k_n!` and energy `Σ n k_n`. Fermion labels are occupation
//! bits `(f_1, …, f_N)` with Gram weight 1 and energy `Σ n f_n`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::opcore::{Basis, BasisEntry, Grade, Label, SparseOperator};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationSpec {
    pub n_max: u32,
    pub e_max: u32,
    pub h_max: u32,
    pub tolerance: f64,
}

impl TruncationSpec {
    pub fn new(n_max: u32, e_max: u32) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidTruncation("n_max must be at least 1".into()));
        }
        Ok(TruncationSpec {
            n_max,
            e_max,
            h_max: 32,
            tolerance: crate::DEFAULT_TOL,
        })
    }

    pub fn with_h_max(mut self, h_max: u32) -> Self {
        self.h_max = h_max;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Boson,
    DualBoson,
    Fermion,
}

impl Kind {
    pub fn tag(self) -> &'static str {
        match self {
            Kind::Boson => "boson",
            Kind::DualBoson => "dual_boson",
            Kind::Fermion => "fermion",
        }
    }
}

/// Strict: an image leaving the truncation is an error. Compressed: it is dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Compressed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Holo {
    /// `γ(z_n)`
    Z,
    /// `γ(z̄_n)`
    ZBar,
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn occupations(n_max: u32, e_max: u32, fermion: bool) -> Vec<Label> {
    fn rec(mode: u32, n_max: u32, left: u32, fermion: bool, cur: &mut Label, out: &mut Vec<Label>) {
        if mode > n_max {
            out.push(cur.clone());
            return;
        }
        let cap = if fermion { 1.min(left / mode) } else { left / mode };
        for k in 0..=cap {
            cur.push(k);
            rec(mode + 1, n_max, left - k * mode, fermion, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n_max, e_max, fermion, &mut Vec::new(), &mut out);
    out
}

fn label_energy(label: &[u32]) -> u32 {
    label.iter().enumerate().map(|(i, &k)| (i as u32 + 1) * k).sum()
}

/// All states of the given kind with modes `≤ n_max` and energy `≤ e_max`.
pub fn enumerate_basis(spec: &TruncationSpec, kind: Kind) -> Arc<Basis> {
    let fermion = kind == Kind::Fermion;
    let entries = occupations(spec.n_max, spec.e_max, fermion)
        .into_iter()
        .map(|l| {
            let e = label_energy(&l);
            if fermion {
                let p = l.iter().sum::<u32>() % 2;
                BasisEntry::new(l, 1.0, p as u8, e)
            } else {
                let g = l.iter().map(|&k| factorial(k)).product();
                BasisEntry::new(l, g, 0, e)
            }
        })
        .collect();
    Basis::new(kind.tag(), entries).expect("occupation labels are distinct")
}

fn check_kind(basis: &Basis, kinds: &[Kind]) -> Result<()> {
    if kinds.iter().any(|k| basis.kind() == k.tag()) {
        Ok(())
    } else {
        Err(Error::WrongKind {
            expected: kinds.iter().map(|k| k.tag()).collect::<Vec<_>>().join("|"),
            got: basis.kind().to_string(),
        })
    }
}

fn check_mode(basis: &Basis, n: u32) -> Result<usize> {
    let width = basis.labels().first().map(|l| l.len()).unwrap_or(0);
    if n == 0 || n as usize > width {
        return Err(Error::InvalidTruncation(format!("mode {n} outside 1..={width}")));
    }
    Ok(n as usize - 1)
}

fn ladder(
    domain: &Arc<Basis>,
    codomain: &Arc<Basis>,
    grade: Grade,
    mode: Mode,
    f: impl Fn(&[u32]) -> Option<(Label, f64)>,
) -> Result<SparseOperator> {
    let mut trip = Vec::new();
    for c in 0..domain.dim() {
        if let Some((target, coeff)) = f(domain.label(c)) {
            match codomain.index_of(&target) {
                Some(r) => trip.push((r, c, C64::new(coeff, 0.0))),
                None if mode == Mode::Strict => {
                    return Err(Error::TruncationOverflow(format!(
                        "{:?} -> {:?} leaves the '{}' truncation",
                        domain.label(c),
                        target,
                        codomain.kind()
                    )))
                }
                None => {}
            }
        }
    }
    SparseOperator::from_triplets(domain.clone(), codomain.clone(), grade, trip)
}

fn raise_fn(i: usize) -> impl Fn(&[u32]) -> Option<(Label, f64)> {
    move |l| {
        let mut t = l.to_vec();
        t[i] += 1;
        Some((t, 1.0))
    }
}

fn lower_fn(i: usize) -> impl Fn(&[u32]) -> Option<(Label, f64)> {
    move |l| {
        if l[i] == 0 {
            return None;
        }
        let mut t = l.to_vec();
        t[i] -= 1;
        Some((t, -(l[i] as f64)))
    }
}

/// `dρ(z_n)`: `z^k ↦ z^{k+e_n}`.
pub fn boson_raise(basis: &Arc<Basis>, n: u32, mode: Mode) -> Result<SparseOperator> {
    boson_raise_into(basis, basis, n, mode)
}

/// `dρ(z_n)` into a possibly larger codomain.
pub fn boson_raise_into(domain: &Arc<Basis>, codomain: &Arc<Basis>, n: u32, mode: Mode) -> Result<SparseOperator> {
    check_kind(domain, &[Kind::Boson])?;
    let i = check_mode(domain, n)?;
    ladder(domain, codomain, Grade::Even, mode, raise_fn(i))
}

/// `dρ(z̄_n)`: `z^k ↦ −k_n z^{k−e_n}`.
pub fn boson_lower(basis: &Arc<Basis>, n: u32) -> Result<SparseOperator> {
    check_kind(basis, &[Kind::Boson])?;
    let i = check_mode(basis, n)?;
    ladder(basis, basis, Grade::Even, Mode::Strict, lower_fn(i))
}

/// `dρ*(z̄_n)`: `z̄^k ↦ z̄^{k+e_n}`.
pub fn dual_raise(basis: &Arc<Basis>, n: u32, mode: Mode) -> Result<SparseOperator> {
    dual_raise_into(basis, basis, n, mode)
}

pub fn dual_raise_into(domain: &Arc<Basis>, codomain: &Arc<Basis>, n: u32, mode: Mode) -> Result<SparseOperator> {
    check_kind(domain, &[Kind::DualBoson])?;
    let i = check_mode(domain, n)?;
    ladder(domain, codomain, Grade::Even, mode, raise_fn(i))
}

/// `dρ*(z_n)`: `z̄^k ↦ −k_n z̄^{k−e_n}`.
pub fn dual_lower(basis: &Arc<Basis>, n: u32) -> Result<SparseOperator> {
    check_kind(basis, &[Kind::DualBoson])?;
    let i = check_mode(basis, n)?;
    ladder(basis, basis, Grade::Even, Mode::Strict, lower_fn(i))
}

/// `dρ(d)` or `dρ*(d)`: diagonal `i Σ n k_n`.
pub fn energy_op(basis: &Arc<Basis>) -> Result<SparseOperator> {
    check_kind(basis, &[Kind::Boson, Kind::DualBoson])?;
    let vals: Vec<C64> = (0..basis.dim()).map(|i| C64::new(0.0, basis.energy(i) as f64)).collect();
    SparseOperator::diagonal(basis.clone(), &vals)
}

/// `γ(z̄_n) = √2 z̄_n∧` and `γ(z_n) = −√2 z̄_n⌋`, with Koszul sign
/// `(−1)^{#occupied modes below n}`.
pub fn clifford(basis: &Arc<Basis>, n: u32, which: Holo, mode: Mode) -> Result<SparseOperator> {
    check_kind(basis, &[Kind::Fermion])?;
    let i = check_mode(basis, n)?;
    let r2 = std::f64::consts::SQRT_2;
    ladder(basis, basis, Grade::Odd, mode, move |l| {
        let below: u32 = l[..i].iter().sum();
        let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
        let mut t = l.to_vec();
        match which {
            Holo::ZBar if l[i] == 0 => {
                t[i] = 1;
                Some((t, r2 * sign))
            }
            Holo::Z if l[i] == 1 => {
                t[i] = 0;
                Some((t, -r2 * sign))
            }
            _ => None,
        }
    })
}

/// Fermion number operator `N`: diagonal `Σ` occupied modes.
pub fn number_op(basis: &Arc<Basis>) -> Result<SparseOperator> {
    check_kind(basis, &[Kind::Fermion])?;
    let vals: Vec<C64> = (0..basis.dim()).map(|i| C64::new(basis.energy(i) as f64, 0.0)).collect();
    SparseOperator::diagonal(basis.clone(), &vals)
}

/// States with energy at most `cap`; the subspace where ladder identities
/// involving a raise by at most `e_max − cap` are exact.
pub fn safe_subspace(basis: &Arc<Basis>, cap: u32) -> Result<Arc<Basis>> {
    basis.restrict(|i| basis.energy(i) <= cap)
}

/// CSV dump: `label,energy,gram` with the label as `k1 k2 …`.
pub fn basis_csv(basis: &Basis) -> String {
    let mut s = String::from("label,energy,gram\n");
    for i in 0..basis.dim() {
        let l: Vec<String> = basis.label(i).iter().map(|k| k.to_string()).collect();
        let _ = writeln!(s, "{},{},{}", l.join(" "), basis.energy(i), basis.gram(i));
    }
    s
}

/// One commutation relation and its largest residual entry.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationRow {
    pub name: String,
    pub residual: f64,
}

/// Largest entry of `op − c·id` in columns of energy `≤ cap`.
fn safe_residual(op: &SparseOperator, c: C64, cap: u32) -> Result<f64> {
    let b = op.domain();
    let d = op.sub(&SparseOperator::identity(b.clone()).scale(c))?;
    Ok(d.entries()
        .iter()
        .filter(|&&(_, col, _)| b.energy(col) <= cap)
        .map(|&(_, _, v)| v.norm())
        .fold(0.0, f64::max))
}

/// CCR for `dρ` and `dρ*` and CAR for `γ` on safe subspaces, and the two
/// quadratic identities for `dρ(d)` and `N`.
pub fn relation_suite(spec: &TruncationSpec) -> Result<Vec<RelationRow>> {
    use crate::opcore::graded_commutator;
    let one = C64::new(1.0, 0.0);
    let zero = C64::default();
    let mut rows = Vec::new();
    let mut push = |name: String, r: f64| rows.push(RelationRow { name, residual: r });
    let b = enumerate_basis(spec, Kind::Boson);
    let d = enumerate_basis(spec, Kind::DualBoson);
    let f = enumerate_basis(spec, Kind::Fermion);
    let e = spec.e_max;
    for n in 1..=spec.n_max {
        for m in 1..=spec.n_max {
            let cap = e.saturating_sub(n.max(m));
            if e < n.max(m) {
                continue;
            }
            let delta = if n == m { one } else { zero };
            let c = graded_commutator(&boson_raise(&b, n, Mode::Compressed)?, &boson_lower(&b, m)?)?;
            push(format!("[drho(z{n}),drho(zbar{m})]"), safe_residual(&c, delta, cap)?);
            let c = graded_commutator(&boson_raise(&b, n, Mode::Compressed)?, &boson_raise(&b, m, Mode::Compressed)?)?;
            push(format!("[drho(z{n}),drho(z{m})]"), safe_residual(&c, zero, e.saturating_sub(n + m))?);
            let c = graded_commutator(&dual_lower(&d, n)?, &dual_raise(&d, m, Mode::Compressed)?)?;
            push(format!("[drho*(z{n}),drho*(zbar{m})]"), safe_residual(&c, -delta, cap)?);
            let c = graded_commutator(&clifford(&f, n, Holo::Z, Mode::Compressed)?, &clifford(&f, m, Holo::ZBar, Mode::Compressed)?)?;
            // the whole space when the energy cut keeps every subset of modes
            let fcap = if 2 * e >= spec.n_max * (spec.n_max + 1) { e } else { cap };
            push(format!("{{gamma(z{n}),gamma(zbar{m})}}"), safe_residual(&c, -2.0 * delta, fcap)?);
            let c = graded_commutator(&clifford(&f, n, Holo::Z, Mode::Compressed)?, &clifford(&f, m, Holo::Z, Mode::Compressed)?)?;
            push(format!("{{gamma(z{n}),gamma(z{m})}}"), safe_residual(&c, zero, e)?);
        }
    }
    for (basis, tag, raise) in [(&b, "drho(d)", true), (&d, "drho*(d)", false)] {
        let mut sum = SparseOperator::zero(basis.clone(), basis.clone(), Grade::Even);
        for n in 1..=spec.n_max {
            let t = if raise {
                boson_raise(basis, n, Mode::Compressed)?.compose(&boson_lower(basis, n)?)?
            } else {
                dual_raise(basis, n, Mode::Compressed)?.compose(&dual_lower(basis, n)?)?
            };
            sum = sum.add(&t.scale_real(n as f64))?;
        }
        // dρ(d) = −iΣ n dρ(z_n)dρ(z̄_n), and likewise for the dual
        let r = energy_op(basis)?.sub(&sum.scale(C64::new(0.0, -1.0)))?;
        push(format!("{tag} quadratic"), safe_residual(&r, zero, e)?);
    }
    let mut sum = SparseOperator::zero(f.clone(), f.clone(), Grade::Even);
    for n in 1..=spec.n_max {
        let t = clifford(&f, n, Holo::ZBar, Mode::Compressed)?.compose(&clifford(&f, n, Holo::Z, Mode::Compressed)?)?;
        sum = sum.add(&t.scale_real(n as f64))?;
    }
    let r = number_op(&f)?.add(&sum.scale_real(0.5))?;
    push("N quadratic".into(), safe_residual(&r, zero, e)?);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::{graded_commutator, inner_product, spectrum, Vector};

    fn spec(n: u32, e: u32) -> TruncationSpec {
        TruncationSpec::new(n, e).unwrap()
    }

    fn vec_of(b: &Arc<Basis>, l: &[u32]) -> Vector {
        Vector::from_labels(b.clone(), &[(l, C64::new(1.0, 0.0))]).unwrap()
    }

    #[test]
    fn basis_counts() {
        assert_eq!(enumerate_basis(&spec(3, 4), Kind::Boson).dim(), 11);
        assert_eq!(enumerate_basis(&spec(3, 0), Kind::Boson).dim(), 1);
        let f = enumerate_basis(&spec(3, 4), Kind::Fermion);
        assert_eq!(f.dim(), 6);
        for l in [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1]] {
            assert!(f.index_of(&l).is_some());
        }
    }

    #[test]
    fn monomial_norms() {
        let b = enumerate_basis(&spec(2, 6), Kind::Boson);
        let v = vec_of(&b, &[2, 1]);
        assert_eq!(inner_product(&v, &v).unwrap(), C64::new(2.0, 0.0));
        let f = enumerate_basis(&spec(4, 5), Kind::Fermion);
        let w = vec_of(&f, &[1, 0, 0, 1]);
        assert_eq!(inner_product(&w, &w).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn boson_ladders() {
        let b = enumerate_basis(&spec(2, 8), Kind::Boson);
        let low = boson_lower(&b, 1).unwrap();
        let out = low.apply(&vec_of(&b, &[2, 0])).unwrap();
        assert_eq!(out.get(b.index_of(&[1, 0]).unwrap()), C64::new(-2.0, 0.0));
        let up = boson_raise(&b, 2, Mode::Compressed).unwrap();
        let out = up.apply(&vec_of(&b, &[0, 0])).unwrap();
        assert_eq!(out.get(b.index_of(&[0, 1]).unwrap()), C64::new(1.0, 0.0));
        let comm = graded_commutator(&up, &boson_lower(&b, 2).unwrap()).unwrap();
        let z23 = vec_of(&b, &[0, 3]);
        let got = comm.apply(&z23).unwrap();
        assert_eq!(got.get(b.index_of(&[0, 3]).unwrap()), C64::new(1.0, 0.0));
        assert_eq!(got.support_len(), 1);
        assert!(boson_raise(&b, 2, Mode::Strict).is_err());
    }

    #[test]
    fn dual_norm_identity() {
        let b = enumerate_basis(&spec(1, 4), Kind::DualBoson);
        let phi = vec_of(&b, &[2]);
        let out = dual_lower(&b, 1).unwrap().apply(&phi).unwrap();
        assert!((out.norm() - 2f64.sqrt() * phi.norm()).abs() < 1e-14);
        let vac = vec_of(&enumerate_basis(&spec(3, 4), Kind::DualBoson), &[0, 0, 0]);
        let b3 = vac.basis().clone();
        assert_eq!(dual_lower(&b3, 3).unwrap().apply(&vac).unwrap().support_len(), 0);
    }

    #[test]
    fn energy_values() {
        let b = enumerate_basis(&spec(3, 6), Kind::Boson);
        let d = energy_op(&b).unwrap();
        let v = vec_of(&b, &[1, 0, 1]);
        assert_eq!(d.apply(&v).unwrap().get(b.index_of(&[1, 0, 1]).unwrap()), C64::new(0.0, 4.0));
        assert_eq!(d.get(0, 0), C64::new(0.0, 0.0));
    }

    #[test]
    fn clifford_values() {
        let f = enumerate_basis(&spec(5, 8), Kind::Fermion);
        let r2 = std::f64::consts::SQRT_2;
        let g = clifford(&f, 2, Holo::ZBar, Mode::Compressed).unwrap();
        let out = g.apply(&vec_of(&f, &[0; 5])).unwrap();
        assert!((out.get(f.index_of(&[0, 1, 0, 0, 0]).unwrap()) - r2).norm() < 1e-15);
        let c = clifford(&f, 2, Holo::Z, Mode::Strict).unwrap();
        let out = c.apply(&vec_of(&f, &[0, 1, 0, 0, 1])).unwrap();
        assert!((out.get(f.index_of(&[0, 0, 0, 0, 1]).unwrap()) + r2).norm() < 1e-15);
        let c1 = clifford(&f, 1, Holo::Z, Mode::Strict).unwrap();
        assert_eq!(c1.compose(&c1).unwrap().nnz(), 0);
    }

    #[test]
    fn number_spectrum() {
        let f = enumerate_basis(&spec(3, 6), Kind::Fermion);
        let s = spectrum(&number_op(&f).unwrap()).unwrap();
        assert_eq!(s.values(), &[0.0, 1.0, 2.0, 3.0, 3.0, 4.0, 5.0, 6.0]);
        let n = number_op(&f).unwrap();
        let v = vec_of(&f, &[1, 0, 1]);
        assert_eq!(n.apply(&v).unwrap().get(f.index_of(&[1, 0, 1]).unwrap()), C64::new(4.0, 0.0));
    }

    #[test]
    fn kind_checked() {
        let f = enumerate_basis(&spec(2, 2), Kind::Fermion);
        assert!(matches!(boson_lower(&f, 1), Err(Error::WrongKind { .. })));
        assert!(boson_lower(&enumerate_basis(&spec(2, 2), Kind::Boson), 3).is_err());
    }

    #[test]
    fn relations_exact() {
        for sp in [spec(3, 7), spec(4, 8)] {
            let rows = relation_suite(&sp).unwrap();
            assert_eq!(rows.len(), 5 * (sp.n_max * sp.n_max) as usize + 3);
            for r in rows {
                assert!(r.residual < 1e-12, "{} {}", r.name, r.residual);
            }
        }
    }

    #[test]
    fn csv_dump() {
        let b = enumerate_basis(&spec(2, 2), Kind::Boson);
        let s = basis_csv(&b);
        assert!(s.starts_with("label,energy,gram\n0 0,0,1\n"));
        assert!(s.contains("2 0,2,2\n"));
    }
}
