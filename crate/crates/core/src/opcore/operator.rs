use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::basis::{check_same, Basis};
use super::vector::Vector;
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grade {
    Even,
    Odd,
}

impl Grade {
    pub fn degree(self) -> u8 {
        match self {
            Grade::Even => 0,
            Grade::Odd => 1,
        }
    }

    pub fn from_degree(d: u8) -> Grade {
        if d % 2 == 0 {
            Grade::Even
        } else {
            Grade::Odd
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Grade::Even => "even",
            Grade::Odd => "odd",
        }
    }

    pub fn combine(self, other: Grade) -> Grade {
        Grade::from_degree(self.degree() + other.degree())
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sparse operator `domain -> codomain` stored as sorted coordinate triplets.
///
/// Rows index the codomain, columns the domain. Entries are unique per
/// position and never exactly zero.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    domain: Arc<Basis>,
    codomain: Arc<Basis>,
    grade: Grade,
    entries: Vec<(usize, usize, C64)>,
}

fn merge(mut trip: Vec<(usize, usize, C64)>) -> Vec<(usize, usize, C64)> {
    trip.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let mut out: Vec<(usize, usize, C64)> = Vec::with_capacity(trip.len());
    for (r, c, v) in trip {
        match out.last_mut() {
            Some(last) if last.0 == r && last.1 == c => last.2 += v,
            _ => out.push((r, c, v)),
        }
    }
    out.retain(|e| e.2 != C64::new(0.0, 0.0));
    out
}

impl SparseOperator {
    pub fn from_triplets(
        domain: Arc<Basis>,
        codomain: Arc<Basis>,
        grade: Grade,
        triplets: Vec<(usize, usize, C64)>,
    ) -> Result<Self> {
        for &(r, c, _) in &triplets {
            if r >= codomain.dim() {
                return Err(Error::IndexOutOfBounds { index: r, dim: codomain.dim() });
            }
            if c >= domain.dim() {
                return Err(Error::IndexOutOfBounds { index: c, dim: domain.dim() });
            }
        }
        Ok(SparseOperator {
            domain,
            codomain,
            grade,
            entries: merge(triplets),
        })
    }

    pub fn zero(domain: Arc<Basis>, codomain: Arc<Basis>, grade: Grade) -> Self {
        SparseOperator {
            domain,
            codomain,
            grade,
            entries: Vec::new(),
        }
    }

    pub fn identity(basis: Arc<Basis>) -> Self {
        let entries = (0..basis.dim()).map(|i| (i, i, C64::new(1.0, 0.0))).collect();
        SparseOperator {
            domain: basis.clone(),
            codomain: basis,
            grade: Grade::Even,
            entries,
        }
    }

    pub fn diagonal(basis: Arc<Basis>, values: &[C64]) -> Result<Self> {
        if values.len() != basis.dim() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} diagonal values", basis.dim()),
                got: values.len().to_string(),
            });
        }
        let trip = values.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        SparseOperator::from_triplets(basis.clone(), basis, Grade::Even, trip)
    }

    /// Operator whose orthonormal-coordinate matrix is `m` (rows = codomain).
    pub fn from_orthonormal_dense(
        domain: Arc<Basis>,
        codomain: Arc<Basis>,
        grade: Grade,
        m: &DMatrix<C64>,
        drop_below: f64,
    ) -> Result<Self> {
        if m.nrows() != codomain.dim() || m.ncols() != domain.dim() {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", codomain.dim(), domain.dim()),
                got: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        let mut trip = Vec::new();
        for c in 0..m.ncols() {
            let sc = domain.gram(c).sqrt();
            for r in 0..m.nrows() {
                let v = m[(r, c)];
                if v.norm() > drop_below {
                    trip.push((r, c, v * sc / codomain.gram(r).sqrt()));
                }
            }
        }
        SparseOperator::from_triplets(domain, codomain, grade, trip)
    }

    pub fn domain(&self) -> &Arc<Basis> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Basis> {
        &self.codomain
    }

    pub fn grade(&self) -> Grade {
        self.grade
    }

    pub fn with_grade(mut self, grade: Grade) -> Self {
        self.grade = grade;
        self
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_square(&self) -> bool {
        self.domain.same_as(&self.codomain)
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        match self.entries.binary_search_by(|e| (e.0, e.1).cmp(&(row, col))) {
            Ok(i) => self.entries[i].2,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    fn check_shape(&self, other: &SparseOperator) -> Result<()> {
        check_same(&self.domain, &other.domain, "domain")?;
        check_same(&self.codomain, &other.codomain, "codomain")
    }

    fn sum_grade(&self, other: &SparseOperator) -> Result<Grade> {
        if self.grade == other.grade || other.entries.is_empty() {
            Ok(self.grade)
        } else if self.entries.is_empty() {
            Ok(other.grade)
        } else {
            Err(Error::GradeMismatch(self.grade.name(), other.grade.name()))
        }
    }

    pub fn add(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.check_shape(other)?;
        let grade = self.sum_grade(other)?;
        let mut trip = self.entries.clone();
        trip.extend_from_slice(&other.entries);
        Ok(SparseOperator {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            grade,
            entries: merge(trip),
        })
    }

    pub fn sub(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> SparseOperator {
        let entries = if s == C64::new(0.0, 0.0) {
            Vec::new()
        } else {
            self.entries.iter().map(|&(r, c, v)| (r, c, v * s)).collect()
        };
        SparseOperator {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            grade: self.grade,
            entries,
        }
    }

    pub fn scale_real(&self, s: f64) -> SparseOperator {
        self.scale(C64::new(s, 0.0))
    }

    /// `self ∘ rhs`: first `rhs`, then `self`.
    pub fn compose(&self, rhs: &SparseOperator) -> Result<SparseOperator> {
        check_same(&rhs.codomain, &self.domain, "composition")?;
        let mut by_col: Vec<Vec<(usize, C64)>> = vec![Vec::new(); self.domain.dim()];
        for &(r, c, v) in &self.entries {
            by_col[c].push((r, v));
        }
        let mut trip = Vec::new();
        for &(mid, c, v) in &rhs.entries {
            for &(r, w) in &by_col[mid] {
                trip.push((r, c, w * v));
            }
        }
        Ok(SparseOperator {
            domain: rhs.domain.clone(),
            codomain: self.codomain.clone(),
            grade: self.grade.combine(rhs.grade),
            entries: merge(trip),
        })
    }

    /// Gram-weighted conjugate transpose: `⟨A*v, w⟩ = ⟨v, Aw⟩`.
    pub fn adjoint(&self) -> SparseOperator {
        let trip = self
            .entries
            .iter()
            .map(|&(r, c, v)| (c, r, v.conj() * (self.codomain.gram(r) / self.domain.gram(c))))
            .collect();
        SparseOperator {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            grade: self.grade,
            entries: merge(trip),
        }
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        check_same(v.basis(), &self.domain, "apply")?;
        let mut by_col: Vec<Vec<(usize, C64)>> = vec![Vec::new(); self.domain.dim()];
        for &(r, c, a) in &self.entries {
            by_col[c].push((r, a));
        }
        let mut out = Vector::zero(self.codomain.clone());
        for (c, x) in v.iter() {
            for &(r, a) in &by_col[c] {
                out.add_at(r, a * x);
            }
        }
        out.prune(0.0);
        Ok(out)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::from_element(self.codomain.dim(), self.domain.dim(), C64::new(0.0, 0.0));
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }

    /// Dense matrix in Gram-orthonormal coordinates.
    pub fn to_orthonormal_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::from_element(self.codomain.dim(), self.domain.dim(), C64::new(0.0, 0.0));
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v * (self.codomain.gram(r).sqrt() / self.domain.gram(c).sqrt());
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.2.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &SparseOperator) -> Result<f64> {
        self.check_shape(other)?;
        let mut trip = self.entries.clone();
        trip.extend(other.entries.iter().map(|&(r, c, v)| (r, c, -v)));
        Ok(merge(trip).iter().map(|e| e.2.norm()).fold(0.0, f64::max))
    }

    /// Largest entry of `A - A*` in orthonormal coordinates.
    pub fn asymmetry(&self) -> Result<f64> {
        check_same(&self.domain, &self.codomain, "self-adjointness")?;
        let diff = self.sub(&self.adjoint())?;
        Ok(diff
            .entries
            .iter()
            .map(|&(r, c, v)| v.norm() * (self.codomain.gram(r) / self.domain.gram(c)).sqrt())
            .fold(0.0, f64::max))
    }

    /// Largest entry in orthonormal coordinates.
    pub fn max_abs_orthonormal(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(r, c, v)| v.norm() * (self.codomain.gram(r) / self.domain.gram(c)).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn is_self_adjoint(&self, rel_tol: f64) -> Result<bool> {
        Ok(self.asymmetry()? <= rel_tol * self.max_abs_orthonormal().max(1.0))
    }

    /// True if every entry connects basis states whose parities differ by the grade.
    pub fn respects_grade(&self) -> bool {
        let g = self.grade.degree();
        self.entries
            .iter()
            .all(|&(r, c, _)| (self.codomain.parity(r) + self.domain.parity(c) + g) % 2 == 0)
    }

    /// True if every entry connects states of equal energy.
    pub fn preserves_energy(&self) -> bool {
        self.entries
            .iter()
            .all(|&(r, c, _)| self.codomain.energy(r) == self.domain.energy(c))
    }

    /// Keep only the columns whose domain labels lie in `sub`.
    pub fn restrict_domain(&self, sub: &Arc<Basis>) -> Result<SparseOperator> {
        let map = sub_map(&self.domain, sub)?;
        let trip = self
            .entries
            .iter()
            .filter_map(|&(r, c, v)| map[c].map(|c2| (r, c2, v)))
            .collect();
        SparseOperator::from_triplets(sub.clone(), self.codomain.clone(), self.grade, trip)
    }

    /// Compress to `sub -> sub` (keeps entries with both ends in `sub`).
    pub fn compress(&self, sub: &Arc<Basis>) -> Result<SparseOperator> {
        let dmap = sub_map(&self.domain, sub)?;
        let cmap = sub_map(&self.codomain, sub)?;
        let trip = self
            .entries
            .iter()
            .filter_map(|&(r, c, v)| match (cmap[r], dmap[c]) {
                (Some(r2), Some(c2)) => Some((r2, c2, v)),
                _ => None,
            })
            .collect();
        SparseOperator::from_triplets(sub.clone(), sub.clone(), self.grade, trip)
    }

    /// Drop entries with modulus at most `tol`.
    pub fn prune(&self, tol: f64) -> SparseOperator {
        let mut out = self.clone();
        out.entries.retain(|e| e.2.norm() > tol);
        out
    }

    /// Operator norm in orthonormal coordinates (largest singular value).
    ///
    /// Only rows and columns carrying entries enter; large operators go
    /// through the sparse Gram product on their narrower side.
    pub fn op_norm(&self) -> f64 {
        if self.entries.is_empty() {
            return 0.0;
        }
        let (rows, cols) = self.support();
        if rows.len().min(cols.len()) <= 400 {
            let m = self.dense_on(&rows, &cols);
            return m.singular_values().iter().cloned().fold(0.0, f64::max);
        }
        let gram = if cols.len() <= rows.len() {
            self.adjoint().compose(self)
        } else {
            self.compose(&self.adjoint())
        }
        .expect("shapes agree");
        let side = if cols.len() <= rows.len() { cols } else { rows };
        let m = gram.dense_on(&side, &side);
        let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        let top = nalgebra::SymmetricEigen::new(m).eigenvalues.iter().cloned().fold(0.0, f64::max);
        top.max(0.0).sqrt()
    }

    fn support(&self) -> (Vec<usize>, Vec<usize>) {
        let mut rows: Vec<usize> = self.entries.iter().map(|e| e.0).collect();
        let mut cols: Vec<usize> = self.entries.iter().map(|e| e.1).collect();
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        (rows, cols)
    }

    /// Orthonormal-coordinate submatrix on sorted index lists.
    fn dense_on(&self, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
        let mut m = DMatrix::from_element(rows.len(), cols.len(), C64::new(0.0, 0.0));
        for &(r, c, v) in &self.entries {
            if let (Ok(i), Ok(j)) = (rows.binary_search(&r), cols.binary_search(&c)) {
                m[(i, j)] = v * (self.codomain.gram(r).sqrt() / self.domain.gram(c).sqrt());
            }
        }
        m
    }

    /// `y = A x` with `x`, `y` in Gram-orthonormal coordinates.
    pub fn apply_orthonormal(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.codomain.dim()];
        for &(r, c, v) in &self.entries {
            y[r] += v * (self.codomain.gram(r) / self.domain.gram(c)).sqrt() * x[c];
        }
        y
    }
}

/// For each index of `full`, its position in `sub` if present.
fn sub_map(full: &Basis, sub: &Basis) -> Result<Vec<Option<usize>>> {
    let mut map = vec![None; full.dim()];
    for (j, l) in sub.labels().iter().enumerate() {
        match full.index_of(l) {
            Some(i) => map[i] = Some(j),
            None => {
                return Err(Error::BasisMismatch(format!(
                    "label {l:?} of '{}' not in '{}'",
                    sub.kind(),
                    full.kind()
                )))
            }
        }
    }
    Ok(map)
}

/// Graded commutator `AB - (-1)^{|A||B|} BA`.
pub fn graded_commutator(a: &SparseOperator, b: &SparseOperator) -> Result<SparseOperator> {
    let ab = a.compose(b)?;
    let ba = b.compose(a)?;
    let sign = if a.grade().degree() * b.grade().degree() % 2 == 1 { -1.0 } else { 1.0 };
    ab.sub(&ba.scale_real(sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::basis::BasisEntry;

    fn weighted() -> Arc<Basis> {
        Basis::new(
            "w",
            vec![
                BasisEntry::new(vec![0], 1.0, 0, 0),
                BasisEntry::new(vec![1], 2.0, 1, 1),
                BasisEntry::new(vec![2], 6.0, 0, 2),
            ],
        )
        .unwrap()
    }

    fn sample(b: &Arc<Basis>) -> SparseOperator {
        SparseOperator::from_triplets(
            b.clone(),
            b.clone(),
            Grade::Odd,
            vec![
                (1, 0, C64::new(1.0, 2.0)),
                (0, 1, C64::new(-0.5, 0.0)),
                (2, 1, C64::new(0.0, 3.0)),
                (2, 1, C64::new(1.0, 0.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn duplicates_summed_and_zeros_dropped() {
        let b = weighted();
        let a = sample(&b);
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.get(2, 1), C64::new(1.0, 3.0));
        let z = SparseOperator::from_triplets(
            b.clone(),
            b.clone(),
            Grade::Even,
            vec![(0, 0, C64::new(1.0, 0.0)), (0, 0, C64::new(-1.0, 0.0))],
        )
        .unwrap();
        assert_eq!(z.nnz(), 0);
    }

    #[test]
    fn out_of_bounds_rejected() {
        let b = weighted();
        let r = SparseOperator::from_triplets(b.clone(), b, Grade::Even, vec![(3, 0, C64::new(1.0, 0.0))]);
        assert!(matches!(r, Err(Error::IndexOutOfBounds { .. })));
    }

    #[test]
    fn adjoint_matches_gram_pairing() {
        let b = weighted();
        let a = sample(&b);
        let ad = a.adjoint();
        for i in 0..3 {
            for j in 0..3 {
                let ei = Vector::basis_vector(b.clone(), i);
                let ej = Vector::basis_vector(b.clone(), j);
                let lhs = ad.apply(&ei).unwrap().inner(&ej).unwrap();
                let rhs = ei.inner(&a.apply(&ej).unwrap()).unwrap();
                assert!((lhs - rhs).norm() < 1e-14);
            }
        }
        assert_eq!(ad.adjoint().max_abs_diff(&a).unwrap(), 0.0);
    }

    #[test]
    fn compose_matches_dense() {
        let b = weighted();
        let a = sample(&b);
        let c = a.adjoint();
        let dense = a.to_dense() * c.to_dense();
        let sparse = a.compose(&c).unwrap().to_dense();
        assert!((dense - sparse).norm() < 1e-14);
        assert_eq!(a.compose(&c).unwrap().grade(), Grade::Even);
    }

    #[test]
    fn self_commutators() {
        let b = weighted();
        let odd = sample(&b);
        let lhs = graded_commutator(&odd, &odd).unwrap();
        let rhs = odd.compose(&odd).unwrap().scale_real(2.0);
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-14);
        let even = odd.with_grade(Grade::Even);
        assert_eq!(graded_commutator(&even, &even).unwrap().nnz(), 0);
    }

    #[test]
    fn grade_mismatch_in_sum() {
        let b = weighted();
        let a = sample(&b);
        let id = SparseOperator::identity(b);
        assert!(matches!(a.add(&id), Err(Error::GradeMismatch(..))));
    }

    #[test]
    fn orthonormal_roundtrip() {
        let b = weighted();
        let a = sample(&b);
        let m = a.to_orthonormal_dense();
        let back = SparseOperator::from_orthonormal_dense(b.clone(), b, Grade::Odd, &m, 0.0).unwrap();
        assert!(back.max_abs_diff(&a).unwrap() < 1e-14);
    }
}
