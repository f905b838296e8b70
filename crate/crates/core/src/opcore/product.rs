use std::collections::HashMap;
use std::sync::Arc;

use super::basis::{check_same, Basis, BasisEntry};
use super::operator::{Grade, SparseOperator};
use super::vector::Vector;
use crate::{Error, Result, C64};

/// Which product states are kept.
#[derive(Clone, Debug, PartialEq)]
pub enum ProductTruncation {
    /// Every tuple.
    Full,
    /// Total energy at most the cap.
    Joint(u32),
    /// For each group of factor positions, the summed energy is at most the cap.
    Groups(Vec<(Vec<usize>, u32)>),
}

impl ProductTruncation {
    fn admits(&self, energies: &[u32]) -> bool {
        match self {
            ProductTruncation::Full => true,
            ProductTruncation::Joint(e) => energies.iter().sum::<u32>() <= *e,
            ProductTruncation::Groups(groups) => groups.iter().all(|(idx, cap)| {
                idx.iter().filter(|&&i| i < energies.len()).map(|&i| energies[i]).sum::<u32>() <= *cap
            }),
        }
    }
}

/// Truncated graded tensor product of labeled bases.
///
/// Product labels are concatenations of factor labels; Gram weights
/// multiply, parities and energies add.
#[derive(Debug)]
pub struct ProductBasis {
    factors: Vec<Arc<Basis>>,
    basis: Arc<Basis>,
    tuples: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
    truncation: ProductTruncation,
}

impl ProductBasis {
    pub fn new(factors: Vec<Arc<Basis>>, truncation: ProductTruncation) -> Result<ProductBasis> {
        if factors.is_empty() {
            return Err(Error::InvalidTruncation("product of zero factors".into()));
        }
        let mut found: Vec<Vec<usize>> = Vec::new();
        let mut current = Vec::with_capacity(factors.len());
        let mut energies = Vec::with_capacity(factors.len());
        enumerate(&factors, &truncation, &mut current, &mut energies, &mut found);

        let mut rows: Vec<(BasisEntry, Vec<usize>)> = found
            .into_iter()
            .map(|t| {
                let mut label = Vec::new();
                let mut gram = 1.0;
                let mut parity = 0u8;
                let mut energy = 0u32;
                for (f, &i) in factors.iter().zip(&t) {
                    label.extend_from_slice(f.label(i));
                    gram *= f.gram(i);
                    parity += f.parity(i);
                    energy += f.energy(i);
                }
                (BasisEntry::new(label, gram, parity, energy), t)
            })
            .collect();
        rows.sort_by(|a, b| a.0.label.cmp(&b.0.label));
        let kind = factors.iter().map(|f| f.kind()).collect::<Vec<_>>().join("⊗");
        let tuples: Vec<Vec<usize>> = rows.iter().map(|r| r.1.clone()).collect();
        let basis = Basis::new(kind, rows.into_iter().map(|r| r.0).collect())?;
        let lookup = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Ok(ProductBasis {
            factors,
            basis,
            tuples,
            lookup,
            truncation,
        })
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn factors(&self) -> &[Arc<Basis>] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &Arc<Basis> {
        &self.factors[i]
    }

    pub fn truncation(&self) -> &ProductTruncation {
        &self.truncation
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn tuple(&self, i: usize) -> &[usize] {
        &self.tuples[i]
    }

    pub fn index_of_tuple(&self, t: &[usize]) -> Option<usize> {
        self.lookup.get(t).copied()
    }

    /// Graded tensor product `ops[0] ⊗ ops[1] ⊗ …` (`None` = identity) as an
    /// operator from `self` to `target`.
    ///
    /// Koszul rule: the factor at position `i` picks up
    /// `(-1)^{|op_i| · Σ_{j<i} |u_j|}`. Images outside `target` are dropped,
    /// or reported when `strict`.
    pub fn lift_into(
        &self,
        target: &ProductBasis,
        ops: &[Option<&SparseOperator>],
        strict: bool,
    ) -> Result<SparseOperator> {
        let k = self.factors.len();
        if ops.len() != k || target.factors.len() != k {
            return Err(Error::ShapeMismatch {
                expected: format!("{k} factors"),
                got: format!("{} operators, {} target factors", ops.len(), target.factors.len()),
            });
        }
        let mut grade = Grade::Even;
        let mut cols: Vec<Option<Vec<Vec<(usize, C64)>>>> = Vec::with_capacity(k);
        for i in 0..k {
            match ops[i] {
                Some(op) => {
                    check_same(op.domain(), &self.factors[i], "lift domain")?;
                    check_same(op.codomain(), &target.factors[i], "lift codomain")?;
                    grade = grade.combine(op.grade());
                    let mut by_col = vec![Vec::new(); op.domain().dim()];
                    for &(r, c, v) in op.entries() {
                        by_col[c].push((r, v));
                    }
                    cols.push(Some(by_col));
                }
                None => {
                    check_same(&self.factors[i], &target.factors[i], "lift identity factor")?;
                    cols.push(None);
                }
            }
        }
        let odd: Vec<bool> = ops
            .iter()
            .map(|o| o.map(|op| op.grade() == Grade::Odd).unwrap_or(false))
            .collect();

        let mut trip = Vec::new();
        let mut terms: Vec<(Vec<usize>, C64)> = Vec::new();
        let mut next: Vec<(Vec<usize>, C64)> = Vec::new();
        for (p, t) in self.tuples.iter().enumerate() {
            let mut sign = 1.0;
            let mut below = 0u8;
            for i in 0..k {
                if odd[i] && below % 2 == 1 {
                    sign = -sign;
                }
                below += self.factors[i].parity(t[i]);
            }
            terms.clear();
            terms.push((t.clone(), C64::new(sign, 0.0)));
            for (i, by_col) in cols.iter().enumerate() {
                let Some(by_col) = by_col else { continue };
                next.clear();
                for (tt, x) in &terms {
                    for &(r, v) in &by_col[tt[i]] {
                        let mut nt = tt.clone();
                        nt[i] = r;
                        next.push((nt, *x * v));
                    }
                }
                std::mem::swap(&mut terms, &mut next);
                if terms.is_empty() {
                    break;
                }
            }
            for (tt, x) in &terms {
                match target.lookup.get(tt) {
                    Some(&q) => trip.push((q, p, *x)),
                    None if strict => {
                        return Err(Error::TruncationOverflow(format!(
                            "image of product state {:?} leaves the target truncation",
                            self.basis.label(p)
                        )))
                    }
                    None => {}
                }
            }
        }
        SparseOperator::from_triplets(self.basis.clone(), target.basis.clone(), grade, trip)
    }

    /// `lift_into(self, …)` in compressed mode.
    pub fn lift(&self, ops: &[Option<&SparseOperator>]) -> Result<SparseOperator> {
        self.lift_into(self, ops, false)
    }

    /// Operator acting on factor `i` only.
    pub fn lift_one(&self, i: usize, op: &SparseOperator) -> Result<SparseOperator> {
        let mut ops: Vec<Option<&SparseOperator>> = vec![None; self.factors.len()];
        ops[i] = Some(op);
        self.lift(&ops)
    }

    /// Plain tensor product of factor vectors; components outside the
    /// truncation are dropped (reported when `strict`).
    pub fn tensor(&self, parts: &[&Vector], strict: bool) -> Result<Vector> {
        if parts.len() != self.factors.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} factors", self.factors.len()),
                got: parts.len().to_string(),
            });
        }
        for (v, f) in parts.iter().zip(&self.factors) {
            check_same(v.basis(), f, "tensor factor")?;
        }
        let mut terms: Vec<(Vec<usize>, C64)> = vec![(Vec::new(), C64::new(1.0, 0.0))];
        for v in parts {
            let mut next = Vec::new();
            for (t, x) in &terms {
                for (i, y) in v.iter() {
                    let mut nt = t.clone();
                    nt.push(i);
                    next.push((nt, *x * y));
                }
            }
            terms = next;
        }
        let mut pairs = Vec::new();
        for (t, x) in terms {
            match self.lookup.get(&t) {
                Some(&q) => pairs.push((q, x)),
                None if strict => {
                    return Err(Error::TruncationOverflow(format!("tensor component {t:?} is truncated")))
                }
                None => {}
            }
        }
        Vector::from_pairs(self.basis.clone(), pairs)
    }
}

fn enumerate(
    factors: &[Arc<Basis>],
    trunc: &ProductTruncation,
    current: &mut Vec<usize>,
    energies: &mut Vec<u32>,
    out: &mut Vec<Vec<usize>>,
) {
    let depth = current.len();
    if depth == factors.len() {
        out.push(current.clone());
        return;
    }
    for i in 0..factors[depth].dim() {
        energies.push(factors[depth].energy(i));
        if trunc.admits(energies) {
            current.push(i);
            enumerate(factors, trunc, current, energies, out);
            current.pop();
        }
        energies.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graded(n: usize) -> Arc<Basis> {
        Basis::new(
            "g",
            (0..n).map(|i| BasisEntry::new(vec![i as u32], 1.0, (i % 2) as u8, i as u32)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn joint_truncation_counts() {
        let p = ProductBasis::new(vec![graded(3), graded(3)], ProductTruncation::Joint(2)).unwrap();
        assert_eq!(p.dim(), 6);
        let g = ProductBasis::new(
            vec![graded(3), graded(3), graded(3)],
            ProductTruncation::Groups(vec![(vec![0, 1], 1), (vec![2], 2)]),
        )
        .unwrap();
        assert_eq!(g.dim(), 9);
    }

    #[test]
    fn koszul_sign_on_second_factor() {
        let b = graded(2);
        let flip = SparseOperator::from_triplets(
            b.clone(),
            b.clone(),
            Grade::Odd,
            vec![(0, 1, C64::new(1.0, 0.0)), (1, 0, C64::new(1.0, 0.0))],
        )
        .unwrap();
        let p = ProductBasis::new(vec![b.clone(), b.clone()], ProductTruncation::Full).unwrap();
        let lifted = p.lift_one(1, &flip).unwrap();
        // |1⟩⊗|0⟩ is odd in the first slot, so id⊗flip picks up a sign.
        let src = p.index_of_tuple(&[1, 0]).unwrap();
        let dst = p.index_of_tuple(&[1, 1]).unwrap();
        assert_eq!(lifted.get(dst, src), C64::new(-1.0, 0.0));
        let src = p.index_of_tuple(&[0, 0]).unwrap();
        let dst = p.index_of_tuple(&[0, 1]).unwrap();
        assert_eq!(lifted.get(dst, src), C64::new(1.0, 0.0));
        // odd operators on different slots anticommute
        let a = p.lift_one(0, &flip).unwrap();
        let anti = a.compose(&lifted).unwrap().add(&lifted.compose(&a).unwrap()).unwrap();
        assert_eq!(anti.nnz(), 0);
    }

    #[test]
    fn strict_lift_reports_overflow() {
        let b = graded(3);
        let up = SparseOperator::from_triplets(
            b.clone(),
            b.clone(),
            Grade::Odd,
            vec![(1, 0, C64::new(1.0, 0.0)), (2, 1, C64::new(1.0, 0.0))],
        )
        .unwrap();
        let p = ProductBasis::new(vec![b.clone(), b.clone()], ProductTruncation::Joint(2)).unwrap();
        assert!(p.lift_into(&p, &[Some(&up), None], true).is_err());
        assert!(p.lift_into(&p, &[Some(&up), None], false).is_ok());
    }
}
