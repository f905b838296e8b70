use std::collections::BTreeMap;
use std::sync::Arc;

use super::basis::{check_same, Basis};
use crate::{Error, Result, C64};

/// Sparse vector over a labeled basis.
#[derive(Clone, Debug)]
pub struct Vector {
    basis: Arc<Basis>,
    coeffs: BTreeMap<usize, C64>,
}

impl Vector {
    pub fn zero(basis: Arc<Basis>) -> Self {
        Vector {
            basis,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis_vector(basis: Arc<Basis>, i: usize) -> Self {
        let mut v = Vector::zero(basis);
        v.coeffs.insert(i, C64::new(1.0, 0.0));
        v
    }

    pub fn from_pairs(basis: Arc<Basis>, pairs: impl IntoIterator<Item = (usize, C64)>) -> Result<Self> {
        let mut v = Vector::zero(basis);
        for (i, x) in pairs {
            if i >= v.basis.dim() {
                return Err(Error::IndexOutOfBounds { index: i, dim: v.basis.dim() });
            }
            v.add_at(i, x);
        }
        Ok(v)
    }

    pub fn from_dense(basis: Arc<Basis>, values: &[C64]) -> Result<Self> {
        if values.len() != basis.dim() {
            return Err(Error::ShapeMismatch {
                expected: basis.dim().to_string(),
                got: values.len().to_string(),
            });
        }
        let pairs: Vec<_> = values.iter().copied().enumerate().filter(|p| p.1 != C64::new(0.0, 0.0)).collect();
        Vector::from_pairs(basis, pairs)
    }

    /// Vector with labeled coefficients; unknown labels are an error.
    pub fn from_labels(basis: Arc<Basis>, pairs: &[(&[u32], C64)]) -> Result<Self> {
        let mut v = Vector::zero(basis);
        for (l, x) in pairs {
            let i = v
                .basis
                .index_of(l)
                .ok_or_else(|| Error::BasisMismatch(format!("label {l:?} not in '{}'", v.basis.kind())))?;
            v.add_at(i, *x);
        }
        Ok(v)
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn get(&self, i: usize) -> C64 {
        self.coeffs.get(&i).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.coeffs.iter().map(|(&i, &x)| (i, x))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub(crate) fn add_at(&mut self, i: usize, x: C64) {
        *self.coeffs.entry(i).or_insert(C64::new(0.0, 0.0)) += x;
    }

    pub fn prune(&mut self, tol: f64) {
        self.coeffs.retain(|_, x| x.norm() > tol);
    }

    pub fn to_dense(&self) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.basis.dim()];
        for (&i, &x) in &self.coeffs {
            out[i] = x;
        }
        out
    }

    pub fn scale(&self, s: C64) -> Vector {
        let mut out = self.clone();
        for x in out.coeffs.values_mut() {
            *x *= s;
        }
        out
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        check_same(&self.basis, &other.basis, "vector sum")?;
        let mut out = self.clone();
        for (i, x) in other.iter() {
            out.add_at(i, x);
        }
        Ok(out)
    }

    /// Gram-weighted inner product, conjugate-linear in `self`.
    pub fn inner(&self, other: &Vector) -> Result<C64> {
        inner_product(self, other)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(&i, x)| self.basis.gram(i) * x.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// `Σ_i gram_i · conj(v_i) · w_i`.
pub fn inner_product(v: &Vector, w: &Vector) -> Result<C64> {
    check_same(&v.basis, &w.basis, "inner product")?;
    let (small, large, conj_small) = if v.coeffs.len() <= w.coeffs.len() { (v, w, true) } else { (w, v, false) };
    let mut acc = C64::new(0.0, 0.0);
    for (&i, &x) in &small.coeffs {
        if let Some(&y) = large.coeffs.get(&i) {
            let term = if conj_small { x.conj() * y } else { y.conj() * x };
            acc += term * v.basis.gram(i);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::basis::BasisEntry;

    #[test]
    fn weighted_norm() {
        let b = Basis::new(
            "w",
            vec![BasisEntry::new(vec![0], 1.0, 0, 0), BasisEntry::new(vec![1], 6.0, 0, 0)],
        )
        .unwrap();
        let v = Vector::from_pairs(b.clone(), [(0, C64::new(1.0, 1.0)), (1, C64::new(0.0, 2.0))]).unwrap();
        assert!((v.norm().powi(2) - (2.0 + 24.0)).abs() < 1e-14);
        let z = Vector::zero(b);
        assert_eq!(v.inner(&z).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn mismatched_bases_rejected() {
        let a = Vector::zero(Basis::standard("a", 2));
        let b = Vector::zero(Basis::standard("b", 2));
        assert!(matches!(a.inner(&b), Err(Error::BasisMismatch(_))));
    }
}
