use std::sync::Arc;

use super::hermite::{mode_basis, ModeFunction};
use crate::opcore::{Basis, Grade, ProductBasis, ProductTruncation, SparseOperator};
use crate::{Error, Result, C64};

/// `n` Hermite modes, each cut at degree `cap`.
pub fn prefix_basis(n: usize, cap: u32) -> Result<ProductBasis> {
    let factors: Vec<Arc<Basis>> = (0..n.max(1)).map(|_| mode_basis(cap)).collect();
    ProductBasis::new(factors, ProductTruncation::Full)
}

/// `k ↦ k ⊗ P_Ξ` from the `n`-mode prefix to the `(n+1)`-mode prefix, with
/// `P_Ξ` the projection onto the (renormalized) `xi`.
pub fn embed_crossed(
    k: &SparseOperator,
    source: &ProductBasis,
    xi: &ModeFunction,
    target: &ProductBasis,
) -> Result<SparseOperator> {
    let n = source.factors().len();
    if target.factors().len() != n + 1 || !k.domain().same_as(source.basis()) || !k.codomain().same_as(source.basis()) {
        return Err(Error::ContextMismatch("embedding needs k on the source prefix and one more target mode".into()));
    }
    let last = target.factor(n);
    let xi = xi.renormalized();
    let legs: Vec<(usize, C64)> = (0..last.dim())
        .map(|i| {
            let l = last.label(i);
            (i, xi.coefficient(l[0], l[1]))
        })
        .filter(|(_, c)| *c != C64::default())
        .collect();
    let mut trip = Vec::new();
    for &(r, c, v) in k.entries() {
        for &(a, xa) in &legs {
            let mut tr = source.tuple(r).to_vec();
            tr.push(a);
            let Some(ri) = target.index_of_tuple(&tr) else { continue };
            for &(b, xb) in &legs {
                let mut tc = source.tuple(c).to_vec();
                tc.push(b);
                if let Some(ci) = target.index_of_tuple(&tc) {
                    trip.push((ri, ci, v * xa * xb.conj()));
                }
            }
        }
    }
    SparseOperator::from_triplets(target.basis().clone(), target.basis().clone(), Grade::Even, trip)
}

/// Trace in orthonormal coordinates.
pub fn trace(k: &SparseOperator) -> C64 {
    k.entries().iter().filter(|e| e.0 == e.1).map(|e| e.2).sum()
}
