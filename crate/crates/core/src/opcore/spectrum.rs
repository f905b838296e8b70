use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use super::basis::Basis;
use super::operator::SparseOperator;
use super::vector::Vector;
use crate::{Error, Result, C64, DEFAULT_TOL};

/// Ascending real eigenvalues, repeated according to multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| a.total_cmp(b));
        Spectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Distinct eigenvalues (cluster means) with multiplicities; values
    /// closer than `tol·max(1,|λ|)` are merged.
    pub fn multiplicities(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize, f64)> = Vec::new();
        for &v in &self.values {
            match out.last_mut() {
                Some(last) if (v - last.2).abs() <= tol * v.abs().max(1.0) => {
                    last.0 += v;
                    last.1 += 1;
                    last.2 = v;
                }
                _ => out.push((v, 1, v)),
            }
        }
        out.into_iter().map(|(s, n, _)| (s / n as f64, n)).collect()
    }

    /// Largest elementwise distance between two spectra of equal length.
    pub fn distance(&self, other: &Spectrum) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} eigenvalues", self.len()),
                got: other.len().to_string(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Eigen-decomposition of one connected block, in orthonormal coordinates.
#[derive(Clone, Debug)]
pub struct EigenBlock {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of the sparsity graph, each sorted, ordered by
/// smallest index.
fn components(a: &SparseOperator) -> Vec<Vec<usize>> {
    let n = a.domain().dim();
    let mut parent: Vec<usize> = (0..n).collect();
    for &(r, c, _) in a.entries() {
        let (x, y) = (find(&mut parent, r), find(&mut parent, c));
        if x != y {
            parent[x.max(y)] = x.min(y);
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let root = find(&mut parent, i);
        groups[root].push(i);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

fn check_hermitian(a: &SparseOperator, rel_tol: f64) -> Result<()> {
    if !a.is_square() {
        return Err(Error::BasisMismatch("spectrum needs domain = codomain".into()));
    }
    let asym = a.asymmetry()?;
    if asym > rel_tol * a.max_abs_orthonormal().max(1.0) {
        return Err(Error::NotSelfAdjoint { asymmetry: asym });
    }
    Ok(())
}

/// Block-diagonal eigen-decomposition of a Gram-self-adjoint operator.
pub fn eigen_blocks(a: &SparseOperator, rel_tol: f64) -> Result<Vec<EigenBlock>> {
    check_hermitian(a, rel_tol)?;
    let basis = a.domain();
    let comps = components(a);
    let mut pos = vec![0usize; basis.dim()];
    for comp in &comps {
        for (k, &i) in comp.iter().enumerate() {
            pos[i] = k;
        }
    }
    let mut comp_of = vec![0usize; basis.dim()];
    for (ci, comp) in comps.iter().enumerate() {
        for &i in comp {
            comp_of[i] = ci;
        }
    }
    let mut mats: Vec<DMatrix<C64>> = comps
        .iter()
        .map(|c| DMatrix::from_element(c.len(), c.len(), C64::new(0.0, 0.0)))
        .collect();
    for &(r, c, v) in a.entries() {
        let w = v * (basis.gram(r) / basis.gram(c)).sqrt();
        mats[comp_of[r]][(pos[r], pos[c])] += w * 0.5;
        mats[comp_of[r]][(pos[c], pos[r])] += w.conj() * 0.5;
    }
    let mut out = Vec::with_capacity(comps.len());
    for (comp, m) in comps.into_iter().zip(mats) {
        if comp.len() == 1 {
            out.push(EigenBlock {
                indices: comp,
                values: vec![m[(0, 0)].re],
                vectors: DMatrix::from_element(1, 1, C64::new(1.0, 0.0)),
            });
            continue;
        }
        let eig = SymmetricEigen::new(m);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(comp.len(), comp.len(), |r, c| eig.eigenvectors[(r, order[c])]);
        out.push(EigenBlock {
            indices: comp,
            values,
            vectors,
        });
    }
    Ok(out)
}

pub fn spectrum(a: &SparseOperator) -> Result<Spectrum> {
    spectrum_with_tol(a, DEFAULT_TOL)
}

pub fn spectrum_with_tol(a: &SparseOperator, rel_tol: f64) -> Result<Spectrum> {
    let blocks = eigen_blocks(a, rel_tol)?;
    Ok(Spectrum::from_values(blocks.into_iter().flat_map(|b| b.values).collect()))
}

/// Gram-orthonormal basis of the eigenspace `|λ| ≤ 1e-9·max|λ|`.
pub fn kernel(a: &SparseOperator) -> Result<Vec<Vector>> {
    kernel_with_tol(a, 1e-9)
}

pub fn kernel_with_tol(a: &SparseOperator, rel: f64) -> Result<Vec<Vector>> {
    let blocks = eigen_blocks(a, DEFAULT_TOL)?;
    let scale = blocks
        .iter()
        .flat_map(|b| b.values.iter())
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    let thr = rel * scale;
    let basis = a.domain().clone();
    let mut out = Vec::new();
    for b in &blocks {
        for (k, &lam) in b.values.iter().enumerate() {
            if lam.abs() <= thr {
                out.push(block_vector(&basis, b, k));
            }
        }
    }
    Ok(out)
}

fn block_vector(basis: &Arc<Basis>, b: &EigenBlock, k: usize) -> Vector {
    let col = b.vectors.column(k);
    let mut best = 0;
    for i in 0..col.len() {
        if col[i].norm() > col[best].norm() + 1e-12 {
            best = i;
        }
    }
    let phase = if col[best].norm() > 0.0 { col[best].conj() / col[best].norm() } else { C64::new(1.0, 0.0) };
    let pairs: Vec<_> = b
        .indices
        .iter()
        .enumerate()
        .filter(|(r, _)| col[*r].norm() > 0.0)
        .map(|(r, &i)| (i, col[r] * phase / basis.gram(i).sqrt()))
        .collect();
    Vector::from_pairs(basis.clone(), pairs).expect("indices in range")
}

/// Spectral calculus `f(A)` for Gram-self-adjoint `A`.
pub fn spectral_apply(a: &SparseOperator, f: impl Fn(f64) -> f64, drop_below: f64) -> Result<SparseOperator> {
    let blocks = eigen_blocks(a, DEFAULT_TOL)?;
    let basis = a.domain().clone();
    let mut trip = Vec::new();
    for b in &blocks {
        let fv: Vec<f64> = b.values.iter().map(|&v| f(v)).collect();
        let n = b.indices.len();
        for r in 0..n {
            for c in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += b.vectors[(r, k)] * b.vectors[(c, k)].conj() * fv[k];
                }
                if acc.norm() > drop_below {
                    let (i, j) = (b.indices[r], b.indices[c]);
                    trip.push((i, j, acc * (basis.gram(j) / basis.gram(i)).sqrt()));
                }
            }
        }
    }
    SparseOperator::from_triplets(basis.clone(), basis, a.grade(), trip)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::basis::BasisEntry;
    use crate::opcore::operator::Grade;

    fn two_blocks() -> SparseOperator {
        let b = Basis::new(
            "w",
            (0..4).map(|i| BasisEntry::new(vec![i], (i + 1) as f64, 0, 0)).collect(),
        )
        .unwrap();
        // Hermitian in orthonormal coordinates: [[1, 2],[2, 1]] on {0,2}, 3 on {1}, 0 on {3}.
        let t = 2.0 * (1.0f64 / 3.0).sqrt();
        SparseOperator::from_triplets(
            b.clone(),
            b,
            Grade::Even,
            vec![
                (0, 0, C64::new(1.0, 0.0)),
                (2, 2, C64::new(1.0, 0.0)),
                (0, 2, C64::new(2.0 * 3.0f64.sqrt(), 0.0)),
                (2, 0, C64::new(t, 0.0)),
                (1, 1, C64::new(3.0, 0.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn block_spectrum() {
        let s = spectrum(&two_blocks()).unwrap();
        let want = [-1.0, 0.0, 3.0, 3.0];
        for (a, b) in s.values().iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{:?}", s.values());
        }
        let m = s.multiplicities(1e-9);
        let counts: Vec<usize> = m.iter().map(|p| p.1).collect();
        assert_eq!(counts, vec![1, 1, 2]);
        assert!((m[2].0 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let b = Basis::standard("s", 2);
        let a = SparseOperator::from_triplets(b.clone(), b, Grade::Even, vec![(0, 1, C64::new(1.0, 0.0))]).unwrap();
        assert!(matches!(spectrum(&a), Err(Error::NotSelfAdjoint { .. })));
    }

    #[test]
    fn kernel_is_normalized() {
        let k = kernel(&two_blocks()).unwrap();
        assert_eq!(k.len(), 1);
        assert!((k[0].norm() - 1.0).abs() < 1e-12);
        assert!(kernel(&SparseOperator::identity(Basis::standard("s", 3))).unwrap().is_empty());
    }

    #[test]
    fn spectral_square_matches_product() {
        let a = two_blocks();
        let sq = spectral_apply(&a, |x| x * x, 0.0).unwrap();
        let direct = a.compose(&a).unwrap();
        assert!(sq.max_abs_diff(&direct).unwrap() < 1e-12);
    }
}
