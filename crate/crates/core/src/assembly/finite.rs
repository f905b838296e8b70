//! Finite-group shadow of the assembly: `G` finite abelian, `A_τ` the
//! level-1 part of the twisted group algebra, `S` the exterior algebra on
//! `rank(G)` generators.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::rng::Lcg64;
use crate::twistgroup::{
    convolve, crossed_convolve, mishchenko, schatten_map, Cocycle, CrossedProductElement, Cyclotomic,
    Extension, GSet, GroupAlgebraElement, Scalar,
};
use crate::{Result, C64};

/// `∂̃ = D_G ⊗ id + id ⊗ ∂_L` on `ℓ²(G) ⊗ S ⊗ A_τ`, index `(x·|S| + s)·|A| + a`.
#[derive(Debug)]
pub struct FiniteCycle {
    pub ext: Arc<Extension>,
    /// `∂_L = Σ_i (w_i ⊗ L_i + w_i* ⊗ L_i*)`, `L_i` left convolution by `δ_{s(e_i)}`.
    pub dirac_l: DMatrix<C64>,
    /// `D_G = Σ_i ((T_{e_i} − 1) ⊗ w_i + h.c.)` on `ℓ²(G) ⊗ S`.
    pub d_g: DMatrix<C64>,
    pub operator: DMatrix<C64>,
}

fn eye(n: usize) -> DMatrix<C64> {
    DMatrix::identity(n, n)
}

/// Jordan–Wigner wedge operators on `r` modes.
fn wedges(r: usize) -> Vec<DMatrix<C64>> {
    let z = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]));
    let mut up = DMatrix::zeros(2, 2);
    up[(1, 0)] = C64::new(1.0, 0.0);
    (0..r)
        .map(|i| {
            let mut m = DMatrix::identity(1, 1);
            for j in 0..r {
                let f = if j < i {
                    z.clone()
                } else if j == i {
                    up.clone()
                } else {
                    eye(2)
                };
                m = m.kronecker(&f);
            }
            m
        })
        .collect()
}

/// Left convolution by the level-1 lift of `δ_g` on level-1 functions, in
/// base coordinates.
fn left_mult(ext: &Arc<Extension>, g: usize) -> Result<DMatrix<C64>> {
    let n = ext.group().order();
    let unit = |i: usize| -> Vec<C64> { (0..n).map(|j| C64::new((i == j) as u8 as f64, 0.0)).collect() };
    let u = GroupAlgebraElement::from_base(ext.clone(), &unit(g), 1)?;
    let mut m = DMatrix::zeros(n, n);
    for h in 0..n {
        let f = GroupAlgebraElement::from_base(ext.clone(), &unit(h), 1)?;
        let p = convolve(&u, &f)?;
        for y in 0..n {
            m[(y, h)] = *p.get(ext.index(y, 0));
        }
    }
    Ok(m)
}

pub fn finite_j_cycle(tau: &Cocycle) -> Result<FiniteCycle> {
    let ext = Arc::new(Extension::new(tau.clone())?);
    let group = ext.group().clone();
    let (n, r) = (group.order(), group.rank());
    let w = wedges(r);
    let ds = 1usize << r;
    let mut dirac_l = DMatrix::zeros(ds * n, ds * n);
    let mut d_g = DMatrix::zeros(n * ds, n * ds);
    for i in 0..r {
        let mut e = vec![0u32; r];
        e[i] = 1;
        let g = group.index(&e);
        let l = left_mult(&ext, g)?;
        dirac_l += w[i].kronecker(&l) + w[i].adjoint().kronecker(&l.adjoint());
        let mut t = DMatrix::zeros(n, n);
        for x in 0..n {
            t[(group.add(g, x), x)] = C64::new(1.0, 0.0);
        }
        let x = t - eye(n);
        d_g += x.kronecker(&w[i]) + x.adjoint().kronecker(&w[i].adjoint());
    }
    let operator = d_g.kronecker(&eye(n)) + eye(n).kronecker(&dirac_l);
    Ok(FiniteCycle {
        ext,
        dirac_l,
        d_g,
        operator,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteAssembly {
    /// `max |schatten([c]) − |√c⟩⟨√c||`
    pub projection: f64,
    /// `max |V*∂̃V − ∂_L|`
    pub entrywise: f64,
    /// sorted-eigenvalue distance between `V*∂̃V` and `∂_L`
    pub spectra: f64,
    pub module_dim: usize,
    pub asymmetry: f64,
}

fn sorted_eigs(m: &DMatrix<C64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut v: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().cloned().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Compress by `[c] ⊗ id ⊗ id` with `c ≡ 1/|G|`.
pub fn finite_assemble(cycle: &FiniteCycle) -> Result<FiniteAssembly> {
    let group = cycle.ext.group().clone();
    let n = group.order();
    let gset = Arc::new(GSet::translation(&group));
    let c = vec![1.0 / n as f64; n];
    let p = schatten_map(&mishchenko(&c, gset)?)?.to_dense();
    let root = DMatrix::from_element(n, 1, C64::new((1.0 / n as f64).sqrt(), 0.0));
    let projection = (&p - &root * root.adjoint()).camax();
    let inner = cycle.dirac_l.nrows();
    let v = root.kronecker(&eye(inner));
    let compressed = v.adjoint() * &cycle.operator * &v;
    let entrywise = (&compressed - &cycle.dirac_l).camax();
    let spectra = sorted_eigs(&compressed)
        .iter()
        .zip(sorted_eigs(&cycle.dirac_l))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(FiniteAssembly {
        projection,
        entrywise,
        spectra,
        module_dim: compressed.nrows(),
        asymmetry: (&cycle.operator - cycle.operator.adjoint()).camax(),
    })
}

/// `[c] * a_k * [c]` for a seeded level-`k` element of `G^τ ⋉ C(G)`, exact.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelRow {
    pub k: i64,
    pub zero: bool,
}

pub fn level_pattern(tau: &Cocycle, seed: u64) -> Result<Vec<LevelRow>> {
    let ext = Extension::new(tau.clone())?;
    let group = ext.group().clone();
    let n = group.order();
    let m = ext.m();
    let gset = Arc::new(GSet::over_extension(&ext, n, |g, x| group.add(g, x))?);
    let c = vec![1.0 / n as f64; n];
    let numeric = mishchenko(&c, gset.clone())?;
    // c is constant, so √(c(x)c(g⁻¹x)) = 1/|G| exactly
    let proj = CrossedProductElement::from_fn(gset.clone(), |_, _| Cyclotomic::rational(m, 1, n as i64));
    debug_assert!(numeric.values().iter().zip(proj.values()).all(|(a, b)| (a - b.to_c64()).norm() < 1e-15));
    let mut rng = Lcg64::new(seed);
    let mut rows = Vec::new();
    for k in 0..m as i64 {
        // positive legs, so that the level-0 compression ⟨√c, a √c⟩ cannot cancel
        let base: Vec<Cyclotomic> = (0..n * n)
            .map(|_| Cyclotomic::rational(m, 1 + rng.below(5) as i64, 1))
            .collect();
        let a = CrossedProductElement::from_fn(gset.clone(), |g, x| {
            let (q, i) = ext.split(g);
            Cyclotomic::root(m, k * i as i64) * base[q * n + x].clone()
        });
        debug_assert!(a.is_level(k));
        let out = crossed_convolve(&crossed_convolve(&proj, &a)?, &proj)?;
        rows.push(LevelRow { k, zero: out.is_zero() });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twistgroup::FiniteAbelianGroup;

    fn models() -> Vec<Cocycle> {
        vec![
            Cocycle::trivial(FiniteAbelianGroup::cyclic(2), 2),
            Cocycle::bilinear(FiniteAbelianGroup::cyclic(3), 3, &[vec![1]]).unwrap(),
            Cocycle::heisenberg(FiniteAbelianGroup::new(vec![4, 2]).unwrap()).unwrap(),
            Cocycle::heisenberg(FiniteAbelianGroup::new(vec![3, 3]).unwrap()).unwrap(),
        ]
    }

    #[test]
    fn compression_reproduces_left_dirac() {
        for tau in models() {
            let c = finite_j_cycle(&tau).unwrap();
            let a = finite_assemble(&c).unwrap();
            assert!(a.asymmetry < 1e-13);
            assert!(a.projection < 1e-14);
            assert!(a.entrywise < 1e-13 && a.spectra < 1e-10, "{a:?}");
            let n = tau.group().order();
            assert_eq!(a.module_dim, (1 << tau.group().rank()) * n);
        }
    }

    #[test]
    fn left_dirac_square_is_not_scalar_but_nonnegative() {
        let c = finite_j_cycle(&models()[3]).unwrap();
        let eig = sorted_eigs(&(&c.dirac_l * &c.dirac_l));
        assert!(eig[0] > -1e-12);
    }

    #[test]
    fn only_level_zero_survives() {
        for tau in models() {
            let rows = level_pattern(&tau, 11).unwrap();
            for r in rows {
                assert_eq!(r.zero, r.k != 0, "k = {}", r.k);
            }
        }
    }
}
