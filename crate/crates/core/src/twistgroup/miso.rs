use std::sync::Arc;

use nalgebra::DMatrix;

use super::algebra::GroupAlgebraElement;
use super::crossed::CrossedProductElement;
use super::group::Extension;
use super::scalar::Scalar;
use crate::{Error, Result, C64};

/// Function `F(x, g)` on `G^τ × G^τ`, index `x·|G^τ| + g`.
#[derive(Clone, Debug)]
pub struct BimoduleElement<S> {
    ext: Arc<Extension>,
    values: Vec<S>,
}

impl<S: Scalar> BimoduleElement<S> {
    pub fn ext(&self) -> &Arc<Extension> {
        &self.ext
    }

    pub fn get(&self, x: usize, g: usize) -> &S {
        &self.values[x * self.ext.order() + g]
    }

    pub fn same(&self, other: &Self) -> bool {
        self.ext == other.ext && self.values.iter().zip(&other.values).all(|(a, b)| a.same(b))
    }

    /// `F(ζx, g) = ζ^a F(x,g)` and `F(x, ζg) = ζ^b F(x,g)` for all `ζ ∈ μ_m`.
    pub fn has_levels(&self, a: i64, b: i64) -> bool {
        let e = &self.ext;
        let m = e.m();
        let z = e.index(0, 1 % m);
        (0..e.order()).all(|x| {
            (0..e.order()).all(|g| {
                let f = self.get(x, g).clone();
                self.get(e.mul(z, x), g).same(&(S::root(m, a) * f.clone()))
                    && self.get(x, e.mul(z, g)).same(&(S::root(m, b) * f))
            })
        })
    }
}

/// `m(φ₁⊗φ₂)(x,g) = φ₁(x̄)·φ₂(x⁻¹g)`, with `x̄` the image of `x` in `G`.
pub fn m_iso<S: Scalar>(phi1: &[S], phi2: &GroupAlgebraElement<S>) -> Result<BimoduleElement<S>> {
    let ext = phi2.ext().clone();
    if phi2.level() != Some(1 % ext.m() as i64) {
        return Err(Error::WrongLevel { expected: 1, got: phi2.level() });
    }
    if phi1.len() != ext.group().order() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} values on G", ext.group().order()),
            got: phi1.len().to_string(),
        });
    }
    let n = ext.order();
    let mut values = Vec::with_capacity(n * n);
    for x in 0..n {
        let (base, _) = ext.split(x);
        let xi = ext.inv(x);
        for g in 0..n {
            values.push(phi1[base].clone() * phi2.get(ext.mul(xi, g)).clone());
        }
    }
    Ok(BimoduleElement { ext, values })
}

/// `⟨F,H⟩(g) = (1/m) Σ_h (1/m) Σ_x conj F(x,h)·H(x,hg)`.
pub fn bimodule_inner<S: Scalar>(f: &BimoduleElement<S>, h: &BimoduleElement<S>) -> Result<GroupAlgebraElement<S>> {
    if f.ext != h.ext {
        return Err(Error::ContextMismatch("bimodule elements over different extensions".into()));
    }
    let e = f.ext.clone();
    let m = e.m();
    let w = S::rational(m, 1, (m as i64) * (m as i64));
    let values = (0..e.order())
        .map(|g| {
            let mut acc = S::zero(m);
            for k in 0..e.order() {
                let kg = e.mul(k, g);
                for x in 0..e.order() {
                    acc = acc + f.get(x, k).conj() * h.get(x, kg).clone();
                }
            }
            acc * w.clone()
        })
        .collect();
    GroupAlgebraElement::new(e, values)
}

/// `(F*b)(x,g) = (1/m) Σ_h F(x,h)·b(h⁻¹g)`.
pub fn bimodule_right<S: Scalar>(f: &BimoduleElement<S>, b: &GroupAlgebraElement<S>) -> Result<BimoduleElement<S>> {
    if &f.ext != b.ext() {
        return Err(Error::ContextMismatch("right factor over a different extension".into()));
    }
    let e = f.ext.clone();
    let m = e.m();
    let haar = S::rational(m, 1, m as i64);
    let n = e.order();
    let mut values = Vec::with_capacity(n * n);
    for x in 0..n {
        for g in 0..n {
            let mut acc = S::zero(m);
            for h in 0..n {
                acc = acc + f.get(x, h).clone() * b.get(e.mul(e.inv(h), g)).clone();
            }
            values.push(acc * haar.clone());
        }
    }
    Ok(BimoduleElement { ext: e, values })
}

/// `(a*F)(x,g) = Σ_{h∈G} a(h, x̄)·F(s(h)⁻¹x, s(h)⁻¹g)`, `a ∈ G ⋉ C(G)` and
/// `s(h) = (h, 1)`; independent of the section because of the opposite levels.
pub fn bimodule_left<S: Scalar>(a: &CrossedProductElement<S>, f: &BimoduleElement<S>) -> Result<BimoduleElement<S>> {
    let e = f.ext.clone();
    let g_ord = e.group().order();
    if !a.gset().is_translation() || a.gset().size() != g_ord {
        return Err(Error::ContextMismatch("left factor must be in G ⋉ C(G)".into()));
    }
    let m = e.m();
    let n = e.order();
    let mut values = Vec::with_capacity(n * n);
    for x in 0..n {
        let (xb, _) = e.split(x);
        for g in 0..n {
            let mut acc = S::zero(m);
            for h in 0..g_ord {
                let c = a.get(h, xb);
                if c.is_zero() {
                    continue;
                }
                let si = e.inv(e.index(h, 0));
                acc = acc + c.clone() * f.get(e.mul(si, x), e.mul(si, g)).clone();
            }
            values.push(acc);
        }
    }
    Ok(BimoduleElement { ext: e, values })
}

/// `Ψ(A) = Aᵀ` as an operator on the dual space; `Ψ(v⊗f) = f⊗v`.
pub fn transpose_iso(a: &DMatrix<C64>) -> DMatrix<C64> {
    a.transpose()
}

/// Rank-one `v⊗f : w ↦ f(w)·v`.
pub fn rank_one(v: &[C64], f: &[C64]) -> DMatrix<C64> {
    DMatrix::from_fn(v.len(), f.len(), |i, j| v[i] * f[j])
}

/// Largest residuals of the three identities of `m` over seeded trials.
#[derive(Clone, Debug, PartialEq)]
pub struct MisoReport {
    pub trials: usize,
    /// `⟨m(φ₁⊗φ₂), m(ψ₁⊗ψ₂)⟩ = ⟨φ₁,ψ₁⟩ φ₂*ψ₂`
    pub isometry: f64,
    /// `m(φ₁⊗φ₂b) = m(φ₁⊗φ₂)b`
    pub right: f64,
    /// `a·m(φ₁⊗φ₂) = m(aφ₁⊗φ₂)` for `a` in the translation crossed product
    pub left: f64,
}

fn diff<S: Scalar>(a: impl Iterator<Item = S>, b: impl Iterator<Item = S>) -> f64 {
    a.zip(b).map(|(x, y)| (x.to_c64() - y.to_c64()).norm()).fold(0.0, f64::max)
}

fn bimodule_diff(f: &BimoduleElement<C64>, h: &BimoduleElement<C64>) -> f64 {
    diff(f.values.iter().copied(), h.values.iter().copied())
}

pub fn miso_trials(ext: Arc<Extension>, trials: usize, seed: u64) -> Result<MisoReport> {
    use super::algebra::convolve;
    use super::crossed::GSet;
    use crate::rng::Lcg64;
    let mut rng = Lcg64::new(seed);
    let gset = Arc::new(GSet::translation(ext.group()));
    let ng = ext.group().order();
    let level = 1 % ext.m() as i64;
    let mut r = MisoReport { trials, isometry: 0.0, right: 0.0, left: 0.0 };
    for _ in 0..trials {
        let vec_g = |rng: &mut Lcg64| -> Vec<C64> { (0..ng).map(|_| rng.complex()).collect() };
        let (p1, q1) = (vec_g(&mut rng), vec_g(&mut rng));
        let p2 = GroupAlgebraElement::<C64>::random(ext.clone(), level, &mut rng);
        let q2 = GroupAlgebraElement::<C64>::random(ext.clone(), level, &mut rng);
        let b = GroupAlgebraElement::<C64>::random(ext.clone(), level, &mut rng);
        let a = CrossedProductElement::from_fn(gset.clone(), |_, _| rng.complex());
        let fp = m_iso(&p1, &p2)?;
        let lhs = bimodule_inner(&fp, &m_iso(&q1, &q2)?)?;
        let scalar: C64 = p1.iter().zip(&q1).map(|(x, y)| x.conj() * y).sum();
        let conv = convolve(&p2.involution(), &q2)?;
        r.isometry = r
            .isometry
            .max(diff(lhs.values().iter().copied(), conv.values().iter().map(|v| scalar * v)));
        let got = bimodule_right(&fp, &b)?;
        r.right = r.right.max(bimodule_diff(&m_iso(&p1, &convolve(&p2, &b)?)?, &got));
        let ap1: Vec<C64> = (0..ng)
            .map(|y| (0..ng).map(|h| a.get(h, y) * p1[gset.act(gset.table().inv(h), y)]).sum())
            .collect();
        r.left = r.left.max(bimodule_diff(&bimodule_left(&a, &fp)?, &m_iso(&ap1, &p2)?));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Lcg64;
    use crate::twistgroup::algebra::{convolve, random_scalar};
    use crate::twistgroup::crossed::{regular_rep, GSet};
    use crate::twistgroup::group::{Cocycle, FiniteAbelianGroup};
    use crate::twistgroup::scalar::Cyclotomic;

    type Cy = Cyclotomic;

    fn z3_mu3() -> Arc<Extension> {
        let g = FiniteAbelianGroup::cyclic(3);
        let tau = Cocycle::bilinear(g, 3, &[vec![1]]).unwrap();
        Arc::new(Extension::new(tau).unwrap())
    }

    #[test]
    fn seeded_trials() {
        let r = miso_trials(z3_mu3(), 20, 5).unwrap();
        assert!(r.isometry < 1e-10 && r.right < 1e-10 && r.left < 1e-10, "{r:?}");
    }

    #[test]
    fn point_masses_on_z2() {
        let ext = Arc::new(Extension::new(Cocycle::trivial(FiniteAbelianGroup::cyclic(2), 1)).unwrap());
        let one = Cy::rational(1, 1, 1);
        let zero = Cy::rational(1, 0, 1);
        let phi2 = GroupAlgebraElement::from_base(ext.clone(), &[one.clone(), zero.clone()], 1).unwrap();
        let f = m_iso(&[one.clone(), zero], &phi2).unwrap();
        for x in 0..2 {
            for g in 0..2 {
                let want = (x == 0 && g == 0) as i64;
                assert_eq!(f.get(x, g), &Cy::rational(1, want, 1));
            }
        }
    }

    #[test]
    fn level_tags() {
        let ext = z3_mu3();
        let mut rng = Lcg64::new(9);
        let phi1: Vec<Cy> = (0..3).map(|_| random_scalar(3, &mut rng)).collect();
        let phi2 = GroupAlgebraElement::random(ext.clone(), 1, &mut rng);
        let f = m_iso(&phi1, &phi2).unwrap();
        assert!(f.has_levels(-1, 1));
        let wrong = GroupAlgebraElement::<Cy>::random(ext, 2, &mut rng);
        assert!(matches!(m_iso(&phi1, &wrong), Err(Error::WrongLevel { .. })));
    }

    #[test]
    fn inner_product_factorizes() {
        let ext = z3_mu3();
        let mut rng = Lcg64::new(21);
        let v = |rng: &mut Lcg64| -> Vec<Cy> { (0..3).map(|_| random_scalar(3, rng)).collect() };
        let (p1, q1) = (v(&mut rng), v(&mut rng));
        let p2 = GroupAlgebraElement::random(ext.clone(), 1, &mut rng);
        let q2 = GroupAlgebraElement::random(ext.clone(), 1, &mut rng);
        let lhs = bimodule_inner(&m_iso(&p1, &p2).unwrap(), &m_iso(&q1, &q2).unwrap()).unwrap();
        let scalar = p1.iter().zip(&q1).fold(Cy::zero(3), |acc, (a, b)| acc + a.conj() * b.clone());
        let conv = convolve(&p2.involution(), &q2).unwrap();
        for g in 0..ext.order() {
            assert_eq!(lhs.get(g), &(scalar.clone() * conv.get(g).clone()));
        }
    }

    #[test]
    fn right_module_map() {
        let ext = z3_mu3();
        let mut rng = Lcg64::new(33);
        let p1: Vec<Cy> = (0..3).map(|_| random_scalar(3, &mut rng)).collect();
        let p2 = GroupAlgebraElement::random(ext.clone(), 1, &mut rng);
        let b = GroupAlgebraElement::random(ext, 1, &mut rng);
        let lhs = m_iso(&p1, &convolve(&p2, &b).unwrap()).unwrap();
        let rhs = bimodule_right(&m_iso(&p1, &p2).unwrap(), &b).unwrap();
        assert!(lhs.same(&rhs));
    }

    #[test]
    fn left_module_map() {
        let ext = z3_mu3();
        let gset = Arc::new(GSet::translation(ext.group()));
        let mut rng = Lcg64::new(44);
        let p1: Vec<Cy> = (0..3).map(|_| random_scalar(3, &mut rng)).collect();
        let p2 = GroupAlgebraElement::random(ext.clone(), 1, &mut rng);
        let a = CrossedProductElement::from_fn(gset.clone(), |_, _| random_scalar::<Cy>(3, &mut rng));
        // (aφ₁)(y) = Σ_h a(h,y) φ₁(h⁻¹y)
        let ap1: Vec<Cy> = (0..3)
            .map(|y| {
                (0..3).fold(Cy::zero(3), |acc, h| {
                    acc + a.get(h, y).clone() * p1[gset.act(gset.table().inv(h), y)].clone()
                })
            })
            .collect();
        let lhs = bimodule_left(&a, &m_iso(&p1, &p2).unwrap()).unwrap();
        let rhs = m_iso(&ap1, &p2).unwrap();
        assert!(lhs.same(&rhs));
        // same vector through the regular representation
        let dense = regular_rep(&a);
        for y in 0..3 {
            let s: C64 = (0..3).map(|x| dense[(y, x)] * p1[x].to_c64()).sum();
            assert!((s - ap1[y].to_c64()).norm() < 1e-12);
        }
    }

    #[test]
    fn isometric_on_spanning_set() {
        let ext = z3_mu3();
        let one = Cy::one(3);
        for i in 0..3 {
            for g in 0..3 {
                let mut b = vec![Cy::zero(3); 3];
                b[g] = one.clone();
                let p2 = GroupAlgebraElement::from_base(ext.clone(), &b, 1).unwrap();
                let mut p1 = vec![Cy::zero(3); 3];
                p1[i] = one.clone();
                let f = m_iso(&p1, &p2).unwrap();
                let lhs = bimodule_inner(&f, &f).unwrap();
                let rhs = convolve(&p2.involution(), &p2).unwrap();
                assert!(lhs.same(&rhs));
            }
        }
    }

    #[test]
    fn transpose_properties() {
        let mut rng = Lcg64::new(5);
        let v: Vec<C64> = (0..3).map(|_| rng.complex()).collect();
        let f: Vec<C64> = (0..3).map(|_| rng.complex()).collect();
        assert!((transpose_iso(&rank_one(&v, &f)) - rank_one(&f, &v)).camax() < 1e-15);
        let id = DMatrix::<C64>::identity(3, 3);
        assert_eq!(transpose_iso(&id), id);
        let a = DMatrix::from_fn(3, 3, |_, _| rng.complex());
        let b = DMatrix::from_fn(3, 3, |_, _| rng.complex());
        let lhs = transpose_iso(&(&a * &b));
        let rhs = transpose_iso(&b) * transpose_iso(&a);
        assert!((lhs - rhs).camax() < 1e-14);
    }
}
