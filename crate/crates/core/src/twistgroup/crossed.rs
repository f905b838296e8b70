use std::sync::Arc;

use nalgebra::DMatrix;

use super::group::{Extension, FiniteAbelianGroup, GroupTable};
use super::scalar::Scalar;
use crate::opcore::{Basis, Grade, SparseOperator};
use crate::{Error, Result, C64};

/// Finite group acting on a finite set `X = {0..size}`. When the group is a
/// central extension, `center` lists the indices of `μ_m` (used for levels).
#[derive(Clone, Debug, PartialEq)]
pub struct GSet {
    table: GroupTable,
    size: usize,
    action: Vec<usize>,
    translation: bool,
    m: u32,
    center: Vec<usize>,
}

impl GSet {
    /// Validates `e·x = x` and `(gh)·x = g·(h·x)`.
    pub fn new(table: GroupTable, size: usize, act: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut action = Vec::with_capacity(table.order * size);
        for g in 0..table.order {
            for x in 0..size {
                let y = act(g, x);
                if y >= size {
                    return Err(Error::IndexOutOfBounds { index: y, dim: size });
                }
                action.push(y);
            }
        }
        let s = GSet {
            table,
            size,
            action,
            translation: false,
            m: 1,
            center: vec![0],
        };
        for x in 0..size {
            if s.act(0, x) != x {
                return Err(Error::Invalid(format!("identity moves point {x}")));
            }
            for g in 0..s.table.order {
                for h in 0..s.table.order {
                    if s.act(s.table.mul(g, h), x) != s.act(g, s.act(h, x)) {
                        return Err(Error::Invalid(format!("action table inconsistent at g={g}, h={h}, x={x}")));
                    }
                }
            }
        }
        Ok(s)
    }

    /// `G` acting on itself by translation.
    pub fn translation(group: &FiniteAbelianGroup) -> Self {
        let table = GroupTable::of_group(group);
        let mut s = GSet::new(table, group.order(), |g, x| group.add(g, x)).expect("translation is an action");
        s.translation = true;
        s
    }

    /// `G^τ` acting on `X` through the quotient map `G^τ → G`.
    pub fn over_extension(ext: &Extension, size: usize, act: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let table = ext.table();
        let q = table.quotient.clone();
        let mut s = GSet::new(table, size, |g, x| act(q[g], x))?;
        s.m = ext.m();
        s.center = (0..ext.m()).map(|j| ext.index(0, j)).collect();
        Ok(s)
    }

    /// `G₁ × G₂` acting on `X₁ × X₂` componentwise; indices `i₁·n₂ + i₂`.
    pub fn product(a: &GSet, b: &GSet) -> Result<Self> {
        if a.m != 1 || b.m != 1 {
            return Err(Error::Invalid("products of extension actions are not supported".into()));
        }
        let table = product_table(&a.table, &b.table);
        let (nb, sb) = (b.table.order, b.size);
        GSet::new(table, a.size * sb, |g, x| {
            a.act(g / nb, x / sb) * sb + b.act(g % nb, x % sb)
        })
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn group_order(&self) -> usize {
        self.table.order
    }

    pub fn root_order(&self) -> u32 {
        self.m
    }

    pub fn is_translation(&self) -> bool {
        self.translation
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.size + x]
    }
}

/// Direct product of two group tables, index `g₁·n₂ + g₂`.
pub fn product_table(a: &GroupTable, b: &GroupTable) -> GroupTable {
    let (na, nb) = (a.order, b.order);
    let n = na * nb;
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            mul.push(a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb));
        }
    }
    let qb = b.quotient.iter().max().map_or(1, |q| q + 1);
    GroupTable {
        order: n,
        mul,
        inv: (0..n).map(|x| a.inv(x / nb) * nb + b.inv(x % nb)).collect(),
        haar_den: a.haar_den * b.haar_den,
        quotient: (0..n).map(|x| a.quotient[x / nb] * qb + b.quotient[x % nb]).collect(),
    }
}

/// Function `a(g, x)` on `G × X`, index `g·|X| + x`.
#[derive(Clone, Debug)]
pub struct CrossedProductElement<S> {
    gset: Arc<GSet>,
    values: Vec<S>,
}

impl<S: Scalar> CrossedProductElement<S> {
    pub fn new(gset: Arc<GSet>, values: Vec<S>) -> Result<Self> {
        let n = gset.group_order() * gset.size();
        if values.len() != n {
            return Err(Error::ShapeMismatch {
                expected: format!("{n} values"),
                got: values.len().to_string(),
            });
        }
        Ok(CrossedProductElement { gset, values })
    }

    pub fn from_fn(gset: Arc<GSet>, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut values = Vec::with_capacity(gset.group_order() * gset.size());
        for g in 0..gset.group_order() {
            for x in 0..gset.size() {
                values.push(f(g, x));
            }
        }
        CrossedProductElement { gset, values }
    }

    /// `δ_e ⊗ 1`, the unit of the crossed product.
    pub fn unit(gset: Arc<GSet>) -> Self {
        let (m, den) = (gset.root_order(), gset.table().haar_den);
        CrossedProductElement::from_fn(gset, |g, _| {
            if g == 0 {
                S::rational(m, den, 1)
            } else {
                S::zero(m)
            }
        })
    }

    pub fn gset(&self) -> &Arc<GSet> {
        &self.gset
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, g: usize, x: usize) -> &S {
        &self.values[g * self.gset.size() + x]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn same(&self, other: &Self) -> bool {
        self.gset == other.gset && self.values.iter().zip(&other.values).all(|(a, b)| a.same(b))
    }

    /// `a*(g,x) = conj a(g⁻¹, g⁻¹x)`.
    pub fn involution(&self) -> Self {
        let s = &self.gset;
        CrossedProductElement::from_fn(s.clone(), |g, x| {
            let gi = s.table().inv(g);
            self.get(gi, s.act(gi, x)).conj()
        })
    }

    /// `f(ζg, x) = ζ^k f(g, x)` for every central `ζ = ω^j`.
    pub fn is_level(&self, k: i64) -> bool {
        let s = &self.gset;
        let m = s.root_order();
        s.center.iter().enumerate().all(|(j, &z)| {
            let phase = S::root(m, k * j as i64);
            (0..s.group_order()).all(|g| {
                let zg = s.table().mul(z, g);
                (0..s.size()).all(|x| self.get(zg, x).same(&(phase.clone() * self.get(g, x).clone())))
            })
        })
    }

    /// `(a₁⊗a₂)((g₁,g₂),(x₁,x₂)) = a₁(g₁,x₁)·a₂(g₂,x₂)` on a product set.
    pub fn tensor(&self, other: &Self, product: Arc<GSet>) -> Result<Self> {
        let (nb, sb) = (other.gset.group_order(), other.gset.size());
        if product.group_order() != self.gset.group_order() * nb || product.size() != self.gset.size() * sb {
            return Err(Error::ContextMismatch("product G-set does not match the factors".into()));
        }
        Ok(CrossedProductElement::from_fn(product, |g, x| {
            self.get(g / nb, x / sb).clone() * other.get(g % nb, x % sb).clone()
        }))
    }
}

/// `(a*b)(g,x) = Σ_h a(h,x)·b(h⁻¹g, h⁻¹x)` (weighted by the table's Haar mass).
pub fn crossed_convolve<S: Scalar>(
    a: &CrossedProductElement<S>,
    b: &CrossedProductElement<S>,
) -> Result<CrossedProductElement<S>> {
    if a.gset != b.gset {
        return Err(Error::ContextMismatch("crossed products over different G-sets".into()));
    }
    let s = &a.gset;
    let t = s.table();
    let m = s.root_order();
    let haar = S::rational(m, 1, t.haar_den);
    Ok(CrossedProductElement::from_fn(s.clone(), |g, x| {
        let mut acc = S::zero(m);
        for h in 0..t.order {
            let ahx = a.get(h, x);
            if ahx.is_zero() {
                continue;
            }
            let hi = t.inv(h);
            acc = acc + ahx.clone() * b.get(t.mul(hi, g), s.act(hi, x)).clone();
        }
        acc * haar.clone()
    }))
}

/// Regular representation on `ℓ²(X)`: `(π(a)ξ)(x) = Σ_h a(h,x) ξ(h⁻¹x)`.
pub fn regular_rep<S: Scalar>(a: &CrossedProductElement<S>) -> DMatrix<C64> {
    let s = &a.gset;
    let t = s.table();
    let n = s.size();
    let w = 1.0 / t.haar_den as f64;
    let mut out = DMatrix::<C64>::zeros(n, n);
    for h in 0..t.order {
        let hi = t.inv(h);
        for x in 0..n {
            out[(x, s.act(hi, x))] += a.get(h, x).to_c64() * w;
        }
    }
    out
}

/// The isomorphism `G ⋉ C(G) → M_{|G|}(ℂ)` for the translation action:
/// `M[x][y] = a(x − y, x)`.
pub fn schatten_map<S: Scalar>(a: &CrossedProductElement<S>) -> Result<SparseOperator> {
    if !a.gset.is_translation() {
        return Err(Error::WrongKind {
            expected: "translation action of G on itself".into(),
            got: format!("action on {} points", a.gset.size()),
        });
    }
    let dense = regular_rep(a);
    let basis = Basis::standard("l2(G)", a.gset.size());
    SparseOperator::from_orthonormal_dense(basis.clone(), basis, Grade::Even, &dense, 0.0)
}

/// Mishchenko projection `[c](g,x) = √(c(x)·c(g⁻¹x))`; requires
/// `Σ_g c(g·x) = 1` (Haar-weighted) for every `x`.
pub fn mishchenko(c: &[f64], gset: Arc<GSet>) -> Result<CrossedProductElement<C64>> {
    if c.len() != gset.size() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} cut-off values", gset.size()),
            got: c.len().to_string(),
        });
    }
    if let Some(x) = c.iter().position(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::Invalid(format!("cut-off negative at point {x}")));
    }
    let t = gset.table();
    for x in 0..gset.size() {
        let sum: f64 = (0..t.order).map(|g| c[gset.act(g, x)]).sum::<f64>() / t.haar_den as f64;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Normalization { point: x, sum });
        }
    }
    let s = gset.clone();
    Ok(CrossedProductElement::from_fn(gset, |g, x| {
        let gi = s.table().inv(g);
        C64::new((c[x] * c[s.act(gi, x)]).sqrt(), 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Lcg64;
    use crate::twistgroup::algebra::random_scalar;
    use crate::twistgroup::group::Cocycle;
    use crate::twistgroup::scalar::Cyclotomic;

    type Cy = Cyclotomic;

    fn z(n: u32) -> Arc<GSet> {
        Arc::new(GSet::translation(&FiniteAbelianGroup::cyclic(n)))
    }

    #[test]
    fn constant_half_is_idempotent() {
        let s = z(2);
        let a = CrossedProductElement::from_fn(s, |_, _| Cy::rational(1, 1, 2));
        let aa = crossed_convolve(&a, &a).unwrap();
        assert!(aa.same(&a));
        let m = schatten_map(&a).unwrap().to_dense();
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!((m[(i, j)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn unit_acts_as_unit() {
        let s = z(3);
        let mut rng = Lcg64::new(1);
        let a = CrossedProductElement::from_fn(s.clone(), |_, _| random_scalar::<Cy>(1, &mut rng));
        let u = CrossedProductElement::unit(s);
        assert!(crossed_convolve(&u, &a).unwrap().same(&a));
        assert!(crossed_convolve(&a, &u).unwrap().same(&a));
    }

    #[test]
    fn associative_and_multiplicative() {
        let s = z(3);
        let mut rng = Lcg64::new(2);
        let mut r = || CrossedProductElement::from_fn(s.clone(), |_, _| random_scalar::<Cy>(1, &mut rng));
        let (a, b, c) = (r(), r(), r());
        let l = crossed_convolve(&crossed_convolve(&a, &b).unwrap(), &c).unwrap();
        let rr = crossed_convolve(&a, &crossed_convolve(&b, &c).unwrap()).unwrap();
        assert!(l.same(&rr));
        let ab = schatten_map(&crossed_convolve(&a, &b).unwrap()).unwrap().to_dense();
        let prod = schatten_map(&a).unwrap().to_dense() * schatten_map(&b).unwrap().to_dense();
        assert!((ab - prod).camax() < 1e-12);
        let adj = schatten_map(&a.involution()).unwrap().to_dense();
        assert!((adj - schatten_map(&a).unwrap().to_dense().adjoint()).camax() < 1e-12);
    }

    #[test]
    fn matrix_unit() {
        // a(g,x) = δ₀(x)·δ₁(g⁻¹x)
        let s = z(2);
        let a = CrossedProductElement::from_fn(s.clone(), |g, x| {
            let y = s.act(s.table().inv(g), x);
            Cy::rational(1, (x == 0 && y == 1) as i64, 1)
        });
        let m = schatten_map(&a).unwrap();
        let d = m.to_dense();
        assert_eq!(d[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn schatten_is_onto() {
        // matrix units E_xy from point masses span all |G|² entries
        let s = z(4);
        let mut rank = 0;
        let mut stack = Vec::new();
        for g in 0..4 {
            for x in 0..4 {
                let a = CrossedProductElement::from_fn(s.clone(), |h, y| C64::new(((h, y) == (g, x)) as u8 as f64, 0.0));
                stack.push(schatten_map(&a).unwrap().to_dense());
            }
        }
        let flat = DMatrix::from_fn(16, 16, |i, j| stack[j][(i / 4, i % 4)]);
        for sv in flat.singular_values().iter() {
            if *sv > 1e-10 {
                rank += 1;
            }
        }
        assert_eq!(rank, 16);
    }

    #[test]
    fn mishchenko_on_z2() {
        let p = mishchenko(&[0.5, 0.5], z(2)).unwrap();
        assert!(p.values().iter().all(|v| (v - C64::new(0.5, 0.0)).norm() < 1e-15));
        assert!(crossed_convolve(&p, &p).unwrap().same(&p));
        assert!(p.involution().same(&p));
    }

    #[test]
    fn mishchenko_rank_counts_sections() {
        // Z2 flips 0↔1 and 2↔3; c is the indicator of {0, 2}
        let t = GroupTable::of_group(&FiniteAbelianGroup::cyclic(2));
        let s = Arc::new(GSet::new(t, 4, |g, x| if g == 0 { x } else { x ^ 1 }).unwrap());
        let p = mishchenko(&[1.0, 0.0, 1.0, 0.0], s).unwrap();
        assert!(crossed_convolve(&p, &p).unwrap().same(&p));
        let m = regular_rep(&p);
        let rank = m.singular_values().iter().filter(|v| **v > 1e-10).count();
        assert_eq!(rank, 2);
        assert!(((m.clone() * m.clone()) - m).camax() < 1e-14);
    }

    #[test]
    fn mishchenko_rejects_bad_cutoff() {
        assert_eq!(
            mishchenko(&[0.5, 0.25], z(2)).unwrap_err(),
            Error::Normalization { point: 0, sum: 0.75 }
        );
    }

    #[test]
    fn mishchenko_of_product_cutoff() {
        let (a, b) = (z(2), z(3));
        let c1 = [0.25, 0.75];
        let c2 = [0.5, 0.2, 0.3];
        let prod = Arc::new(GSet::product(&a, &b).unwrap());
        let c: Vec<f64> = (0..6).map(|i| c1[i / 3] * c2[i % 3]).collect();
        let lhs = mishchenko(&c, prod.clone()).unwrap();
        let rhs = mishchenko(&c1, a).unwrap().tensor(&mishchenko(&c2, b).unwrap(), prod).unwrap();
        assert!(lhs.same(&rhs));
    }

    #[test]
    fn mishchenko_is_level_zero() {
        let g = FiniteAbelianGroup::new(vec![3, 3]).unwrap();
        let ext = Extension::new(Cocycle::heisenberg(g.clone()).unwrap()).unwrap();
        let s = Arc::new(GSet::over_extension(&ext, 9, |h, x| g.add(h, x)).unwrap());
        let p = mishchenko(&[1.0 / 9.0; 9], s.clone()).unwrap();
        assert!(p.is_level(0));
        assert!(!p.is_level(1));
        assert!(crossed_convolve(&p, &p).unwrap().same(&p));
        let mut rng = Lcg64::new(4);
        for l in 0..3i64 {
            let q = CrossedProductElement::from_fn(s.clone(), |_, _| rng.complex());
            // keep the phase-1 slice and extend at level l
            let q = CrossedProductElement::from_fn(s.clone(), |h, x| {
                let (base, i) = ext.split(h);
                C64::root(3, l * i as i64) * *q.get(ext.index(base, 0), x)
            });
            assert!(q.is_level(l));
            let pq = crossed_convolve(&p, &q).unwrap();
            assert_eq!(pq.is_zero(), l != 0, "level {l}");
        }
    }
}
