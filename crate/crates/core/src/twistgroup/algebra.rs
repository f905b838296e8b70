use std::sync::Arc;

use super::group::{Extension, GroupTable};
use super::scalar::Scalar;
use crate::rng::Lcg64;
use crate::{Error, Result};

/// Function on a finite central extension `G^τ`, optionally tagged with a
/// level `k` (`f(ζg) = ζ^k f(g)` for `ζ ∈ μ_m`, checked on construction).
#[derive(Clone, Debug)]
pub struct GroupAlgebraElement<S> {
    ext: Arc<Extension>,
    values: Vec<S>,
    level: Option<i64>,
}

fn norm_level(k: i64, m: u32) -> i64 {
    k.rem_euclid(m as i64)
}

impl<S: Scalar> GroupAlgebraElement<S> {
    pub fn new(ext: Arc<Extension>, values: Vec<S>) -> Result<Self> {
        if values.len() != ext.order() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} values", ext.order()),
                got: values.len().to_string(),
            });
        }
        Ok(GroupAlgebraElement { ext, values, level: None })
    }

    /// Tagged element; fails unless the table is at level `k`.
    pub fn leveled(ext: Arc<Extension>, values: Vec<S>, k: i64) -> Result<Self> {
        let mut f = GroupAlgebraElement::new(ext, values)?;
        if !f.is_level(k) {
            return Err(Error::WrongLevel {
                expected: k,
                got: f.detect_level(),
            });
        }
        f.level = Some(norm_level(k, f.ext.m()));
        Ok(f)
    }

    /// `f(g, ζ^i) = ω^{k i} base(g)`.
    pub fn from_base(ext: Arc<Extension>, base: &[S], k: i64) -> Result<Self> {
        let n = ext.group().order();
        if base.len() != n {
            return Err(Error::ShapeMismatch {
                expected: format!("{n} base values"),
                got: base.len().to_string(),
            });
        }
        let m = ext.m();
        let values = (0..ext.order())
            .map(|x| {
                let (g, i) = ext.split(x);
                S::root(m, k * i as i64) * base[g].clone()
            })
            .collect();
        Ok(GroupAlgebraElement {
            level: Some(norm_level(k, m)),
            ext,
            values,
        })
    }

    /// `m · δ_{(e,1)}`, the unit for the normalized convolution.
    pub fn unit(ext: Arc<Extension>) -> Self {
        let m = ext.m();
        let mut values = vec![S::zero(m); ext.order()];
        values[0] = S::rational(m, m as i64, 1);
        GroupAlgebraElement { ext, values, level: None }
    }

    /// Seeded element at level `k` with small integer/root-of-unity entries.
    pub fn random(ext: Arc<Extension>, k: i64, rng: &mut Lcg64) -> Self {
        let m = ext.m();
        let base: Vec<S> = (0..ext.group().order()).map(|_| random_scalar(m, rng)).collect();
        GroupAlgebraElement::from_base(ext, &base, k).expect("base has |G| entries")
    }

    pub fn ext(&self) -> &Arc<Extension> {
        &self.ext
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn level(&self) -> Option<i64> {
        self.level
    }

    pub fn get(&self, x: usize) -> &S {
        &self.values[x]
    }

    pub fn is_level(&self, k: i64) -> bool {
        let m = self.ext.m();
        let zeta = S::root(m, k);
        (0..self.ext.order()).all(|x| {
            let zx = self.ext.mul(self.ext.index(0, 1 % m), x);
            self.values[zx].same(&(zeta.clone() * self.values[x].clone()))
        })
    }

    pub fn detect_level(&self) -> Option<i64> {
        (0..self.ext.m() as i64).find(|&k| self.is_level(k))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn same(&self, other: &Self) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a.same(b))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_ctx(&self.ext, &other.ext)?;
        let level = if self.level == other.level { self.level } else { None };
        Ok(GroupAlgebraElement {
            ext: self.ext.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect(),
            level,
        })
    }

    /// `f*(x) = conj f(x⁻¹)`.
    pub fn involution(&self) -> Self {
        let values = (0..self.ext.order())
            .map(|x| self.values[self.ext.inv(x)].conj())
            .collect();
        GroupAlgebraElement {
            ext: self.ext.clone(),
            values,
            level: self.level,
        }
    }

    /// `f^∨(x) = f(x⁻¹)`; sends level `k` to level `−k`.
    pub fn check(&self) -> Self {
        let values = (0..self.ext.order()).map(|x| self.values[self.ext.inv(x)].clone()).collect();
        GroupAlgebraElement {
            ext: self.ext.clone(),
            values,
            level: self.level.map(|k| norm_level(-k, self.ext.m())),
        }
    }
}

pub(crate) fn random_scalar<S: Scalar>(m: u32, rng: &mut Lcg64) -> S {
    let a = rng.below(7) as i64 - 3;
    let b = rng.below(5) as i64 - 2;
    let j = rng.below(m.max(1) as u64) as i64;
    S::rational(m, a, 1) + S::root(m, j) * S::rational(m, b, 1)
}

fn check_ctx(a: &Extension, b: &Extension) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ContextMismatch("elements live on different extensions".into()))
    }
}

/// `(f*h)(y) = (1/m) Σ_{x∈G^τ} f(x) h(x⁻¹y)`.
pub fn convolve<S: Scalar>(f: &GroupAlgebraElement<S>, h: &GroupAlgebraElement<S>) -> Result<GroupAlgebraElement<S>> {
    check_ctx(&f.ext, &h.ext)?;
    let t = f.ext.table();
    let values = convolve_tables(&t, f.ext.m(), &f.values, &h.values);
    let level = match (f.level, h.level) {
        (Some(a), Some(b)) if a == b => Some(a),
        _ => None,
    };
    Ok(GroupAlgebraElement {
        ext: f.ext.clone(),
        values,
        level,
    })
}

pub(crate) fn convolve_tables<S: Scalar>(t: &GroupTable, m: u32, f: &[S], h: &[S]) -> Vec<S> {
    let haar = S::rational(m, 1, t.haar_den);
    (0..t.order)
        .map(|y| {
            let mut acc = S::zero(m);
            for x in 0..t.order {
                if f[x].is_zero() {
                    continue;
                }
                acc = acc + f[x].clone() * h[t.mul(t.inv(x), y)].clone();
            }
            acc * haar.clone()
        })
        .collect()
}

/// `(P_k f)(g) = (1/m) Σ_{ζ∈μ_m} ζ^{−k} f(ζg)`.
pub fn level_project<S: Scalar>(f: &GroupAlgebraElement<S>, k: i64) -> GroupAlgebraElement<S> {
    let ext = &f.ext;
    let m = ext.m();
    let inv_m = S::rational(m, 1, m as i64);
    let values = (0..ext.order())
        .map(|x| {
            let mut acc = S::zero(m);
            for j in 0..m {
                let zx = ext.mul(ext.index(0, j), x);
                acc = acc + S::root(m, -k * j as i64) * f.values[zx].clone();
            }
            acc * inv_m.clone()
        })
        .collect();
    GroupAlgebraElement {
        ext: ext.clone(),
        values,
        level: Some(norm_level(k, m)),
    }
}

/// `ℓ²(G)` with the level-`k` representation of `G^τ`:
/// `ρ(g,ζ^i) δ_x = ω^{k(i + e(g,x))} δ_{g+x}`.
#[derive(Clone, Debug)]
pub struct TwistedRegular {
    pub ext: Arc<Extension>,
    pub k: i64,
}

/// Function `G^τ → ℓ²(G)`, index `x·|G| + v`.
#[derive(Clone, Debug)]
pub struct ModuleElement<S> {
    pub rep: TwistedRegular,
    pub values: Vec<S>,
}

impl TwistedRegular {
    pub fn new(ext: Arc<Extension>, k: i64) -> Self {
        TwistedRegular { ext, k }
    }

    fn dim(&self) -> usize {
        self.ext.group().order()
    }

    /// `ρ(x)` applied to a vector of `ℓ²(G)`.
    pub fn act<S: Scalar>(&self, x: usize, v: &[S]) -> Vec<S> {
        let m = self.ext.m();
        let (g, i) = self.ext.split(x);
        let grp = self.ext.group();
        let mut out = vec![S::zero(m); self.dim()];
        for (y, val) in v.iter().enumerate() {
            let e = self.ext.cocycle().exponent(g, y) as i64;
            out[grp.add(g, y)] = S::root(m, self.k * (i as i64 + e)) * val.clone();
        }
        out
    }

    /// Seeded module element at level `n`: `φ(g,ζ^i) = ω^{n i} φ(g,1)`.
    pub fn random<S: Scalar>(&self, n: i64, rng: &mut Lcg64) -> ModuleElement<S> {
        let m = self.ext.m();
        let d = self.dim();
        let base: Vec<Vec<S>> = (0..self.ext.group().order())
            .map(|_| (0..d).map(|_| random_scalar(m, rng)).collect())
            .collect();
        let mut values = Vec::with_capacity(self.ext.order() * d);
        for x in 0..self.ext.order() {
            let (g, i) = self.ext.split(x);
            for v in &base[g] {
                values.push(S::root(m, n * i as i64) * v.clone());
            }
        }
        ModuleElement { rep: self.clone(), values }
    }
}

impl<S: Scalar> ModuleElement<S> {
    fn at(&self, x: usize) -> &[S] {
        let d = self.rep.dim();
        &self.values[x * d..(x + 1) * d]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// `(a·φ)(y) = (1/m) Σ_x a(x) ρ(x)[φ(x⁻¹y)]`.
pub fn module_left<S: Scalar>(a: &GroupAlgebraElement<S>, phi: &ModuleElement<S>) -> Result<ModuleElement<S>> {
    check_ctx(&a.ext, &phi.rep.ext)?;
    let ext = &a.ext;
    let m = ext.m();
    let d = phi.rep.dim();
    let haar = S::rational(m, 1, m as i64);
    let mut values = vec![S::zero(m); ext.order() * d];
    for y in 0..ext.order() {
        for x in 0..ext.order() {
            if a.values[x].is_zero() {
                continue;
            }
            let moved = phi.rep.act(x, phi.at(ext.mul(ext.inv(x), y)));
            for (v, w) in moved.into_iter().enumerate() {
                let slot = &mut values[y * d + v];
                *slot = slot.clone() + a.values[x].clone() * w * haar.clone();
            }
        }
    }
    Ok(ModuleElement { rep: phi.rep.clone(), values })
}

/// `(φ·b)(y) = (1/m) Σ_x φ(x) b(x⁻¹y)`.
pub fn module_right<S: Scalar>(phi: &ModuleElement<S>, b: &GroupAlgebraElement<S>) -> Result<ModuleElement<S>> {
    check_ctx(&b.ext, &phi.rep.ext)?;
    let ext = &b.ext;
    let m = ext.m();
    let d = phi.rep.dim();
    let haar = S::rational(m, 1, m as i64);
    let mut values = vec![S::zero(m); ext.order() * d];
    for y in 0..ext.order() {
        for x in 0..ext.order() {
            let c = b.values[ext.mul(ext.inv(x), y)].clone() * haar.clone();
            if c.is_zero() {
                continue;
            }
            for v in 0..d {
                let slot = &mut values[y * d + v];
                *slot = slot.clone() + phi.at(x)[v].clone() * c.clone();
            }
        }
    }
    Ok(ModuleElement { rep: phi.rep.clone(), values })
}

/// `⟨φ,ψ⟩(y) = (1/m) Σ_x ⟨φ(x), ψ(xy)⟩`.
pub fn module_inner<S: Scalar>(phi: &ModuleElement<S>, psi: &ModuleElement<S>) -> Result<GroupAlgebraElement<S>> {
    check_ctx(&phi.rep.ext, &psi.rep.ext)?;
    let ext = phi.rep.ext.clone();
    let m = ext.m();
    let haar = S::rational(m, 1, m as i64);
    let values = (0..ext.order())
        .map(|y| {
            let mut acc = S::zero(m);
            for x in 0..ext.order() {
                let (p, q) = (phi.at(x), psi.at(ext.mul(x, y)));
                for v in 0..p.len() {
                    acc = acc + p[v].conj() * q[v].clone();
                }
            }
            acc * haar.clone()
        })
        .collect();
    GroupAlgebraElement::new(ext, values)
}

/// One product in the level-orthogonality scan.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelCase {
    pub clause: &'static str,
    pub left: i64,
    pub right: i64,
    pub rep_level: i64,
    pub expected_zero: bool,
    pub is_zero: bool,
}

impl LevelCase {
    pub fn ok(&self) -> bool {
        !self.expected_zero || self.is_zero
    }
}

/// All level combinations of the three vanishing clauses, with seeded
/// random elements: algebra·algebra (zero unless equal levels), algebra·module
/// (zero unless `m = n − k`), module·algebra (zero unless equal), and module
/// inner products (zero unless equal).
pub fn level_suite<S: Scalar>(ext: Arc<Extension>, rep_level: i64, seed: u64) -> Result<Vec<LevelCase>> {
    let m = ext.m() as i64;
    let mut rng = Lcg64::new(seed);
    let rep = TwistedRegular::new(ext.clone(), rep_level);
    let alg: Vec<GroupAlgebraElement<S>> = (0..m).map(|k| GroupAlgebraElement::random(ext.clone(), k, &mut rng)).collect();
    let module: Vec<ModuleElement<S>> = (0..m).map(|n| rep.random(n, &mut rng)).collect();
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            out.push(LevelCase {
                clause: "algebra*algebra",
                left: a,
                right: b,
                rep_level,
                expected_zero: a != b,
                is_zero: convolve(&alg[a as usize], &alg[b as usize])?.is_zero(),
            });
            out.push(LevelCase {
                clause: "algebra*module",
                left: a,
                right: b,
                rep_level,
                expected_zero: (a - (b - rep_level)).rem_euclid(m) != 0,
                is_zero: module_left(&alg[a as usize], &module[b as usize])?.is_zero(),
            });
            out.push(LevelCase {
                clause: "module*algebra",
                left: a,
                right: b,
                rep_level,
                expected_zero: a != b,
                is_zero: module_right(&module[a as usize], &alg[b as usize])?.is_zero(),
            });
            out.push(LevelCase {
                clause: "<module,module>",
                left: a,
                right: b,
                rep_level,
                expected_zero: a != b,
                is_zero: module_inner(&module[a as usize], &module[b as usize])?.is_zero(),
            });
        }
    }
    Ok(out)
}
