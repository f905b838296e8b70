use nalgebra::{DMatrix, SymmetricEigen};

use super::analysis::{mishchenko_xi, XiProjection};
use super::jcycle::{ColumnCut, JCycle};
use crate::dirac::{bounded_transform, Layout, TripleSpace};
use crate::fock::{self, Holo, Mode, TruncationSpec};
use crate::limitspace::ModeFunction;
use crate::opcore::{spectrum, Grade, SparseOperator};
use crate::rng::Lcg64;
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexModel {
    /// `S ⊗ A_τ` with `∂_L`; `A_τ` acts on the boson columns by `F·b = F b`.
    KkIndex,
    /// `A_{−τ} ⊗ S` with `∂_R`; `f*b = ᵗb f`, `⟨f₁,f₂⟩ = ᵗ(f₂ f₁*)`.
    Analytic,
}

#[derive(Debug)]
pub struct IndexCycle {
    pub model: IndexModel,
    pub cut: ColumnCut,
    pub space: TripleSpace,
    pub operator: SparseOperator,
}

/// Matrix view of a split-cut triple space: `rest` = (fermion, dual) pairs,
/// `cell[r][b]` the basis index of `rest[r] ⊗ boson b`.
struct Columns {
    nb: usize,
    cell: Vec<Vec<usize>>,
}

impl IndexCycle {
    pub fn kk_index(spec: &TruncationSpec, cut: ColumnCut) -> Result<IndexCycle> {
        let space = cut.triple(spec, Layout::LEFT)?;
        let operator = space.dirac()?;
        Ok(IndexCycle {
            model: IndexModel::KkIndex,
            cut,
            space,
            operator,
        })
    }

    pub fn dim(&self) -> usize {
        self.space.basis().dim()
    }

    fn columns(&self) -> Result<Columns> {
        if self.cut != ColumnCut::Split {
            return Err(Error::InvalidTruncation(
                "the joint energy cut couples the boson columns; module structure needs the split cut".into(),
            ));
        }
        let p = &self.space.product;
        let l = self.space.layout;
        let nb = p.factor(l.boson).dim();
        let mut rest: Vec<(usize, usize)> = (0..p.dim())
            .filter(|&i| p.tuple(i)[l.boson] == 0)
            .map(|i| (p.tuple(i)[l.fermion], p.tuple(i)[l.dual]))
            .collect();
        rest.sort_unstable();
        let mut cell = Vec::with_capacity(rest.len());
        for &(f, d) in &rest {
            let mut row = Vec::with_capacity(nb);
            for b in 0..nb {
                let mut t = vec![0; 3];
                t[l.fermion] = f;
                t[l.dual] = d;
                t[l.boson] = b;
                row.push(
                    p.index_of_tuple(&t)
                        .ok_or_else(|| Error::InvalidTruncation("split cut is not a product".into()))?,
                );
            }
            cell.push(row);
        }
        Ok(Columns { nb, cell })
    }

    /// Element as a matrix: rest × boson for the KK model, boson × rest for
    /// the analytic one. Orthonormal coordinates.
    fn to_matrix(&self, c: &Columns, f: &[C64]) -> DMatrix<C64> {
        let nr = c.cell.len();
        match self.model {
            IndexModel::KkIndex => DMatrix::from_fn(nr, c.nb, |r, b| f[c.cell[r][b]]),
            IndexModel::Analytic => DMatrix::from_fn(c.nb, nr, |b, r| f[c.cell[r][b]]),
        }
    }

    fn from_matrix(&self, c: &Columns, m: &DMatrix<C64>) -> Vec<C64> {
        let mut out = vec![C64::default(); self.dim()];
        for (r, row) in c.cell.iter().enumerate() {
            for (b, &i) in row.iter().enumerate() {
                out[i] = match self.model {
                    IndexModel::KkIndex => m[(r, b)],
                    IndexModel::Analytic => m[(b, r)],
                };
            }
        }
        out
    }

    /// Right action of a boson-space matrix `b`.
    pub fn right_action(&self, f: &[C64], b: &DMatrix<C64>) -> Result<Vec<C64>> {
        let c = self.columns()?;
        let m = self.to_matrix(&c, f);
        let out = match self.model {
            IndexModel::KkIndex => m * b,
            IndexModel::Analytic => b.transpose() * m,
        };
        Ok(self.from_matrix(&c, &out))
    }

    /// `A_τ`-valued inner product, a boson-space matrix.
    pub fn inner(&self, f1: &[C64], f2: &[C64]) -> Result<DMatrix<C64>> {
        let c = self.columns()?;
        let (m1, m2) = (self.to_matrix(&c, f1), self.to_matrix(&c, f2));
        Ok(match self.model {
            IndexModel::KkIndex => m1.adjoint() * m2,
            IndexModel::Analytic => (m2 * m1.adjoint()).transpose(),
        })
    }

    pub fn boson_dim(&self) -> usize {
        self.space.product.factor(self.space.layout.boson).dim()
    }

    pub fn random_element(&self, rng: &mut Lcg64) -> Vec<C64> {
        (0..self.dim()).map(|_| rng.complex()).collect()
    }

    pub fn module_axioms(&self, seed: u64, trials: usize) -> Result<ModuleAxioms> {
        let mut rng = Lcg64::new(seed);
        let nb = self.boson_dim();
        let rand_b = |rng: &mut Lcg64| DMatrix::from_fn(nb, nb, |_, _| rng.complex());
        let mut out = ModuleAxioms::default();
        out.positivity = f64::INFINITY;
        for _ in 0..trials {
            let (f1, f2) = (self.random_element(&mut rng), self.random_element(&mut rng));
            let (b1, b2) = (rand_b(&mut rng), rand_b(&mut rng));
            let lhs = self.right_action(&self.right_action(&f1, &b1)?, &b2)?;
            let rhs = self.right_action(&f1, &(&b1 * &b2))?;
            out.associativity = out.associativity.max(max_diff(&lhs, &rhs));
            let l = self.inner(&f1, &self.right_action(&f2, &b1)?)?;
            let r = self.inner(&f1, &f2)? * &b1;
            out.compatibility = out.compatibility.max((l - r).camax());
            let g = self.inner(&f1, &f1)?;
            let herm = (&g + g.adjoint()) * C64::new(0.5, 0.0);
            let lo = SymmetricEigen::new(herm).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            out.positivity = out.positivity.min(lo);
            let df = self.operator.apply_orthonormal(&self.right_action(&f1, &b1)?);
            let fd = self.right_action(&self.operator.apply_orthonormal(&f1), &b1)?;
            out.linearity = out.linearity.max(max_diff(&df, &fd));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModuleAxioms {
    /// `max |(f·b₁)·b₂ − f·(b₁b₂)|`
    pub associativity: f64,
    /// `max |⟨f₁, f₂·b⟩ − ⟨f₁,f₂⟩ b|`
    pub compatibility: f64,
    /// smallest eigenvalue of `⟨f,f⟩` seen
    pub positivity: f64,
    /// `max |∂(f·b) − (∂f)·b|`
    pub linearity: f64,
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `((ΩT₀⋉_{−τ}ℂ) ⊗ S, ∂_R)`: boson ⊗ dual ⊗ fermion.
pub fn analytic_index(spec: &TruncationSpec, cut: ColumnCut) -> Result<IndexCycle> {
    let space = cut.triple(spec, Layout::RIGHT)?;
    let operator = space.dirac()?;
    Ok(IndexCycle {
        model: IndexModel::Analytic,
        cut,
        space,
        operator,
    })
}

/// `⟨f, dR_z f⟩` and `⟨f, dR_z̄ f⟩` from the coefficients alone.
fn ladder_expectations(f: &ModeFunction) -> (C64, C64) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut z = C64::default();
    let mut zb = C64::default();
    for (&(p, m), &c) in f.iter() {
        // dR_z = (a₋ − a₊†)/√2, dR_z̄ = (a₊ − a₋†)/√2
        if m > 0 {
            z += f.coefficient(p, m - 1).conj() * c * (m as f64).sqrt() * s;
        }
        z -= f.coefficient(p + 1, m).conj() * c * ((p + 1) as f64).sqrt() * s;
        if p > 0 {
            zb += f.coefficient(p - 1, m).conj() * c * (p as f64).sqrt() * s;
        }
        zb -= f.coefficient(p, m + 1).conj() * c * ((m + 1) as f64).sqrt() * s;
    }
    (z, zb)
}

#[derive(Debug)]
pub struct Assembled {
    pub index: IndexCycle,
    /// `(⟨Ξ_n, dR_{z_n}Ξ_n⟩, ⟨Ξ_n, dR_{z̄_n}Ξ_n⟩)` per active mode.
    pub symbolic: Vec<(C64, C64)>,
    /// `V* ∂̃ V`, computed numerically.
    pub compressed: SparseOperator,
    /// max entry of `V*∂̃V − index.operator`.
    pub numeric_deviation: f64,
}

pub fn assemble(cycle: &JCycle) -> Result<Assembled> {
    assemble_with(cycle, &mishchenko_xi(&cycle.seq, cycle.m_active, cycle.cap)?)
}

/// Compress `cycle` by `P_Ξ ⊗ id ⊗ id`; the output operator is
/// `P_Ξ D P_Ξ ⊗ id + ∂_L` with the first term from per-mode scalars.
pub fn assemble_with(cycle: &JCycle, proj: &XiProjection) -> Result<Assembled> {
    let same = proj.xi.len() == cycle.xi.len()
        && proj.xi.iter().zip(&cycle.xi).all(|(a, b)| {
            a.iter().count() == b.iter().count() && a.iter().all(|(&(p, m), c)| (b.coefficient(p, m) - c).norm() == 0.0)
        });
    if !same {
        return Err(Error::ContextMismatch("Ξ of the projection differs from the Ξ of the cycle".into()));
    }
    let symbolic: Vec<(C64, C64)> = cycle.xi.iter().map(ladder_expectations).collect();
    let left = cycle.cut.triple(&cycle.spec, Layout::LEFT)?;
    let mut operator = left.dirac()?;
    let fb = left.product.factor(Layout::LEFT.fermion);
    for (i, &(z, zb)) in symbolic.iter().enumerate() {
        if z == C64::default() && zb == C64::default() {
            continue;
        }
        let n = (i + 1) as u32;
        let gb = left.product.lift_one(Layout::LEFT.fermion, &fock::clifford(fb, n, Holo::ZBar, Mode::Compressed)?)?;
        let g = left.product.lift_one(Layout::LEFT.fermion, &fock::clifford(fb, n, Holo::Z, Mode::Compressed)?)?;
        let w = (n as f64).sqrt();
        operator = operator.add(&gb.scale(z * w))?.add(&g.scale(zb * w))?;
    }
    let v = cycle.xi_embedding()?;
    let compressed = v.adjoint().compose(&cycle.operator)?.compose(&v)?;
    let compressed = SparseOperator::from_triplets(
        left.basis().clone(),
        left.basis().clone(),
        Grade::Odd,
        compressed.entries().to_vec(),
    )?;
    let numeric_deviation = compressed.max_abs_diff(&operator)?;
    Ok(Assembled {
        index: IndexCycle {
            model: IndexModel::KkIndex,
            cut: cycle.cut,
            space: left,
            operator,
        },
        symbolic,
        compressed,
        numeric_deviation,
    })
}

/// `U: boson ⊗ dual ⊗ fermion → fermion ⊗ dual ⊗ boson`, `φ⊗ψ ↦ ψ⊗φ` on
/// rank-one elements.
pub fn transpose_intertwiner(analytic: &IndexCycle, kk: &IndexCycle) -> Result<SparseOperator> {
    let (src, dst) = (&analytic.space, &kk.space);
    let mut trip = Vec::with_capacity(src.product.dim());
    for i in 0..src.product.dim() {
        let t = src.product.tuple(i);
        let mut u = vec![0; 3];
        u[dst.layout.boson] = t[src.layout.boson];
        u[dst.layout.dual] = t[src.layout.dual];
        u[dst.layout.fermion] = t[src.layout.fermion];
        let j = dst
            .product
            .index_of_tuple(&u)
            .ok_or_else(|| Error::ShapeMismatch {
                expected: "mirror truncations".into(),
                got: format!("{:?} has no partner", src.basis().label(i)),
            })?;
        trip.push((j, i, C64::new(1.0, 0.0)));
    }
    SparseOperator::from_triplets(src.basis().clone(), dst.basis().clone(), Grade::Even, trip)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexComparison {
    pub dim: usize,
    /// `max |U*U − 1|`, orthonormal coordinates.
    pub unitarity: f64,
    /// `max |U ∂_R − ∂_L U|`
    pub intertwining: f64,
    /// `max |U b(∂_R) − b(∂_L) U|`, `b(x) = x/√(1+x²)`.
    pub bounded_intertwining: f64,
    pub spectra: f64,
    pub bounded_spectra: f64,
    /// module action and inner product through `U`, when the cut allows.
    pub action: Option<f64>,
    pub inner: Option<f64>,
    /// `U(v ⊗ vac ⊗ 1_f)` is the mirror vacuum column for every boson `v`.
    pub vacuum_columns: bool,
}

impl IndexComparison {
    pub fn worst(&self) -> f64 {
        [
            self.unitarity,
            self.intertwining,
            self.bounded_intertwining,
            self.spectra,
            self.bounded_spectra,
            self.action.unwrap_or(0.0),
            self.inner.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn compare_indices(kk: &IndexCycle, analytic: &IndexCycle, seed: u64) -> Result<IndexComparison> {
    if kk.model != IndexModel::KkIndex || analytic.model != IndexModel::Analytic {
        return Err(Error::ContextMismatch("compare_indices takes (KK-index, analytic) cycles".into()));
    }
    if kk.dim() != analytic.dim() || kk.cut != analytic.cut || kk.space.spec != analytic.space.spec {
        return Err(Error::ShapeMismatch {
            expected: format!("dimension {}", kk.dim()),
            got: format!("dimension {}", analytic.dim()),
        });
    }
    let u = transpose_intertwiner(analytic, kk)?;
    let uu = u.adjoint().compose(&u)?;
    let unitarity = uu.max_abs_diff(&SparseOperator::identity(analytic.space.basis().clone()))?;
    let intertwining = u.compose(&analytic.operator)?.max_abs_diff(&kk.operator.compose(&u)?)?;
    let (ba, bk) = (bounded_transform(&analytic.operator)?, bounded_transform(&kk.operator)?);
    let bounded_intertwining = u.compose(&ba)?.max_abs_diff(&bk.compose(&u)?)?;
    let spectra = spectrum(&kk.operator)?.distance(&spectrum(&analytic.operator)?)?;
    let bounded_spectra = spectrum(&bk)?.distance(&spectrum(&ba)?)?;

    let (mut action, mut inner) = (None, None);
    if kk.cut == ColumnCut::Split {
        let mut rng = Lcg64::new(seed);
        let nb = kk.boson_dim();
        let (mut da, mut di) = (0.0f64, 0.0f64);
        for _ in 0..4 {
            let f1 = analytic.random_element(&mut rng);
            let f2 = analytic.random_element(&mut rng);
            let b = DMatrix::from_fn(nb, nb, |_, _| rng.complex());
            let uf1 = u.apply_orthonormal(&f1);
            let uf2 = u.apply_orthonormal(&f2);
            let lhs = u.apply_orthonormal(&analytic.right_action(&f1, &b)?);
            da = da.max(max_diff(&lhs, &kk.right_action(&uf1, &b)?));
            di = di.max((analytic.inner(&f1, &f2)? - kk.inner(&uf1, &uf2)?).camax());
        }
        action = Some(da);
        inner = Some(di);
    }

    let mut vacuum_columns = true;
    for &i in &analytic.space.vacuum_sector() {
        let img = u.apply_orthonormal(&unit(analytic.dim(), i));
        let j = img.iter().position(|c| c.norm() > 0.0);
        vacuum_columns &= match j {
            Some(j) => {
                let t = kk.space.product.tuple(j);
                let sp = &kk.space.product;
                sp.factor(kk.space.layout.dual).energy(t[kk.space.layout.dual]) == 0
                    && sp.factor(kk.space.layout.fermion).energy(t[kk.space.layout.fermion]) == 0
                    && t[kk.space.layout.boson] == analytic.space.product.tuple(i)[analytic.space.layout.boson]
            }
            None => false,
        };
    }
    Ok(IndexComparison {
        dim: kk.dim(),
        unitarity,
        intertwining,
        bounded_intertwining,
        spectra,
        bounded_spectra,
        action,
        inner,
        vacuum_columns,
    })
}

fn unit(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::default(); n];
    v[i] = C64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{build_j_cycle, build_j_cycle_with};
    use crate::dirac::{build_dirac_L, kernel, predicted_kernel_dim};
    use crate::limitspace::SigmaSequence;

    #[test]
    fn radial_scalars_vanish() {
        let c = build_j_cycle(&TruncationSpec::new(2, 4).unwrap(), 2, &SigmaSequence::Pow2, 2).unwrap();
        let a = assemble(&c).unwrap();
        assert!(a.symbolic.iter().all(|&(z, zb)| z == C64::default() && zb == C64::default()));
        assert_eq!(a.index.operator.max_abs_diff(&build_dirac_L(&c.spec).unwrap()).unwrap(), 0.0);
        assert!(a.numeric_deviation < 1e-12);
        assert_eq!(a.index.dim(), 57);
    }

    #[test]
    fn off_diagonal_mode_has_expectation() {
        // oracle: f = (|00⟩ + |10⟩)/√2 gives ⟨f, dR_z f⟩ = −1/(2√2)
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = ModeFunction::general(2, [((0, 0), C64::new(h, 0.0)), ((1, 0), C64::new(h, 0.0))]);
        let (z, zb) = ladder_expectations(&f);
        assert!((z.re + 0.5 * h).abs() < 1e-15);
        assert!((zb.re - 0.5 * h).abs() < 1e-15);
    }

    #[test]
    fn mismatched_xi_rejected() {
        let spec = TruncationSpec::new(2, 4).unwrap();
        let c = build_j_cycle(&spec, 2, &SigmaSequence::Pow2, 2).unwrap();
        let other = mishchenko_xi(&SigmaSequence::Explicit(vec![0.3, 0.2]), 2, 2).unwrap();
        assert!(matches!(assemble_with(&c, &other), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn analytic_module_axioms() {
        let spec = TruncationSpec::new(2, 3).unwrap();
        let a = analytic_index(&spec, ColumnCut::Split).unwrap();
        let ax = a.module_axioms(7, 3).unwrap();
        assert!(ax.associativity < 1e-12 && ax.compatibility < 1e-12 && ax.linearity < 1e-12);
        assert!(ax.positivity > -1e-12);
        let k = IndexCycle::kk_index(&spec, ColumnCut::Split).unwrap();
        assert!(k.module_axioms(7, 3).unwrap().associativity < 1e-12);
        assert!(IndexCycle::kk_index(&spec, ColumnCut::Joint).unwrap().module_axioms(1, 1).is_err());
    }

    #[test]
    fn analytic_kernel_is_vacuum_columns() {
        let spec = TruncationSpec::new(3, 4).unwrap();
        let a = analytic_index(&spec, ColumnCut::Joint).unwrap();
        assert_eq!(kernel(&a.operator).unwrap().len() as u64, predicted_kernel_dim(&spec));
    }

    #[test]
    fn indices_agree() {
        let spec = TruncationSpec::new(2, 4).unwrap();
        for cut in [ColumnCut::Joint, ColumnCut::Split] {
            let c = build_j_cycle_with(&spec, 1, &SigmaSequence::Pow2, 2, cut).unwrap();
            let kk = assemble(&c).unwrap().index;
            let an = analytic_index(&spec, cut).unwrap();
            let r = compare_indices(&kk, &an, 3).unwrap();
            assert!(r.worst() < 1e-10, "{r:?}");
            assert!(r.vacuum_columns);
            assert_eq!(r.action.is_some(), cut == ColumnCut::Split);
        }
        let small = analytic_index(&TruncationSpec::new(2, 3).unwrap(), ColumnCut::Joint).unwrap();
        let kk = IndexCycle::kk_index(&spec, ColumnCut::Joint).unwrap();
        assert!(compare_indices(&kk, &small, 1).is_err());
    }
}
