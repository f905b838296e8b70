//! Dirac operators on truncated triple tensor spaces.
//!
//! `∂_R = Σ_n √n (id ⊗ dρ*(z̄_n) ⊗ γ(z_n) + id ⊗ dρ*(z_n) ⊗ γ(z̄_n))` on
//! boson ⊗ dual ⊗ fermion, and `∂_L` the mirror operator on
//! fermion ⊗ dual ⊗ boson. Both conserve total energy, so the squares are
//! computed without truncation leakage.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::fock::{self, Holo, Kind, Mode, TruncationSpec};
use crate::opcore::{
    self, Basis, Grade, ProductBasis, ProductTruncation, SparseOperator, Spectrum, Vector,
};
use crate::{Error, Result, C64};

pub use crate::opcore::kernel;

/// Positions of the three roles inside a product basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub boson: usize,
    pub dual: usize,
    pub fermion: usize,
}

impl Layout {
    pub const RIGHT: Layout = Layout { boson: 0, dual: 1, fermion: 2 };
    pub const LEFT: Layout = Layout { boson: 2, dual: 1, fermion: 0 };
}

/// Truncated triple tensor product with a known role layout.
#[derive(Debug)]
pub struct TripleSpace {
    pub spec: TruncationSpec,
    pub layout: Layout,
    pub product: ProductBasis,
}

impl TripleSpace {
    pub fn new(spec: &TruncationSpec, layout: Layout, truncation: ProductTruncation) -> Result<TripleSpace> {
        let mut factors: Vec<Option<Arc<Basis>>> = vec![None, None, None];
        factors[layout.boson] = Some(fock::enumerate_basis(spec, Kind::Boson));
        factors[layout.dual] = Some(fock::enumerate_basis(spec, Kind::DualBoson));
        factors[layout.fermion] = Some(fock::enumerate_basis(spec, Kind::Fermion));
        let factors = factors
            .into_iter()
            .map(|f| f.ok_or_else(|| Error::InvalidTruncation("layout positions must be distinct".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(TripleSpace {
            spec: *spec,
            layout,
            product: ProductBasis::new(factors, truncation)?,
        })
    }

    /// boson ⊗ dual ⊗ fermion with total energy `≤ E_max`.
    pub fn right(spec: &TruncationSpec) -> Result<TripleSpace> {
        TripleSpace::new(spec, Layout::RIGHT, ProductTruncation::Joint(spec.e_max))
    }

    /// fermion ⊗ dual ⊗ boson with total energy `≤ E_max`.
    pub fn left(spec: &TruncationSpec) -> Result<TripleSpace> {
        TripleSpace::new(spec, Layout::LEFT, ProductTruncation::Joint(spec.e_max))
    }

    pub fn basis(&self) -> &Arc<Basis> {
        self.product.basis()
    }

    pub fn dirac(&self) -> Result<SparseOperator> {
        dirac_on(&self.product, self.layout.dual, self.layout.fermion, self.spec.n_max)
    }

    /// `2(N + dρ*(d)/i)` lifted to the triple space.
    pub fn weitzenbock_rhs(&self) -> Result<SparseOperator> {
        let b = self.basis();
        let vals: Vec<C64> = (0..b.dim())
            .map(|i| {
                let t = self.product.tuple(i);
                let nf = self.product.factor(self.layout.fermion).energy(t[self.layout.fermion]);
                let ed = self.product.factor(self.layout.dual).energy(t[self.layout.dual]);
                C64::new(2.0 * (nf + ed) as f64, 0.0)
            })
            .collect();
        // Built from the factor operators, not from the stored energies.
        let n = fock::number_op(self.product.factor(self.layout.fermion))?;
        let d = fock::energy_op(self.product.factor(self.layout.dual))?.scale(C64::new(0.0, -1.0));
        let lifted = self
            .product
            .lift_one(self.layout.fermion, &n)?
            .add(&self.product.lift_one(self.layout.dual, &d)?)?
            .scale_real(2.0);
        let direct = SparseOperator::diagonal(b.clone(), &vals)?;
        if lifted.max_abs_diff(&direct)? != 0.0 {
            return Err(Error::Disagreement("lifted N + dρ*(d)/i differs from the energy labels".into()));
        }
        Ok(lifted)
    }

    /// `(−1)^{fermion parity}`.
    pub fn grading(&self) -> Result<SparseOperator> {
        let b = self.basis();
        let vals: Vec<C64> = (0..b.dim())
            .map(|i| C64::new(if b.parity(i) == 0 { 1.0 } else { -1.0 }, 0.0))
            .collect();
        SparseOperator::diagonal(b.clone(), &vals)
    }

    /// Product states with dual and fermion factors both in the vacuum.
    pub fn vacuum_sector(&self) -> Vec<usize> {
        (0..self.basis().dim())
            .filter(|&i| {
                let t = self.product.tuple(i);
                self.product.factor(self.layout.dual).energy(t[self.layout.dual]) == 0
                    && self.product.factor(self.layout.fermion).energy(t[self.layout.fermion]) == 0
            })
            .collect()
    }
}

/// Dirac operator acting on the dual and fermion factors of `product`.
pub fn dirac_on(product: &ProductBasis, dual: usize, fermion: usize, n_max: u32) -> Result<SparseOperator> {
    let db = product.factor(dual);
    let fb = product.factor(fermion);
    if db.kind() != Kind::DualBoson.tag() || fb.kind() != Kind::Fermion.tag() {
        return Err(Error::WrongKind {
            expected: "dual_boson and fermion factors".into(),
            got: format!("{} and {}", db.kind(), fb.kind()),
        });
    }
    let k = product.factors().len();
    let mut total = SparseOperator::zero(product.basis().clone(), product.basis().clone(), Grade::Odd);
    for n in 1..=n_max {
        let up = fock::dual_raise(db, n, Mode::Compressed)?;
        let down = fock::dual_lower(db, n)?;
        let g = fock::clifford(fb, n, Holo::Z, Mode::Compressed)?;
        let gbar = fock::clifford(fb, n, Holo::ZBar, Mode::Compressed)?;
        for (a, b) in [(&up, &g), (&down, &gbar)] {
            let mut ops: Vec<Option<&SparseOperator>> = vec![None; k];
            ops[dual] = Some(a);
            ops[fermion] = Some(b);
            total = total.add(&product.lift(&ops)?.scale_real((n as f64).sqrt()))?;
        }
    }
    Ok(total)
}

#[allow(non_snake_case)]
pub fn build_dirac_R(spec: &TruncationSpec) -> Result<SparseOperator> {
    TripleSpace::right(spec)?.dirac()
}

#[allow(non_snake_case)]
pub fn build_dirac_L(spec: &TruncationSpec) -> Result<SparseOperator> {
    TripleSpace::left(spec)?.dirac()
}

/// Max entry of `∂_R² − 2(N + dρ*(d)/i)`.
pub fn weitzenbock_residual(spec: &TruncationSpec) -> Result<f64> {
    let space = TripleSpace::right(spec)?;
    let d = space.dirac()?;
    d.compose(&d)?.max_abs_diff(&space.weitzenbock_rhs()?)
}

/// Number of states of each energy `0..=e_max` with modes `≤ n_max`;
/// `distinct` counts partitions into distinct parts (fermions).
pub fn weighted_partition_counts(n_max: u32, e_max: u32, distinct: bool) -> Vec<u64> {
    let e = e_max as usize;
    let mut c = vec![0u64; e + 1];
    c[0] = 1;
    for part in 1..=n_max as usize {
        if distinct {
            for s in (part..=e).rev() {
                c[s] += c[s - part];
            }
        } else {
            for s in part..=e {
                c[s] += c[s - part];
            }
        }
    }
    c
}

/// Predicted multiplicities of `∂_R²` eigenvalues `2m`, `m = 0..=E_max`, by
/// counting (boson energy, dual energy, fermion energy) splittings.
pub fn predicted_square_multiplicities(spec: &TruncationSpec) -> Vec<(f64, u64)> {
    let p = weighted_partition_counts(spec.n_max, spec.e_max, false);
    let q = weighted_partition_counts(spec.n_max, spec.e_max, true);
    let e = spec.e_max as usize;
    let mut mult = vec![0u64; e + 1];
    for eb in 0..=e {
        for ed in 0..=e - eb {
            for ef in 0..=e - eb - ed {
                mult[ed + ef] += p[eb] * p[ed] * q[ef];
            }
        }
    }
    mult.into_iter()
        .enumerate()
        .filter(|p| p.1 > 0)
        .map(|(m, c)| (2.0 * m as f64, c))
        .collect()
}

/// Predicted `dim ker ∂_R`: one state per boson monomial.
pub fn predicted_kernel_dim(spec: &TruncationSpec) -> u64 {
    weighted_partition_counts(spec.n_max, spec.e_max, false).iter().sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumRow {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub predicted: u64,
}

impl SpectrumRow {
    pub fn matches(&self) -> bool {
        self.multiplicity as u64 == self.predicted
    }
}

/// Eigenvalues of `∂_R²` with measured and predicted multiplicities.
pub fn square_spectrum_report(spec: &TruncationSpec) -> Result<Vec<SpectrumRow>> {
    let d = build_dirac_R(spec)?;
    let s = opcore::spectrum(&d.compose(&d)?)?;
    let measured = s.multiplicities(1e-8);
    let predicted = predicted_square_multiplicities(spec);
    let mut rows: Vec<SpectrumRow> = predicted
        .iter()
        .map(|&(ev, c)| SpectrumRow {
            eigenvalue: ev,
            multiplicity: measured
                .iter()
                .find(|m| (m.0 - ev).abs() < 1e-6)
                .map(|m| m.1)
                .unwrap_or(0),
            predicted: c,
        })
        .collect();
    for m in &measured {
        if !predicted.iter().any(|p| (p.0 - m.0).abs() < 1e-6) {
            rows.push(SpectrumRow {
                eigenvalue: m.0,
                multiplicity: m.1,
                predicted: 0,
            });
        }
    }
    rows.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue));
    Ok(rows)
}

pub fn spectrum_csv(rows: &[SpectrumRow]) -> String {
    let mut s = String::from("eigenvalue,multiplicity,predicted,match\n");
    for r in rows {
        let _ = writeln!(s, "{:.12},{},{},{}", r.eigenvalue, r.multiplicity, r.predicted, r.matches());
    }
    s
}

/// One energy shell of the estimate scan.
#[derive(Clone, Debug, PartialEq)]
pub struct ShellEstimate {
    /// Eigenvalue of `∂_R²` on the shell.
    pub lambda_sq: f64,
    pub states: usize,
    /// `max ‖dρ*(z_n)φ‖/‖φ‖` over basis states of the shell.
    pub lower_ratio: f64,
    /// `|λ|/√(2n)`.
    pub lower_bound: f64,
    /// `max ‖dρ*(z̄_n)φ‖/‖φ‖`.
    pub raise_ratio: f64,
    /// `|λ|/√(2n) + 1`.
    pub raise_bound: f64,
}

impl ShellEstimate {
    pub fn holds(&self, tol: f64) -> bool {
        self.lower_ratio <= self.lower_bound + tol && self.raise_ratio <= self.raise_bound + tol
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerEstimate {
    pub n: u32,
    pub shells: Vec<ShellEstimate>,
}

impl PerEstimate {
    pub fn max_ratio(&self) -> f64 {
        self.shells.iter().map(|s| s.lower_ratio).fold(0.0, f64::max)
    }

    pub fn violations(&self, tol: f64) -> usize {
        self.shells.iter().filter(|s| !s.holds(tol)).count()
    }

    pub fn shell(&self, lambda_sq: f64) -> Option<&ShellEstimate> {
        self.shells.iter().find(|s| (s.lambda_sq - lambda_sq).abs() < 1e-9)
    }
}

/// Scan of `‖dρ*(z_n)φ‖ ≤ |λ|/√(2n)‖φ‖` and
/// `‖dρ*(z̄_n)φ‖ ≤ (|λ|/√(2n)+1)‖φ‖` over all basis states of the triple
/// space. The raise is taken strictly into a space enlarged by `n`, so no
/// image is lost. Distinct dual monomials have orthogonal images, so the
/// basis maximum is the operator norm on each shell.
pub fn per_estimate(spec: &TruncationSpec, n: u32) -> Result<PerEstimate> {
    if n == 0 || n > spec.n_max {
        return Err(Error::InvalidTruncation(format!("mode {n} outside 1..={}", spec.n_max)));
    }
    let space = TripleSpace::right(spec)?;
    let big_spec = TruncationSpec { e_max: spec.e_max + n, ..*spec };
    let big = TripleSpace::right(&big_spec)?;
    let dual = space.product.factor(Layout::RIGHT.dual);
    let down = fock::dual_lower(dual, n)?;
    let up = fock::dual_raise_into(dual, big.product.factor(Layout::RIGHT.dual), n, Mode::Strict)?;
    let lower = space.product.lift_into(&space.product, &[None, Some(&down), None], true)?;
    let raise_sq = {
        // Identity factors must match, so lift through the enlarged space.
        let embed_b = fock_embed(space.product.factor(0), big.product.factor(0))?;
        let embed_f = fock_embed(space.product.factor(2), big.product.factor(2))?;
        space
            .product
            .lift_into(&big.product, &[Some(&embed_b), Some(&up), Some(&embed_f)], true)?
    };
    let b = space.basis();
    let mut shells: Vec<ShellEstimate> = Vec::new();
    for i in 0..b.dim() {
        let t = space.product.tuple(i);
        let lam_sq = 2.0
            * (space.product.factor(1).energy(t[1]) + space.product.factor(2).energy(t[2])) as f64;
        let phi = Vector::basis_vector(b.clone(), i);
        let norm = phi.norm();
        let lr = lower.apply(&phi)?.norm() / norm;
        let rr = raise_sq.apply(&phi)?.norm() / norm;
        let bound = lam_sq.sqrt() / (2.0 * n as f64).sqrt();
        match shells.iter_mut().find(|s| s.lambda_sq == lam_sq) {
            Some(s) => {
                s.states += 1;
                s.lower_ratio = s.lower_ratio.max(lr);
                s.raise_ratio = s.raise_ratio.max(rr);
            }
            None => shells.push(ShellEstimate {
                lambda_sq: lam_sq,
                states: 1,
                lower_ratio: lr,
                lower_bound: bound,
                raise_ratio: rr,
                raise_bound: bound + 1.0,
            }),
        }
    }
    shells.sort_by(|a, b| a.lambda_sq.total_cmp(&b.lambda_sq));
    Ok(PerEstimate { n, shells })
}

/// Inclusion of a truncated Fock basis into a larger one of the same kind.
fn fock_embed(small: &Arc<Basis>, big: &Arc<Basis>) -> Result<SparseOperator> {
    let mut trip = Vec::with_capacity(small.dim());
    for i in 0..small.dim() {
        let j = big
            .index_of(small.label(i))
            .ok_or_else(|| Error::BasisMismatch(format!("{:?} missing from enlarged basis", small.label(i))))?;
        trip.push((j, i, C64::new(1.0, 0.0)));
    }
    SparseOperator::from_triplets(small.clone(), big.clone(), Grade::Even, trip)
}

/// `b(A) = A/√(1+A²)`.
pub fn bounded_transform(a: &SparseOperator) -> Result<SparseOperator> {
    opcore::spectral_apply(a, |x| x / (1.0 + x * x).sqrt(), 1e-15)
}

pub fn square_spectrum(a: &SparseOperator) -> Result<Spectrum> {
    opcore::spectrum(&a.compose(a)?)
}
