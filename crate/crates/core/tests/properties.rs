use std::sync::Arc;

use kkindex_core::assembly::{
    analytic_index, assemble, build_j_cycle, build_j_cycle_with, compare_indices, level_pattern, ColumnCut, IndexCycle,
};
use kkindex_core::dirac::{self, build_dirac_L, build_dirac_R, kernel, TripleSpace};
use kkindex_core::fock::{self, Kind, TruncationSpec};
use kkindex_core::limitspace::{embed_crossed, frozen_tail_norm, prefix_basis, tail_bound, xi_coeffs, SigmaSequence};
use kkindex_core::opcore::{graded_commutator, inner_product, Basis, Grade, SparseOperator, Vector};
use kkindex_core::rng::Lcg64;
use kkindex_core::twistgroup::{
    convolve, crossed_convolve, level_suite, miso_trials, mishchenko, Cocycle, Cyclotomic,
    Extension, FiniteAbelianGroup, GSet, GroupAlgebraElement,
};
use kkindex_core::C64;
use proptest::prelude::*;

fn kind_of(k: u8) -> Kind {
    [Kind::Boson, Kind::DualBoson, Kind::Fermion][k as usize % 3]
}

fn basis(n: u32, e: u32, k: u8) -> Arc<Basis> {
    fock::enumerate_basis(&TruncationSpec::new(n, e).unwrap(), kind_of(k))
}

fn random_vector(b: &Arc<Basis>, rng: &mut Lcg64) -> Vector {
    let v: Vec<C64> = (0..b.dim()).map(|_| rng.complex()).collect();
    Vector::from_dense(b.clone(), &v).unwrap()
}

fn random_op(b: &Arc<Basis>, grade: Grade, rng: &mut Lcg64) -> SparseOperator {
    let n = b.dim();
    let trip = (0..3 * n)
        .map(|_| (rng.below(n as u64) as usize, rng.below(n as u64) as usize, rng.complex()))
        .collect();
    SparseOperator::from_triplets(b.clone(), b.clone(), grade, trip).unwrap()
}

fn z_n(n: u32, m: u32, tau: Option<&[Vec<i64>]>) -> Arc<Extension> {
    let g = FiniteAbelianGroup::cyclic(n);
    let c = match tau {
        Some(f) => Cocycle::bilinear(g, m, f).unwrap(),
        None => Cocycle::trivial(g, m),
    };
    Arc::new(Extension::new(c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inner_product_is_hermitian_and_positive(n in 1u32..4, e in 0u32..7, k in 0u8..3, seed in any::<u64>()) {
        let b = basis(n, e, k);
        let mut rng = Lcg64::new(seed);
        let (v, w) = (random_vector(&b, &mut rng), random_vector(&b, &mut rng));
        let vw = inner_product(&v, &w).unwrap();
        let wv = inner_product(&w, &v).unwrap();
        prop_assert!((vw - wv.conj()).norm() <= 1e-12 * (1.0 + vw.norm()));
        let vv = inner_product(&v, &v).unwrap();
        prop_assert!(vv.re > 0.0 && vv.im.abs() <= 1e-12 * vv.re);
    }

    #[test]
    fn graded_commutator_antisymmetric_and_bilinear(seed in any::<u64>(), ga in 0u8..2, gb in 0u8..2) {
        let b = basis(3, 5, 2);
        let mut rng = Lcg64::new(seed);
        let (a, c, d) = (
            random_op(&b, Grade::from_degree(ga), &mut rng),
            random_op(&b, Grade::from_degree(gb), &mut rng),
            random_op(&b, Grade::from_degree(gb), &mut rng),
        );
        let sign = if ga * gb % 2 == 1 { 1.0 } else { -1.0 };
        let ab = graded_commutator(&a, &c).unwrap();
        let ba = graded_commutator(&c, &a).unwrap();
        prop_assert!(ab.max_abs_diff(&ba.scale_real(sign)).unwrap() == 0.0);
        let s = rng.complex();
        let lin = graded_commutator(&a, &c.add(&d.scale(s)).unwrap()).unwrap();
        let sum = ab.add(&graded_commutator(&a, &d).unwrap().scale(s)).unwrap();
        prop_assert!(lin.max_abs_diff(&sum).unwrap() <= 1e-12 * (1.0 + sum.max_abs()));
    }

    #[test]
    fn adjoint_involutive_conjugate_linear_antimultiplicative(n in 1u32..4, e in 1u32..6, k in 0u8..3, seed in any::<u64>()) {
        let b = basis(n, e, k);
        let mut rng = Lcg64::new(seed);
        let (a, c) = (random_op(&b, Grade::Even, &mut rng), random_op(&b, Grade::Even, &mut rng));
        prop_assert!(a.adjoint().adjoint().max_abs_diff(&a).unwrap() <= 1e-12 * (1.0 + a.max_abs()));
        let s = rng.complex();
        let l = a.scale(s).adjoint();
        prop_assert!(l.max_abs_diff(&a.adjoint().scale(s.conj())).unwrap() <= 1e-12 * (1.0 + l.max_abs()));
        let ac = a.compose(&c).unwrap().adjoint();
        let ca = c.adjoint().compose(&a.adjoint()).unwrap();
        prop_assert!(ac.max_abs_diff(&ca).unwrap() <= 1e-10 * (1.0 + ac.max_abs()));
        let (v, w) = (random_vector(&b, &mut rng), random_vector(&b, &mut rng));
        let lhs = inner_product(&a.adjoint().apply(&v).unwrap(), &w).unwrap();
        let rhs = inner_product(&v, &a.apply(&w).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn convolution_associative_and_involution_antimultiplicative(n in 2u32..5, seed in any::<u64>(), k in 0i64..3) {
        let m = n;
        let ext = z_n(n, m, Some(&[vec![1]]));
        let mut rng = Lcg64::new(seed);
        let r = |rng: &mut Lcg64, k: i64| GroupAlgebraElement::<Cyclotomic>::random(ext.clone(), k.rem_euclid(m as i64), rng);
        let (a, b, c) = (r(&mut rng, k), r(&mut rng, k), r(&mut rng, k));
        let l = convolve(&convolve(&a, &b).unwrap(), &c).unwrap();
        let rr = convolve(&a, &convolve(&b, &c).unwrap()).unwrap();
        prop_assert!(l.same(&rr));
        let star = convolve(&a, &b).unwrap().involution();
        prop_assert!(star.same(&convolve(&b.involution(), &a.involution()).unwrap()));
    }

    #[test]
    fn level_orthogonality(n in 2u32..5, rep in 0i64..4, seed in any::<u64>()) {
        let ext = z_n(n, n, Some(&[vec![1]]));
        for case in level_suite::<Cyclotomic>(ext, rep.rem_euclid(n as i64), seed).unwrap() {
            prop_assert!(case.ok(), "{case:?}");
        }
    }

    #[test]
    fn mishchenko_is_a_projection(n in 1u32..7, seed in any::<u64>()) {
        let g = FiniteAbelianGroup::cyclic(n);
        let mut rng = Lcg64::new(seed);
        let raw: Vec<f64> = (0..n).map(|_| 0.05 + rng.next_f64()).collect();
        let s: f64 = raw.iter().sum();
        let c: Vec<f64> = raw.iter().map(|x| x / s).collect();
        let p = mishchenko(&c, Arc::new(GSet::translation(&g))).unwrap();
        let pp = crossed_convolve(&p, &p).unwrap();
        let d = pp.values().iter().zip(p.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(d <= 1e-12);
        prop_assert!(p.involution().values().iter().zip(p.values()).all(|(a, b)| (a - b).norm() <= 1e-15));
    }

    #[test]
    fn m_iso_identities(seed in any::<u64>()) {
        let r = miso_trials(z_n(3, 3, Some(&[vec![1]])), 3, seed).unwrap();
        prop_assert!(r.isometry <= 1e-10 && r.right <= 1e-10 && r.left <= 1e-10, "{r:?}");
    }

    #[test]
    fn commutation_relations(n in 1u32..5, e in 0u32..10) {
        for row in fock::relation_suite(&TruncationSpec::new(n, e).unwrap()).unwrap() {
            prop_assert!(row.residual <= 1e-12, "{} {}", row.name, row.residual);
        }
    }

    #[test]
    fn dirac_operators_odd_selfadjoint_energy_preserving(n in 1u32..4, e in 0u32..7) {
        let sp = TruncationSpec::new(n, e).unwrap();
        for d in [build_dirac_R(&sp).unwrap(), build_dirac_L(&sp).unwrap()] {
            prop_assert_eq!(d.grade(), Grade::Odd);
            prop_assert!(d.respects_grade());
            prop_assert!(d.is_self_adjoint(1e-14).unwrap());
            prop_assert!(d.preserves_energy());
        }
        prop_assert!(dirac::weitzenbock_residual(&sp).unwrap() <= 1e-12);
    }

    #[test]
    fn kernel_is_boson_times_vacuum(n in 1u32..4, e in 0u32..6) {
        let sp = TruncationSpec::new(n, e).unwrap();
        let space = TripleSpace::right(&sp).unwrap();
        let ker = kernel(&space.dirac().unwrap()).unwrap();
        prop_assert_eq!(ker.len(), fock::enumerate_basis(&sp, Kind::Boson).dim());
        let vac = space.vacuum_sector();
        for v in ker {
            for (i, c) in v.iter() {
                prop_assert!(c.norm() <= 1e-10 || vac.contains(&i));
            }
        }
    }

    #[test]
    fn frozen_tails_below_bound(m in 0usize..12) {
        let s = SigmaSequence::Pow2;
        prop_assert!(frozen_tail_norm(m, &s).unwrap() <= tail_bound(m, &s).unwrap());
    }

    #[test]
    fn embed_crossed_is_star_homomorphism(n in 1usize..3, seed in any::<u64>(), sigma in 0.1f64..1.0) {
        let src = prefix_basis(n, 2).unwrap();
        let dst = prefix_basis(n + 1, 2).unwrap();
        let xi = xi_coeffs(sigma, 2).unwrap();
        let mut rng = Lcg64::new(seed);
        let b = src.basis().clone();
        let (a, c) = (random_op(&b, Grade::Even, &mut rng), random_op(&b, Grade::Even, &mut rng));
        let e = |k: &SparseOperator| embed_crossed(k, &src, &xi, &dst).unwrap();
        let prod = e(&a.compose(&c).unwrap());
        let scale = 1.0 + prod.max_abs();
        prop_assert!(prod.max_abs_diff(&e(&a).compose(&e(&c)).unwrap()).unwrap() <= 1e-12 * scale);
        prop_assert!(e(&a.adjoint()).max_abs_diff(&e(&a).adjoint()).unwrap() <= 1e-12 * (1.0 + a.max_abs()));
    }

    #[test]
    fn level_pattern_on_cyclic_models(n in 2u32..5, seed in any::<u64>()) {
        let tau = Cocycle::bilinear(FiniteAbelianGroup::cyclic(n), n, &[vec![1]]).unwrap();
        for row in level_pattern(&tau, seed).unwrap() {
            prop_assert_eq!(row.zero, row.k != 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn assembly_reproduces_left_dirac(n in 1u32..3, e in 1u32..5, m in 1usize..3, split in any::<bool>()) {
        let m = m.min(n as usize);
        let sp = TruncationSpec::new(n, e).unwrap();
        let cut = if split { ColumnCut::Split } else { ColumnCut::Joint };
        let c = build_j_cycle_with(&sp, m, &SigmaSequence::Pow2, 2, cut).unwrap();
        let a = assemble(&c).unwrap();
        prop_assert!(a.compressed.max_abs_diff(&c.left.dirac().unwrap()).unwrap() <= 1e-10);
        let r = compare_indices(&a.index, &analytic_index(&sp, cut).unwrap(), 1).unwrap();
        prop_assert!(r.worst() <= 1e-10, "{r:?}");
    }

    #[test]
    fn module_axioms_hold(n in 1u32..4, e in 1u32..5, seed in any::<u64>()) {
        let sp = TruncationSpec::new(n, e).unwrap();
        for cyc in [IndexCycle::kk_index(&sp, ColumnCut::Split).unwrap(), analytic_index(&sp, ColumnCut::Split).unwrap()] {
            let a = cyc.module_axioms(seed, 2).unwrap();
            prop_assert!(a.associativity <= 1e-10 && a.compatibility <= 1e-10 && a.linearity <= 1e-10, "{a:?}");
            prop_assert!(a.positivity >= -1e-10);
        }
    }
}

#[test]
fn joint_cut_is_not_a_module() {
    let sp = TruncationSpec::new(2, 3).unwrap();
    assert!(IndexCycle::kk_index(&sp, ColumnCut::Joint).unwrap().module_axioms(1, 1).is_err());
}

#[test]
fn default_cycle_matches_left_dirac() {
    let sp = TruncationSpec::new(2, 5).unwrap();
    let c = build_j_cycle(&sp, 2, &SigmaSequence::Pow2, 2).unwrap();
    assert!(assemble(&c).unwrap().compressed.max_abs_diff(&build_dirac_L(&sp).unwrap()).unwrap() < 1e-12);
}
