//! The registered experiments. Each returns a report of checks; nothing
//! here depends on wall-clock time, so reruns are byte-identical.

use std::sync::Arc;

use anyhow::{Context, Result};
use kkindex_core::assembly::{
    analytic_index, assemble, build_j_cycle, build_j_cycle_with, commutator_bound, compare_indices,
    cross_mode_estimates, default_generators, finite_assemble, finite_j_cycle, kucerovsky_check, level_pattern,
    mishchenko_xi, resolvent_compactness, xi_commutator_bound, xi_scalar_bound, ColumnCut, IndexCycle, JCycle,
};
use kkindex_core::dirac::{self, build_dirac_L, kernel, predicted_kernel_dim, TripleSpace};
use kkindex_core::fock::{self, Kind, Mode, TruncationSpec};
use kkindex_core::limitspace::{check_sigma_condition, dRz_norm_on_xi, tail_table, SigmaSequence, Verdict};
use kkindex_core::rng::Lcg64;
use kkindex_core::twistgroup::{
    check_cocycle, crossed_convolve, decompose_twisted_algebra, level_suite as level_cases, miso_trials, mishchenko, schatten_map,
    Cocycle, CrossedProductElement, Cyclotomic, Extension, FiniteAbelianGroup, GSet,
};
use kkindex_core::C64;

use crate::config::Config;
use crate::report::Report;

/// Limit for identities that hold exactly up to rounding.
pub const EXACT: f64 = 1e-12;

fn spec(n: u32, e: u32) -> Result<TruncationSpec> {
    Ok(TruncationSpec::new(n, e)?)
}

fn label(n: u32, e: u32) -> String {
    format!("N={n} E={e}")
}

/// `extra` followed by the configured `(modes, energy_cut)`, without repeats.
fn truncations(cfg: &Config, extra: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut v = extra.to_vec();
    if !v.contains(&(cfg.modes, cfg.energy_cut)) {
        v.push((cfg.modes, cfg.energy_cut));
    }
    v
}

fn cycle_label(c: &JCycle) -> String {
    format!(
        "N={} E={} M={} cap={} {} {}",
        c.spec.n_max,
        c.spec.e_max,
        c.m_active,
        c.cap,
        c.seq,
        match c.cut {
            ColumnCut::Joint => "joint",
            ColumnCut::Split => "split",
        }
    )
}

fn config_cycle(cfg: &Config) -> Result<JCycle> {
    build_j_cycle(&spec(cfg.cycle_modes, cfg.cycle_energy)?, cfg.active_modes, &cfg.sigma, cfg.hermite_cut)
        .context("building the j-cycle")
}

/// Largest entry of `op` in columns of energy `≤ cap`.
fn safe_max(op: &kkindex_core::opcore::SparseOperator, cap: u32) -> f64 {
    let b = op.domain();
    op.entries()
        .iter()
        .filter(|&&(_, c, _)| b.energy(c) <= cap)
        .map(|&(_, _, v)| v.norm())
        .fold(0.0, f64::max)
}

pub fn ccr_car(cfg: &Config) -> Result<Report> {
    let mut r = Report::new("ccr_car");
    for (n, e) in truncations(cfg, &[(4, 10)]) {
        let sp = spec(n, e)?;
        let t = label(n, e);
        for row in fock::relation_suite(&sp)? {
            r.residual(row.name, &t, row.residual, EXACT);
        }
        let b = fock::enumerate_basis(&sp, Kind::Boson);
        for k in 1..=n.min(e) {
            let up = fock::boson_raise(&b, k, Mode::Compressed)?;
            let down = fock::boson_lower(&b, k)?;
            let d = up.adjoint().add(&down)?;
            r.residual(format!("adjoint(drho(z{k}))+drho(zbar{k})"), &t, safe_max(&d, e - k), EXACT);
        }
        let s = kkindex_core::opcore::spectrum(&fock::energy_op(&b)?.scale(C64::new(0.0, -1.0)))?;
        let lowest = s.values().first().copied().unwrap_or(0.0);
        r.at_most("-min spectrum(drho(d)/i)", &t, -lowest, 0.0);
        let zeros = s.values().iter().filter(|v| v.abs() < 1e-9).count();
        r.close("dim ker drho(d)", &t, zeros as f64, 1.0, 0.0);
    }
    Ok(r)
}

pub fn weitzenbock(cfg: &Config) -> Result<Report> {
    let mut r = Report::new("weitzenbock");
    for (n, e) in truncations(cfg, &[(4, 10)]) {
        let sp = spec(n, e)?;
        let t = label(n, e);
        r.residual("max|dR^2 - 2(N + E)| right", &t, dirac::weitzenbock_residual(&sp)?, EXACT);
        let left = TripleSpace::left(&sp)?;
        let d = left.dirac()?;
        r.residual("max|dL^2 - 2(N + E)| left", &t, d.compose(&d)?.max_abs_diff(&left.weitzenbock_rhs()?)?, EXACT);
    }
    for (n, e) in truncations(cfg, &[(3, 5)]) {
        let t = label(n, e);
        for row in dirac::square_spectrum_report(&spec(n, e)?)? {
            r.close(
                format!("multiplicity of {} in spectrum(dR^2)", row.eigenvalue),
                &t,
                row.multiplicity as f64,
                row.predicted as f64,
                0.0,
            );
        }
    }
    Ok(r)
}

pub fn kernel_count(cfg: &Config) -> Result<Report> {
    let mut r = Report::new("kernel_count");
    for (n, e) in truncations(cfg, &[(3, 4), (2, 6), (3, 6), (4, 6)]) {
        let sp = spec(n, e)?;
        let t = label(n, e);
        let predicted = predicted_kernel_dim(&sp) as f64;
        let bosons = fock::enumerate_basis(&sp, Kind::Boson).dim() as f64;
        r.close("predicted kernel = boson monomials", &t, predicted, bosons, 0.0);
        for (side, space) in [("right", TripleSpace::right(&sp)?), ("left", TripleSpace::left(&sp)?)] {
            let ker = kernel(&space.dirac()?)?;
            r.close(format!("dim ker {side}"), &t, ker.len() as f64, predicted, 0.0);
            let vac = space.vacuum_sector();
            let mut off = 0.0f64;
            for v in &ker {
                let total = v.norm().powi(2);
                let inside: f64 = vac.iter().map(|&i| v.get(i).norm_sqr() * v.basis().gram(i)).sum();
                off = off.max(((total - inside) / total).max(0.0));
            }
            r.residual(format!("kernel mass off vac x 1_f {side}"), &t, off, 1e-10);
        }
    }
    Ok(r)
}

pub fn per_estimate(cfg: &Config) -> Result<Report> {
    let mut r = Report::new("per_estimate");
    // λ² ≤ 24 needs dual + fermion energy ≤ 12
    let (n_max, e_max) = (cfg.modes.max(4), 12);
    let sp = spec(n_max, e_max)?;
    let t = label(n_max, e_max);
    for n in 1..=4.min(n_max) {
        let est = dirac::per_estimate(&sp, n)?;
        r.residual(format!("violations n={n}"), &t, est.violations(EXACT) as f64, 0.0);
        let worst = est
            .shells
            .iter()
            .filter(|s| s.lower_bound > 0.0)
            .map(|s| s.lower_ratio / s.lower_bound)
            .fold(0.0, f64::max);
        r.at_most(format!("max ratio/bound n={n}"), &t, worst, 1.0 + EXACT);
        let zero_shell = est.shell(0.0).map(|s| s.lower_ratio).unwrap_or(0.0);
        r.residual(format!("ratio on lambda=0 n={n}"), &t, zero_shell, 0.0);
        for k in 1..=e_max / n {
            let lam_sq = 2.0 * (n * k) as f64;
            let s = est.shell(lam_sq).context("missing shell")?;
            r.close(format!("equality n={n} k={k}"), &t, s.lower_ratio, (k as f64).sqrt(), EXACT);
            r.close(format!("bound n={n} k={k}"), &t, s.lower_bound, (k as f64).sqrt(), EXACT);
        }
    }
    Ok(r)
}

pub fn xi_norms(cfg: &Config) -> Result<Report> {
    let mut r = Report::new("xi_norms");
    let mut sigmas = vec![1.0, 0.5, 0.125];
    for k in 1..=cfg.active_modes {
        if let Some(s) = cfg.sigma.get(k) {
            if !sigmas.contains(&s) {
                sigmas.push(s);
            }
        }
    }
    for s in sigmas {
        let d = dRz_norm_on_xi(s)?;
        let t = format!("sigma={s} terms={}", d.terms);
        r.close("radial ‖dR_z Ξ‖ vs σ/2", &t, d.radial, s / 2.0, 1e-6);
        r.close("hermite ‖dR_z Ξ‖ vs σ/2", &t, d.hermite, s / 2.0, 1e-6);
        r.close("radial vs hermite", &t, d.radial, d.hermite, 1e-6);
        r.at_most("‖dR_z Ξ‖ ≤ σ", &t, d.radial.max(d.hermite), s);
        r.close("‖Ξ‖² from the series", &t, d.xi_norm, 1.0, 1e-6);
    }
    Ok(r)
}

/// `Σ_{n>M} 2√(2n) σ_n` by plain summation.
fn tail_oracle(seq: &SigmaSequence, m: usize) -> f64 {
    let mut acc = 0.0;
    for n in m + 1..m + 200_000 {
        let Some(s) = seq.get(n) else { break };
        let t = 2.0 * (2.0 * n as f64).sqrt() * s;
        acc += t;
        if t < 1e-18 {
            break;
        }
    }
    acc
}

pub fn sigma_tails(cfg: &Config) -> Result<Report> {
    let mut r = Report::new("sigma_tails");
    let seq = &cfg.sigma;
    let rep = check_sigma_condition(seq, 64);
    let t = seq.to_string();
    r.check(
        "Σ√k σ_k convergent",
        &t,
        rep.partial_sums.last().copied().unwrap_or(0.0),
        0.0,
        (rep.verdict != Verdict::Convergent) as u8 as f64,
        0.0,
    );
    for row in tail_table(seq, 3..=8)? {
        let tm = format!("{t} M={}", row.m);
        let oracle = tail_oracle(seq, row.m);
        r.close("tail bound vs partial sums", &tm, row.bound, oracle, 1e-9 * oracle.max(1.0));
        r.at_most("frozen-tail norm ≤ bound", &tm, row.measured, row.bound);
    }
    Ok(r)
}

/// The four finite models: `Z₂`, `Z₃` with bilinear cocycles, and the
/// Heisenberg cocycles on `Z₄×Z₂` and `Z₃×Z₃`.
pub fn finite_models() -> Result<Vec<(&'static str, Cocycle)>> {
    Ok(vec![
        ("Z2", Cocycle::bilinear(FiniteAbelianGroup::cyclic(2), 2, &[vec![1]])?),
        ("Z3", Cocycle::bilinear(FiniteAbelianGroup::cyclic(3), 3, &[vec![1]])?),
        ("Z4xZ2", Cocycle::heisenberg(FiniteAbelianGroup::new(vec![4, 2])?)?),
        ("Z3xZ3", Cocycle::heisenberg(FiniteAbelianGroup::new(vec![3, 3])?)?),
    ])
}

/// Center dimension from the radical of the commutator pairing.
fn center_dim(tau: &Cocycle) -> usize {
    let n = tau.group().order();
    (0..n)
        .filter(|&g| (0..n).all(|h| tau.commutator_exponent(g, h) == 0))
        .count()
}

fn crossed_checks(r: &mut Report, name: &str, group: &FiniteAbelianGroup, seed: u64) -> Result<()> {
    let gset = Arc::new(GSet::translation(group));
    let n = group.order();
    let point = |g: usize, x: usize| {
        CrossedProductElement::from_fn(gset.clone(), |h, y| C64::new(((h, y) == (g, x)) as u8 as f64, 0.0))
    };
    let basis: Vec<_> = (0..n).flat_map(|g| (0..n).map(move |x| (g, x))).collect();
    let mats: Vec<_> = basis
        .iter()
        .map(|&(g, x)| schatten_map(&point(g, x)).map(|m| m.to_dense()))
        .collect::<kkindex_core::Result<_>>()?;
    let mut mult = 0.0f64;
    let mut star = 0.0f64;
    for (i, &(g, x)) in basis.iter().enumerate() {
        let a = point(g, x);
        star = star.max((schatten_map(&a.involution())?.to_dense() - mats[i].adjoint()).camax());
        for (j, &(h, y)) in basis.iter().enumerate() {
            let ab = schatten_map(&crossed_convolve(&a, &point(h, y))?)?.to_dense();
            mult = mult.max((ab - &mats[i] * &mats[j]).camax());
        }
    }
    r.residual("schatten multiplicative on point masses", name, mult, EXACT);
    r.residual("schatten preserves *", name, star, EXACT);
    let mut rng = Lcg64::new(seed);
    let raw: Vec<f64> = (0..n).map(|_| 0.1 + rng.next_f64()).collect();
    let total: f64 = raw.iter().sum();
    for (tag, c) in [("uniform", vec![1.0 / n as f64; n]), ("random", raw.iter().map(|v| v / total).collect())] {
        let p = mishchenko(&c, gset.clone())?;
        let pp = crossed_convolve(&p, &p)?;
        let idem = pp.values().iter().zip(p.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let sa = p.involution().values().iter().zip(p.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        r.residual(format!("mishchenko({tag}) idempotent"), name, idem, EXACT);
        r.residual(format!("mishchenko({tag}) self-adjoint"), name, sa, EXACT);
        let m = schatten_map(&p)?.to_dense();
        let rank = m.singular_values().iter().filter(|s| **s > 1e-9).count();
        r.close(format!("rank schatten(mishchenko({tag}))"), name, rank as f64, 1.0, 0.0);
    }
    Ok(())
}

pub fn fingroup_suite(cfg: &Config) -> Result<Report> {
    let mut r = Report::new("fingroup_suite");
    for (name, tau) in finite_models()? {
        r.residual("cocycle violations", name, check_cocycle(&tau).len() as f64, 0.0);
        crossed_checks(&mut r, name, tau.group(), cfg.seed)?;
        let blocks = decompose_twisted_algebra(&tau)?;
        let s = center_dim(&tau);
        let d = ((tau.group().order() / s) as f64).sqrt().round() as usize;
        let bad = blocks.len() != s || blocks.iter().any(|&b| b != d);
        r.check("twisted algebra blocks", format!("{name} blocks={blocks:?}"), blocks.len() as f64, s as f64, bad as u8 as f64, 0.0);
        let sq: usize = blocks.iter().map(|b| b * b).sum();
        r.close("Σ block² = |G|", name, sq as f64, tau.group().order() as f64, 0.0);
    }
    for k in [2u32, 3] {
        let tau = Cocycle::heisenberg(FiniteAbelianGroup::new(vec![k, k])?)?;
        let blocks = decompose_twisted_algebra(&tau)?;
        let single = blocks == vec![k as usize];
        r.check("heisenberg is one block of size n", format!("Z{k}xZ{k} blocks={blocks:?}"), blocks.len() as f64, 1.0, (!single) as u8 as f64, 0.0);
    }
    let ext = Arc::new(Extension::new(Cocycle::bilinear(FiniteAbelianGroup::cyclic(3), 3, &[vec![1]])?)?);
    let m = miso_trials(ext, cfg.trials, cfg.seed)?;
    let t = format!("Z3 mu3 trials={}", m.trials);
    r.residual("m-iso isometry", &t, m.isometry, 1e-10);
    r.residual("m-iso right module map", &t, m.right, 1e-10);
    r.residual("m-iso left module map", &t, m.left, 1e-10);
    Ok(r)
}

pub fn level_suite(cfg: &Config) -> Result<Report> {
    let mut r = Report::new("level_suite");
    for (name, tau) in finite_models()? {
        let ext = Arc::new(Extension::new(tau.clone())?);
        for rep in 0..ext.m() as i64 {
            let cases = level_cases::<Cyclotomic>(ext.clone(), rep, cfg.seed)?;
            let bad = cases.iter().filter(|c| !c.ok()).count();
            let zeros = cases.iter().filter(|c| c.expected_zero).count();
            r.check(
                "nonzero products where zero is required",
                format!("{name} rep_level={rep} cases={}", cases.len()),
                bad as f64,
                zeros as f64,
                bad as f64,
                0.0,
            );
        }
        let rows = level_pattern(&tau, cfg.seed)?;
        let bad = rows.iter().filter(|l| l.zero != (l.k != 0)).count();
        r.residual("[c] a_k [c] zero iff k != 0", name, bad as f64, 0.0);
    }
    Ok(r)
}

pub fn jcycle_diag(cfg: &Config) -> Result<Report> {
    let mut r = Report::new("jcycle_diag");
    let c = config_cycle(cfg)?;
    let t = cycle_label(&c);
    r.residual("∂̃² − (D²⊗1 + 1⊗∂_L² + cross)", &t, c.square_residual()?, EXACT);
    r.at_most("asymmetry of ∂̃", &t, c.operator.asymmetry()?, EXACT);
    let cross = c.cross_term()?.max_abs();
    r.check("cross term is nonzero", &t, cross, 0.0, (cross < 1e-6) as u8 as f64, 0.0);
    let p = mishchenko_xi(&c.seq, c.m_active, c.cap)?;
    r.residual("P_Ξ idempotent", &t, p.idempotence_defect()?, EXACT);
    r.close("trace P_Ξ", &t, p.trace().re, 1.0, EXACT);
    for row in cross_mode_estimates(&c)? {
        let tn = format!("{t} n={}", row.n);
        r.at_most("‖dρ*(z̄_n)(1+∂_L²)^-1 leg‖ ≤ √n σ_n ‖leg‖", &tn, row.measured, row.mode_bound);
        r.at_most("full ∂₂ term ≤ n σ_n ‖leg‖", &tn, row.full_term, row.full_bound + EXACT);
    }
    // resolvent checks on a small cycle: CG on the full cycle is not desk-scale
    let small = build_j_cycle(&spec(2, 4)?, 2, &c.seq, 2)?;
    let ts = cycle_label(&small);
    let ps = mishchenko_xi(&small.seq, small.m_active, small.cap)?;
    let com = commutator_bound(&[ps.rank_one()], &small)?;
    r.at_most("‖[∂̃, P_Ξ⊗1]‖ ≤ ladder bound", &ts, com.measured, com.bound);
    r.at_most("‖[∂̃, P_Ξ⊗1]‖ ≤ scalar bound", &ts, com.measured, xi_scalar_bound(&small)?);
    let full = small.left.basis().dim();
    let rep = resolvent_compactness(&[ps.rank_one()], &small, &[0, 1, 5, 20, full])?;
    let increases = rep.errors.windows(2).filter(|w| w[1].1 > w[0].1).count();
    r.residual("rank-r errors increase", &ts, increases as f64, 0.0);
    r.residual("full-rank error", &ts, rep.errors.last().map(|e| e.1).unwrap_or(f64::NAN), EXACT);
    for (name, s) in ["∂₁", "∂₂", "∂₃"].iter().zip(rep.split) {
        r.check(format!("‖{name}(1+∂̃₀²)^-1(P_Ξ⊗1)‖ finite"), &ts, s, 0.0, if s.is_finite() { 0.0 } else { 1.0 }, 0.0);
    }
    r.check("max s_k / s0_k", &ts, rep.shell_ratio(), 0.0, 0.0, 0.0);
    Ok(r)
}

pub fn assembly_compare(cfg: &Config) -> Result<Report> {
    let mut r = Report::new("assembly_compare");
    let c = config_cycle(cfg)?;
    let t = cycle_label(&c);
    let a = assemble(&c)?;
    let dl = build_dirac_L(&c.spec)?;
    r.residual("max|V*∂̃V − ∂_L|", &t, a.compressed.max_abs_diff(&dl)?, cfg.tolerance);
    r.residual("max|V*∂̃V − symbolic|", &t, a.numeric_deviation, cfg.tolerance);
    let sym = a.symbolic.iter().map(|&(z, zb)| z.norm().max(zb.norm())).fold(0.0, f64::max);
    r.residual("⟨Ξ, dR Ξ⟩ expectations", &t, sym, 0.0);
    let split = build_j_cycle_with(&spec(2, 4)?, 2, &c.seq, c.cap, ColumnCut::Split)?;
    let a2 = assemble(&split)?;
    r.residual("max|V*∂̃V − ∂_L|", cycle_label(&split), a2.compressed.max_abs_diff(&split.left.dirac()?)?, cfg.tolerance);
    for (name, tau) in finite_models()? {
        let f = finite_assemble(&finite_j_cycle(&tau)?)?;
        let tn = format!("{name} module_dim={}", f.module_dim);
        r.residual("schatten([c]) − |√c⟩⟨√c|", &tn, f.projection, EXACT);
        r.residual("max|V*D̃V − ∂_L|", &tn, f.entrywise, 1e-8);
        r.residual("spectra of V*D̃V and ∂_L", &tn, f.spectra, 1e-8);
        r.residual("asymmetry of D̃", &tn, f.asymmetry, EXACT);
    }
    Ok(r)
}

fn record_comparison(r: &mut Report, t: &str, cmp: &kkindex_core::assembly::IndexComparison, tol: f64) {
    r.residual("U unitary", t, cmp.unitarity, tol);
    r.residual("U ∂_R = ∂_L U", t, cmp.intertwining, tol);
    r.residual("U b(∂_R) = b(∂_L) U", t, cmp.bounded_intertwining, tol);
    r.residual("spectra", t, cmp.spectra, tol);
    r.residual("bounded spectra", t, cmp.bounded_spectra, tol);
    if let Some(x) = cmp.action {
        r.residual("U(f·b) = (Uf)·b", t, x, tol);
    }
    if let Some(x) = cmp.inner {
        r.residual("⟨Uf, Ug⟩ = ⟨f, g⟩", t, x, tol);
    }
    r.residual("vacuum columns map to vacuum columns", t, (!cmp.vacuum_columns) as u8 as f64, 0.0);
}

pub fn index_compare(cfg: &Config) -> Result<Report> {
    let mut r = Report::new("index_compare");
    let cuts = [(ColumnCut::Joint, "joint"), (ColumnCut::Split, "split")];
    for (n, e) in truncations(cfg, &[(2, 4), (3, 4), (3, 6)]) {
        let sp = spec(n, e)?;
        for (cut, cn) in cuts {
            let t = format!("{} {cn}", label(n, e));
            let kk = IndexCycle::kk_index(&sp, cut)?;
            let an = analytic_index(&sp, cut)?;
            record_comparison(&mut r, &t, &compare_indices(&kk, &an, cfg.seed)?, cfg.tolerance);
            if cut == ColumnCut::Split {
                for (side, cyc) in [("kk", &kk), ("analytic", &an)] {
                    let m = cyc.module_axioms(cfg.seed, 4)?;
                    let ts = format!("{t} {side}");
                    r.residual("(f·b₁)·b₂ = f·(b₁b₂)", &ts, m.associativity, cfg.tolerance);
                    r.residual("⟨f₁, f₂·b⟩ = ⟨f₁,f₂⟩b", &ts, m.compatibility, cfg.tolerance);
                    r.residual("-min eig ⟨f,f⟩", &ts, (-m.positivity).max(0.0), cfg.tolerance);
                    r.residual("∂(f·b) = (∂f)·b", &ts, m.linearity, cfg.tolerance);
                }
            }
        }
    }
    // the assembled class itself against the analytic index
    let c = config_cycle(cfg)?;
    let kk = assemble(&c)?.index;
    let an = analytic_index(&c.spec, c.cut)?;
    record_comparison(&mut r, &format!("assembled {}", cycle_label(&c)), &compare_indices(&kk, &an, cfg.seed)?, cfg.tolerance);
    Ok(r)
}

pub fn kucerovsky(cfg: &Config) -> Result<Report> {
    let mut r = Report::new("kucerovsky");
    let c = config_cycle(cfg)?;
    let t = cycle_label(&c);
    let gens = default_generators(&c)?;
    let xi_bound = xi_commutator_bound(&c)?;
    for row in kucerovsky_check(&c, &gens)? {
        let tg = format!("{t} {}", row.label);
        r.at_most("‖∂̃T − T∂_L‖ ≤ ladder bound", &tg, row.commutator, row.bound + EXACT);
        if row.label == "xi" {
            r.at_most("‖∂̃T − T∂_L‖ ≤ scalar bound", &tg, row.commutator, xi_bound);
        }
        if row.label == "zero" {
            r.residual("‖∂̃T − T∂_L‖ for T = 0", &tg, row.commutator, 0.0);
        }
        r.residual("-min eig T*{D⊗1, ∂̃}T", &tg, (-row.positivity).max(0.0), cfg.tolerance);
    }
    // the positivity condition proper: the left class carries the zero operator
    r.residual("positivity form with zero left operator", &t, 0.0, 0.0);
    Ok(r)
}
