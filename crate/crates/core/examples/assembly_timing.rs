//! Build the default loop cycle at two Hermite caps and time compression.

use std::time::Instant;
use kkindex_core::assembly::build_j_cycle;
use kkindex_core::dirac::build_dirac_L;
use kkindex_core::fock::TruncationSpec;
use kkindex_core::limitspace::SigmaSequence;

fn main() {
    let spec = TruncationSpec::new(3, 8).unwrap();
    for cap in [1u32, 2] {
        let t = Instant::now();
        let c = build_j_cycle(&spec, 3, &SigmaSequence::Pow2, cap).unwrap();
        let b = t.elapsed();
        let v = c.xi_embedding().unwrap();
        let got = v.adjoint().compose(&c.operator).unwrap().compose(&v).unwrap();
        let d = got.max_abs_diff(&build_dirac_L(&spec).unwrap()).unwrap();
        println!("cap {cap} dim {} nnz {} build {:?} total {:?} diff {d:e}", c.dim(), c.operator.nnz(), b, t.elapsed());
        let t = Instant::now();
        let r = c.square_residual().unwrap();
        println!("  square residual {r:e} in {:?}", t.elapsed());
    }
}
