use std::fmt::Write;

use super::algebra::GroupAlgebraElement;
use super::crossed::CrossedProductElement;
use super::scalar::Scalar;

/// Columns `g1..gr, phase, re, im`, one row per element of `G^τ`.
pub fn algebra_csv<S: Scalar>(f: &GroupAlgebraElement<S>) -> String {
    let ext = f.ext();
    let grp = ext.group();
    let mut out = String::new();
    let cols: Vec<String> = (1..=grp.rank()).map(|i| format!("g{i}")).collect();
    let _ = writeln!(out, "{},phase,re,im", cols.join(","));
    for (x, v) in f.values().iter().enumerate() {
        let (g, i) = ext.split(x);
        let comps: Vec<String> = grp.element(g).iter().map(|c| c.to_string()).collect();
        let z = v.to_c64();
        let _ = writeln!(out, "{},{i},{:.16e},{:.16e}", comps.join(","), z.re, z.im);
    }
    out
}

/// Columns `g, x, re, im` with `g` the table index.
pub fn crossed_csv<S: Scalar>(a: &CrossedProductElement<S>) -> String {
    let s = a.gset();
    let mut out = String::from("g,x,re,im\n");
    for g in 0..s.group_order() {
        for x in 0..s.size() {
            let z = a.get(g, x).to_c64();
            let _ = writeln!(out, "{g},{x},{:.16e},{:.16e}", z.re, z.im);
        }
    }
    out
}
