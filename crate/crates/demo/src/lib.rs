//! wasm-bindgen entry points for the browser page in `www/`.
//!
//! Every function returns plain CSV text; the page renders it as a table.

use std::fmt::Write;

use kkindex_core::dirac::{self, TripleSpace};
use kkindex_core::fock::TruncationSpec;
use kkindex_core::limitspace::{frozen_tail_norm, tail_bound, SigmaSequence};
use kkindex_core::opcore::kernel;
use wasm_bindgen::prelude::*;

// the page only offers desk-scale sizes
const MAX_MODES: u32 = 4;
const MAX_ENERGY: u32 = 8;

fn spec(modes: u32, energy: u32) -> Result<TruncationSpec, String> {
    if modes == 0 || modes > MAX_MODES || energy > MAX_ENERGY {
        return Err(format!("need 1 ≤ N ≤ {MAX_MODES} and E ≤ {MAX_ENERGY}"));
    }
    TruncationSpec::new(modes, energy).map_err(|e| e.to_string())
}

/// Eigenvalues of `∂_R²` with measured and predicted multiplicities.
pub fn square_spectrum_csv(modes: u32, energy: u32) -> Result<String, String> {
    let rows = dirac::square_spectrum_report(&spec(modes, energy)?).map_err(|e| e.to_string())?;
    Ok(dirac::spectrum_csv(&rows))
}

/// `dim ker` of both Dirac operators against the boson monomial count.
pub fn kernel_csv(modes: u32, energy: u32) -> Result<String, String> {
    let sp = spec(modes, energy)?;
    let mut out = String::from("operator,space dim,dim ker,predicted\n");
    let predicted = dirac::predicted_kernel_dim(&sp);
    for (name, space) in [("dR", TripleSpace::right(&sp)), ("dL", TripleSpace::left(&sp))] {
        let space = space.map_err(|e| e.to_string())?;
        let d = space.dirac().map_err(|e| e.to_string())?;
        let k = kernel(&d).map_err(|e| e.to_string())?;
        let _ = writeln!(out, "{name},{},{},{predicted}", space.basis().dim(), k.len());
    }
    Ok(out)
}

/// Tail bound and frozen tail norm for `M = 1..=up_to`.
pub fn tails_csv(sigma: &str, up_to: usize) -> Result<String, String> {
    let seq = SigmaSequence::parse(sigma).map_err(|e| e.to_string())?;
    let mut out = String::from("M,tail bound,frozen tail\n");
    for m in 1..=up_to.min(30) {
        let b = tail_bound(m, &seq).map_err(|e| e.to_string())?;
        let f = frozen_tail_norm(m, &seq).map_err(|e| e.to_string())?;
        let _ = writeln!(out, "{m},{b:.6},{f:.6}");
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn square_spectrum(modes: u32, energy: u32) -> Result<String, JsError> {
    square_spectrum_csv(modes, energy).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn kernel_dims(modes: u32, energy: u32) -> Result<String, JsError> {
    kernel_csv(modes, energy).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn tails(sigma: &str, up_to: usize) -> Result<String, JsError> {
    tails_csv(sigma, up_to).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_at_three_four() {
        let csv = kernel_csv(3, 4).unwrap();
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",11,11")), "{csv}");
    }

    #[test]
    fn rejects_large() {
        assert!(square_spectrum_csv(5, 4).is_err());
        assert!(square_spectrum_csv(2, 9).is_err());
    }

    #[test]
    fn tails_table() {
        let csv = tails_csv("pow2", 8).unwrap();
        assert_eq!(csv.lines().count(), 9);
        assert!(csv.contains("\n5,0.23"));
        assert!(tails_csv("nonsense", 3).is_err());
    }
}
