use std::fmt::Write as _;
use std::sync::Arc;

use super::basis::Basis;
use super::operator::{Grade, SparseOperator};
use crate::{Error, Result, C64};

/// Plain-text triplet form: header `rows cols grade`, then `row col re im`.
pub fn to_triplet_text(a: &SparseOperator) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {}", a.codomain().dim(), a.domain().dim(), a.grade());
    for &(r, c, v) in a.entries() {
        let _ = writeln!(s, "{r} {c} {:.16e} {:.16e}", v.re, v.im);
    }
    s
}

pub fn from_triplet_text(text: &str, domain: Arc<Basis>, codomain: Arc<Basis>) -> Result<SparseOperator> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty operator text".into()))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 3 {
        return Err(Error::Parse(format!("bad header '{header}'")));
    }
    let rows: usize = h[0].parse().map_err(|_| Error::Parse(format!("bad row count '{}'", h[0])))?;
    let cols: usize = h[1].parse().map_err(|_| Error::Parse(format!("bad column count '{}'", h[1])))?;
    let grade = match h[2] {
        "even" => Grade::Even,
        "odd" => Grade::Odd,
        g => return Err(Error::Parse(format!("bad grade '{g}'"))),
    };
    if rows != codomain.dim() || cols != domain.dim() {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{}", codomain.dim(), domain.dim()),
            got: format!("{rows}x{cols}"),
        });
    }
    let mut trip = Vec::new();
    for line in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(Error::Parse(format!("bad entry '{line}'")));
        }
        let bad = |_| Error::Parse(format!("bad entry '{line}'"));
        let r: usize = f[0].parse().map_err(|_| Error::Parse(format!("bad entry '{line}'")))?;
        let c: usize = f[1].parse().map_err(|_| Error::Parse(format!("bad entry '{line}'")))?;
        let re: f64 = f[2].parse().map_err(bad)?;
        let im: f64 = f[3].parse().map_err(bad)?;
        trip.push((r, c, C64::new(re, im)));
    }
    SparseOperator::from_triplets(domain, codomain, grade, trip)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_exact() {
        let b = Basis::standard("s", 3);
        let a = SparseOperator::from_triplets(
            b.clone(),
            b.clone(),
            Grade::Odd,
            vec![(0, 2, C64::new(1.0 / 3.0, -2.0f64.sqrt())), (2, 1, C64::new(1e-300, 0.0))],
        )
        .unwrap();
        let text = to_triplet_text(&a);
        assert!(text.starts_with("3 3 odd\n"));
        let back = from_triplet_text(&text, b.clone(), b).unwrap();
        assert_eq!(back.max_abs_diff(&a).unwrap(), 0.0);
    }

    #[test]
    fn header_checked() {
        let b = Basis::standard("s", 2);
        assert!(from_triplet_text("3 3 even\n", b.clone(), b.clone()).is_err());
        assert!(from_triplet_text("2 2 weird\n", b.clone(), b).is_err());
    }
}
