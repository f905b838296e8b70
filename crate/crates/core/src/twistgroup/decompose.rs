use nalgebra::DMatrix;

use super::group::{check_cocycle, Cocycle};
use super::scalar::Scalar;
use crate::{Error, Result, C64};

/// Block dimensions of the twisted group algebra `C^τ[G]`.
///
/// The center dimension `s` is the nullity of `c ↦ (c_g(τ(h,g) − τ(g,h)))_{h,g}`;
/// for abelian `G` all simple blocks share the dimension `√(|G|/s)`.
pub fn decompose_twisted_algebra(tau: &Cocycle) -> Result<Vec<usize>> {
    let v = check_cocycle(tau);
    if !v.is_empty() {
        return Err(Error::InvalidCocycle(format!("{} violations, first {:?}", v.len(), v[0])));
    }
    let n = tau.group().order();
    let m = tau.root_order();
    let mut a = DMatrix::<C64>::zeros(n * n, n);
    for h in 0..n {
        for g in 0..n {
            let d = C64::root(m, tau.exponent(h, g) as i64) - C64::root(m, tau.exponent(g, h) as i64);
            a[(h * n + g, g)] = d;
        }
    }
    let sv = a.singular_values();
    let s = sv.iter().filter(|x| **x <= 1e-9).count() + n.saturating_sub(sv.len());
    if s == 0 || n % s != 0 {
        return Err(Error::Invalid(format!("center dimension {s} does not divide |G| = {n}")));
    }
    let d2 = n / s;
    let d = (d2 as f64).sqrt().round() as usize;
    if d * d != d2 {
        return Err(Error::Invalid(format!("|G|/s = {d2} is not a square")));
    }
    Ok(vec![d; s])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twistgroup::group::FiniteAbelianGroup;

    #[test]
    fn known_decompositions() {
        let h33 = Cocycle::heisenberg(FiniteAbelianGroup::new(vec![3, 3]).unwrap()).unwrap();
        assert_eq!(decompose_twisted_algebra(&h33).unwrap(), vec![3]);
        let z2 = Cocycle::trivial(FiniteAbelianGroup::cyclic(2), 1);
        assert_eq!(decompose_twisted_algebra(&z2).unwrap(), vec![1, 1]);
        let h22 = Cocycle::heisenberg(FiniteAbelianGroup::new(vec![2, 2]).unwrap()).unwrap();
        assert_eq!(decompose_twisted_algebra(&h22).unwrap(), vec![2]);
        let h42 = Cocycle::heisenberg(FiniteAbelianGroup::new(vec![4, 2]).unwrap()).unwrap();
        assert_eq!(decompose_twisted_algebra(&h42).unwrap(), vec![2, 2]);
    }

    #[test]
    fn dimensions_sum_to_order() {
        for moduli in [vec![6], vec![2, 4], vec![3, 3], vec![2, 2, 2]] {
            let g = FiniteAbelianGroup::new(moduli).unwrap();
            let n = g.order();
            let tau = Cocycle::heisenberg(g).unwrap_or_else(|_| Cocycle::trivial(FiniteAbelianGroup::cyclic(n as u32), 1));
            let b = decompose_twisted_algebra(&tau).unwrap();
            assert_eq!(b.iter().map(|d| d * d).sum::<usize>(), tau.group().order());
            assert_eq!(b.len(), tau.regular_elements().len());
        }
    }
}
