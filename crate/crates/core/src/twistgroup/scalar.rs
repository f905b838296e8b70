use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;

use crate::C64;

pub type Q = Ratio<i128>;

/// Scalars for group-algebra tables: exact cyclotomics or complex doubles.
pub trait Scalar:
    Clone + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero(m: u32) -> Self;
    /// `ω^k` with `ω = e^{2πi/m}`.
    fn root(m: u32, k: i64) -> Self;
    fn rational(m: u32, num: i64, den: i64) -> Self;
    fn conj(&self) -> Self;
    fn to_c64(&self) -> C64;
    /// Exact for cyclotomics; `|z| ≤ 1e-12` for doubles.
    fn is_zero(&self) -> bool;

    fn one(m: u32) -> Self {
        Self::root(m, 0)
    }

    fn same(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }
}

impl Scalar for C64 {
    fn zero(_: u32) -> Self {
        C64::new(0.0, 0.0)
    }

    fn root(m: u32, k: i64) -> Self {
        let r = k.rem_euclid(m as i64);
        if r == 0 {
            return C64::new(1.0, 0.0);
        }
        C64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / m as f64)
    }

    fn rational(_: u32, num: i64, den: i64) -> Self {
        C64::new(num as f64 / den as f64, 0.0)
    }

    fn conj(&self) -> Self {
        C64::conj(self)
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn is_zero(&self) -> bool {
        self.norm() <= 1e-12
    }
}

/// Element of `Q(ω)`, `ω = e^{2πi/m}`, stored as a polynomial in `ω`
/// modulo `x^m − 1`. Zero tests reduce modulo the cyclotomic polynomial.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    m: u32,
    c: Vec<Q>,
}

impl Cyclotomic {
    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    fn binary(&self, other: &Cyclotomic, f: impl Fn(Q, Q) -> Q) -> Cyclotomic {
        assert_eq!(self.m, other.m, "cyclotomic orders differ");
        Cyclotomic {
            m: self.m,
            c: self.c.iter().zip(&other.c).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    /// Coefficients reduced modulo `Φ_m`.
    pub fn reduced(&self) -> Vec<Q> {
        let phi = cyclotomic_poly(self.m);
        let deg = phi.len() - 1;
        let mut r = self.c.clone();
        for top in (deg..r.len()).rev() {
            let lead = r[top];
            if lead == Q::from_integer(0) {
                continue;
            }
            for (j, &p) in phi.iter().enumerate() {
                r[top - deg + j] -= lead * Q::from_integer(p as i128);
            }
        }
        r.truncate(deg);
        r
    }
}

/// Integer coefficients of `Φ_m`, lowest degree first.
pub fn cyclotomic_poly(m: u32) -> Vec<i64> {
    let m = m.max(1) as usize;
    let mut num = vec![0i64; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in 1..m {
        if m % d == 0 {
            num = exact_div(&num, &cyclotomic_poly(d as u32));
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; r.len() - dd];
    for top in (dd..r.len()).rev() {
        let c = r[top];
        q[top - dd] = c;
        for (j, &p) in den.iter().enumerate() {
            r[top - dd + j] -= c * p;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: Cyclotomic) -> Cyclotomic {
        self.binary(&o, |a, b| a + b)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: Cyclotomic) -> Cyclotomic {
        self.binary(&o, |a, b| a - b)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            m: self.m,
            c: self.c.into_iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: Cyclotomic) -> Cyclotomic {
        assert_eq!(self.m, o.m, "cyclotomic orders differ");
        let m = self.m as usize;
        let mut c = vec![Q::from_integer(0); m];
        for (i, a) in self.c.iter().enumerate() {
            if *a == Q::from_integer(0) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[(i + j) % m] += a * b;
            }
        }
        Cyclotomic { m: self.m, c }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && (self.clone() - other.clone()).is_zero()
    }
}

impl Scalar for Cyclotomic {
    fn zero(m: u32) -> Self {
        Cyclotomic {
            m,
            c: vec![Q::from_integer(0); m.max(1) as usize],
        }
    }

    fn root(m: u32, k: i64) -> Self {
        let mut z = Self::zero(m);
        let len = z.c.len() as i64;
        z.c[k.rem_euclid(len) as usize] = Q::from_integer(1);
        z
    }

    fn rational(m: u32, num: i64, den: i64) -> Self {
        let mut z = Self::zero(m);
        z.c[0] = Q::new(num as i128, den as i128);
        z
    }

    fn conj(&self) -> Self {
        let m = self.c.len();
        let mut c = vec![Q::from_integer(0); m];
        for (j, a) in self.c.iter().enumerate() {
            c[(m - j) % m] += a;
        }
        Cyclotomic { m: self.m, c }
    }

    fn to_c64(&self) -> C64 {
        self.c
            .iter()
            .enumerate()
            .map(|(j, a)| C64::root(self.m, j as i64) * (*a.numer() as f64 / *a.denom() as f64))
            .sum()
    }

    fn is_zero(&self) -> bool {
        self.reduced().iter().all(|q| *q == Q::from_integer(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn sum_of_roots_vanishes() {
        for m in [2u32, 3, 4, 6, 8] {
            let mut s = Cyclotomic::zero(m);
            for k in 0..m as i64 {
                s = s + Cyclotomic::root(m, k);
            }
            assert!(s.is_zero(), "m={m}");
            assert!(!Cyclotomic::root(m, 1).is_zero());
        }
    }

    #[test]
    fn arithmetic_matches_complex() {
        let m = 6;
        let a = Cyclotomic::root(m, 1) + Cyclotomic::rational(m, 1, 3);
        let b = Cyclotomic::root(m, 4) - Cyclotomic::rational(m, 2, 5);
        let p = (a.clone() * b.clone().conj()).to_c64();
        let q = a.to_c64() * b.to_c64().conj();
        assert!((p - q).norm() < 1e-14);
        let w = Cyclotomic::root(3, 1);
        assert_eq!(w.clone() * w.clone() * w, Cyclotomic::one(3));
    }
}
