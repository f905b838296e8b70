//! Gauss–Legendre quadrature with adaptive interval bisection.

use crate::{Error, Result};

/// Nodes and weights on `[-1, 1]`, computed by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Fixed-order rule on `[a, b]`.
pub struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Rule {
    pub fn new(order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        Rule { x, w }
    }

    pub fn integrate(&self, a: f64, b: f64, f: &impl Fn(f64) -> f64) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        self.x.iter().zip(&self.w).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
    }
}

/// Adaptive bisection comparing a 20-point rule with its two halves.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let rule = Rule::new(20);
    let whole = rule.integrate(a, b, &f);
    let scale = rule.integrate(a, b, &|x| f(x).abs()).max(f64::MIN_POSITIVE);
    let mut stack = vec![(a, b, whole, 0u32)];
    let mut total = 0.0;
    while let Some((lo, hi, est, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(lo, mid, &f);
        let right = rule.integrate(mid, hi, &f);
        let err = (left + right - est).abs();
        let share = (hi - lo) / (b - a);
        if err <= rel_tol * scale * share.max(1e-3) || err <= 4.0 * f64::EPSILON * scale {
            total += left + right;
        } else if depth >= 40 {
            return Err(Error::Quadrature(format!(
                "no convergence on [{lo}, {hi}] (error {err:e})"
            )));
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 20, 64] {
            let (_, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let r = Rule::new(5);
        let v = r.integrate(0.0, 2.0, &|x: f64| x.powi(9));
        assert!((v - 2f64.powi(10) / 10.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_oscillatory() {
        let v = integrate_adaptive(|x| (30.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!(v.abs() < 1e-12);
        let v = integrate_adaptive(|x| x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }
}
