use std::f64::consts::PI;

use crate::C64;

/// `l(θ) = a₀ + Σ_k a_k cos kθ + b_k sin kθ`, `k ≥ 1` (index 0 of `cos`/`sin` is `k = 1`).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigLoop {
    pub a0: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigLoop {
    pub fn new(a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        TrigLoop { a0, cos, sin }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let c: f64 = self.cos.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * theta).cos()).sum();
        let s: f64 = self.sin.iter().enumerate().map(|(k, b)| b * ((k + 1) as f64 * theta).sin()).sum();
        self.a0 + c + s
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        let c: f64 = self.cos.iter().enumerate().map(|(k, a)| -a * (k + 1) as f64 * ((k + 1) as f64 * theta).sin()).sum();
        let s: f64 = self.sin.iter().enumerate().map(|(k, b)| b * (k + 1) as f64 * ((k + 1) as f64 * theta).cos()).sum();
        c + s
    }

    fn coef(v: &[f64], k: usize) -> f64 {
        v.get(k).copied().unwrap_or(0.0)
    }
}

/// `∫₀^{2π} l₁ l₂′ dθ = π Σ_k k (a¹_k b²_k − b¹_k a²_k)`.
pub fn loop_pairing(l1: &TrigLoop, l2: &TrigLoop) -> f64 {
    let n = l1.cos.len().max(l1.sin.len()).max(l2.cos.len()).max(l2.sin.len());
    PI * (0..n)
        .map(|k| {
            (k + 1) as f64
                * (TrigLoop::coef(&l1.cos, k) * TrigLoop::coef(&l2.sin, k)
                    - TrigLoop::coef(&l1.sin, k) * TrigLoop::coef(&l2.cos, k))
        })
        .sum::<f64>()
}

/// `exp(i ∫ l₁ l₂′ dθ) · t₂^{k n₁}`.
pub fn loop_cocycle(l1: &TrigLoop, l2: &TrigLoop, k: i64, t2: C64, n1: i64) -> C64 {
    C64::from_polar(1.0, loop_pairing(l1, l2)) * t2.powi((k * n1) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_adaptive;

    fn cos1() -> TrigLoop {
        TrigLoop::new(0.0, vec![1.0], vec![])
    }

    fn sin1() -> TrigLoop {
        TrigLoop::new(0.0, vec![], vec![1.0])
    }

    #[test]
    fn cos_sin_gives_minus_one() {
        let one = C64::new(1.0, 0.0);
        let v = loop_cocycle(&cos1(), &sin1(), 0, one, 0);
        assert!((v - C64::new(-1.0, 0.0)).norm() < 1e-15);
        let l = TrigLoop::new(0.3, vec![1.0, -0.5], vec![0.2, 0.7]);
        assert!((loop_cocycle(&l, &l, 0, one, 0) - one).norm() < 1e-15);
    }

    #[test]
    fn torus_factor() {
        let v = loop_cocycle(&TrigLoop::default(), &TrigLoop::default(), 1, C64::new(0.0, 1.0), 3);
        assert!((v - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn pairing_matches_quadrature() {
        let l1 = TrigLoop::new(1.5, vec![0.4, -1.1, 0.3], vec![0.9, 0.05]);
        let l2 = TrigLoop::new(-0.2, vec![0.7], vec![-0.3, 1.2, 0.6]);
        let q = integrate_adaptive(|t| l1.eval(t) * l2.derivative(t), 0.0, 2.0 * PI, 1e-13).unwrap();
        assert!((q - loop_pairing(&l1, &l2)).abs() < 1e-11);
    }
}
