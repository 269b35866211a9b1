use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::two_body::CorrelationFactor;

/// `χ(x) = ∏_k e^{-x_k²/2} ∏_{i>j} f(α (x_i - x_j)/√2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JastrowAnsatz {
    pub n: usize,
    pub alpha: f64,
    pub factor: CorrelationFactor,
}

/// `ln χ`, its gradient and the Laplacian of `ln χ` at one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogDerivatives {
    pub log_amplitude: f64,
    pub gradient: Vec<f64>,
    pub laplacian: f64,
}

/// `V^g` for `d = 1`.
pub fn coulomb_potential(g: f64, x: &[f64]) -> f64 {
    let mut v = 0.5 * x.iter().map(|t| t * t).sum::<f64>();
    for i in 0..x.len() {
        for j in 0..i {
            v += g / (x[i] - x[j]).abs();
        }
    }
    v
}

impl JastrowAnsatz {
    pub fn new(n: usize, alpha: f64, factor: CorrelationFactor) -> Self {
        Self { n, alpha, factor }
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..self.clone() }
    }

    /// Argument scale of the pair factor, `α/√2`.
    pub fn pair_scale(&self) -> f64 {
        self.alpha / SQRT_2
    }

    pub fn amplitude(&self, x: &[f64]) -> f64 {
        let s = self.pair_scale();
        let mut value = (-0.5 * x.iter().map(|t| t * t).sum::<f64>()).exp();
        for i in 0..x.len() {
            for j in 0..i {
                value *= self.factor.value(s * (x[i] - x[j]));
            }
        }
        value
    }

    /// `ln χ`; `-∞` when two particles touch.
    pub fn log_amplitude(&self, x: &[f64]) -> f64 {
        let s = self.pair_scale();
        let mut value = -0.5 * x.iter().map(|t| t * t).sum::<f64>();
        for i in 0..x.len() {
            for j in 0..i {
                value += self.factor.value(s * (x[i] - x[j])).ln();
            }
        }
        value
    }

    /// Change of `ln χ` when particle `k` moves from `x[k]` to `to`.
    pub fn log_ratio_single(&self, x: &[f64], k: usize, to: f64) -> f64 {
        let s = self.pair_scale();
        let mut ratio = 1.0;
        for (j, &xj) in x.iter().enumerate() {
            if j != k {
                ratio *= self.factor.value(s * (to - xj)) / self.factor.value(s * (x[k] - xj));
            }
        }
        ratio.ln() - 0.5 * (to * to - x[k] * x[k])
    }

    pub fn log_derivatives(&self, x: &[f64]) -> LogDerivatives {
        let s = self.pair_scale();
        let mut log_amplitude = -0.5 * x.iter().map(|t| t * t).sum::<f64>();
        let mut gradient: Vec<f64> = x.iter().map(|t| -t).collect();
        let mut laplacian = -(x.len() as f64);
        for i in 0..x.len() {
            for j in 0..i {
                let f = self.factor.eval(s * (x[i] - x[j]));
                log_amplitude += f.value.ln();
                let ratio = f.first / f.value;
                gradient[i] += s * ratio;
                gradient[j] -= s * ratio;
                // both particles see the same second derivative of ln f
                laplacian += 2.0 * s * s * (f.second / f.value - ratio * ratio);
            }
        }
        LogDerivatives { log_amplitude, gradient, laplacian }
    }

    /// `½|∇ ln χ|² + V`: the energy integrand divided by `χ²` in the
    /// first-derivative form of the kinetic energy.
    pub fn gradient_energy(&self, x: &[f64], g: f64) -> f64 {
        let d = self.log_derivatives(x);
        0.5 * d.gradient.iter().map(|t| t * t).sum::<f64>() + coulomb_potential(g, x)
    }

    /// Local energy `-½∇²χ/χ + V`, valid away from particle contacts.
    pub fn local_energy(&self, x: &[f64], g: f64) -> f64 {
        let d = self.log_derivatives(x);
        -0.5 * (d.laplacian + d.gradient.iter().map(|t| t * t).sum::<f64>()) + coulomb_potential(g, x)
    }

    /// `e^{-x²/2} ∏_j f(α(x - r_j)/√2)`: the dependence of `χ(x, r)` on its
    /// first coordinate, with every factor that involves only `r` dropped.
    pub fn conditional_orbital(&self, x: f64, rest: &[f64]) -> f64 {
        let s = self.pair_scale();
        rest.iter().fold((-0.5 * x * x).exp(), |acc, &r| acc * self.factor.value(s * (x - r)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::two_body::{magic_g, make_correlation_factor, PairSolution};

    fn magic_ansatz(n: usize, alpha: f64) -> JastrowAnsatz {
        let s = magic_g(1).unwrap();
        JastrowAnsatz::new(n, alpha, make_correlation_factor(PairSolution::Magic(&s)))
    }

    #[test]
    fn vanishes_at_contact_and_is_symmetric() {
        let a = magic_ansatz(3, 0.9);
        assert_eq!(a.amplitude(&[0.3, 0.3, -1.0]), 0.0);
        let x = [0.4, -1.1, 0.9];
        let p = [0.9, 0.4, -1.1];
        assert!((a.amplitude(&x) - a.amplitude(&p)).abs() < 1e-15);
        assert!((a.log_amplitude(&x) - a.amplitude(&x).ln()).abs() < 1e-13);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let a = magic_ansatz(3, 0.85);
        let x = [-1.2, 0.15, 1.05];
        let d = a.log_derivatives(&x);
        let h = 1e-5;
        let mut lap = 0.0;
        for k in 0..3 {
            let mut p = x;
            let mut m = x;
            p[k] += h;
            m[k] -= h;
            let fd = (a.log_amplitude(&p) - a.log_amplitude(&m)) / (2.0 * h);
            assert!((fd - d.gradient[k]).abs() < 1e-7);
            lap += (a.log_amplitude(&p) - 2.0 * d.log_amplitude + a.log_amplitude(&m)) / (h * h);
        }
        assert!((lap - d.laplacian).abs() < 1e-3);
        assert!((a.log_ratio_single(&x, 1, 0.4) - (a.log_amplitude(&[-1.2, 0.4, 1.05]) - d.log_amplitude)).abs() < 1e-13);
    }

    #[test]
    fn exact_two_body_state_has_constant_local_energy() {
        // α = 1 with the magic factor is the exact N = 2 ground state: E = ½ + 5/2
        let s = magic_g(1).unwrap();
        let a = magic_ansatz(2, 1.0);
        for x in [[-0.7, 0.4], [0.1, 2.3], [-2.0, -0.2]] {
            assert!((a.local_energy(&x, s.g_magic) - 3.0).abs() < 1e-11);
        }
    }
}
