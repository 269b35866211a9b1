//! Thin wrappers over `gauss-quad` rules plus a composite Gauss-Legendre
//! integrator for piecewise-smooth integrands.

use std::num::NonZeroUsize;

use gauss_quad::hermite::GaussHermite;
use gauss_quad::legendre::GaussLegendre;

use crate::hermite::hermite_polynomials;

/// Nodes and weights of a rule on a fixed interval.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// `degree`-point Gauss-Legendre rule mapped onto `[a, b]`.
    pub fn legendre(degree: usize, a: f64, b: f64) -> Self {
        let reference = reference_legendre(degree);
        reference.mapped(a, b)
    }

    /// `degree`-point Gauss-Hermite rule for `∫ e^{-x²} f(x) dx`.
    ///
    /// The Golub-Welsch nodes from `gauss-quad` are polished by Newton steps on
    /// the normalized Hermite recurrence; its eigenvector weights lose about
    /// eight digits by degree 40, so the weights are recomputed from
    /// `w_i = 1 / (n h_{n-1}(x_i)²)`.
    pub fn hermite(degree: usize) -> Self {
        let rule = GaussHermite::new(NonZeroUsize::new(degree).expect("degree must be positive"));
        let mut nodes: Vec<f64> = rule.nodes().copied().collect();
        let n = degree as f64;
        let mut weights = Vec::with_capacity(degree);
        for x in nodes.iter_mut() {
            for _ in 0..8 {
                let h = hermite_polynomials(degree, *x);
                let step = h[degree] / ((2.0 * n).sqrt() * h[degree - 1]);
                *x -= step;
                if step.abs() <= 1e-15 * x.abs().max(1.0) {
                    break;
                }
            }
            let h = hermite_polynomials(degree, *x);
            weights.push(1.0 / (n * h[degree - 1] * h[degree - 1]));
        }
        Self { nodes, weights }
    }

    /// Map a rule on `[-1, 1]` onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Self {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Self {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| half * w).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss-Legendre rule on the reference interval `[-1, 1]`.
pub fn reference_legendre(degree: usize) -> Rule {
    let rule = GaussLegendre::new(NonZeroUsize::new(degree).expect("degree must be positive"));
    let (nodes, weights) = rule.as_node_weight_pairs().iter().copied().unzip();
    Rule { nodes, weights }
}

/// Composite rule on `[a, b]` with panels split at every breakpoint that lies
/// strictly inside the interval. Integrands with kinks at the breakpoints are
/// then integrated at the smooth-function rate.
pub fn piecewise(reference: &Rule, a: f64, b: f64, breakpoints: &[f64]) -> Rule {
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p < b).collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut nodes = Vec::with_capacity(reference.len() * (cuts.len() - 1));
    let mut weights = Vec::with_capacity(nodes.capacity());
    for w in cuts.windows(2) {
        if w[1] - w[0] <= 0.0 {
            continue;
        }
        let panel = reference.mapped(w[0], w[1]);
        nodes.extend(panel.nodes);
        weights.extend(panel.weights);
    }
    Rule { nodes, weights }
}

/// Composite Gauss-Legendre with `2^k` equal panels, doubling `k` until two
/// successive levels agree to `tol` (absolute). Returns the finer estimate.
pub fn adaptive_legendre(a: f64, b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let reference = reference_legendre(20);
    let estimate = |panels: usize, f: &mut dyn FnMut(f64) -> f64| {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + p as f64 * h;
                reference.mapped(lo, lo + h).integrate(&mut *f)
            })
            .sum::<f64>()
    };
    let mut panels = 1;
    let mut previous = estimate(panels, &mut f);
    for _ in 0..14 {
        panels *= 2;
        let current = estimate(panels, &mut f);
        if (current - previous).abs() <= tol {
            return current;
        }
        previous = current;
    }
    previous
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_is_exact_for_polynomials() {
        let rule = Rule::legendre(5, 0.0, 2.0);
        let v = rule.integrate(|x| x.powi(9));
        assert!((v - 2f64.powi(10) / 10.0).abs() < 1e-11);
    }

    #[test]
    fn hermite_moments() {
        let rule = Rule::hermite(20);
        assert!((rule.integrate(|_| 1.0) - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert!((rule.integrate(|x| x * x) - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn piecewise_resolves_kinks() {
        let reference = reference_legendre(8);
        let rule = piecewise(&reference, -1.0, 2.0, &[0.3, 5.0, -3.0]);
        let v = rule.integrate(|x| (x - 0.3f64).abs());
        assert!((v - (1.3f64.powi(2) + 1.7f64.powi(2)) / 2.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_converges() {
        let v = adaptive_legendre(0.0, 20.0, 1e-12, |x| (-x).exp());
        assert!((v - (1.0 - (-20f64).exp())).abs() < 1e-12);
    }
}
