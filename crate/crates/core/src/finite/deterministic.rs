//! Tensor Gauss-Legendre quadrature for `N ≤ 3`.
//!
//! `χ²` is symmetric under exchange and has kinks wherever two coordinates
//! meet, so integrals over all of `ℝ^N` are taken over the ordered sector
//! `x_1 < … < x_N` (parametrized by `x_1` and the gaps `x_{k+1} - x_k ≥ 0`,
//! where the integrand is smooth) and multiplied by `N!`. Density-matrix
//! entries integrate over the spectator coordinates with panels split at every
//! point where the integrand has a kink.

use nalgebra::DMatrix;

use super::jastrow::JastrowAnsatz;
use crate::error::{Error, Result};
use crate::nystrom::{NystromGrid, RDMatrix};
use crate::quadrature::{piecewise, reference_legendre, Rule};

/// Largest particle count handled by quadrature.
pub const MAX_QUADRATURE_PARTICLES: usize = 3;
/// Base Gauss-Legendre order per sector dimension.
pub const BASE_ORDER: usize = 64;
/// Energy stability required between refinement levels.
pub const ENERGY_STABILITY: f64 = 1e-5;
/// Gauss-Legendre points per panel for density-matrix entries.
pub const PANEL_ORDER: usize = 24;

fn check_particles(n: usize) -> Result<()> {
    if !(2..=MAX_QUADRATURE_PARTICLES).contains(&n) {
        return Err(Error::Unsupported(format!(
            "deterministic quadrature covers N = 2..={MAX_QUADRATURE_PARTICLES}; use Monte Carlo for N = {n}"
        )));
    }
    Ok(())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `∫χ²` and `∫χ² e(x)` over the ordered sector.
fn sector_integrals(
    n: usize,
    order: usize,
    half_extent: f64,
    mut weight_and_value: impl FnMut(&[f64]) -> (f64, f64),
) -> (f64, f64) {
    let start = Rule::legendre(order, -half_extent, half_extent);
    let gap = Rule::legendre(order, 0.0, 2.0 * half_extent);
    let mut x = vec![0.0; n];
    let mut den = 0.0;
    let mut num = 0.0;
    // odometer over (start, gap_1, …, gap_{n-1})
    let mut idx = vec![0usize; n];
    loop {
        let mut w = start.weights[idx[0]];
        x[0] = start.nodes[idx[0]];
        for k in 1..n {
            w *= gap.weights[idx[k]];
            x[k] = x[k - 1] + gap.nodes[idx[k]];
        }
        let (density, value) = weight_and_value(&x);
        den += w * density;
        num += w * density * value;

        let mut k = n;
        loop {
            if k == 0 {
                return (den, num);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < order {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `∫χ²` over `ℝ^N`.
pub fn norm_squared(ansatz: &JastrowAnsatz, order: usize, half_extent: f64) -> Result<f64> {
    check_particles(ansatz.n)?;
    let (den, _) = sector_integrals(ansatz.n, order, half_extent, |x| (ansatz.amplitude(x).powi(2), 0.0));
    Ok(factorial(ansatz.n) * den)
}

/// `E(α) = ∫(½|∇χ|² + V χ²) / ∫χ²` at a fixed quadrature order.
pub fn quadrature_energy(ansatz: &JastrowAnsatz, g: f64, order: usize, half_extent: f64) -> Result<f64> {
    check_particles(ansatz.n)?;
    let (den, num) = sector_integrals(ansatz.n, order, half_extent, |x| {
        let d = ansatz.log_derivatives(x);
        let density = (2.0 * d.log_amplitude).exp();
        let kinetic = 0.5 * d.gradient.iter().map(|t| t * t).sum::<f64>();
        (density, kinetic + super::jastrow::coulomb_potential(g, x))
    });
    Ok(num / den)
}

/// How the two spectators of an `N = 3` density-matrix entry are integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectatorOrdering {
    /// Only `r_2 < r_3`, doubled.
    Ordered,
    /// The whole plane, with the inner panel split at the outer coordinate.
    Full,
}

/// Unnormalized `ρ(x, y) = ∫ χ(x, r) χ(y, r) dr` (up to the constant `∫χ²`).
pub struct QuadratureKernel<'a> {
    ansatz: &'a JastrowAnsatz,
    reference: Rule,
    half_extent: f64,
    ordering: SpectatorOrdering,
}

impl<'a> QuadratureKernel<'a> {
    pub fn new(ansatz: &'a JastrowAnsatz, half_extent: f64, ordering: SpectatorOrdering) -> Result<Self> {
        check_particles(ansatz.n)?;
        Ok(Self { ansatz, reference: reference_legendre(PANEL_ORDER), half_extent, ordering })
    }

    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let l = self.half_extent;
        let a = self.ansatz;
        let outer = piecewise(&self.reference, -l, l, &[x, y]);
        match a.n {
            2 => outer.integrate(|r| (-r * r).exp() * a.conditional_orbital(x, &[r]) * a.conditional_orbital(y, &[r])),
            _ => {
                let s = a.pair_scale();
                let mut total = 0.0;
                for (&r2, &w2) in outer.nodes.iter().zip(&outer.weights) {
                    let inner = match self.ordering {
                        SpectatorOrdering::Ordered => piecewise(&self.reference, r2, l, &[x, y]),
                        SpectatorOrdering::Full => piecewise(&self.reference, -l, l, &[x, y, r2]),
                    };
                    let partial = inner.integrate(|r3| {
                        let pair = a.factor.value(s * (r3 - r2));
                        let rest = [r2, r3];
                        (-(r2 * r2 + r3 * r3)).exp()
                            * pair
                            * pair
                            * a.conditional_orbital(x, &rest)
                            * a.conditional_orbital(y, &rest)
                    });
                    total += w2 * partial;
                }
                match self.ordering {
                    SpectatorOrdering::Ordered => 2.0 * total,
                    SpectatorOrdering::Full => total,
                }
            }
        }
    }
}

/// Nyström matrix of the quadrature density matrix. `trace_raw` is the grid
/// trace of the properly normalized `ρ`, so its distance from 1 measures grid
/// truncation and spacing error.
pub fn quadrature_rdm(
    ansatz: &JastrowAnsatz,
    grid: &NystromGrid,
    half_extent: f64,
    ordering: SpectatorOrdering,
) -> Result<RDMatrix> {
    let kernel = QuadratureKernel::new(ansatz, half_extent, ordering)?;
    let z = norm_squared(ansatz, BASE_ORDER, half_extent)?;
    let k = grid.k;
    let nodes = grid.nodes();
    let mut b = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = grid.dy * kernel.evaluate(nodes[i], nodes[j]) / z;
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    RDMatrix::from_raw(grid.clone(), b)
}
