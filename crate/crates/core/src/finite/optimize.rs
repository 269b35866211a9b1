//! Variational optimization of the Jastrow scale `α`.

use serde::Serialize;

use super::deterministic::{quadrature_energy, BASE_ORDER, ENERGY_STABILITY};
use super::jastrow::JastrowAnsatz;
use crate::error::{Error, Result};

/// Search interval and tolerance for the golden-section search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaSearch {
    pub lo: f64,
    pub hi: f64,
    /// Final bracket width.
    pub tol: f64,
}

impl Default for AlphaSearch {
    fn default() -> Self {
        Self { lo: 0.5, hi: 1.2, tol: 1e-4 }
    }
}

impl AlphaSearch {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.hi > self.lo && self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha search needs 0 < lo < hi and tol > 0, got [{}, {}] tol {}",
                self.lo, self.hi, self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaOptimum {
    pub alpha: f64,
    pub energy: f64,
    /// The minimizer sits within one tolerance of an interval end; widen the interval.
    pub boundary_warning: bool,
    pub evaluations: usize,
}

/// Golden-section minimization of a unimodal `f` over `search`.
pub fn golden_section(search: &AlphaSearch, mut f: impl FnMut(f64) -> Result<f64>) -> Result<AlphaOptimum> {
    search.validate()?;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (search.lo, search.hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evaluations = 2;
    while b - a > search.tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        evaluations += 1;
    }
    let (alpha, energy) = if fc < fd { (c, fc) } else { (d, fd) };
    let boundary_warning = alpha - search.lo <= 2.0 * search.tol || search.hi - alpha <= 2.0 * search.tol;
    Ok(AlphaOptimum { alpha, energy, boundary_warning, evaluations })
}

/// Minimize the quadrature energy. The search runs at the base order; the
/// order then grows by ×1.5 until the optimal energy moves by less than
/// [`ENERGY_STABILITY`], re-running the search at each finer order. Returns
/// the optimum and the order that met the criterion.
pub fn optimize_alpha_quadrature(
    ansatz: &JastrowAnsatz,
    g: f64,
    half_extent: f64,
    search: &AlphaSearch,
) -> Result<(AlphaOptimum, usize)> {
    let mut order = BASE_ORDER;
    let mut best = golden_section(search, |a| quadrature_energy(&ansatz.with_alpha(a), g, order, half_extent))?;
    for _ in 0..4 {
        let finer = order * 3 / 2;
        let check = quadrature_energy(&ansatz.with_alpha(best.alpha), g, finer, half_extent)?;
        if (check - best.energy).abs() <= ENERGY_STABILITY {
            return Ok((best, order));
        }
        order = finer;
        best = golden_section(search, |a| quadrature_energy(&ansatz.with_alpha(a), g, order, half_extent))?;
    }
    Err(Error::Convergence { iterations: order, residual: f64::NAN, last: vec![best.alpha, best.energy] })
}
