//! Relative motion of two particles with `1/|x|` repulsion in a harmonic trap,
//!
//! ```text
//! [-½ d²/dx² + ½x² + g/(√2|x|)] φ = E φ,
//! ```
//!
//! and the Jastrow correlation factor `f(x) = e^{x²/2} φ⁺(x)` built from its
//! ground state.
//!
//! The even ground state is `φ⁺ = |x| e^{-x²/2} Σ_k a_k |x|^k` with
//! `(2k - 1 - 2E) a_{k-2} + √2 g a_{k-1} - k(k+1) a_k = 0`. At `E = (3+2n)/2`
//! the series terminates after `a_n` for special ("magic") values of `g`,
//! the roots of `a_{n+1}(g)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermite::hermite_polynomials;
use crate::jacobi::jacobi_eigen;
use crate::quadrature::adaptive_legendre;

/// Upper end and step of the sign scan for magic strengths.
pub const MAGIC_SCAN_MAX: f64 = 100.0;
pub const MAGIC_SCAN_STEP: f64 = 0.25;
/// Default Rayleigh-Ritz basis: the ten lowest odd oscillator states.
pub const DEFAULT_BASIS_SIZE: usize = 10;

/// A terminating series solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddSeries {
    pub n: usize,
    pub g_magic: f64,
    pub e_rel: f64,
    /// `a_0 ..= a_n`, with `a_0 = 1`.
    pub coeffs: Vec<f64>,
}

/// Coefficients `a_0 ..= a_{k_max}` of the series at strength `g` and energy `e_rel`.
pub fn series_coefficients(g: f64, e_rel: f64, k_max: usize) -> Vec<f64> {
    let mut a = Vec::with_capacity(k_max + 1);
    a.push(1.0);
    for k in 1..=k_max {
        let two_back = if k >= 2 { a[k - 2] } else { 0.0 };
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0 - 2.0 * e_rel) * two_back + 2f64.sqrt() * g * a[k - 1]) / (kf * (kf + 1.0));
        a.push(next);
    }
    a
}

impl OddSeries {
    /// `φ⁺(x) = |x| e^{-x²/2} Σ a_k |x|^k` (unnormalized).
    pub fn phi_plus(&self, x: f64) -> f64 {
        let t = x.abs();
        (-0.5 * t * t).exp() * t * polynomial(&self.coeffs, t)
    }

    /// `a_{n+1}` evaluated at the stored strength; zero up to round-off.
    pub fn termination_residual(&self) -> f64 {
        series_coefficients(self.g_magic, self.e_rel, self.n + 1)[self.n + 1]
    }
}

fn polynomial(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The magic strength at which the series terminates after `a_n` in the ground state.
///
/// Roots of `a_{n+1}(g)` are bracketed by a sign scan over `(0, 100]` and
/// refined by bisection. Smaller roots whose coefficients change sign belong
/// to excited states (a node on `x > 0`) and are skipped.
pub fn magic_g(n: usize) -> Result<OddSeries> {
    if n == 0 {
        return Err(Error::InvalidArgument("the series must terminate after at least one term".into()));
    }
    let e_rel = (3.0 + 2.0 * n as f64) / 2.0;
    let last = |g: f64| series_coefficients(g, e_rel, n + 1)[n + 1];
    let steps = (MAGIC_SCAN_MAX / MAGIC_SCAN_STEP).round() as usize;
    let mut prev_g = MAGIC_SCAN_STEP;
    let mut prev = last(prev_g);
    for i in 2..=steps {
        let g = MAGIC_SCAN_STEP * i as f64;
        let cur = last(g);
        let root = if cur == 0.0 {
            Some(g)
        } else if (cur < 0.0) != (prev < 0.0) {
            Some(bisect(prev_g, g, last))
        } else {
            None
        };
        if let Some(root) = root {
            let coeffs = series_coefficients(root, e_rel, n);
            if coeffs.iter().all(|&a| a > 0.0) {
                return Ok(OddSeries { n, g_magic: root, e_rel, coeffs });
            }
        }
        prev_g = g;
        prev = cur;
    }
    Err(Error::SearchFailure(format!(
        "no strength in (0, {MAGIC_SCAN_MAX}] terminates the ground-state series after {n} terms"
    )))
}

/// Rayleigh-Ritz ground state in the lowest odd oscillator states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeSolution {
    pub g: f64,
    pub basis_size: usize,
    /// Unit-norm coefficients over `ψ_1, ψ_3, …, ψ_{2·basis_size-1}`,
    /// signed so that `φ⁻` rises from the origin.
    pub coeffs: Vec<f64>,
    pub e_rel: f64,
}

impl RelativeSolution {
    /// Oscillator orders of the basis functions.
    pub fn orders(&self) -> impl Iterator<Item = usize> {
        (0..self.basis_size).map(|m| 2 * m + 1)
    }

    /// The odd solution `φ⁻(x)`.
    pub fn phi_minus(&self, x: f64) -> f64 {
        let h = hermite_polynomials(2 * self.basis_size - 1, x);
        (-0.5 * x * x).exp() * self.orders().zip(&self.coeffs).map(|(k, c)| c * h[k]).sum::<f64>()
    }
}

/// `⟨ψ_a | 1/|x| | ψ_b⟩` for odd `a`, `b`, by even-function doubling on `(0, 20]`.
fn inverse_distance_element(a: usize, b: usize) -> f64 {
    2.0 * adaptive_legendre(0.0, 20.0, 1e-10, |x| {
        let h = hermite_polynomials(a.max(b), x);
        (-x * x).exp() * h[a] * h[b] / x
    })
}

/// Lowest odd eigenpair of the relative Hamiltonian at `d = 1`.
pub fn relative_ground_odd(d: f64, g: f64, basis_size: usize) -> Result<RelativeSolution> {
    if d != 1.0 {
        return Err(Error::Unsupported(format!(
            "relative motion is only solved for d = 1 (got d = {d}); |x|^-d matrix elements diverge otherwise"
        )));
    }
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::Domain(format!("interaction strength must be positive, got {g}")));
    }
    if basis_size == 0 {
        return Err(Error::InvalidArgument("empty basis".into()));
    }
    let orders: Vec<usize> = (0..basis_size).map(|m| 2 * m + 1).collect();
    let coupling = g / 2f64.sqrt();
    let mut h = nalgebra::DMatrix::zeros(basis_size, basis_size);
    for i in 0..basis_size {
        for j in 0..=i {
            let mut v = coupling * inverse_distance_element(orders[i], orders[j]);
            if i == j {
                v += orders[i] as f64 + 0.5;
            }
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    let eig = jacobi_eigen(&h)?;
    let mut coeffs: Vec<f64> = eig.vectors.row(0).iter().copied().collect();
    // slope at the origin: Σ c_m h'_{2m+1}(0) with h'_k = √(2k) h_{k-1}
    let h0 = hermite_polynomials(2 * basis_size, 0.0);
    let slope: f64 = orders.iter().zip(&coeffs).map(|(&k, c)| c * (2.0 * k as f64).sqrt() * h0[k - 1]).sum();
    if slope < 0.0 {
        coeffs.iter_mut().for_each(|c| *c = -*c);
    }
    Ok(RelativeSolution { g, basis_size, coeffs, e_rel: eig.values[0] })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    MagicSeries,
    RayleighRitz,
    Tonks,
}

/// Pair correlation factor `f(x) = e^{x²/2} |φ⁻(x)|`.
///
/// Every variant is `P(|x|)` for a polynomial `P` with `P(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum CorrelationFactor {
    /// `P(t) = t Σ a_k t^k`.
    MagicSeries { coeffs: Vec<f64> },
    /// `P(t) = Σ_m c_m h_{2m+1}(t)` with `h` the normalized Hermite polynomials.
    RayleighRitz { coeffs: Vec<f64>, table: HermiteSeries },
    /// `P(t) = t`, the hard-core limit.
    Tonks,
}

/// `Σ_m c_m h_{2m+1}(t)` and its first two derivatives, with the recurrence
/// and derivative constants (`h_k' = √(2k) h_{k-1}`) folded in once so that
/// evaluation takes no square roots.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSeries {
    /// `(√(2/k), √((k-1)/k))` for `k = 1..`.
    recurrence: Vec<(f64, f64)>,
    /// Weights of `h_k`, `h_{k-1}` and `h_{k-2}` in `P`, `P'`, `P''` for `k = 1..`.
    weights: Vec<(f64, f64, f64)>,
}

impl HermiteSeries {
    pub fn odd(coeffs: &[f64]) -> Self {
        let top = 2 * coeffs.len() - 1;
        let mut recurrence = Vec::with_capacity(top);
        let mut weights = Vec::with_capacity(top);
        for k in 1..=top {
            let kf = k as f64;
            recurrence.push(((2.0 / kf).sqrt(), ((kf - 1.0) / kf).sqrt()));
            let c = if k % 2 == 1 { coeffs[k / 2] } else { 0.0 };
            weights.push((c, c * (2.0 * kf).sqrt(), c * (2.0 * kf).sqrt() * (2.0 * (kf - 1.0)).sqrt()));
        }
        Self { recurrence, weights }
    }

    fn eval(&self, t: f64) -> (f64, f64, f64) {
        let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
        let mut prev = 0.0;
        // h_0 = π^{-1/4}
        let mut cur = 0.751_125_544_464_942_5;
        for (&(up, down), &(w0, w1, w2)) in self.recurrence.iter().zip(&self.weights) {
            let next = up * t * cur - down * prev;
            p += w0 * next;
            dp += w1 * cur;
            ddp += w2 * prev;
            prev = cur;
            cur = next;
        }
        (p, dp, ddp)
    }
}

/// `f`, `f'` and `f''` at one point. Derivatives are defined away from `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorValue {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

impl CorrelationFactor {
    pub fn provenance(&self) -> Provenance {
        match self {
            Self::MagicSeries { .. } => Provenance::MagicSeries,
            Self::RayleighRitz { .. } => Provenance::RayleighRitz,
            Self::Tonks => Provenance::Tonks,
        }
    }

    /// `P`, `P'`, `P''` at `t >= 0`.
    fn radial(&self, t: f64) -> (f64, f64, f64) {
        match self {
            Self::Tonks => (t, 1.0, 0.0),
            Self::MagicSeries { coeffs } => {
                let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
                for (k, &a) in coeffs.iter().enumerate().rev() {
                    let kf = k as f64;
                    p = p * t + a;
                    dp = dp * t + (kf + 1.0) * a;
                    ddp = ddp * t + (kf + 1.0) * kf * a;
                }
                // p, dp accumulated Σ a_k t^k and Σ (k+1) a_k t^k; ddp holds Σ (k+1)k a_k t^k
                (t * p, dp, if t > 0.0 { ddp / t } else { 2.0 * coeffs.get(1).copied().unwrap_or(0.0) })
            }
            Self::RayleighRitz { table, .. } => table.eval(t),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.radial(x.abs()).0.abs()
    }

    /// `f`, `f'`, `f''` at `x`. `f` is even, so `f'` is odd.
    pub fn eval(&self, x: f64) -> FactorValue {
        let (p, dp, ddp) = self.radial(x.abs());
        let sign = if p < 0.0 { -1.0 } else { 1.0 };
        FactorValue { value: sign * p, first: sign * x.signum() * dp, second: sign * ddp }
    }
}

/// Source for [`make_correlation_factor`].
#[derive(Debug, Clone, Copy)]
pub enum PairSolution<'a> {
    Magic(&'a OddSeries),
    Relative(&'a RelativeSolution),
    Tonks,
}

/// `f(x) = e^{x²/2} φ⁺(x)`. The Gaussian cancels, leaving a polynomial in `|x|`.
pub fn make_correlation_factor(solution: PairSolution<'_>) -> CorrelationFactor {
    match solution {
        PairSolution::Magic(series) => CorrelationFactor::MagicSeries { coeffs: series.coeffs.clone() },
        PairSolution::Relative(rel) => {
            CorrelationFactor::RayleighRitz { coeffs: rel.coeffs.clone(), table: HermiteSeries::odd(&rel.coeffs) }
        }
        PairSolution::Tonks => CorrelationFactor::Tonks,
    }
}
