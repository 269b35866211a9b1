//! Metropolis sampling of `χ²` for `N ≥ 4`.
//!
//! Density-matrix estimator. Write `χ(x, R) = φ_R(x) G(R)` with `R` the other
//! `N - 1` coordinates and `φ_R(x) = e^{-x²/2} ∏_j f(α(x - r_j)/√2)`. The
//! marginal density of `R` under `χ²/Z` is `G(R)² ∫φ_R² / Z`, so
//!
//! ```text
//! ρ(x, y) = E_R[ φ_R(x) φ_R(y) / ∫φ_R² ].
//! ```
//!
//! Each measurement drops one particle (cycling through all of them), takes
//! the rest as `R`, and adds the rank-one matrix `Δy φ_R φ_Rᵀ / ∫φ_R²` on the
//! grid. Only the spectators are sampled; the `x, y` dependence is exact, so
//! the estimate is smooth in both arguments. `∫φ_R²` is integrated with
//! panels split at the spectator positions, making the unnormalized trace an
//! honest convergence indicator.
//!
//! Runs are single-threaded and fully determined by the seed.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::jastrow::JastrowAnsatz;
use super::optimize::{golden_section, AlphaOptimum, AlphaSearch};
use crate::error::{Error, Result};
use crate::nystrom::{NystromGrid, RDMatrix};
use crate::quadrature::{piecewise, reference_legendre, Rule};

pub const DEFAULT_SEED: u64 = 20_240_901;
/// Default number of single-particle Metropolis steps.
pub const DEFAULT_SAMPLES: usize = 10_000_000;
pub const THERMALIZATION_STEPS: usize = 100_000;
/// Full sweeps between density-matrix measurements.
pub const MEASUREMENT_INTERVAL_SWEEPS: usize = 10;
/// Largest acceptable relative standard error of the unnormalized trace.
pub const TRACE_PRECISION: f64 = 0.01;
const TARGET_ACCEPTANCE: f64 = 0.5;
const TUNING_WINDOW: usize = 500;
const BATCH: usize = 128;
const NORM_PANEL_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloConfig {
    pub seed: u64,
    /// Single-particle Metropolis steps after thermalization.
    pub samples: usize,
    pub thermalization: usize,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES, thermalization: THERMALIZATION_STEPS }
    }
}

/// A single Metropolis walker with Gaussian single-particle moves.
pub struct Walker<'a> {
    ansatz: &'a JastrowAnsatz,
    rng: ChaCha8Rng,
    pub x: Vec<f64>,
    pub step: f64,
    next: usize,
    accepted: usize,
    proposed: usize,
}

impl<'a> Walker<'a> {
    /// Starts from evenly spaced positions and thermalizes, tuning the step
    /// towards 50% acceptance. The step is frozen afterwards.
    pub fn thermalized(ansatz: &'a JastrowAnsatz, seed: u64, thermalization: usize) -> Self {
        let n = ansatz.n;
        let x = (0..n).map(|k| k as f64 - 0.5 * (n - 1) as f64).collect();
        let mut walker =
            Self { ansatz, rng: ChaCha8Rng::seed_from_u64(seed), x, step: 1.0, next: 0, accepted: 0, proposed: 0 };
        let mut window = 0;
        for _ in 0..thermalization {
            window += usize::from(walker.advance());
            if walker.proposed % TUNING_WINDOW == 0 {
                let rate = window as f64 / TUNING_WINDOW as f64;
                walker.step *= (rate / TARGET_ACCEPTANCE).clamp(0.5, 2.0);
                window = 0;
            }
        }
        walker.accepted = 0;
        walker.proposed = 0;
        walker
    }

    /// One single-particle move, particles taken in turn. Returns whether it was accepted.
    pub fn advance(&mut self) -> bool {
        let k = self.next;
        self.next = (self.next + 1) % self.x.len();
        let z: f64 = self.rng.sample(StandardNormal);
        let to = self.x[k] + self.step * z;
        let log_ratio = self.ansatz.log_ratio_single(&self.x, k, to);
        let u: f64 = self.rng.gen();
        self.proposed += 1;
        // ln 0 = -inf rejects moves onto a contact
        if u.ln() < 2.0 * log_ratio {
            self.x[k] = to;
            self.accepted += 1;
            true
        } else {
            false
        }
    }

    pub fn acceptance(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }
}

#[derive(Debug, Clone)]
pub struct MonteCarloRdm {
    pub rdm: RDMatrix,
    /// Batch-means standard error of `trace_raw`.
    pub trace_stderr: f64,
    pub measurements: usize,
    pub acceptance: f64,
    pub step: f64,
}

fn orbital_norm(ansatz: &JastrowAnsatz, reference: &Rule, rest: &[f64], half_extent: f64) -> f64 {
    let lo = -half_extent.max(rest.iter().fold(0.0f64, |m, r| m.max(r.abs())) + 6.0);
    piecewise(reference, lo, -lo, rest).integrate(|x| ansatz.conditional_orbital(x, rest).powi(2))
}

/// Monte Carlo estimate of the Nyström matrix.
pub fn monte_carlo_rdm(
    ansatz: &JastrowAnsatz,
    grid: &NystromGrid,
    half_extent: f64,
    config: &MonteCarloConfig,
) -> Result<MonteCarloRdm> {
    let n = ansatz.n;
    if n < 2 {
        return Err(Error::InvalidArgument("Monte Carlo needs at least two particles".into()));
    }
    let interval = MEASUREMENT_INTERVAL_SWEEPS * n;
    if config.samples < interval * BATCH * 4 {
        return Err(Error::InvalidArgument(format!(
            "at least {} Monte Carlo samples are required",
            interval * BATCH * 4
        )));
    }
    let reference = reference_legendre(NORM_PANEL_ORDER);
    let nodes = grid.nodes();
    let k = grid.k;
    let mut walker = Walker::thermalized(ansatz, config.seed, config.thermalization);

    let mut b = DMatrix::<f64>::zeros(k, k);
    let mut phi = DMatrix::<f64>::zeros(k, BATCH);
    let mut rest = vec![0.0; n - 1];
    let mut filled = 0;
    let mut measurements = 0;
    let mut batch_traces = Vec::new();
    let mut batch_trace = 0.0;

    let flush = |phi: &DMatrix<f64>, cols: usize, b: &mut DMatrix<f64>| {
        let block = phi.columns(0, cols);
        b.gemm(grid.dy, &block, &block.transpose(), 1.0);
    };

    for step in 1..=config.samples {
        walker.advance();
        if step % interval != 0 {
            continue;
        }
        let dropped = measurements % n;
        let mut r = 0;
        for (j, &xj) in walker.x.iter().enumerate() {
            if j != dropped {
                rest[r] = xj;
                r += 1;
            }
        }
        let scale = orbital_norm(ansatz, &reference, &rest, half_extent).sqrt().recip();
        let mut col_trace = 0.0;
        for (i, &m) in nodes.iter().enumerate() {
            let v = scale * ansatz.conditional_orbital(m, &rest);
            phi[(i, filled)] = v;
            col_trace += v * v;
        }
        batch_trace += grid.dy * col_trace;
        filled += 1;
        measurements += 1;
        if filled == BATCH {
            flush(&phi, filled, &mut b);
            batch_traces.push(batch_trace / BATCH as f64);
            batch_trace = 0.0;
            filled = 0;
        }
    }
    if filled > 0 {
        flush(&phi, filled, &mut b);
    }
    b /= measurements as f64;
    // symmetrize away gemm round-off so B is exactly symmetric
    let b = (&b + b.transpose()) * 0.5;

    let nb = batch_traces.len() as f64;
    let mean = batch_traces.iter().sum::<f64>() / nb;
    let var = batch_traces.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (nb - 1.0);
    let trace_stderr = (var / nb).sqrt();
    let rdm = RDMatrix::from_raw(grid.clone(), b)?;
    if trace_stderr > TRACE_PRECISION * rdm.trace_raw {
        return Err(Error::Precision(format!(
            "relative error {:.3e} of the Monte Carlo trace exceeds {TRACE_PRECISION}; increase --samples",
            trace_stderr / rdm.trace_raw
        )));
    }
    Ok(MonteCarloRdm { rdm, trace_stderr, measurements, acceptance: walker.acceptance(), step: walker.step })
}

/// Configurations drawn from `χ²`, one every `stride` steps.
pub fn sample_configurations(ansatz: &JastrowAnsatz, seed: u64, thermalization: usize, steps: usize, stride: usize) -> Vec<Vec<f64>> {
    let mut walker = Walker::thermalized(ansatz, seed, thermalization);
    let mut out = Vec::with_capacity(steps / stride);
    for step in 1..=steps {
        walker.advance();
        if step % stride == 0 {
            out.push(walker.x.clone());
        }
    }
    out
}

/// Energy at `α` from configurations sampled at `reference.alpha`, by
/// reweighting with `χ_α² / χ_ref²`. Uses the local energy
/// `-½∇²χ/χ + V`: the first-derivative form `½|∇lnχ|² + V` has the same mean
/// but infinite variance, since `|∇lnχ|² ~ 1/r²` near contacts where `χ² ~ r²`.
pub fn reweighted_energy(reference: &JastrowAnsatz, log_reference: &[f64], configs: &[Vec<f64>], alpha: f64, g: f64) -> f64 {
    let trial = reference.with_alpha(alpha);
    let mut logw = Vec::with_capacity(configs.len());
    let mut local = Vec::with_capacity(configs.len());
    for (x, &lr) in configs.iter().zip(log_reference) {
        let d = trial.log_derivatives(x);
        logw.push(2.0 * (d.log_amplitude - lr));
        let grad2 = d.gradient.iter().map(|t| t * t).sum::<f64>();
        local.push(-0.5 * (d.laplacian + grad2) + super::jastrow::coulomb_potential(g, x));
    }
    let top = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for (lw, e) in logw.iter().zip(&local) {
        let w = (lw - top).exp();
        num += w * e;
        den += w;
    }
    num / den
}

/// Two-pass reweighted golden-section search: sample at the interval midpoint,
/// minimize, resample at that minimizer, minimize again.
pub fn optimize_alpha_monte_carlo(
    ansatz: &JastrowAnsatz,
    g: f64,
    search: &AlphaSearch,
    config: &MonteCarloConfig,
) -> Result<AlphaOptimum> {
    search.validate()?;
    let n = ansatz.n;
    let steps = config.samples / 4;
    let stride = 5 * n;
    if steps < stride * 1000 {
        return Err(Error::InvalidArgument("too few Monte Carlo samples for the alpha search".into()));
    }
    let mut alpha = 0.5 * (search.lo + search.hi);
    let mut best = None;
    let mut evaluations = 0;
    for pass in 0..2u64 {
        let reference = ansatz.with_alpha(alpha);
        let configs = sample_configurations(&reference, config.seed.wrapping_add(pass + 1), config.thermalization, steps, stride);
        let log_reference: Vec<f64> = configs.iter().map(|x| reference.log_amplitude(x)).collect();
        let opt = golden_section(search, |a| Ok(reweighted_energy(&reference, &log_reference, &configs, a, g)))?;
        evaluations += opt.evaluations;
        alpha = opt.alpha;
        best = Some(opt);
    }
    let mut best = best.expect("two passes ran");
    best.evaluations = evaluations;
    Ok(best)
}
