//! End-to-end finite-`g` run: correlation factor, optimal `α`, density
//! matrix on a Nyström grid, occupancies and entropies.

use serde::Serialize;

use super::deterministic::{quadrature_rdm, SpectatorOrdering, MAX_QUADRATURE_PARTICLES};
use super::jastrow::JastrowAnsatz;
use super::monte_carlo::{monte_carlo_rdm, optimize_alpha_monte_carlo, MonteCarloConfig};
use super::optimize::{optimize_alpha_quadrature, AlphaOptimum, AlphaSearch};
use crate::crystal::{scale_positions, solve_equilibrium, SystemSpec};
use crate::error::{Error, Result};
use crate::nystrom::{diagonalize_rdm, NystromGrid};
use crate::two_body::{magic_g, make_correlation_factor, relative_ground_odd, PairSolution, Provenance, DEFAULT_BASIS_SIZE};

/// Default Nyström spacing.
pub const DEFAULT_DY: f64 = 0.25;
/// Grid half-extent beyond the outermost classical position.
pub const GRID_MARGIN: f64 = 4.0;
/// Extra half-extent for the spectator and energy integrals.
pub const INTEGRATION_MARGIN: f64 = 2.0;
/// Occupancies below this are left out of the von Neumann sum.
pub const OCCUPANCY_FLOOR: f64 = 1e-12;

/// Where the interaction strength comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strength {
    /// Explicit `g`; `g = 0` selects the hard-core factor `|x|`.
    Value(f64),
    /// The `n`-th magic strength, with its terminating-series factor.
    Magic(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    Quadrature,
    MonteCarlo,
}

impl Integrator {
    pub fn for_particles(n: usize) -> Self {
        if n <= MAX_QUADRATURE_PARTICLES {
            Self::Quadrature
        } else {
            Self::MonteCarlo
        }
    }
}

/// Grid overrides. `k` takes precedence over `dy` when both are given.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct GridOverrides {
    pub c: Option<f64>,
    pub k: Option<usize>,
    pub dy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteConfig {
    pub n: usize,
    pub d: f64,
    pub strength: Strength,
    pub grid: GridOverrides,
    /// Fixed `α`; skips the search when set.
    pub alpha: Option<f64>,
    pub search: AlphaSearch,
    pub integrator: Option<Integrator>,
    pub monte_carlo: MonteCarloConfig,
    pub basis_size: usize,
}

impl FiniteConfig {
    pub fn new(n: usize, strength: Strength) -> Self {
        Self {
            n,
            d: 1.0,
            strength,
            grid: GridOverrides::default(),
            alpha: None,
            search: AlphaSearch::default(),
            integrator: None,
            monte_carlo: MonteCarloConfig::default(),
            basis_size: DEFAULT_BASIS_SIZE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteReport {
    pub n: usize,
    pub g: f64,
    pub factor: Provenance,
    pub integrator: Integrator,
    pub grid: NystromGrid,
    pub half_extent: f64,
    pub alpha: f64,
    pub energy: Option<f64>,
    pub alpha_boundary_warning: bool,
    pub trace_raw: f64,
    pub trace_stderr: Option<f64>,
    pub negative_eigenvalue: Option<f64>,
    pub linear_entropy: f64,
    pub entropy_bits: f64,
    pub occupancies: Vec<f64>,
}

/// `L = 1 - Σλ²` and `S = -Σ λ log₂ λ` over `λ ≥ 10⁻¹²`.
pub fn finite_report(occupancies: &[f64]) -> (f64, f64) {
    let linear = 1.0 - occupancies.iter().map(|l| l * l).sum::<f64>();
    let entropy = -occupancies.iter().filter(|&&l| l >= OCCUPANCY_FLOOR).map(|l| l * l.log2()).sum::<f64>();
    (linear, entropy)
}

/// Default grid: `c` = outermost classical position + 4, spacing 0.25.
pub fn default_grid(n: usize, g: f64, overrides: &GridOverrides) -> Result<NystromGrid> {
    let c = match overrides.c {
        Some(c) => c,
        None => {
            let cfg = solve_equilibrium(&SystemSpec::new(n, 1.0)?)?;
            let x = if g > 0.0 { scale_positions(&cfg, 1.0, g)? } else { vec![0.0] };
            x.iter().fold(0.0f64, |m, v| m.max(v.abs())) + GRID_MARGIN
        }
    };
    match overrides.k {
        Some(k) => NystromGrid::new(c, k),
        None => NystromGrid::with_spacing(c, overrides.dy.unwrap_or(DEFAULT_DY)),
    }
}

/// Resolve `g` and build the matching correlation factor.
pub fn resolve_factor(strength: Strength, basis_size: usize) -> Result<(f64, crate::two_body::CorrelationFactor)> {
    match strength {
        Strength::Magic(k) => {
            let s = magic_g(k)?;
            Ok((s.g_magic, make_correlation_factor(PairSolution::Magic(&s))))
        }
        Strength::Value(g) if g == 0.0 => Ok((0.0, make_correlation_factor(PairSolution::Tonks))),
        Strength::Value(g) if g > 0.0 && g.is_finite() => {
            let rel = relative_ground_odd(1.0, g, basis_size)?;
            Ok((g, make_correlation_factor(PairSolution::Relative(&rel))))
        }
        Strength::Value(g) => Err(Error::Domain(format!("interaction strength must be finite and >= 0, got {g}"))),
    }
}

pub fn run_finite(config: &FiniteConfig) -> Result<FiniteReport> {
    if config.d != 1.0 {
        return Err(Error::Unsupported(format!(
            "finite interaction strength is implemented for d = 1 only, got d = {}",
            config.d
        )));
    }
    if config.n < 2 {
        return Err(Error::Domain(format!("need at least two particles, got {}", config.n)));
    }
    let integrator = config.integrator.unwrap_or_else(|| Integrator::for_particles(config.n));
    let (g, factor) = resolve_factor(config.strength, config.basis_size)?;
    let grid = default_grid(config.n, g, &config.grid)?;
    let half_extent = grid.c + INTEGRATION_MARGIN;
    let base = JastrowAnsatz::new(config.n, 1.0, factor.clone());

    let optimum = match (config.alpha, integrator) {
        (Some(alpha), _) if alpha > 0.0 => {
            AlphaOptimum { alpha, energy: f64::NAN, boundary_warning: false, evaluations: 0 }
        }
        (Some(alpha), _) => return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}"))),
        (None, Integrator::Quadrature) => optimize_alpha_quadrature(&base, g, half_extent, &config.search)?.0,
        (None, Integrator::MonteCarlo) => {
            optimize_alpha_monte_carlo(&base, g, &config.search, &config.monte_carlo)?
        }
    };
    let ansatz = base.with_alpha(optimum.alpha);

    let (rdm, trace_stderr) = match integrator {
        Integrator::Quadrature => (quadrature_rdm(&ansatz, &grid, half_extent, SpectatorOrdering::Ordered)?, None),
        Integrator::MonteCarlo => {
            let mc = monte_carlo_rdm(&ansatz, &grid, half_extent, &config.monte_carlo)?;
            (mc.rdm, Some(mc.trace_stderr))
        }
    };
    let spectrum = diagonalize_rdm(&rdm);
    let retained: Vec<f64> = spectrum.occupancies.iter().copied().filter(|&l| l > 0.0).collect();
    let (linear_entropy, entropy_bits) = finite_report(&retained);

    Ok(FiniteReport {
        n: config.n,
        g,
        factor: factor.provenance(),
        integrator,
        grid,
        half_extent,
        alpha: optimum.alpha,
        energy: optimum.energy.is_finite().then_some(optimum.energy),
        alpha_boundary_warning: optimum.boundary_warning,
        trace_raw: rdm.trace_raw,
        trace_stderr,
        negative_eigenvalue: spectrum.negative_warning,
        linear_entropy,
        entropy_bits,
        occupancies: spectrum.occupancies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_of_pure_and_flat_spectra() {
        assert_eq!(finite_report(&[1.0]), (0.0, 0.0));
        let (l, s) = finite_report(&[0.25; 4]);
        assert!((l - 0.75).abs() < 1e-15);
        assert!((s - 2.0).abs() < 1e-15);
    }

    #[test]
    fn default_grid_spacing() {
        let g = default_grid(3, 2.0, &GridOverrides::default()).unwrap();
        assert_eq!(g.dy, DEFAULT_DY);
        assert!(g.c >= 1.077 * 2f64.cbrt() + GRID_MARGIN - 1e-3);
        let fixed = default_grid(3, 2.0, &GridOverrides { c: Some(5.0), k: Some(41), dy: Some(0.1) }).unwrap();
        assert_eq!((fixed.c, fixed.k), (5.0, 41));
    }

    #[test]
    fn rejects_unsupported_and_invalid() {
        let mut cfg = FiniteConfig::new(3, Strength::Value(1.0));
        cfg.d = 3.0;
        assert!(matches!(run_finite(&cfg), Err(Error::Unsupported(_))));
        assert!(matches!(run_finite(&FiniteConfig::new(3, Strength::Value(-1.0))), Err(Error::Domain(_))));
        assert!(matches!(run_finite(&FiniteConfig::new(1, Strength::Value(1.0))), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_two_body_magic_run() {
        let r = run_finite(&FiniteConfig::new(2, Strength::Magic(1))).unwrap();
        assert!((r.g - 2f64.sqrt()).abs() < 1e-12);
        assert!((r.alpha - 1.0).abs() < 1e-3);
        assert!((r.occupancies.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((r.trace_raw - 1.0).abs() < 1e-3, "{}", r.trace_raw);
    }
}
