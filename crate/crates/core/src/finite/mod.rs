//! Finite interaction strength for Coulomb repulsion (`d = 1`).
//!
//! The trial state is the Jastrow product of single-particle Gaussians and
//! the two-body correlation factor, with one variational scale `α`. Up to
//! three particles are integrated by deterministic quadrature; larger systems
//! by Metropolis sampling.

pub mod deterministic;
pub mod jastrow;
pub mod monte_carlo;
pub mod optimize;
pub mod pipeline;

pub use deterministic::{norm_squared, quadrature_energy, quadrature_rdm, QuadratureKernel, SpectatorOrdering};
pub use jastrow::{coulomb_potential, JastrowAnsatz, LogDerivatives};
pub use monte_carlo::{monte_carlo_rdm, optimize_alpha_monte_carlo, MonteCarloConfig, MonteCarloRdm};
pub use optimize::{golden_section, optimize_alpha_quadrature, AlphaOptimum, AlphaSearch};
pub use pipeline::{
    default_grid, finite_report, resolve_factor, run_finite, FiniteConfig, FiniteReport, GridOverrides, Integrator,
    Strength,
};
