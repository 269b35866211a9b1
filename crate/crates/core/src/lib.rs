//! Entanglement of one-dimensional Wigner crystals.
//!
//! N particles in a harmonic trap repelling as `g/|x_i - x_j|^d`. Two routes
//! to the one-particle density matrix are provided:
//!
//! * the strong-interaction limit, solved in closed form from the classical
//!   crystal ([`crystal`]), its normal modes ([`modes`]), Gaussian site
//!   kernels and their Mehler-Schmidt decomposition ([`asymptotic`]) and the
//!   resulting entropies ([`entropy`]);
//! * finite interaction strength (`d = 1`), from a Jastrow trial state built on
//!   the exact two-body relative motion ([`two_body`]) and diagonalized on a
//!   Nyström grid ([`finite`], [`nystrom`]).

pub mod asymptotic;
pub mod crystal;
pub mod entropy;
pub mod error;
pub mod finite;
pub mod hermite;
pub mod jacobi;
pub mod modes;
pub mod nystrom;
pub mod quadrature;
pub mod two_body;

pub use asymptotic::{
    assemble_asymptotic_rdm, degenerate_pair, displaced_overlap, mehler_schmidt, natural_orbital,
    site_kernel, AsymptoticRdm, AsymptoticSolution, GaussianKernel, OrbitalEvaluator, OrbitalKind,
    SchmidtSite,
};
pub use crystal::{
    evaluate_potential, scale_positions, solve_equilibrium, EquilibriumConfig, SystemSpec,
};
pub use entropy::{renyi_sum, site_entropy_closed, total_entropy, EntropyReport};
pub use error::{Error, Result};
pub use modes::{decompose, hessian, normal_modes, NormalModes, Parity};
pub use nystrom::{diagonalize_rdm, NystromGrid, RDMatrix, Spectrum};
pub use finite::{finite_report, run_finite, FiniteConfig, FiniteReport, Integrator, JastrowAnsatz, Strength};
