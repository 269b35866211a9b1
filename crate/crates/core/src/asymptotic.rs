//! Strong-interaction limit of the one-particle density matrix.
//!
//! In the harmonic approximation the ground state is a Gaussian in the
//! displacements `z = x - x^c`, `ψ² ∝ exp(-zᵀ M z)` with
//! `M = Uᵀ diag(ω) U`. Integrating out every particle but one gives a
//! Gaussian kernel per site,
//!
//! ```text
//! ρ̃_i(x, y) = A exp(-a (x² + y²) - b x y)
//! ```
//!
//! whose Schmidt decomposition follows from Mehler's formula: Hermite-function
//! orbitals of width `w = sqrt(4a² - b²)` and geometric occupancies
//! `λ_l = A sqrt(π(1-y²)/w) y^l`. As the sites separate, the site kernels
//! stop overlapping and together they form the Schmidt decomposition of the
//! whole density matrix. Mirror sites `i` and `N-i+1` carry identical kernels,
//! so every level is two-fold degenerate except on the middle site of an
//! odd crystal.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::crystal::{solve_equilibrium, EquilibriumConfig, SystemSpec};
use crate::error::{Error, Result};
use crate::hermite::{hermite_functions, laguerre};
use crate::modes::{normal_modes, NormalModes};

/// Occupancy tail dropped by [`SchmidtSite::truncation_level`].
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// `ρ̃_i(x̃, ỹ) = A exp(-a(x̃² + ỹ²) - b x̃ ỹ)` in coordinates centred on site `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianKernel {
    /// 1-based site index.
    pub site: usize,
    #[serde(rename = "A")]
    pub prefactor: f64,
    pub a: f64,
    pub b: f64,
}

impl GaussianKernel {
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.prefactor * (-self.a * (x * x + y * y) - self.b * x * y).exp()
    }

    /// `∫ρ̃(x, x) dx`.
    pub fn trace(&self) -> f64 {
        self.prefactor * (PI / (2.0 * self.a + self.b)).sqrt()
    }

    fn validate(&self) -> Result<()> {
        if !(self.prefactor > 0.0) {
            return Err(Error::InvalidKernel(format!("prefactor {} is not positive", self.prefactor)));
        }
        if !(2.0 * self.a + self.b > 0.0 && 2.0 * self.a - self.b > 0.0) {
            return Err(Error::InvalidKernel(format!(
                "exponents a = {}, b = {} do not give a bounded operator (need 2a > |b|)",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// Marginalize the harmonic ground state down to site `site` (1-based).
///
/// Partition `M` into the site entry `m`, the coupling row `u` and the block
/// `K` of the integrated particles. The Gaussian integral gives
/// `a = m/2 - s/4`, `b = -s/2` with `s = uᵀK⁻¹u`, and
/// `A = (1/N) (∏ω / π^N)^{1/2} (π^{N-1} / det K)^{1/2}`.
pub fn site_kernel(modes: &NormalModes, site: usize, n: usize) -> Result<GaussianKernel> {
    if modes.len() != n {
        return Err(Error::InvalidArgument(format!("modes describe {} particles, not {n}", modes.len())));
    }
    if site == 0 || site > n {
        return Err(Error::InvalidArgument(format!("site {site} outside 1..={n}")));
    }
    let omega = modes.omega();
    let m_full = modes.u.transpose() * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(omega.clone())) * &modes.u;
    let i = site - 1;
    let rest: Vec<usize> = (0..n).filter(|&k| k != i).collect();
    let m = m_full[(i, i)];
    let u = nalgebra::DVector::from_iterator(n - 1, rest.iter().map(|&k| m_full[(i, k)]));
    let block = DMatrix::from_fn(n - 1, n - 1, |r, c| m_full[(rest[r], rest[c])]);
    let chol = block
        .cholesky()
        .ok_or_else(|| Error::InvalidKernel("integrated block is not positive definite".into()))?;
    let s = u.dot(&chol.solve(&u));
    let log_det: f64 = 2.0 * chol.l().diagonal().iter().map(|x| x.ln()).sum::<f64>();
    let log_omega: f64 = omega.iter().map(|w| w.ln()).sum();
    let prefactor = (0.5 * (log_omega - PI.ln() - log_det)).exp() / n as f64;
    Ok(GaussianKernel { site, prefactor, a: 0.5 * m - 0.25 * s, b: -0.5 * s })
}

/// Mehler parameters and occupancy ladder of one site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchmidtSite {
    pub site: usize,
    /// Kernel prefactor `A`, kept for the closed-form entropy.
    #[serde(rename = "A")]
    pub prefactor: f64,
    /// Orbital width parameter.
    pub w: f64,
    /// Geometric ratio of the occupancy ladder.
    pub y: f64,
    pub lambda0: f64,
    /// `Σ_l λ_l = λ_0 / (1 - y)`.
    pub site_trace: f64,
}

impl SchmidtSite {
    pub fn occupancy(&self, level: usize) -> f64 {
        self.lambda0 * self.y.powi(level as i32)
    }

    /// Highest level kept so that the discarded tail is below [`TAIL_TOLERANCE`]:
    /// `max(2, ⌈ln(ε(1-y)/λ_0) / ln y⌉)`.
    pub fn truncation_level(&self) -> usize {
        if self.y <= 0.0 || self.lambda0 <= 0.0 {
            return 2;
        }
        let bound = (TAIL_TOLERANCE * (1.0 - self.y) / self.lambda0).ln() / self.y.ln();
        (bound.ceil().max(2.0)) as usize
    }

    /// `λ_0 ..= λ_{l_max}` with `l_max` from [`Self::truncation_level`].
    pub fn occupancies(&self) -> Vec<f64> {
        (0..=self.truncation_level()).map(|l| self.occupancy(l)).collect()
    }
}

/// Schmidt decomposition of a Gaussian kernel via Mehler's formula.
pub fn mehler_schmidt(kernel: &GaussianKernel) -> Result<SchmidtSite> {
    kernel.validate()?;
    let (a, b) = (kernel.a, kernel.b);
    let w = (4.0 * a * a - b * b).sqrt();
    let p = (2.0 * a - b).sqrt();
    let q = (2.0 * a + b).sqrt();
    let y = (p - q) / (p + q);
    if !(0.0..1.0).contains(&y) {
        return Err(Error::InvalidKernel(format!("Mehler ratio {y} outside [0, 1); needs b <= 0")));
    }
    let lambda0 = kernel.prefactor * (PI * (1.0 - y * y) / w).sqrt();
    Ok(SchmidtSite {
        site: kernel.site,
        prefactor: kernel.prefactor,
        w,
        y,
        lambda0,
        site_trace: lambda0 / (1.0 - y),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitalKind {
    /// `v_l(x - x_i)`.
    Site,
    /// `η = (v_l(x - x_i) + v_l(x - x_j)) / √2`.
    Sum,
    /// `τ = (v_l(x - x_i) - v_l(x - x_j)) / √2`.
    Difference,
}

/// A natural orbital, or one of the symmetric/antisymmetric combinations of a
/// degenerate mirror pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitalEvaluator {
    pub kind: OrbitalKind,
    pub site: usize,
    pub level: usize,
    pub w: f64,
    pub centers: Vec<f64>,
}

impl OrbitalEvaluator {
    /// `v_l(x̃) = w^{1/4} ψ_l(√w x̃)` with `ψ_l` the orthonormal Hermite function.
    fn site_value(&self, x: f64) -> f64 {
        self.w.powf(0.25) * hermite_functions(self.level, self.w.sqrt() * x)[self.level]
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        match self.kind {
            OrbitalKind::Site => self.site_value(x - self.centers[0]),
            OrbitalKind::Sum => {
                (self.site_value(x - self.centers[0]) + self.site_value(x - self.centers[1])) / 2f64.sqrt()
            }
            OrbitalKind::Difference => {
                (self.site_value(x - self.centers[0]) - self.site_value(x - self.centers[1])) / 2f64.sqrt()
            }
        }
    }

    /// The same site orbital translated to `center`.
    pub fn centered_at(mut self, center: f64) -> Self {
        if self.kind == OrbitalKind::Site {
            self.centers = vec![center];
        }
        self
    }
}

/// Natural orbital `v_l` of a site, centred on the origin (the `x̃` frame).
pub fn natural_orbital(site: &SchmidtSite, level: usize) -> OrbitalEvaluator {
    OrbitalEvaluator { kind: OrbitalKind::Site, site: site.site, level, w: site.w, centers: vec![0.0] }
}

/// `⟨v_l(x - c_1) | v_l(x - c_2)⟩ = e^{-δ²/4} L_l(δ²/2)` with `δ = √w |c_1 - c_2|`.
///
/// This is the quantity that keeps the asymptotic Schmidt basis from being
/// exactly orthonormal at finite separation.
pub fn displaced_overlap(w: f64, level: usize, separation: f64) -> f64 {
    let delta_sq = w * separation * separation;
    (-0.25 * delta_sq).exp() * laguerre(level, 0.5 * delta_sq)
}

/// The `η`/`τ` orbitals of a degenerate mirror pair `(i, N-i+1)` at level `l`.
pub fn degenerate_pair(
    site: &SchmidtSite,
    mirror: &SchmidtSite,
    n: usize,
    level: usize,
    centers: (f64, f64),
) -> Result<(OrbitalEvaluator, OrbitalEvaluator)> {
    if site.site == 0 || site.site > n || mirror.site != n + 1 - site.site {
        return Err(Error::InvalidArgument(format!(
            "sites {} and {} are not a mirror pair of a {n}-particle crystal",
            site.site, mirror.site
        )));
    }
    if site.site == mirror.site {
        return Err(Error::InvalidArgument(format!(
            "site {} is the unpaired middle site",
            site.site
        )));
    }
    let make = |kind| OrbitalEvaluator {
        kind,
        site: site.site,
        level,
        w: site.w,
        centers: vec![centers.0, centers.1],
    };
    Ok((make(OrbitalKind::Sum), make(OrbitalKind::Difference)))
}

/// Truncated Schmidt sum `Σ_i Σ_{l≤l_max(i)} λ_l^{(i)} v_l^{(i)}(x - x_i) v_l^{(i)}(y - x_i)`.
#[derive(Debug, Clone)]
pub struct AsymptoticRdm {
    pub sites: Vec<SchmidtSite>,
    pub centers: Vec<f64>,
    pub levels: Vec<usize>,
}

impl AsymptoticRdm {
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let mut total = 0.0;
        for ((site, &center), &l_max) in self.sites.iter().zip(&self.centers).zip(&self.levels) {
            let scale = site.w.sqrt();
            let norm = site.w.sqrt();
            let px = hermite_functions(l_max, scale * (x - center));
            let py = hermite_functions(l_max, scale * (y - center));
            let mut occ = site.lambda0;
            for l in 0..=l_max {
                total += occ * norm * px[l] * py[l];
                occ *= site.y;
            }
        }
        total
    }

    /// Sum of the retained occupancies, `1 - (dropped tail)`.
    pub fn retained_trace(&self) -> f64 {
        self.sites
            .iter()
            .zip(&self.levels)
            .map(|(s, &l)| (0..=l).map(|k| s.occupancy(k)).sum::<f64>())
            .sum()
    }
}

/// Assemble the asymptotic density matrix with per-site truncation.
pub fn assemble_asymptotic_rdm(sites: &[SchmidtSite], centers: &[f64]) -> Result<AsymptoticRdm> {
    if sites.len() != centers.len() {
        return Err(Error::InvalidArgument(format!(
            "{} sites but {} centres",
            sites.len(),
            centers.len()
        )));
    }
    Ok(AsymptoticRdm {
        sites: sites.to_vec(),
        centers: centers.to_vec(),
        levels: sites.iter().map(SchmidtSite::truncation_level).collect(),
    })
}

/// Everything the strong-interaction analysis produces for one `(N, d)`.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticSolution {
    pub spec: SystemSpec,
    pub equilibrium: EquilibriumConfig,
    pub modes: NormalModes,
    pub kernels: Vec<GaussianKernel>,
    pub sites: Vec<SchmidtSite>,
}

impl AsymptoticSolution {
    pub fn compute(spec: &SystemSpec) -> Result<Self> {
        let equilibrium = solve_equilibrium(spec)?;
        let modes = normal_modes(&equilibrium, spec.d)?;
        let kernels = (1..=spec.n)
            .map(|site| site_kernel(&modes, site, spec.n))
            .collect::<Result<Vec<_>>>()?;
        let sites = kernels.iter().map(mehler_schmidt).collect::<Result<Vec<_>>>()?;
        Ok(Self { spec: *spec, equilibrium, modes, kernels, sites })
    }

    /// The density matrix with sites placed at the equilibrium positions for strength `g`.
    pub fn rdm_at_strength(&self, g: f64) -> Result<AsymptoticRdm> {
        let centers = crate::crystal::scale_positions(&self.equilibrium, self.spec.d, g)?;
        assemble_asymptotic_rdm(&self.sites, &centers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solution(n: usize, d: f64) -> AsymptoticSolution {
        AsymptoticSolution::compute(&SystemSpec::new(n, d).unwrap()).unwrap()
    }

    #[test]
    fn two_particle_kernel() {
        let s = solution(2, 1.0);
        for k in &s.kernels {
            assert!((k.prefactor - 0.317_647_903_790_336_6).abs() < 1e-12);
            assert!((k.a - 0.658_493_649_053_890_4).abs() < 1e-12);
            assert!((k.b + 0.049_038_105_676_658).abs() < 1e-12);
        }
        let site = s.sites[0];
        assert!((site.y - 0.018_623_989_3).abs() < 1e-9);
        assert!((site.lambda0 - 0.490_688_005_4).abs() < 1e-9);
        assert!((site.site_trace - 0.5).abs() < 1e-12);
    }

    #[test]
    fn three_particle_occupancies() {
        let s = solution(3, 1.0);
        assert!((s.sites[0].lambda0 - 0.324905).abs() < 1e-6);
        assert!((s.sites[1].lambda0 - 0.319336).abs() < 1e-6);
        assert!((s.kernels[0].a - s.kernels[2].a).abs() < 1e-10);
        assert!((s.kernels[0].prefactor - s.kernels[2].prefactor).abs() < 1e-10);
    }

    #[test]
    fn invalid_inputs() {
        let s = solution(3, 1.0);
        assert!(site_kernel(&s.modes, 0, 3).is_err());
        assert!(site_kernel(&s.modes, 4, 3).is_err());
        assert!(site_kernel(&s.modes, 1, 4).is_err());
        let bad = GaussianKernel { site: 1, prefactor: 1.0, a: 0.1, b: -0.3 };
        assert!(matches!(mehler_schmidt(&bad), Err(Error::InvalidKernel(_))));
        let positive_b = GaussianKernel { site: 1, prefactor: 1.0, a: 1.0, b: 0.3 };
        assert!(mehler_schmidt(&positive_b).is_err());
    }

    #[test]
    fn middle_site_has_no_partner() {
        let s = solution(3, 1.0);
        let mid = s.sites[1];
        assert!(degenerate_pair(&mid, &mid, 3, 0, (0.0, 0.0)).is_err());
        assert!(degenerate_pair(&s.sites[0], &s.sites[1], 3, 0, (0.0, 1.0)).is_err());
        assert!(degenerate_pair(&s.sites[0], &s.sites[2], 3, 0, (-1.0, 1.0)).is_ok());
    }

    #[test]
    fn orbital_values_at_origin() {
        let s = solution(2, 1.0).sites[0];
        let v0 = natural_orbital(&s, 0);
        assert!((v0.evaluate(0.0) - (s.w / PI).powf(0.25)).abs() < 1e-15);
        assert_eq!(natural_orbital(&s, 1).evaluate(0.0), 0.0);
        let moved = natural_orbital(&s, 0).centered_at(2.0);
        assert!((moved.evaluate(2.0) - v0.evaluate(0.0)).abs() < 1e-15);
    }

    #[test]
    fn truncation_bounds_tail() {
        for n in 2..=8 {
            for site in solution(n, 3.0).sites {
                let l = site.truncation_level();
                let tail = site.lambda0 * site.y.powi(l as i32 + 1) / (1.0 - site.y);
                assert!(l >= 2 && tail <= TAIL_TOLERANCE);
            }
        }
    }
}
