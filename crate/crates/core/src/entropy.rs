//! Von Neumann and linear entropies of the asymptotic density matrix.
//!
//! For a geometric ladder `λ_l = λ_0 y^l` the power sums close:
//! `Σ_l λ_l^q = π^{q/2} (A sqrt((1-y²)/w))^q / (1 - y^q)`. Differentiating in
//! `q` at `q = 1` gives the per-site entropy in closed form. Entropies are in
//! bits.

use std::f64::consts::PI;

use serde::Serialize;

use crate::asymptotic::SchmidtSite;
use crate::error::{Error, Result};

/// Allowed deviation of `Σ_i M_i` from one.
pub const TRACE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub n: usize,
    pub d: f64,
    #[serde(rename = "s_total_bits")]
    pub s_total: f64,
    #[serde(rename = "s_per_site")]
    pub per_site: Vec<f64>,
    #[serde(rename = "linear_entropy")]
    pub linear: f64,
    pub lambda0_sum: f64,
}

fn check_ratio(y: f64) -> Result<()> {
    if !(0.0..1.0).contains(&y) {
        return Err(Error::InvalidArgument(format!("Mehler ratio {y} outside [0, 1)")));
    }
    Ok(())
}

/// Closed-form `S_i = -Σ_l λ_l log₂ λ_l`:
///
/// ```text
/// S_i = -A sqrt(π(1+y)/w) ln( y^{2y} (πA²(1-y²)/w)^{1-y} ) / ((1-y)^{3/2} ln 4)
/// ```
pub fn site_entropy_closed(site: &SchmidtSite) -> Result<f64> {
    let (a, w, y) = (site.prefactor, site.w, site.y);
    check_ratio(y)?;
    let y_log_y = if y == 0.0 { 0.0 } else { y * y.ln() };
    let log_arg = 2.0 * y_log_y + (1.0 - y) * (PI * a * a * (1.0 - y * y) / w).ln();
    Ok(-a * (PI * (1.0 + y) / w).sqrt() * log_arg / ((1.0 - y).powf(1.5) * 4f64.ln()))
}

/// Direct summation over the truncated ladder.
pub fn site_entropy_direct(site: &SchmidtSite) -> Result<f64> {
    check_ratio(site.y)?;
    Ok(site
        .occupancies()
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum())
}

/// `Σ_l λ_l^q` in closed form. At `q = 1` this is the site trace.
pub fn renyi_sum(site: &SchmidtSite, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::InvalidArgument(format!("power sums need q >= 1, got {q}")));
    }
    check_ratio(site.y)?;
    let (a, w, y) = (site.prefactor, site.w, site.y);
    Ok(PI.powf(0.5 * q) * (a * ((1.0 - y * y) / w).sqrt()).powf(q) / (1.0 - y.powf(q)))
}

/// Paired assembly: `2Σ_{i≤N/2} S_i`, plus the middle site for odd `N`.
pub fn paired_sum(values: &[f64]) -> f64 {
    let n = values.len();
    let mut total: f64 = 2.0 * values[..n / 2].iter().sum::<f64>();
    if n % 2 == 1 {
        total += values[n / 2];
    }
    total
}

/// Total entropy, linear entropy and `Σ_i λ_0^{(i)}` of the asymptotic state.
pub fn total_entropy(sites: &[SchmidtSite], n: usize, d: f64) -> Result<EntropyReport> {
    if sites.len() != n {
        return Err(Error::InvalidArgument(format!("{} sites for {n} particles", sites.len())));
    }
    let traces: Vec<f64> = sites.iter().map(|s| s.site_trace).collect();
    let trace = paired_sum(&traces);
    if (trace - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::Inconsistency(format!("site traces sum to {trace}, not 1")));
    }
    let per_site = sites.iter().map(site_entropy_closed).collect::<Result<Vec<_>>>()?;
    let purity: f64 = sites.iter().map(|s| renyi_sum(s, 2.0)).sum::<Result<f64>>()?;
    Ok(EntropyReport {
        n,
        d,
        s_total: paired_sum(&per_site),
        per_site,
        linear: 1.0 - purity,
        lambda0_sum: sites.iter().map(|s| s.lambda0).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotic::AsymptoticSolution;
    use crate::crystal::SystemSpec;

    fn sites(n: usize, d: f64) -> Vec<SchmidtSite> {
        AsymptoticSolution::compute(&SystemSpec::new(n, d).unwrap()).unwrap().sites
    }

    #[test]
    fn two_particle_site_entropy() {
        let s = sites(2, 1.0)[0];
        // -Σ λ_l log₂ λ_l for λ_l = 0.4906880054 · 0.0186239893^l
        let expected = 0.568_089_771_3;
        assert!((site_entropy_closed(&s).unwrap() - expected).abs() < 1e-9);
        assert!((site_entropy_direct(&s).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn zero_ratio_limit() {
        let t: f64 = 0.25;
        // y = 0: single occupancy λ_0 = A sqrt(π/w) = t
        let w = 2.0;
        let site = SchmidtSite { site: 1, prefactor: t * (w / PI).sqrt(), w, y: 0.0, lambda0: t, site_trace: t };
        assert!((site_entropy_closed(&site).unwrap() + t * t.log2()).abs() < 1e-14);
    }

    #[test]
    fn renyi_sums() {
        let s = sites(2, 1.0)[0];
        assert!((renyi_sum(&s, 1.0).unwrap() - s.site_trace).abs() < 1e-14);
        assert!((renyi_sum(&s, 2.0).unwrap() - 0.240_858_261).abs() < 1e-9);
        assert!(renyi_sum(&s, 0.5).is_err());
    }

    #[test]
    fn two_particle_report() {
        let r = total_entropy(&sites(2, 1.0), 2, 1.0).unwrap();
        assert!((r.s_total - 1.136_179_54).abs() < 1e-8);
        assert!((r.linear - 0.518_283_48).abs() < 1e-8);
        assert!((r.lambda0_sum - 0.981_376).abs() < 1e-6);
    }

    #[test]
    fn invalid_ratio_rejected() {
        let mut s = sites(2, 1.0)[0];
        s.y = 1.0;
        assert!(site_entropy_closed(&s).is_err());
        assert!(site_entropy_direct(&s).is_err());
    }

    #[test]
    fn trace_violation_is_an_error() {
        let mut s = sites(3, 1.0);
        s[1].site_trace += 1e-6;
        assert!(matches!(total_entropy(&s, 3, 1.0), Err(Error::Inconsistency(_))));
        assert!(total_entropy(&s[..2], 3, 1.0).is_err());
    }
}
