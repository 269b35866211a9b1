//! Classical equilibrium of N trapped particles with `|x|^-d` repulsion.
//!
//! The potential `V^g(x) = ½Σx_i² + g Σ_{i>j} |x_i - x_j|^-d` scales as
//! `V^g(β g^{1/(2+d)}) = g^{2/(2+d)} V^1(β)`, so the minimum only has to be
//! found once, at unit strength, and is then stretched to any `g`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// Newton tolerance on the infinity norm of the gradient.
pub const GRADIENT_TOLERANCE: f64 = 1e-12;
/// Newton iteration cap.
pub const MAX_ITERATIONS: usize = 200;

/// Particle count, interaction exponent and (optionally) interaction strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemSpec {
    pub n: usize,
    pub d: f64,
    pub g: Option<f64>,
}

impl SystemSpec {
    /// A system for asymptotic (strength independent) work.
    pub fn new(n: usize, d: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("need at least two particles, got {n}")));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::Domain(format!("interaction exponent must be positive, got {d}")));
        }
        Ok(Self { n, d, g: None })
    }

    pub fn with_strength(n: usize, d: f64, g: f64) -> Result<Self> {
        let mut spec = Self::new(n, d)?;
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::Domain(format!("interaction strength must be positive, got {g}")));
        }
        spec.g = Some(g);
        Ok(spec)
    }

    /// The interaction strength, or a domain error when none was given.
    pub fn strength(&self) -> Result<f64> {
        self.g
            .ok_or_else(|| Error::Domain("this operation needs an interaction strength g".into()))
    }
}

/// Dimensionless equilibrium positions of the unit-strength potential.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumConfig {
    /// Strictly increasing, mirror antisymmetric.
    pub beta: Vec<f64>,
    /// Infinity norm of the gradient at `beta`.
    pub gradient_norm: f64,
    pub iterations: usize,
}

fn check_len(spec: &SystemSpec, positions: &[f64]) -> Result<()> {
    if positions.len() != spec.n {
        return Err(Error::InvalidArgument(format!(
            "expected {} positions, got {}",
            spec.n,
            positions.len()
        )));
    }
    Ok(())
}

fn check_distinct(positions: &[f64]) -> Result<()> {
    for i in 0..positions.len() {
        for j in 0..i {
            if positions[i] == positions[j] {
                return Err(Error::Domain(format!(
                    "particles {j} and {i} coincide at {}; the interaction diverges",
                    positions[i]
                )));
            }
        }
    }
    Ok(())
}

/// `V^g` at arbitrary strength.
pub fn potential_at_strength(d: f64, g: f64, positions: &[f64]) -> Result<f64> {
    check_distinct(positions)?;
    let trap: f64 = 0.5 * positions.iter().map(|x| x * x).sum::<f64>();
    let mut pair = 0.0;
    for i in 0..positions.len() {
        for j in 0..i {
            pair += (positions[i] - positions[j]).abs().powf(-d);
        }
    }
    Ok(trap + g * pair)
}

/// The unit-strength potential `V^{g=1}`.
pub fn evaluate_potential(spec: &SystemSpec, positions: &[f64]) -> Result<f64> {
    check_len(spec, positions)?;
    potential_at_strength(spec.d, 1.0, positions)
}

/// Analytic gradient of `V^g`.
pub fn gradient_at_strength(d: f64, g: f64, positions: &[f64]) -> Result<Vec<f64>> {
    check_distinct(positions)?;
    let mut grad = positions.to_vec();
    for k in 0..positions.len() {
        for j in 0..positions.len() {
            if j != k {
                let r = positions[k] - positions[j];
                grad[k] -= g * d * r.abs().powf(-d - 1.0) * r.signum();
            }
        }
    }
    Ok(grad)
}

/// Analytic gradient of `V^{g=1}`.
pub fn evaluate_gradient(spec: &SystemSpec, positions: &[f64]) -> Result<Vec<f64>> {
    check_len(spec, positions)?;
    gradient_at_strength(spec.d, 1.0, positions)
}

/// Hessian of `V^{g=1}`: unit trap curvature on the diagonal plus
/// `d(d+1)|Δ|^{-d-2}` pair stiffnesses.
pub fn potential_hessian(d: f64, positions: &[f64]) -> Result<DMatrix<f64>> {
    check_distinct(positions)?;
    let n = positions.len();
    let mut h = DMatrix::<f64>::identity(n, n);
    for k in 0..n {
        for j in 0..n {
            if j != k {
                let stiffness = d * (d + 1.0) * (positions[k] - positions[j]).abs().powf(-d - 2.0);
                h[(k, k)] += stiffness;
                h[(k, j)] -= stiffness;
            }
        }
    }
    Ok(h)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Project onto mirror-antisymmetric configurations: `β_i = -β_{N-i+1}`.
fn mirror_symmetrize(beta: &mut [f64]) {
    let n = beta.len();
    for i in 0..n / 2 {
        let half = 0.5 * (beta[i] - beta[n - 1 - i]);
        beta[i] = half;
        beta[n - 1 - i] = -half;
    }
    if n % 2 == 1 {
        beta[n / 2] = 0.0;
    }
}

fn is_ordered(beta: &[f64]) -> bool {
    beta.windows(2).all(|w| w[0] < w[1])
}

/// Damped Newton minimization of `V^{g=1}` in the ordered sector.
///
/// Starts from unit spacing centred on the origin. The potential is strictly
/// convex inside the sector, so a backtracking line search that refuses to
/// reorder particles is enough for global convergence.
pub fn solve_equilibrium(spec: &SystemSpec) -> Result<EquilibriumConfig> {
    let n = spec.n;
    let d = spec.d;
    let mut beta: Vec<f64> = (0..n).map(|i| i as f64 - 0.5 * (n - 1) as f64).collect();
    mirror_symmetrize(&mut beta);

    let mut value = potential_at_strength(d, 1.0, &beta)?;
    let mut grad = gradient_at_strength(d, 1.0, &beta)?;
    let mut residual = inf_norm(&grad);

    for iteration in 0..MAX_ITERATIONS {
        if residual <= GRADIENT_TOLERANCE {
            return Ok(EquilibriumConfig { beta, gradient_norm: residual, iterations: iteration });
        }
        let hessian = potential_hessian(d, &beta)?;
        let rhs = DVector::from_iterator(n, grad.iter().map(|g| -g));
        let step = hessian
            .cholesky()
            .ok_or_else(|| Error::NotMinimum(f64::NAN))?
            .solve(&rhs);

        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let mut trial: Vec<f64> = beta.iter().zip(step.iter()).map(|(b, s)| b + t * s).collect();
            mirror_symmetrize(&mut trial);
            if is_ordered(&trial) {
                let trial_value = potential_at_strength(d, 1.0, &trial)?;
                let trial_grad = gradient_at_strength(d, 1.0, &trial)?;
                let trial_residual = inf_norm(&trial_grad);
                // Near the minimum V stops resolving progress; accept on the gradient instead.
                if trial_value < value || trial_residual < residual {
                    beta = trial;
                    value = trial_value;
                    grad = trial_grad;
                    residual = trial_residual;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(Error::Convergence { iterations: iteration, residual, last: beta });
        }
    }
    if residual <= GRADIENT_TOLERANCE {
        return Ok(EquilibriumConfig { beta, gradient_norm: residual, iterations: MAX_ITERATIONS });
    }
    Err(Error::Convergence { iterations: MAX_ITERATIONS, residual, last: beta })
}

/// Stretch dimensionless positions to strength `g`: `x_i = β_i g^{1/(2+d)}`.
pub fn scale_positions(config: &EquilibriumConfig, d: f64, g: f64) -> Result<Vec<f64>> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::Domain(format!("interaction strength must be positive, got {g}")));
    }
    let factor = g.powf(1.0 / (2.0 + d));
    Ok(config.beta.iter().map(|b| b * factor).collect())
}
