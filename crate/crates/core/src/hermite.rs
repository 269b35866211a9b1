//! Orthonormal Hermite functions by three-term recurrence.
//!
//! `ψ_n(t) = h_n(t) e^{-t²/2}` with `h_n = H_n / sqrt(2^n n! √π)`. Neither the
//! functions nor the polynomial parts ever form a factorial, so high orders do
//! not overflow.

use std::f64::consts::PI;

/// Values `h_0(t) ..= h_{n_max}(t)` of the normalized Hermite polynomials.
pub fn hermite_polynomials(n_max: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let h0 = PI.powf(-0.25);
    out.push(h0);
    if n_max == 0 {
        return out;
    }
    out.push(2f64.sqrt() * t * h0);
    for k in 1..n_max {
        let next = (2.0 / (k + 1) as f64).sqrt() * t * out[k] - (k as f64 / (k + 1) as f64).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Values `ψ_0(t) ..= ψ_{n_max}(t)` of the orthonormal Hermite functions.
pub fn hermite_functions(n_max: usize, t: f64) -> Vec<f64> {
    let gauss = (-0.5 * t * t).exp();
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(PI.powf(-0.25) * gauss);
    if n_max == 0 {
        return out;
    }
    out.push(2f64.sqrt() * t * out[0]);
    for k in 1..n_max {
        let next = (2.0 / (k + 1) as f64).sqrt() * t * out[k] - (k as f64 / (k + 1) as f64).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// A single orthonormal Hermite function `ψ_n(t)`.
pub fn hermite_function(n: usize, t: f64) -> f64 {
    hermite_functions(n, t)[n]
}

/// Laguerre polynomial `L_n(x)`.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
