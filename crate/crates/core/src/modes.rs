//! Normal modes of the crystal: Hessian of `V^{g=1}` at equilibrium and its
//! eigen-decomposition `H = Uᵀ diag(ω²) U`.
//!
//! Rows of `U` are either mirror symmetric (`U_ij = U_i,N-j+1`) or mirror
//! antisymmetric (`U_ij = -U_i,N-j+1`). The Hessian does not depend on `g`.

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::crystal::{potential_hessian, EquilibriumConfig};
use crate::error::{Error, Result};
use crate::jacobi::jacobi_eigen;

/// Tolerance for the row mirror tests.
pub const PARITY_TOLERANCE: f64 = 1e-8;
/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalModes {
    /// Squared frequencies, ascending. The first is the centre-of-mass mode, ω² = 1.
    pub omega_sq: Vec<f64>,
    /// Row `i` is the eigenvector of mode `i`.
    #[serde(serialize_with = "serialize_rows")]
    pub u: DMatrix<f64>,
    pub parity: Vec<Parity>,
}

fn serialize_rows<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    rows.serialize(s)
}

impl NormalModes {
    pub fn len(&self) -> usize {
        self.omega_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega_sq.is_empty()
    }

    /// Mode frequencies ω_i.
    pub fn omega(&self) -> Vec<f64> {
        self.omega_sq.iter().map(|w| w.sqrt()).collect()
    }

    /// `Uᵀ diag(ω²) U`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.omega_sq.clone()));
        self.u.transpose() * d * &self.u
    }
}

/// Hessian of the unit-strength potential at the equilibrium configuration.
pub fn hessian(config: &EquilibriumConfig, d: f64) -> Result<DMatrix<f64>> {
    potential_hessian(d, &config.beta)
}

fn mirror(v: &[f64]) -> Vec<f64> {
    v.iter().rev().copied().collect()
}

fn classify(row: &[f64]) -> Option<Parity> {
    let m = mirror(row);
    let sym = row.iter().zip(&m).all(|(a, b)| (a - b).abs() <= PARITY_TOLERANCE);
    let anti = row.iter().zip(&m).all(|(a, b)| (a + b).abs() <= PARITY_TOLERANCE);
    match (sym, anti) {
        (true, false) => Some(Parity::Symmetric),
        (false, true) => Some(Parity::Antisymmetric),
        _ => None,
    }
}

/// Orthonormal basis (modified Gram-Schmidt) of the span of `vectors`, dropping
/// directions with norm below `tol`.
fn orthonormal_span(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for b in &basis {
            let proj: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= proj * y);
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > tol {
            basis.push(w.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

/// Re-mix a degenerate cluster so every vector has definite mirror parity.
fn remix_cluster(rows: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let (sym, anti): (Vec<_>, Vec<_>) = rows
        .iter()
        .map(|r| {
            let m = mirror(r);
            let s: Vec<f64> = r.iter().zip(&m).map(|(a, b)| 0.5 * (a + b)).collect();
            let a: Vec<f64> = r.iter().zip(&m).map(|(a, b)| 0.5 * (a - b)).collect();
            (s, a)
        })
        .unzip();
    let mut out = orthonormal_span(&sym, 1e-6);
    out.extend(orthonormal_span(&anti, 1e-6));
    (out.len() == rows.len()).then_some(out)
}

fn fix_sign(row: &mut [f64]) {
    if let Some(first) = row.iter().copied().find(|x| x.abs() > 1e-12) {
        if first < 0.0 {
            row.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Diagonalize a positive-definite Hessian into normal modes.
pub fn decompose(h: &DMatrix<f64>) -> Result<NormalModes> {
    let eig = jacobi_eigen(h)?;
    if let Some(&bad) = eig.values.iter().find(|&&w| w <= 0.0) {
        return Err(Error::NotMinimum(bad));
    }
    let n = eig.values.len();
    let mut rows: Vec<Vec<f64>> = (0..n).map(|i| eig.vectors.row(i).iter().copied().collect()).collect();

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig.values[end] - eig.values[start] <= DEGENERACY_TOLERANCE {
            end += 1;
        }
        if end - start > 1 {
            if let Some(mixed) = remix_cluster(&rows[start..end]) {
                rows.splice(start..end, mixed);
            }
        }
        start = end;
    }

    let mut parity = Vec::with_capacity(n);
    for row in rows.iter_mut() {
        fix_sign(row);
        parity.push(classify(row).ok_or_else(|| {
            Error::InvalidArgument("eigenvector without definite mirror parity".into())
        })?);
    }
    let u = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    Ok(NormalModes { omega_sq: eig.values, u, parity })
}

/// Hessian and decomposition in one step.
pub fn normal_modes(config: &EquilibriumConfig, d: f64) -> Result<NormalModes> {
    decompose(&hessian(config, d)?)
}
