//! Nyström discretization of one-particle density-matrix kernels.
//!
//! The integral eigenproblem `∫ρ(x,y) v(y) dy = λ v(x)` becomes the matrix
//! problem for `B_ij = Δy ρ(m_i, m_j)` on the uniform grid
//! `m_i = -c + i Δy`, `Δy = 2c/(K-1)`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

/// Eigenvalues below this are reported as a convergence problem and left out
/// of entropy sums.
pub const NEGATIVE_EIGENVALUE_WARNING: f64 = -1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NystromGrid {
    pub c: f64,
    pub k: usize,
    pub dy: f64,
}

impl NystromGrid {
    pub fn new(c: f64, k: usize) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument(format!("grid half-extent must be positive, got {c}")));
        }
        if k < 3 {
            return Err(Error::InvalidArgument(format!("grid needs at least 3 points, got {k}")));
        }
        Ok(Self { c, k, dy: 2.0 * c / (k - 1) as f64 })
    }

    /// The smallest grid of spacing exactly `dy` whose half-extent is at least `c_min`.
    pub fn with_spacing(c_min: f64, dy: f64) -> Result<Self> {
        if !(dy > 0.0 && dy.is_finite()) {
            return Err(Error::InvalidArgument(format!("grid spacing must be positive, got {dy}")));
        }
        let intervals = ((2.0 * c_min / dy) - 1e-9).ceil().max(2.0) as usize;
        Self::new(0.5 * dy * intervals as f64, intervals + 1)
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.c + self.dy * i as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.k).map(|i| self.node(i)).collect()
    }
}

/// Trace-normalized discretized density matrix.
#[derive(Debug, Clone)]
pub struct RDMatrix {
    pub grid: NystromGrid,
    pub b: DMatrix<f64>,
    /// Trace before normalization; should be close to 1 for a converged grid.
    pub trace_raw: f64,
}

impl RDMatrix {
    /// Wrap an unnormalized `B` and rescale it to unit trace.
    pub fn from_raw(grid: NystromGrid, mut b: DMatrix<f64>) -> Result<Self> {
        if b.nrows() != grid.k || b.ncols() != grid.k {
            return Err(Error::InvalidArgument("matrix does not match grid size".into()));
        }
        let trace_raw = b.trace();
        if !(trace_raw > 0.0 && trace_raw.is_finite()) {
            return Err(Error::Inconsistency(format!("non-positive trace {trace_raw}")));
        }
        b /= trace_raw;
        Ok(Self { grid, b, trace_raw })
    }

    /// Sample a symmetric kernel on the grid. Only `i <= j` is evaluated.
    pub fn from_kernel(grid: NystromGrid, mut kernel: impl FnMut(f64, f64) -> f64) -> Result<Self> {
        let k = grid.k;
        let mut b = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let v = grid.dy * kernel(grid.node(i), grid.node(j));
                b[(i, j)] = v;
                b[(j, i)] = v;
            }
        }
        Self::from_raw(grid, b)
    }
}

/// Occupancies (descending) and the matching grid orbitals.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub occupancies: Vec<f64>,
    /// Column `s` holds orbital `s` sampled on the grid, normalized so that
    /// `Δy Σ_i v_s(m_i)² = 1`.
    pub orbitals: DMatrix<f64>,
    /// Most negative eigenvalue when it falls below [`NEGATIVE_EIGENVALUE_WARNING`].
    pub negative_warning: Option<f64>,
}

/// Diagonalize a normalized RDM matrix.
pub fn diagonalize_rdm(rdm: &RDMatrix) -> Spectrum {
    diagonalize_matrix(&rdm.b, rdm.grid.dy)
}

pub(crate) fn diagonalize_matrix(b: &DMatrix<f64>, dy: f64) -> Spectrum {
    let eig = SymmetricEigen::new(b.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let occupancies: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let scale = 1.0 / dy.sqrt();
    let orbitals = DMatrix::from_fn(b.nrows(), order.len(), |r, s| scale * eig.eigenvectors[(r, order[s])]);
    let lowest = occupancies.last().copied().unwrap_or(0.0);
    let negative_warning = (lowest < NEGATIVE_EIGENVALUE_WARNING).then_some(lowest);
    Spectrum { occupancies, orbitals, negative_warning }
}
