//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Convergence threshold on the off-diagonal Frobenius norm, relative to the
/// Frobenius norm of the input.
pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order and the matching eigenvectors as rows.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Row `i` is the unit eigenvector of `values[i]`.
    pub vectors: DMatrix<f64>,
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// Diagonalize a symmetric matrix by cyclic Jacobi rotations.
///
/// Only the lower triangle is trusted; the input is symmetrized first.
pub fn jacobi_eigen(matrix: &DMatrix<f64>) -> Result<SymmetricEigen> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "expected a square matrix, got {}x{}",
            n,
            matrix.ncols()
        )));
    }
    let mut a = DMatrix::from_fn(n, n, |i, j| {
        if i >= j {
            matrix[(i, j)]
        } else {
            matrix[(j, i)]
        }
    });
    // columns accumulate the eigenvectors
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm().max(f64::MIN_POSITIVE);

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > OFF_DIAGONAL_TOLERANCE * scale {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Convergence {
                iterations: sweeps,
                residual: off_diagonal_norm(&a) / scale,
                last: (0..n).map(|i| a[(i, i)]).collect(),
            });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                if apq.abs() < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |row, col| v[(col, order[row])]);
    Ok(SymmetricEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_by_two() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]);
        let e = jacobi_eigen(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!((e.values[1] - 3.0).abs() < 1e-15);
        let r = e.vectors.row(0);
        assert!((r[0].abs() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((r[0] - r[1]).abs() < 1e-15);
    }

    #[test]
    fn diagonal_input_is_untouched() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let e = jacobi_eigen(&m).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_non_square() {
        assert!(jacobi_eigen(&DMatrix::zeros(2, 3)).is_err());
    }

    proptest! {
        #[test]
        fn reconstructs_random_symmetric(entries in prop::collection::vec(-5.0f64..5.0, 36)) {
            let raw = DMatrix::from_row_slice(6, 6, &entries);
            let m = &raw + raw.transpose();
            let e = jacobi_eigen(&m).unwrap();
            let u = &e.vectors;
            let ortho = u * u.transpose() - DMatrix::<f64>::identity(6, 6);
            prop_assert!(ortho.amax() < 1e-12);
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(e.values.clone()));
            let rebuilt = u.transpose() * d * u;
            prop_assert!((rebuilt - &m).amax() < 1e-11 * m.amax().max(1.0));
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
