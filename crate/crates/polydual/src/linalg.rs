//! Small dense kernels used by the certification machinery: Gram-Schmidt
//! complements, symmetric restriction, a cyclic Jacobi eigensolver, and
//! exact integer rank. Everything here targets matrices of a few dozen
//! rows, where robustness matters more than asymptotics.

use nalgebra::{DMatrix, DVector};

/// Relative convergence threshold for the Jacobi sweep.
const JACOBI_TOL: f64 = 1e-12;
/// Upper bound on Jacobi sweeps; quadratic convergence makes this generous.
const JACOBI_MAX_SWEEPS: usize = 30;

/// Orthonormal basis of the orthogonal complement of `span` in R^dim,
/// as the columns of a dim x (dim - span.len()) matrix.
///
/// The spanning vectors must be linearly independent; this is asserted
/// because every caller passes gauge directions that are independent by
/// construction.
pub fn orthonormal_complement(span: &[DVector<f64>], dim: usize) -> DMatrix<f64> {
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(dim);
    for v in span {
        assert_eq!(v.len(), dim, "span vector has wrong dimension");
        let u = orthogonalize(v, &basis);
        let norm = u.norm();
        assert!(
            norm > 1e-12 * v.norm().max(1.0),
            "spanning vectors are linearly dependent"
        );
        basis.push(u / norm);
    }
    let head = basis.len();
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut e = DVector::zeros(dim);
        e[k] = 1.0;
        let u = orthogonalize(&e, &basis);
        let norm = u.norm();
        if norm > 1e-10 {
            basis.push(u / norm);
        }
    }
    assert_eq!(basis.len(), dim, "failed to complete the basis");
    DMatrix::from_columns(&basis[head..])
}

// Two projection passes; a single pass loses orthogonality for
// near-dependent inputs.
fn orthogonalize(v: &DVector<f64>, basis: &[DVector<f64>]) -> DVector<f64> {
    let mut u = v.clone();
    for _ in 0..2 {
        for b in basis {
            let coeff = u.dot(b);
            u -= b * coeff;
        }
    }
    u
}

/// Pull a symmetric form back along a basis matrix: B^T H B.
pub fn restrict_form(h: &DMatrix<f64>, basis: &DMatrix<f64>) -> DMatrix<f64> {
    basis.transpose() * h * basis
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// sorted ascending. Converges when every off-diagonal entry drops
/// below `JACOBI_TOL` times the largest absolute entry.
pub fn jacobi_eigenvalues(matrix: &DMatrix<f64>) -> Vec<f64> {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "matrix must be square");
    let mut a = matrix.clone();
    let scale = a.amax();
    if scale == 0.0 || n == 1 {
        let mut d: Vec<f64> = a.diagonal().iter().copied().collect();
        d.sort_by(|x, y| x.partial_cmp(y).unwrap());
        return d;
    }
    let threshold = JACOBI_TOL * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off_max = 0.0f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off_max = off_max.max(a[(p, q)].abs());
            }
        }
        if off_max <= threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= threshold {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
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
            }
        }
    }

    let mut d: Vec<f64> = a.diagonal().iter().copied().collect();
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    d
}

/// Counts of eigenvalues below, within, and above the band
/// `[-zero_threshold, zero_threshold]`: (negative, zero, positive).
pub fn inertia(eigenvalues: &[f64], zero_threshold: f64) -> (usize, usize, usize) {
    let neg = eigenvalues.iter().filter(|&&e| e < -zero_threshold).count();
    let zero = eigenvalues
        .iter()
        .filter(|&&e| e.abs() <= zero_threshold)
        .count();
    (neg, zero, eigenvalues.len() - neg - zero)
}

/// Exact rank of an integer matrix over the rationals, by fraction-free
/// (Bareiss) elimination. Fits comfortably in i128 for the small signed
/// 0/±1 matrices this crate produces.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = rows.len();
    let n = rows[0].len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "ragged matrix");
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();

    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..n {
        let Some(pivot_row) = (rank..m).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot_row);
        let pivot = a[rank][col];
        for r in rank + 1..m {
            for c in col + 1..n {
                a[r][c] = (a[r][c] * pivot - a[r][col] * a[rank][c]) / prev;
            }
            a[r][col] = 0;
        }
        prev = pivot;
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}
