//! Dense symmetric linear algebra for the small systems this crate solves:
//! ridge-regularized normal equations (p x p) and the inverse symmetric
//! square root of a Gram matrix (d x d). Sizes stay in the tens, so plain
//! Cholesky and cyclic Jacobi are enough.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::mat::Mat;

/// Lower-triangular Cholesky factor of a symmetric matrix, or `None` if a
/// pivot is non-positive or non-finite.
pub(crate) fn cholesky(a: &Mat) -> Option<Mat> {
    let n = a.rows();
    debug_assert_eq!(a.cols(), n);
    let mut l = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if !(s > 0.0) || !s.is_finite() {
                    return None;
                }
                l[(i, i)] = s.sqrt();
            } else {
                l[(i, j)] = s / l[(j, j)];
            }
        }
    }
    Some(l)
}

/// Solve `L L^T x = b` given the lower factor `L`.
pub(crate) fn cholesky_solve(l: &Mat, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    debug_assert_eq!(b.len(), n);
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors stored as columns,
/// so `a = V diag(w) V^T`. Eigenvalues are not sorted.
pub(crate) fn sym_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    let n = a.rows();
    debug_assert_eq!(a.cols(), n);
    let mut m = a.clone();
    let mut v = Mat::zeros(n, n);
    for i in 0..n {
        v[(i, i)] = 1.0;
    }
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        let scale: f64 = (0..n).map(|i| m[(i, i)].abs()).fold(1e-300, f64::max);
        if off.sqrt() <= 1e-14 * scale * n as f64 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let w = (0..n).map(|i| m[(i, i)]).collect();
    (w, v)
}

/// Smallest eigenvalue of a symmetric matrix (diagnostic for solver errors).
pub(crate) fn min_eigenvalue(a: &Mat) -> f64 {
    if a.rows() == 0 {
        return 0.0;
    }
    let (w, _) = sym_eigen(a);
    w.into_iter().fold(f64::INFINITY, f64::min)
}

/// Inverse symmetric square root `a^{-1/2}` of a symmetric positive definite
/// matrix. Fails with the condition estimate `lambda_max / lambda_min` when
/// any eigenvalue drops below `rel_floor * lambda_max`.
pub(crate) fn sym_inv_sqrt(a: &Mat, rel_floor: f64) -> Result<Mat, f64> {
    let n = a.rows();
    let (w, v) = sym_eigen(a);
    let max_ev = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_ev = w.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max_ev > 0.0) || min_ev < rel_floor * max_ev {
        let cond = if min_ev > 0.0 {
            max_ev / min_ev
        } else {
            f64::INFINITY
        };
        return Err(cond);
    }
    // V diag(1/sqrt(w)) V^T
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += v[(i, k)] * v[(j, k)] / w[k].sqrt();
            }
            out[(i, j)] = s;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn mat(rows: usize, cols: usize, v: &[f64]) -> Mat {
        Mat::from_vec(rows, cols, v.to_vec()).unwrap()
    }

    #[test]
    fn cholesky_solves_spd_system() {
        let a = mat(2, 2, &[4.0, 1.0, 1.0, 3.0]);
        let l = cholesky(&a).unwrap();
        let x = cholesky_solve(&l, &[1.0, 2.0]);
        // a * x == b
        assert_abs_diff_eq!(4.0 * x[0] + x[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[0] + 3.0 * x[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = mat(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(cholesky(&a).is_none());
    }

    #[test]
    fn jacobi_recovers_spectrum() {
        let a = mat(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let (mut w, v) = sym_eigen(&a);
        w.sort_by(f64::total_cmp);
        let r2 = core::f64::consts::SQRT_2;
        assert_abs_diff_eq!(w[0], 2.0 - r2, epsilon = 1e-10);
        assert_abs_diff_eq!(w[1], 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(w[2], 2.0 + r2, epsilon = 1e-10);
        // columns orthonormal
        for i in 0..3 {
            for j in 0..3 {
                let mut dot = 0.0;
                for k in 0..3 {
                    dot += v[(k, i)] * v[(k, j)];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(dot, want, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn inv_sqrt_squares_to_inverse() {
        let a = mat(2, 2, &[5.0, 2.0, 2.0, 3.0]);
        let s = sym_inv_sqrt(&a, 1e-10).unwrap();
        // (a^{-1/2})^T a a^{-1/2} == identity
        let mut prod = Mat::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = 0.0;
                for k in 0..2 {
                    for l in 0..2 {
                        acc += s[(i, k)] * a[(k, l)] * s[(l, j)];
                    }
                }
                prod[(i, j)] = acc;
            }
        }
        assert_abs_diff_eq!(prod[(0, 0)], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(prod[(0, 1)], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(prod[(1, 1)], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn inv_sqrt_reports_condition_for_singular() {
        let a = mat(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let err = sym_inv_sqrt(&a, 1e-10).unwrap_err();
        assert!(err > 1e10);
    }
}
