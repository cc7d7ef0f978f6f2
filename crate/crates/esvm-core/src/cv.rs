//! Gradient-based (Stein) control variates.
//!
//! Every continuously differentiable vector field `phi` induces the function
//!
//! ```text
//! g_phi(theta) = -<phi(theta), grad U(theta)> + div phi(theta),
//! ```
//!
//! which integrates to zero against the target density. Along a trajectory
//! the gradient factor is the estimate recorded by the sampler (the exact
//! gradient for ULA, the minibatch estimate otherwise), so evaluating a basis
//! never touches the model again.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::sampler::Trajectory;

/// A finite family of vector fields with analytic divergences.
///
/// Field `j` of an `RbfGrid` basis with centers `c_0..c_{m-1}` is
/// `psi_k(theta) * e_a` with `k = j / dim`, `a = j % dim`, and
/// `psi_k(theta) = exp(-||theta - c_k||^2 / (2 sigma^2))`, so one scalar
/// bump drives all `dim` coordinate directions.
#[derive(Debug, Clone, PartialEq)]
pub enum ControlVariateBasis {
    /// No fields at all; fitting against it is a no-op.
    Empty { dim: usize },
    /// Coordinate fields `e_1..e_d` (divergence zero).
    ConstantFields { dim: usize },
    /// 1-D monomial fields `1, x, x^2, ..., x^degree`.
    Polynomial1d { degree: usize },
    /// Gaussian bumps on a regular grid times each coordinate direction.
    RbfGrid {
        dim: usize,
        centers: Mat,
        sigma: f64,
    },
}

impl ControlVariateBasis {
    pub fn empty(dim: usize) -> Self {
        ControlVariateBasis::Empty { dim }
    }

    pub fn constant_fields(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                context: "constant-field basis needs dimension at least 1",
            });
        }
        Ok(ControlVariateBasis::ConstantFields { dim })
    }

    pub fn polynomial_1d(degree: usize) -> Self {
        ControlVariateBasis::Polynomial1d { degree }
    }

    /// Regular `points_per_axis^dim` grid of Gaussian bumps over
    /// `[lo, hi]^dim` with bandwidth `sigma`.
    pub fn rbf_grid(
        dim: usize,
        lo: f64,
        hi: f64,
        points_per_axis: usize,
        sigma: f64,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                context: "rbf basis needs dimension at least 1",
            });
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParameter {
                context: "rbf bandwidth must be positive",
            });
        }
        if points_per_axis == 0 {
            return Err(Error::InvalidParameter {
                context: "rbf grid needs at least one point per axis",
            });
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter {
                context: "rbf grid bounds must be finite with lo < hi",
            });
        }
        let total = points_per_axis
            .checked_pow(dim as u32)
            .filter(|&t| t <= 1_000_000)
            .ok_or(Error::InvalidParameter {
                context: "rbf grid is too large",
            })?;
        let axis: Vec<f64> = if points_per_axis == 1 {
            vec![0.5 * (lo + hi)]
        } else {
            (0..points_per_axis)
                .map(|i| lo + i as f64 * (hi - lo) / (points_per_axis - 1) as f64)
                .collect()
        };
        let mut centers = Mat::zeros(total, dim);
        for k in 0..total {
            let mut rem = k;
            for a in 0..dim {
                centers[(k, a)] = axis[rem % points_per_axis];
                rem /= points_per_axis;
            }
        }
        Ok(ControlVariateBasis::RbfGrid {
            dim,
            centers,
            sigma,
        })
    }

    /// Ambient dimension the fields act on.
    pub fn dim(&self) -> usize {
        match self {
            ControlVariateBasis::Empty { dim } => *dim,
            ControlVariateBasis::ConstantFields { dim } => *dim,
            ControlVariateBasis::Polynomial1d { .. } => 1,
            ControlVariateBasis::RbfGrid { dim, .. } => *dim,
        }
    }

    /// Number of fields `p`.
    pub fn len(&self) -> usize {
        match self {
            ControlVariateBasis::Empty { .. } => 0,
            ControlVariateBasis::ConstantFields { dim } => *dim,
            ControlVariateBasis::Polynomial1d { degree } => degree + 1,
            ControlVariateBasis::RbfGrid { dim, centers, .. } => centers.rows() * dim,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Write the vector field `phi_j(theta)` into `out`.
    pub fn field(&self, j: usize, theta: &[f64], out: &mut [f64]) {
        debug_assert!(j < self.len());
        debug_assert_eq!(theta.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        out.fill(0.0);
        match self {
            ControlVariateBasis::Empty { .. } => {}
            ControlVariateBasis::ConstantFields { .. } => out[j] = 1.0,
            ControlVariateBasis::Polynomial1d { .. } => {
                let x = theta[0];
                let mut p = 1.0;
                for _ in 0..j {
                    p *= x;
                }
                out[0] = p;
            }
            ControlVariateBasis::RbfGrid { dim, centers, sigma } => {
                let k = j / dim;
                let a = j % dim;
                out[a] = rbf_value(centers.row(k), *sigma, theta);
            }
        }
    }

    /// Analytic divergence of field `j` at `theta`.
    pub fn divergence(&self, j: usize, theta: &[f64]) -> f64 {
        debug_assert!(j < self.len());
        debug_assert_eq!(theta.len(), self.dim());
        match self {
            ControlVariateBasis::Empty { .. } => 0.0,
            ControlVariateBasis::ConstantFields { .. } => 0.0,
            ControlVariateBasis::Polynomial1d { .. } => {
                if j == 0 {
                    0.0
                } else {
                    let x = theta[0];
                    let mut p = 1.0;
                    for _ in 0..j - 1 {
                        p *= x;
                    }
                    j as f64 * p
                }
            }
            ControlVariateBasis::RbfGrid { dim, centers, sigma } => {
                let k = j / dim;
                let a = j % dim;
                let psi = rbf_value(centers.row(k), *sigma, theta);
                -(psi * (theta[a] - centers[(k, a)]) / (sigma * sigma))
            }
        }
    }

    /// All `p` control-variate values at one state, sharing work across the
    /// fields of a family.
    pub(crate) fn stein_row(&self, theta: &[f64], grad: &[f64], out: &mut [f64]) {
        match self {
            ControlVariateBasis::Empty { .. } => {}
            ControlVariateBasis::ConstantFields { .. } => {
                for (o, g) in out.iter_mut().zip(grad) {
                    *o = -g;
                }
            }
            ControlVariateBasis::Polynomial1d { degree } => {
                let x = theta[0];
                let g = grad[0];
                let mut prev = 0.0;
                let mut cur = 1.0;
                for j in 0..=*degree {
                    out[j] = -(cur * g) + j as f64 * prev;
                    prev = cur;
                    cur *= x;
                }
            }
            ControlVariateBasis::RbfGrid { dim, centers, sigma } => {
                let s2 = sigma * sigma;
                for k in 0..centers.rows() {
                    let c = centers.row(k);
                    let psi = rbf_value(c, *sigma, theta);
                    for a in 0..*dim {
                        out[k * dim + a] = -(psi * grad[a]) - psi * (theta[a] - c[a]) / s2;
                    }
                }
            }
        }
    }
}

fn rbf_value(center: &[f64], sigma: f64, theta: &[f64]) -> f64 {
    let mut sq = 0.0;
    for (t, c) in theta.iter().zip(center) {
        let d = t - c;
        sq += d * d;
    }
    (-sq / (2.0 * sigma * sigma)).exp()
}

/// Control-variate value `-<phi_j(theta), grad> + div phi_j(theta)` where
/// `grad` is the gradient estimate recorded for `theta`.
pub fn stein_value(
    basis: &ControlVariateBasis,
    j: usize,
    theta: &[f64],
    grad: &[f64],
) -> Result<f64> {
    if j >= basis.len() {
        return Err(Error::InvalidParameter {
            context: "field index out of range",
        });
    }
    if theta.len() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            actual: theta.len(),
        });
    }
    if grad.len() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            actual: grad.len(),
        });
    }
    let mut f = vec![0.0; basis.dim()];
    basis.field(j, theta, &mut f);
    let mut dot = 0.0;
    for (a, g) in f.iter().zip(grad) {
        dot += a * g;
    }
    Ok(-dot + basis.divergence(j, theta))
}

/// Evaluate every control variate at every recorded state: entry `(k, j)` is
/// `g_{phi_j}(theta_k)` computed with the stored gradient estimate.
pub fn evaluate_basis(traj: &Trajectory, basis: &ControlVariateBasis) -> Result<Mat> {
    if traj.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            actual: traj.dim(),
        });
    }
    let n = traj.len();
    let p = basis.len();
    let mut values = Mat::zeros(n, p);
    for k in 0..n {
        let theta = traj.samples.row(k);
        let grad = traj.grad_estimates.row(k);
        basis.stein_row(theta, grad, values.row_mut(k));
    }
    Ok(values)
}

/// `h_k = f_k - sum_j beta_j * basis_values[(k, j)]`.
pub fn adjusted_series(
    f_values: &[f64],
    basis_values: &Mat,
    beta: &[f64],
) -> Result<Vec<f64>> {
    if f_values.len() != basis_values.rows() {
        return Err(Error::DimensionMismatch {
            expected: basis_values.rows(),
            actual: f_values.len(),
        });
    }
    if beta.len() != basis_values.cols() {
        return Err(Error::DimensionMismatch {
            expected: basis_values.cols(),
            actual: beta.len(),
        });
    }
    let mut out = Vec::with_capacity(f_values.len());
    for (k, &f) in f_values.iter().enumerate() {
        let row = basis_values.row(k);
        let mut corr = 0.0;
        for (b, v) in beta.iter().zip(row) {
            corr += b * v;
        }
        out.push(f - corr);
    }
    Ok(out)
}
