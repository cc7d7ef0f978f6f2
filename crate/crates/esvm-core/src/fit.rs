//! Coefficient selection for linear control-variate families.
//!
//! For `h = f - sum_j beta_j g_j`, both objectives in play here are exactly
//! quadratic in `beta`:
//!
//! * the marginal empirical variance `D_n(h)`, and
//! * the lag-windowed spectral variance `V_n(h)`,
//!
//! because each is a symmetric bilinear form `B` applied to the centered
//! series. Writing `Q_ij = B(g_i, g_j)`, `b_i = B(f, g_i)`, `c = B(f, f)`
//! gives `Obj(beta) = beta^T Q beta - 2 b^T beta + c`, so the minimizer
//! solves the ridge-regularized normal equations `(Q + lambda I) beta = b`.
//! No iterative descent is involved.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::cv::{evaluate_basis, ControlVariateBasis};
use crate::error::{Error, Result};
use crate::linalg;
use crate::mat::Mat;
use crate::sampler::Trajectory;
use crate::variance::{sample_mean, LagWindow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// Marginal empirical variance `D_n` (divisor `n - 1`).
    Evm,
    /// Lag-windowed spectral variance `V_n`.
    Esvm,
}

impl ObjectiveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ObjectiveKind::Evm => "evm",
            ObjectiveKind::Esvm => "esvm",
        }
    }
}

/// The objective `beta^T Q beta - 2 b^T beta + c` plus the ridge strength
/// used when solving.
#[derive(Debug, Clone)]
pub struct QuadraticObjective {
    pub matrix: Mat,
    pub linear: Vec<f64>,
    pub constant: f64,
    pub ridge: f64,
    pub kind: ObjectiveKind,
}

impl QuadraticObjective {
    pub fn size(&self) -> usize {
        self.linear.len()
    }

    /// Objective value at `beta` (without the ridge term).
    pub fn evaluate(&self, beta: &[f64]) -> f64 {
        debug_assert_eq!(beta.len(), self.size());
        let p = self.size();
        let mut quad = 0.0;
        for i in 0..p {
            let row = self.matrix.row(i);
            let mut acc = 0.0;
            for (q, b) in row.iter().zip(beta) {
                acc += q * b;
            }
            quad += beta[i] * acc;
        }
        let mut lin = 0.0;
        for (b, x) in self.linear.iter().zip(beta) {
            lin += b * x;
        }
        quad - 2.0 * lin + self.constant
    }
}

/// Optimal coefficients with before/after objective values.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub coefficients: Vec<f64>,
    pub objective_before: f64,
    pub objective_after: f64,
    pub kind: ObjectiveKind,
    /// Ridge strength actually used (after any escalation).
    pub ridge: f64,
}

/// Banded Toeplitz product `out[k] = sum_{|l| < b} w(l) v[k+l]` (indices
/// clipped to the series).
fn toeplitz_apply(window: &LagWindow, v: &[f64], out: &mut [f64]) {
    let n = v.len();
    let b = window.truncation();
    for k in 0..n {
        let mut acc = window.weight(0) * v[k];
        for l in 1..b {
            let w = window.weight(l as isize);
            if k >= l {
                acc += w * v[k - l];
            }
            if k + l < n {
                acc += w * v[k + l];
            }
        }
        out[k] = acc;
    }
}

fn centered_column(values: &[f64]) -> Result<Vec<f64>> {
    let mean = sample_mean(values)?;
    Ok(values.iter().map(|x| x - mean).collect())
}

/// Assemble the exact quadratic form of the chosen objective over the span
/// of the basis columns.
///
/// `window` is required for [`ObjectiveKind::Esvm`] and ignored for EVM.
/// `ridge` defaults to `1e-6 * trace(Q) / p`.
pub fn assemble_quadratic(
    f_values: &[f64],
    basis_values: &Mat,
    kind: ObjectiveKind,
    window: Option<&LagWindow>,
    ridge: Option<f64>,
) -> Result<QuadraticObjective> {
    let n = f_values.len();
    if n != basis_values.rows() {
        return Err(Error::DimensionMismatch {
            expected: basis_values.rows(),
            actual: n,
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter {
            context: "objective needs at least two observations",
        });
    }
    if f_values.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput {
            context: "functional values",
        });
    }
    let p = basis_values.cols();

    let window = match kind {
        ObjectiveKind::Esvm => {
            let w = window.ok_or(Error::InvalidParameter {
                context: "spectral objective needs a lag window",
            })?;
            if w.truncation() >= n {
                return Err(Error::TruncationTooLarge {
                    truncation: w.truncation(),
                    len: n,
                });
            }
            Some(w)
        }
        ObjectiveKind::Evm => None,
    };

    let cf = centered_column(f_values)?;
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(p);
    for j in 0..p {
        cols.push(centered_column(&basis_values.column(j))?);
    }

    // For ESVM, pre-multiply every centered column by the window matrix so
    // each bilinear entry is a plain dot product afterwards.
    let (denom, yf, ycols) = match window {
        Some(w) => {
            let mut yf = vec![0.0; n];
            toeplitz_apply(w, &cf, &mut yf);
            let mut ycols = Vec::with_capacity(p);
            for col in &cols {
                let mut y = vec![0.0; n];
                toeplitz_apply(w, col, &mut y);
                ycols.push(y);
            }
            (n as f64, yf, ycols)
        }
        None => ((n - 1) as f64, cf.clone(), cols.clone()),
    };

    let dot = |a: &[f64], b: &[f64]| -> f64 {
        let mut acc = 0.0;
        for (x, y) in a.iter().zip(b) {
            acc += x * y;
        }
        acc
    };

    let constant = dot(&cf, &yf) / denom;
    let mut linear = vec![0.0; p];
    for j in 0..p {
        linear[j] = dot(&cf, &ycols[j]) / denom;
    }
    let mut matrix = Mat::zeros(p, p);
    for i in 0..p {
        for j in i..p {
            let v = dot(&cols[i], &ycols[j]) / denom;
            matrix[(i, j)] = v;
        }
    }
    // symmetrize: the bilinear form is symmetric, fill the lower triangle
    for i in 0..p {
        for j in 0..i {
            matrix[(i, j)] = matrix[(j, i)];
        }
    }

    let ridge = match ridge {
        Some(l) => {
            if !(l.is_finite() && l >= 0.0) {
                return Err(Error::InvalidParameter {
                    context: "ridge strength must be non-negative",
                });
            }
            l
        }
        None => {
            if p == 0 {
                0.0
            } else {
                let trace: f64 = (0..p).map(|i| matrix[(i, i)]).sum();
                (1e-6 * trace / p as f64).max(0.0)
            }
        }
    };

    Ok(QuadraticObjective {
        matrix,
        linear,
        constant,
        ridge,
        kind,
    })
}

fn try_cholesky(objective: &QuadraticObjective, lambda: f64) -> Option<Vec<f64>> {
    let p = objective.size();
    let mut system = objective.matrix.clone();
    for i in 0..p {
        system[(i, i)] += lambda;
    }
    let l = linalg::cholesky(&system)?;
    let beta = linalg::cholesky_solve(&l, &objective.linear);
    beta.iter().all(|x| x.is_finite()).then_some(beta)
}

/// Solve `(Q + lambda I) beta = b`.
///
/// The well-posed path is a Cholesky factorization, with `lambda` escalated
/// tenfold up to four times when the matrix is positive semidefinite but
/// numerically singular. The window kernel is flat-top, hence not positive
/// semidefinite, so on noisy bases the spectral form can be genuinely
/// indefinite; its negative directions are finite-sample artifacts (the
/// limiting form is covariance-like), and the solve then restricts to the
/// positive eigenspace of `Q` rather than chasing an unbounded descent
/// direction.
pub fn solve_coefficients(objective: &QuadraticObjective) -> Result<FitResult> {
    let p = objective.size();
    if p == 0 {
        return Ok(FitResult {
            coefficients: Vec::new(),
            objective_before: objective.constant,
            objective_after: objective.constant,
            kind: objective.kind,
            ridge: objective.ridge,
        });
    }
    let lambda = objective.ridge;
    if let Some(beta) = try_cholesky(objective, lambda) {
        let after = objective.evaluate(&beta);
        return Ok(FitResult {
            coefficients: beta,
            objective_before: objective.constant,
            objective_after: after,
            kind: objective.kind,
            ridge: lambda,
        });
    }

    let (eigenvalues, vectors) = linalg::sym_eigen_of(&objective.matrix);
    let min_eig = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_eig = eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    if min_eig >= -1e-10 * max_eig.abs().max(1e-300) {
        // semidefinite up to noise: the pinned tenfold escalation applies
        let trace: f64 = (0..p).map(|i| objective.matrix[(i, i)]).sum();
        let escalation_floor = 1e-12 * (1.0 + trace.abs() / p as f64);
        let mut lam = lambda;
        for _ in 0..4 {
            lam = (lam * 10.0).max(escalation_floor);
            log::warn!("normal-equation factorization failed, ridge escalated to {lam:e}");
            if let Some(beta) = try_cholesky(objective, lam) {
                let after = objective.evaluate(&beta);
                return Ok(FitResult {
                    coefficients: beta,
                    objective_before: objective.constant,
                    objective_after: after,
                    kind: objective.kind,
                    ridge: lam,
                });
            }
        }
        return Err(Error::SingularSystem {
            min_eigenvalue: min_eig,
        });
    }

    // indefinite: project the solve onto directions of positive curvature
    log::warn!(
        "spectral objective matrix is indefinite (min eigenvalue {min_eig:e}); \
         solving on its positive eigenspace"
    );
    let keep = 1e-12 * max_eig.max(0.0);
    let mut beta = alloc::vec![0.0; p];
    let mut kept_any = false;
    for (i, &w) in eigenvalues.iter().enumerate() {
        if w > keep {
            kept_any = true;
            let mut proj = 0.0;
            for j in 0..p {
                proj += vectors[(j, i)] * objective.linear[j];
            }
            let coef = proj / (w + lambda);
            for j in 0..p {
                beta[j] += coef * vectors[(j, i)];
            }
        }
    }
    let b_norm: f64 = objective.linear.iter().map(|x| x * x).sum();
    if !kept_any && b_norm > 0.0 {
        return Err(Error::SingularSystem {
            min_eigenvalue: min_eig,
        });
    }
    let after = objective.evaluate(&beta);
    Ok(FitResult {
        coefficients: beta,
        objective_before: objective.constant,
        objective_after: after,
        kind: objective.kind,
        ridge: lambda,
    })
}

/// Evaluate the functional and the basis along a trajectory, assemble the
/// chosen objective, and solve for the coefficients.
pub fn fit_control_variate<F>(
    traj: &Trajectory,
    f: F,
    basis: &ControlVariateBasis,
    kind: ObjectiveKind,
    window: Option<&LagWindow>,
    ridge: Option<f64>,
) -> Result<FitResult>
where
    F: Fn(&[f64]) -> f64,
{
    if traj.is_empty() {
        return Err(Error::EmptyInput {
            context: "trajectory has no recorded states",
        });
    }
    let basis_values = evaluate_basis(traj, basis)?;
    let f_values: Vec<f64> = traj.samples.iter_rows().map(|row| f(row)).collect();
    let objective = assemble_quadratic(&f_values, &basis_values, kind, window, ridge)?;
    solve_coefficients(&objective)
}
