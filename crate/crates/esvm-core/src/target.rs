//! Differentiable target potentials `U = U_0 + sum_i U_i` and the built-in
//! benchmark posteriors.
//!
//! A model exposes its base term (prior) and `K` likelihood components
//! separately so stochastic-gradient samplers can subsample components. All
//! gradients are hand-coded; a finite-difference checker lives in the test
//! suite.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg;
use crate::mat::Mat;
use crate::rng::{splitmix64, stream_rng};

/// Differentiable negative log-density split into a base term and `K`
/// likelihood components: `U(theta) = U_0(theta) + sum_{i<K} U_i(theta)`.
///
/// Potentials are defined up to additive constants; only differences and
/// gradients matter. Implementations are immutable after construction and
/// safe to share across threads.
pub trait TargetModel {
    fn dim(&self) -> usize;

    /// Number of likelihood components `K` (0 for single-term targets).
    fn n_components(&self) -> usize;

    /// Base term `U_0` (prior, or the whole potential when `K = 0`).
    fn base_potential(&self, theta: &[f64]) -> f64;

    fn component_potential(&self, index: usize, theta: &[f64]) -> f64;

    /// Add `grad U_0(theta)` into `grad`.
    fn accumulate_base_gradient(&self, theta: &[f64], grad: &mut [f64]);

    /// Add `grad U_index(theta)` into `grad`.
    fn accumulate_component_gradient(&self, index: usize, theta: &[f64], grad: &mut [f64]);
}

pub(crate) fn check_point<M: TargetModel + ?Sized>(model: &M, theta: &[f64]) -> Result<()> {
    if theta.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            actual: theta.len(),
        });
    }
    if theta.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput {
            context: "evaluation point contains NaN or infinity",
        });
    }
    Ok(())
}

/// Full potential `U(theta)`, up to an additive constant.
pub fn potential<M: TargetModel + ?Sized>(model: &M, theta: &[f64]) -> Result<f64> {
    check_point(model, theta)?;
    let mut u = model.base_potential(theta);
    for i in 0..model.n_components() {
        u += model.component_potential(i, theta);
    }
    Ok(u)
}

/// Full gradient `grad U_0 + sum_i grad U_i`, summed in ascending index order.
pub fn full_gradient<M: TargetModel + ?Sized>(model: &M, theta: &[f64]) -> Result<Vec<f64>> {
    check_point(model, theta)?;
    let mut grad = vec![0.0; model.dim()];
    model.accumulate_base_gradient(theta, &mut grad);
    for i in 0..model.n_components() {
        model.accumulate_component_gradient(i, theta, &mut grad);
    }
    Ok(grad)
}

pub(crate) fn check_batch<M: TargetModel + ?Sized>(model: &M, batch: &[usize]) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::EmptyInput {
            context: "minibatch must contain at least one index",
        });
    }
    let k = model.n_components();
    for &i in batch {
        if i >= k {
            return Err(Error::BatchIndexOutOfRange {
                index: i,
                n_components: k,
            });
        }
    }
    let mut sorted: Vec<usize> = batch.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateBatchIndex { index: w[0] });
        }
    }
    Ok(())
}

/// Unbiased minibatch gradient estimate
/// `grad U_0 + (K/M) * sum_{i in batch} grad U_i`.
pub fn stochastic_gradient<M: TargetModel + ?Sized>(
    model: &M,
    theta: &[f64],
    batch: &[usize],
) -> Result<Vec<f64>> {
    check_point(model, theta)?;
    check_batch(model, batch)?;
    let mut grad = vec![0.0; model.dim()];
    model.accumulate_base_gradient(theta, &mut grad);
    let mut buf = vec![0.0; model.dim()];
    for &i in batch {
        model.accumulate_component_gradient(i, theta, &mut buf);
    }
    let scale = model.n_components() as f64 / batch.len() as f64;
    for (g, b) in grad.iter_mut().zip(&buf) {
        *g += scale * b;
    }
    Ok(grad)
}

/// Numerically stable `log(1 + exp(t))`.
pub(crate) fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Numerically stable logistic function `1 / (1 + exp(-t))`.
pub(crate) fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `log(exp(a) + exp(b))` without overflow.
fn log_sum_exp2(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Gaussian with diagonal precision matrix: `U = sum_j p_j theta_j^2 / 2`.
#[derive(Debug, Clone)]
pub struct DiagonalGaussian {
    precisions: Vec<f64>,
}

impl DiagonalGaussian {
    /// Standard Gaussian in `dim` dimensions (`U = ||theta||^2 / 2`).
    pub fn isotropic(dim: usize) -> Self {
        DiagonalGaussian {
            precisions: vec![1.0; dim],
        }
    }

    pub fn new(precisions: Vec<f64>) -> Result<Self> {
        if precisions.is_empty() {
            return Err(Error::EmptyInput {
                context: "precision vector",
            });
        }
        if precisions.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::InvalidParameter {
                context: "precisions must be positive and finite",
            });
        }
        Ok(DiagonalGaussian { precisions })
    }

    pub fn precisions(&self) -> &[f64] {
        &self.precisions
    }
}

impl TargetModel for DiagonalGaussian {
    fn dim(&self) -> usize {
        self.precisions.len()
    }

    fn n_components(&self) -> usize {
        0
    }

    fn base_potential(&self, theta: &[f64]) -> f64 {
        theta
            .iter()
            .zip(&self.precisions)
            .map(|(x, p)| 0.5 * p * x * x)
            .sum()
    }

    fn component_potential(&self, _index: usize, _theta: &[f64]) -> f64 {
        0.0
    }

    fn accumulate_base_gradient(&self, theta: &[f64], grad: &mut [f64]) {
        for ((g, x), p) in grad.iter_mut().zip(theta).zip(&self.precisions) {
            *g += p * x;
        }
    }

    fn accumulate_component_gradient(&self, _index: usize, _theta: &[f64], _grad: &mut [f64]) {}
}

/// Bimodal 2-D benchmark target: mass concentrated on a ring of radius
/// `radius`, modulated by two Gaussian lobes in the first coordinate at
/// `+-radius`:
///
/// ```text
/// U(x) = (||x|| - radius)^2 / (2 ring_scale^2)
///        - log( exp(-(x_1-radius)^2 / (2 lobe_scale^2))
///              + exp(-(x_1+radius)^2 / (2 lobe_scale^2)) )
/// ```
///
/// The gradient of `||x||` is undefined at the origin; the radial term's
/// gradient is taken to be zero there.
#[derive(Debug, Clone)]
pub struct RingBimodal {
    radius: f64,
    ring_scale: f64,
    lobe_scale: f64,
}

impl RingBimodal {
    pub fn new() -> Self {
        RingBimodal {
            radius: 3.0,
            ring_scale: 1.0,
            lobe_scale: 3.0,
        }
    }
}

impl Default for RingBimodal {
    fn default() -> Self {
        Self::new()
    }
}

impl RingBimodal {
    fn lobe_log_weights(&self, x1: f64) -> (f64, f64) {
        let s2 = self.lobe_scale * self.lobe_scale;
        let la = -(x1 - self.radius) * (x1 - self.radius) / (2.0 * s2);
        let lb = -(x1 + self.radius) * (x1 + self.radius) / (2.0 * s2);
        (la, lb)
    }
}

impl TargetModel for RingBimodal {
    fn dim(&self) -> usize {
        2
    }

    fn n_components(&self) -> usize {
        0
    }

    fn base_potential(&self, theta: &[f64]) -> f64 {
        let r = theta[0].hypot(theta[1]);
        let ring = (r - self.radius) * (r - self.radius)
            / (2.0 * self.ring_scale * self.ring_scale);
        let (la, lb) = self.lobe_log_weights(theta[0]);
        ring - log_sum_exp2(la, lb)
    }

    fn component_potential(&self, _index: usize, _theta: &[f64]) -> f64 {
        0.0
    }

    fn accumulate_base_gradient(&self, theta: &[f64], grad: &mut [f64]) {
        let r = theta[0].hypot(theta[1]);
        if r > 0.0 {
            let coef = (r - self.radius) / (self.ring_scale * self.ring_scale * r);
            grad[0] += coef * theta[0];
            grad[1] += coef * theta[1];
        }
        let s2 = self.lobe_scale * self.lobe_scale;
        let (la, lb) = self.lobe_log_weights(theta[0]);
        let wa = sigmoid(la - lb);
        let wb = 1.0 - wa;
        grad[0] += wa * (theta[0] - self.radius) / s2 + wb * (theta[0] + self.radius) / s2;
    }

    fn accumulate_component_gradient(&self, _index: usize, _theta: &[f64], _grad: &mut [f64]) {}
}

/// Posterior over the location `mu` of the symmetric two-component mixture
/// `0.5 N(-mu, 1) + 0.5 N(mu, 1)` with a centered Gaussian prior on `mu`.
///
/// One likelihood component per observation, so the parameter is scalar and
/// `K` equals the sample size.
#[derive(Debug, Clone)]
pub struct GaussianMixturePosterior {
    observations: Vec<f64>,
    prior_variance: f64,
}

impl GaussianMixturePosterior {
    pub fn new(observations: Vec<f64>, prior_variance: f64) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptyInput {
                context: "mixture posterior needs at least one observation",
            });
        }
        if observations.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteInput {
                context: "mixture observations",
            });
        }
        if !(prior_variance.is_finite() && prior_variance > 0.0) {
            return Err(Error::InvalidParameter {
                context: "prior variance must be positive",
            });
        }
        Ok(GaussianMixturePosterior {
            observations,
            prior_variance,
        })
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }
}

impl TargetModel for GaussianMixturePosterior {
    fn dim(&self) -> usize {
        1
    }

    fn n_components(&self) -> usize {
        self.observations.len()
    }

    fn base_potential(&self, theta: &[f64]) -> f64 {
        theta[0] * theta[0] / (2.0 * self.prior_variance)
    }

    fn component_potential(&self, index: usize, theta: &[f64]) -> f64 {
        let x = self.observations[index];
        let mu = theta[0];
        let la = -(x + mu) * (x + mu) / 2.0;
        let lb = -(x - mu) * (x - mu) / 2.0;
        -log_sum_exp2(la, lb)
    }

    fn accumulate_base_gradient(&self, theta: &[f64], grad: &mut [f64]) {
        grad[0] += theta[0] / self.prior_variance;
    }

    fn accumulate_component_gradient(&self, index: usize, theta: &[f64], grad: &mut [f64]) {
        let x = self.observations[index];
        let mu = theta[0];
        // weights of the two mixture branches at this observation
        let wa = sigmoid(-2.0 * x * mu);
        let wb = 1.0 - wa;
        grad[0] += wa * (x + mu) - wb * (x - mu);
    }
}

/// Draw `count` observations from `0.5 N(-location, 1) + 0.5 N(location, 1)`.
pub fn generate_mixture_observations(seed: u64, count: usize, location: f64) -> Vec<f64> {
    let mut rng = stream_rng(splitmix64(seed), 0x474d4d44415441);
    (0..count)
        .map(|_| {
            let sign: bool = rng.random();
            let center = if sign { location } else { -location };
            let noise: f64 = rng.sample(StandardNormal);
            center + noise
        })
        .collect()
}

/// Binary-labeled design matrix: `features` is `K x d`, labels are `+-1`.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub features: Mat,
    pub labels: Vec<f64>,
}

impl LabeledDataset {
    pub fn new(features: Mat, labels: Vec<f64>) -> Result<Self> {
        if features.rows() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: features.rows(),
                actual: labels.len(),
            });
        }
        if features.rows() == 0 {
            return Err(Error::EmptyInput {
                context: "dataset has no rows",
            });
        }
        if features.data().iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteInput {
                context: "dataset features",
            });
        }
        if labels.iter().any(|y| *y != 1.0 && *y != -1.0) {
            return Err(Error::InvalidParameter {
                context: "labels must be +1 or -1",
            });
        }
        Ok(LabeledDataset { features, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }
}

/// Bayesian logistic regression in normalized coordinates.
///
/// Covariates are pre-multiplied by the inverse symmetric square root of the
/// Gram matrix `X^T X`, which turns the conjugate Gaussian prior with
/// covariance `g (X^T X)^{-1}` into an isotropic `N(0, g I)` prior on the
/// transformed coefficients. Each observation contributes
/// `U_i = log(1 + exp(-y_i <theta, x_i>))`.
#[derive(Debug, Clone)]
pub struct LogisticRegressionPosterior {
    features: Mat,
    labels: Vec<f64>,
    prior_scale: f64,
    transform: Mat,
}

impl LogisticRegressionPosterior {
    /// Eigenvalues of `X^T X` below this fraction of the largest trigger the
    /// singularity error.
    const EIGEN_FLOOR: f64 = 1e-10;

    pub fn from_dataset(data: &LabeledDataset, prior_scale: f64) -> Result<Self> {
        if !(prior_scale.is_finite() && prior_scale > 0.0) {
            return Err(Error::InvalidParameter {
                context: "prior scale g must be positive",
            });
        }
        let d = data.dim();
        let k = data.len();
        let mut gram = Mat::zeros(d, d);
        for i in 0..k {
            let row = data.features.row(i);
            for a in 0..d {
                for b in a..d {
                    gram[(a, b)] += row[a] * row[b];
                }
            }
        }
        for a in 0..d {
            for b in 0..a {
                gram[(a, b)] = gram[(b, a)];
            }
        }
        let transform = linalg::sym_inv_sqrt(&gram, Self::EIGEN_FLOOR)
            .map_err(|condition| Error::SingularGram { condition })?;
        let mut features = Mat::zeros(k, d);
        let mut buf = vec![0.0; d];
        for i in 0..k {
            transform.matvec(data.features.row(i), &mut buf);
            features.row_mut(i).copy_from_slice(&buf);
        }
        Ok(LogisticRegressionPosterior {
            features,
            labels: data.labels.clone(),
            prior_scale,
            transform,
        })
    }

    /// Normalized training features (`X (X^T X)^{-1/2}` rows).
    pub fn features(&self) -> &Mat {
        &self.features
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    /// Apply the training-set normalization to a fresh covariate vector.
    pub fn normalize_covariates(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.transform.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.transform.cols(),
                actual: x.len(),
            });
        }
        let mut out = vec![0.0; x.len()];
        self.transform.matvec(x, &mut out);
        Ok(out)
    }
}

impl TargetModel for LogisticRegressionPosterior {
    fn dim(&self) -> usize {
        self.features.cols()
    }

    fn n_components(&self) -> usize {
        self.labels.len()
    }

    fn base_potential(&self, theta: &[f64]) -> f64 {
        let sq: f64 = theta.iter().map(|x| x * x).sum();
        sq / (2.0 * self.prior_scale)
    }

    fn component_potential(&self, index: usize, theta: &[f64]) -> f64 {
        let row = self.features.row(index);
        let z: f64 = row.iter().zip(theta).map(|(a, b)| a * b).sum();
        softplus(-self.labels[index] * z)
    }

    fn accumulate_base_gradient(&self, theta: &[f64], grad: &mut [f64]) {
        for (g, x) in grad.iter_mut().zip(theta) {
            *g += x / self.prior_scale;
        }
    }

    fn accumulate_component_gradient(&self, index: usize, theta: &[f64], grad: &mut [f64]) {
        let row = self.features.row(index);
        let y = self.labels[index];
        let z: f64 = row.iter().zip(theta).map(|(a, b)| a * b).sum();
        let coef = -y * sigmoid(-y * z);
        for (g, x) in grad.iter_mut().zip(row) {
            *g += coef * x;
        }
    }
}

/// Seeded synthetic binary classification set with standard-normal features
/// and labels drawn from a logistic model, for offline benchmark runs.
pub fn synthetic_logistic_dataset(seed: u64, rows: usize, dim: usize) -> Result<LabeledDataset> {
    if rows == 0 || dim == 0 {
        return Err(Error::EmptyInput {
            context: "synthetic dataset shape",
        });
    }
    let mut rng = stream_rng(splitmix64(seed), 0x53594e544c4f47);
    let scale = 3.0 / (dim as f64).sqrt();
    let coef: Vec<f64> = (0..dim)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut features = Mat::zeros(rows, dim);
    let mut labels = vec![0.0; rows];
    for i in 0..rows {
        let row = features.row_mut(i);
        for x in row.iter_mut() {
            *x = rng.sample(StandardNormal);
        }
        let z: f64 = row.iter().zip(&coef).map(|(a, b)| a * b).sum();
        let u: f64 = rng.random();
        labels[i] = if u < sigmoid(z) { 1.0 } else { -1.0 };
    }
    LabeledDataset::new(features, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gaussian_potential_at_origin_is_zero() {
        let m = DiagonalGaussian::isotropic(3);
        assert_eq!(potential(&m, &[0.0, 0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_gradient_is_identity() {
        let m = DiagonalGaussian::isotropic(2);
        assert_eq!(full_gradient(&m, &[1.0, -2.0]).unwrap(), vec![1.0, -2.0]);
    }

    #[test]
    fn potential_rejects_nan() {
        let m = DiagonalGaussian::isotropic(2);
        assert!(matches!(
            potential(&m, &[f64::NAN, 0.0]),
            Err(Error::NonFiniteInput { .. })
        ));
    }

    #[test]
    fn potential_rejects_wrong_dim() {
        let m = DiagonalGaussian::isotropic(2);
        assert!(matches!(
            potential(&m, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ring_value_at_origin() {
        // ring term (0-3)^2/2 = 4.5; both lobes exp(-1/2), so
        // -log(2 exp(-1/2)) = 1/2 - ln 2; total 5 - ln 2.
        let m = RingBimodal::new();
        let u = potential(&m, &[0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(u, 5.0 - core::f64::consts::LN_2, epsilon = 1e-14);
    }

    #[test]
    fn ring_symmetric_in_first_coordinate() {
        let m = RingBimodal::new();
        let pts = [[0.7, -1.3], [2.9, 0.4], [-4.0, 5.0], [0.01, 0.02]];
        for p in pts {
            let a = potential(&m, &p).unwrap();
            let b = potential(&m, &[-p[0], p[1]]).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn ring_gradient_finite_at_origin() {
        let m = RingBimodal::new();
        let g = full_gradient(&m, &[0.0, 0.0]).unwrap();
        assert!(g.iter().all(|x| x.is_finite()));
        // radial subgradient convention gives zero; lobes cancel by symmetry
        assert_abs_diff_eq!(g[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g[1], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn mixture_posterior_is_even() {
        let obs = generate_mixture_observations(5, 20, 1.0);
        let m = GaussianMixturePosterior::new(obs, 100.0).unwrap();
        for mu in [0.3, 0.9, 2.4] {
            let a = potential(&m, &[mu]).unwrap();
            let b = potential(&m, &[-mu]).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn mixture_prior_term_uses_prior_variance() {
        let m = GaussianMixturePosterior::new(vec![0.5], 100.0).unwrap();
        assert_abs_diff_eq!(m.base_potential(&[1.0]), 1.0 / 200.0, epsilon = 1e-15);
    }

    #[test]
    fn mixture_rejects_empty_observations() {
        assert!(GaussianMixturePosterior::new(vec![], 100.0).is_err());
    }

    #[test]
    fn full_batch_stochastic_gradient_matches_full() {
        let obs = generate_mixture_observations(11, 6, 1.0);
        let m = GaussianMixturePosterior::new(obs, 100.0).unwrap();
        let batch: Vec<usize> = (0..6).collect();
        let g_full = full_gradient(&m, &[0.4]).unwrap();
        let g_batch = stochastic_gradient(&m, &[0.4], &batch).unwrap();
        assert_abs_diff_eq!(g_full[0], g_batch[0], epsilon = 1e-12);
    }

    #[test]
    fn stochastic_gradient_validates_batch() {
        let obs = generate_mixture_observations(11, 4, 1.0);
        let m = GaussianMixturePosterior::new(obs, 100.0).unwrap();
        assert!(matches!(
            stochastic_gradient(&m, &[0.4], &[]),
            Err(Error::EmptyInput { .. })
        ));
        assert!(matches!(
            stochastic_gradient(&m, &[0.4], &[4]),
            Err(Error::BatchIndexOutOfRange { .. })
        ));
        assert!(matches!(
            stochastic_gradient(&m, &[0.4], &[1, 1]),
            Err(Error::DuplicateBatchIndex { .. })
        ));
    }

    #[test]
    fn logistic_potential_at_zero_is_k_log2() {
        let data = synthetic_logistic_dataset(3, 25, 4).unwrap();
        let m = LogisticRegressionPosterior::from_dataset(&data, 10.0).unwrap();
        let u = potential(&m, &[0.0; 4]).unwrap();
        assert_abs_diff_eq!(u, 25.0 * core::f64::consts::LN_2, epsilon = 1e-12);
    }

    #[test]
    fn logistic_normalization_whitens_gram() {
        let data = synthetic_logistic_dataset(7, 200, 3).unwrap();
        let m = LogisticRegressionPosterior::from_dataset(&data, 10.0).unwrap();
        let f = m.features();
        for a in 0..3 {
            for b in 0..3 {
                let mut s = 0.0;
                for i in 0..f.rows() {
                    s += f[(i, a)] * f[(i, b)];
                }
                let want = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(s, want, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn logistic_rejects_singular_gram() {
        // two identical columns
        let mut features = Mat::with_cols(2);
        for i in 0..5 {
            let v = i as f64;
            features.push_row(&[v, v]);
        }
        let data = LabeledDataset::new(features, vec![1.0, -1.0, 1.0, -1.0, 1.0]).unwrap();
        assert!(matches!(
            LogisticRegressionPosterior::from_dataset(&data, 10.0),
            Err(Error::SingularGram { .. })
        ));
    }

    #[test]
    fn logistic_rejects_bad_prior_scale() {
        let data = synthetic_logistic_dataset(3, 10, 2).unwrap();
        assert!(LogisticRegressionPosterior::from_dataset(&data, 0.0).is_err());
    }

    #[test]
    fn dataset_rejects_bad_labels() {
        let mut features = Mat::with_cols(1);
        features.push_row(&[1.0]);
        assert!(LabeledDataset::new(features, vec![0.5]).is_err());
    }

    #[test]
    fn dataset_rejects_length_mismatch() {
        let mut features = Mat::with_cols(1);
        features.push_row(&[1.0]);
        features.push_row(&[2.0]);
        assert!(LabeledDataset::new(features, vec![1.0]).is_err());
    }
}
