//! Langevin-type samplers: ULA, SGLD, SGLD with a fixed-point gradient
//! correction, and SAGA-LD.
//!
//! All four share the Euler-Maruyama recursion
//!
//! ```text
//! theta_{k+1} = theta_k - gamma * G_k + sqrt(2 gamma) * xi_{k+1}
//! ```
//!
//! and differ only in the gradient estimate `G_k`. The estimate used at each
//! recorded state is stored alongside the state so that gradient-based
//! control variates can reuse it without touching the model again.
//!
//! Noise and minibatch draws come from two independently seeded streams
//! derived from the config seed, so stochastic runs with full batches can be
//! compared step by step against a ULA run with the same seed.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::rng::{stream_rng, MinibatchScratch, BATCH_STREAM, NOISE_STREAM};
use crate::target::TargetModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    Ula,
    Sgld,
    SgldFp,
    SagaLd,
}

impl SamplerKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SamplerKind::Ula => "ula",
            SamplerKind::Sgld => "sgld",
            SamplerKind::SgldFp => "sgld_fp",
            SamplerKind::SagaLd => "saga_ld",
        }
    }
}

/// Step size, chain lengths, seed, and starting point for a sampler run.
///
/// `batch_size` is only consulted by the stochastic samplers. A missing
/// `initial_point` means the zero vector.
#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub step_size: f64,
    pub n_burn: usize,
    pub n_steps: usize,
    pub batch_size: Option<usize>,
    pub seed: u64,
    pub initial_point: Option<Vec<f64>>,
}

impl SamplerConfig {
    pub fn new(step_size: f64, n_burn: usize, n_steps: usize, seed: u64) -> Self {
        SamplerConfig {
            step_size,
            n_burn,
            n_steps,
            batch_size: None,
            seed,
            initial_point: None,
        }
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Self {
        self.batch_size = Some(batch_size);
        self
    }

    pub fn with_initial_point(mut self, point: Vec<f64>) -> Self {
        self.initial_point = Some(point);
        self
    }
}

/// Recorded post-burn-in chain: states, the gradient estimates used to leave
/// them, and (for stochastic samplers) the minibatch drawn at each step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub kind: SamplerKind,
    /// `n x d`, row `k` is the state `theta_k`.
    pub samples: Mat,
    /// `n x d`, row `k` is the gradient estimate evaluated at `theta_k`.
    pub grad_estimates: Mat,
    /// Minibatch size, 0 for full-gradient samplers.
    pub batch_size: usize,
    /// Flattened minibatch log with stride `batch_size`; sorted ascending
    /// within each step. Empty for full-gradient samplers.
    pub batches: Vec<usize>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.samples.cols()
    }

    /// Minibatch recorded at `step` (empty slice for full-gradient runs).
    pub fn batch(&self, step: usize) -> &[usize] {
        if self.batch_size == 0 {
            &[]
        } else {
            &self.batches[step * self.batch_size..(step + 1) * self.batch_size]
        }
    }
}

fn initial_point<M: TargetModel + ?Sized>(model: &M, config: &SamplerConfig) -> Result<Vec<f64>> {
    match &config.initial_point {
        Some(p) => {
            if p.len() != model.dim() {
                return Err(Error::DimensionMismatch {
                    expected: model.dim(),
                    actual: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteInput {
                    context: "initial point",
                });
            }
            Ok(p.clone())
        }
        None => Ok(vec![0.0; model.dim()]),
    }
}

fn check_common(config: &SamplerConfig) -> Result<()> {
    if !(config.step_size.is_finite() && config.step_size > 0.0) {
        return Err(Error::InvalidParameter {
            context: "step size must be positive and finite",
        });
    }
    if config.n_steps == 0 {
        return Err(Error::InvalidParameter {
            context: "n_steps must be at least 1",
        });
    }
    Ok(())
}

fn stochastic_batch_size<M: TargetModel + ?Sized>(
    model: &M,
    config: &SamplerConfig,
) -> Result<usize> {
    let k = model.n_components();
    if k == 0 {
        return Err(Error::InvalidParameter {
            context: "stochastic samplers need a model with likelihood components",
        });
    }
    let m = config.batch_size.ok_or(Error::InvalidParameter {
        context: "stochastic samplers require a batch size",
    })?;
    if m == 0 {
        return Err(Error::InvalidParameter {
            context: "batch size must be at least 1",
        });
    }
    if m > k {
        return Err(Error::BatchTooLarge {
            batch_size: m,
            n_components: k,
        });
    }
    Ok(m)
}

/// Shared recursion. `fill` computes the gradient estimate at the current
/// state into `grad` and records the minibatch (if any) into `batch`.
fn drive<M, F>(
    model: &M,
    config: &SamplerConfig,
    kind: SamplerKind,
    batch_size: usize,
    mut fill: F,
) -> Result<Trajectory>
where
    M: TargetModel + ?Sized,
    F: FnMut(&M, &[f64], &mut ChaCha12Rng, &mut [f64], &mut [usize]),
{
    check_common(config)?;
    let d = model.dim();
    let gamma = config.step_size;
    let noise_scale = (2.0 * gamma).sqrt();
    let mut theta = initial_point(model, config)?;
    let mut grad = vec![0.0; d];
    let mut batch_buf = vec![0usize; batch_size];
    let mut noise_rng = stream_rng(config.seed, NOISE_STREAM);
    let mut batch_rng = stream_rng(config.seed, BATCH_STREAM);

    let mut samples = Mat::with_cols(d);
    samples.reserve_rows(config.n_steps);
    let mut grads = Mat::with_cols(d);
    grads.reserve_rows(config.n_steps);
    let mut batches = Vec::with_capacity(config.n_steps * batch_size);

    let total = config.n_burn + config.n_steps;
    for k in 0..total {
        fill(model, &theta, &mut batch_rng, &mut grad, &mut batch_buf);
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Diverged {
                step: k,
                step_size: gamma,
            });
        }
        if k >= config.n_burn {
            samples.push_row(&theta);
            grads.push_row(&grad);
            batches.extend_from_slice(&batch_buf);
        }
        for j in 0..d {
            let xi: f64 = noise_rng.sample(StandardNormal);
            theta[j] = theta[j] - gamma * grad[j] + noise_scale * xi;
        }
        if theta.iter().any(|x| !x.is_finite()) {
            return Err(Error::Diverged {
                step: k,
                step_size: gamma,
            });
        }
    }
    Ok(Trajectory {
        kind,
        samples,
        grad_estimates: grads,
        batch_size,
        batches,
    })
}

fn full_gradient_into<M: TargetModel + ?Sized>(model: &M, theta: &[f64], grad: &mut [f64]) {
    grad.fill(0.0);
    model.accumulate_base_gradient(theta, grad);
    for i in 0..model.n_components() {
        model.accumulate_component_gradient(i, theta, grad);
    }
}

/// Unadjusted Langevin algorithm with the exact full gradient.
pub fn run_ula<M: TargetModel + ?Sized>(model: &M, config: &SamplerConfig) -> Result<Trajectory> {
    drive(model, config, SamplerKind::Ula, 0, |m, theta, _rng, grad, _batch| {
        full_gradient_into(m, theta, grad);
    })
}

/// SGLD: the full gradient is replaced by the unbiased minibatch estimate
/// `grad U_0 + (K/M) sum_{i in S} grad U_i` with a fresh uniform batch each
/// step.
pub fn run_sgld<M: TargetModel + ?Sized>(model: &M, config: &SamplerConfig) -> Result<Trajectory> {
    let m_batch = stochastic_batch_size(model, config)?;
    let k = model.n_components();
    let scale = k as f64 / m_batch as f64;
    let mut scratch = MinibatchScratch::new(k);
    let mut comp = vec![0.0; model.dim()];
    drive(
        model,
        config,
        SamplerKind::Sgld,
        m_batch,
        move |m, theta, rng, grad, batch| {
            scratch.draw(rng, batch);
            grad.fill(0.0);
            m.accumulate_base_gradient(theta, grad);
            comp.fill(0.0);
            for &i in batch.iter() {
                m.accumulate_component_gradient(i, theta, &mut comp);
            }
            for (g, c) in grad.iter_mut().zip(&comp) {
                *g += scale * c;
            }
        },
    )
}

/// Per-component gradients frozen at an anchor point, plus their total.
///
/// Backing data for the fixed-point corrected estimate: the batch term only
/// carries deviations `grad U_i(theta) - grad U_i(anchor)`, and the frozen
/// total is added back deterministically.
#[derive(Debug, Clone)]
pub struct FixedPointAnchor {
    point: Vec<f64>,
    component_grads: Mat,
    component_sum: Vec<f64>,
}

impl FixedPointAnchor {
    pub fn new<M: TargetModel + ?Sized>(model: &M, point: Vec<f64>) -> Result<Self> {
        if point.len() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                actual: point.len(),
            });
        }
        if point.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteInput {
                context: "anchor point",
            });
        }
        let d = model.dim();
        let k = model.n_components();
        let mut component_grads = Mat::zeros(k, d);
        let mut component_sum = vec![0.0; d];
        for i in 0..k {
            model.accumulate_component_gradient(i, &point, component_grads.row_mut(i));
            for (s, g) in component_sum.iter_mut().zip(component_grads.row(i)) {
                *s += g;
            }
        }
        Ok(FixedPointAnchor {
            point,
            component_grads,
            component_sum,
        })
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    fn fill_gradient<M: TargetModel + ?Sized>(
        &self,
        model: &M,
        theta: &[f64],
        batch: &[usize],
        comp: &mut [f64],
        grad: &mut [f64],
    ) {
        let scale = model.n_components() as f64 / batch.len() as f64;
        grad.fill(0.0);
        model.accumulate_base_gradient(theta, grad);
        comp.fill(0.0);
        for &i in batch {
            model.accumulate_component_gradient(i, theta, comp);
            for (c, a) in comp.iter_mut().zip(self.component_grads.row(i)) {
                *c -= a;
            }
        }
        for ((g, c), s) in grad.iter_mut().zip(comp.iter()).zip(&self.component_sum) {
            *g += scale * c + s;
        }
    }
}

/// Fixed-point corrected minibatch gradient
/// `grad U_0(theta) + (K/M) sum_{i in S} (grad U_i(theta) - grad U_i(anchor))
///  + sum_i grad U_i(anchor)`.
pub fn fp_gradient<M: TargetModel + ?Sized>(
    model: &M,
    anchor: &FixedPointAnchor,
    theta: &[f64],
    batch: &[usize],
) -> Result<Vec<f64>> {
    crate::target::check_point(model, theta)?;
    crate::target::check_batch(model, batch)?;
    let mut grad = vec![0.0; model.dim()];
    let mut comp = vec![0.0; model.dim()];
    anchor.fill_gradient(model, theta, batch, &mut comp, &mut grad);
    Ok(grad)
}

/// Deterministic gradient descent on `U` with backtracking line search.
///
/// Stops when the gradient norm falls below `1e-6 * (1 + |grad U(start)|)`,
/// and fails with the reached norm after 100000 iterations.
pub fn find_mode<M: TargetModel + ?Sized>(model: &M, start: &[f64]) -> Result<Vec<f64>> {
    if start.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            actual: start.len(),
        });
    }
    let d = model.dim();
    let potential = |theta: &[f64]| -> f64 {
        let mut u = model.base_potential(theta);
        for i in 0..model.n_components() {
            u += model.component_potential(i, theta);
        }
        u
    };
    let mut theta = start.to_vec();
    let mut grad = vec![0.0; d];
    full_gradient_into(model, &theta, &mut grad);
    let norm0 = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    let tol = 1e-6 * (1.0 + norm0);
    let mut step = 1.0;
    let mut grad_norm = norm0;
    for _ in 0..100_000 {
        if grad_norm <= tol {
            return Ok(theta);
        }
        let u = potential(&theta);
        let sq = grad_norm * grad_norm;
        let mut candidate = vec![0.0; d];
        let mut accepted = false;
        for _ in 0..60 {
            for j in 0..d {
                candidate[j] = theta[j] - step * grad[j];
            }
            let u_new = potential(&candidate);
            if u_new.is_finite() && u_new <= u - 0.25 * step * sq {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        theta.copy_from_slice(&candidate);
        full_gradient_into(model, &theta, &mut grad);
        grad_norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        step = (step * 2.0).min(1e6);
    }
    Err(Error::ModeSearchFailed { grad_norm })
}

/// SGLD with the fixed-point gradient correction.
///
/// `anchor_point` defaults to a mode found by deterministic gradient descent
/// from the configured starting point.
pub fn run_sgld_fp<M: TargetModel + ?Sized>(
    model: &M,
    config: &SamplerConfig,
    anchor_point: Option<&[f64]>,
) -> Result<Trajectory> {
    let m_batch = stochastic_batch_size(model, config)?;
    let anchor = match anchor_point {
        Some(p) => FixedPointAnchor::new(model, p.to_vec())?,
        None => {
            let start = initial_point(model, config)?;
            FixedPointAnchor::new(model, find_mode(model, &start)?)?
        }
    };
    let k = model.n_components();
    let mut scratch = MinibatchScratch::new(k);
    let mut comp = vec![0.0; model.dim()];
    drive(
        model,
        config,
        SamplerKind::SgldFp,
        m_batch,
        move |m, theta, rng, grad, batch| {
            scratch.draw(rng, batch);
            anchor.fill_gradient(m, theta, batch, &mut comp, grad);
        },
    )
}

/// Per-component gradient reference table for SAGA-LD.
///
/// Entry `i` holds the gradient of component `i` at the last state whose
/// minibatch contained `i`; the running total is maintained incrementally and
/// refreshed from scratch every 1000 updates to stop drift.
#[derive(Debug, Clone)]
pub struct SagaTable {
    component_grads: Mat,
    sum: Vec<f64>,
    updates: usize,
}

impl SagaTable {
    const REFRESH_INTERVAL: usize = 1000;

    /// Initialize every reference value with the component gradient at
    /// `theta0`.
    pub fn new<M: TargetModel + ?Sized>(model: &M, theta0: &[f64]) -> Result<Self> {
        if theta0.len() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                actual: theta0.len(),
            });
        }
        let d = model.dim();
        let k = model.n_components();
        let mut component_grads = Mat::zeros(k, d);
        let mut sum = vec![0.0; d];
        for i in 0..k {
            model.accumulate_component_gradient(i, theta0, component_grads.row_mut(i));
            for (s, g) in sum.iter_mut().zip(component_grads.row(i)) {
                *s += g;
            }
        }
        Ok(SagaTable {
            component_grads,
            sum,
            updates: 0,
        })
    }

    pub fn component(&self, index: usize) -> &[f64] {
        self.component_grads.row(index)
    }

    /// Incrementally maintained `sum_i g^i`.
    pub fn sum(&self) -> &[f64] {
        &self.sum
    }

    fn fill_gradient<M: TargetModel + ?Sized>(
        &self,
        model: &M,
        theta: &[f64],
        batch: &[usize],
        comp: &mut [f64],
        grad: &mut [f64],
    ) {
        let scale = model.n_components() as f64 / batch.len() as f64;
        grad.fill(0.0);
        model.accumulate_base_gradient(theta, grad);
        comp.fill(0.0);
        for &i in batch {
            model.accumulate_component_gradient(i, theta, comp);
            for (c, r) in comp.iter_mut().zip(self.component_grads.row(i)) {
                *c -= r;
            }
        }
        for ((g, c), s) in grad.iter_mut().zip(comp.iter()).zip(&self.sum) {
            *g += scale * c + s;
        }
    }

    /// Gradient estimate with the current reference table:
    /// `grad U_0(theta) + (K/M) sum_{i in S} (grad U_i(theta) - g^i) + sum_i g^i`.
    pub fn gradient<M: TargetModel + ?Sized>(
        &self,
        model: &M,
        theta: &[f64],
        batch: &[usize],
    ) -> Result<Vec<f64>> {
        crate::target::check_point(model, theta)?;
        crate::target::check_batch(model, batch)?;
        let mut grad = vec![0.0; model.dim()];
        let mut comp = vec![0.0; model.dim()];
        self.fill_gradient(model, theta, batch, &mut comp, &mut grad);
        Ok(grad)
    }

    /// Refresh the reference values of the batched components at `theta`.
    pub fn update_batch<M: TargetModel + ?Sized>(
        &mut self,
        model: &M,
        theta: &[f64],
        batch: &[usize],
    ) {
        let d = self.component_grads.cols();
        let mut fresh = vec![0.0; d];
        for &i in batch {
            fresh.fill(0.0);
            model.accumulate_component_gradient(i, theta, &mut fresh);
            let row = self.component_grads.row_mut(i);
            for j in 0..d {
                self.sum[j] += fresh[j] - row[j];
                row[j] = fresh[j];
            }
        }
        self.updates += 1;
        if self.updates % Self::REFRESH_INTERVAL == 0 {
            self.refresh_sum();
        }
    }

    fn refresh_sum(&mut self) {
        self.sum.fill(0.0);
        for i in 0..self.component_grads.rows() {
            for (s, g) in self.sum.iter_mut().zip(self.component_grads.row(i)) {
                *s += g;
            }
        }
    }
}

/// SAGA-LD: minibatch gradient with per-component reference values updated as
/// batches visit components.
pub fn run_saga_ld<M: TargetModel + ?Sized>(
    model: &M,
    config: &SamplerConfig,
) -> Result<Trajectory> {
    let m_batch = stochastic_batch_size(model, config)?;
    let theta0 = initial_point(model, config)?;
    let mut table = SagaTable::new(model, &theta0)?;
    let mut scratch = MinibatchScratch::new(model.n_components());
    let mut comp = vec![0.0; model.dim()];
    drive(
        model,
        config,
        SamplerKind::SagaLd,
        m_batch,
        move |m, theta, rng, grad, batch| {
            scratch.draw(rng, batch);
            table.fill_gradient(m, theta, batch, &mut comp, grad);
            table.update_batch(m, theta, batch);
        },
    )
}

/// Dispatch on the sampler kind. SGLD-FP uses the default anchor (a mode
/// found from the configured starting point).
pub fn run_sampler<M: TargetModel + ?Sized>(
    kind: SamplerKind,
    model: &M,
    config: &SamplerConfig,
) -> Result<Trajectory> {
    match kind {
        SamplerKind::Ula => run_ula(model, config),
        SamplerKind::Sgld => run_sgld(model, config),
        SamplerKind::SgldFp => run_sgld_fp(model, config, None),
        SamplerKind::SagaLd => run_saga_ld(model, config),
    }
}
