//! End-to-end estimation pipeline and replicate studies.
//!
//! One pipeline run draws two independent trajectories: a learning sample on
//! which the control-variate coefficients are fitted, and an evaluation
//! sample on which the adjusted ergodic average is reported. The evaluation
//! stream is seeded with `seed XOR EVAL_SEED_SALT`, so a single user seed
//! yields reproducible independence between the two phases.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::cv::{adjusted_series, evaluate_basis, ControlVariateBasis};
use crate::error::{Error, Result};
use crate::fit::{assemble_quadratic, solve_coefficients, FitResult, ObjectiveKind};
use crate::mat::Mat;
use crate::sampler::{run_sampler, SamplerConfig, SamplerKind, Trajectory};
use crate::target::{sigmoid, LabeledDataset, LogisticRegressionPosterior, TargetModel};
use crate::variance::{
    default_truncation, empirical_variance, make_lag_window, sample_mean, spectral_variance,
    LagWindow,
};

/// Salt XORed into the seed of the evaluation trajectory.
pub const EVAL_SEED_SALT: u64 = 0x9E3779B97F4A7C15;

/// How control-variate coefficients are chosen, if at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvMethod {
    None,
    Evm,
    Esvm,
}

impl CvMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CvMethod::None => "none",
            CvMethod::Evm => "evm",
            CvMethod::Esvm => "esvm",
        }
    }
}

/// Lag-window choice: an explicit truncation point or the default rule fed
/// with a contraction rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowSpec {
    Truncation(usize),
    Contraction(f64),
}

impl WindowSpec {
    /// Resolve against a series length.
    pub fn resolve(&self, n: usize) -> Result<LagWindow> {
        match *self {
            WindowSpec::Truncation(b) => {
                if b >= n {
                    return Err(Error::TruncationTooLarge {
                        truncation: b,
                        len: n,
                    });
                }
                make_lag_window(b)
            }
            WindowSpec::Contraction(delta) => make_lag_window(default_truncation(n, delta)?),
        }
    }
}

/// Real-valued functional of the chain state whose expectation is estimated.
#[derive(Debug, Clone)]
pub enum Functional {
    Constant(f64),
    /// Sum of all coordinates.
    CoordinateSum,
    /// A single coordinate (the posterior mean of that parameter).
    Coordinate(usize),
    /// Average predictive probability of a held-out labeled set under the
    /// logistic model; features must already be in normalized coordinates.
    MeanPredictive { features: Mat, labels: Vec<f64> },
}

impl Functional {
    pub fn evaluate(&self, theta: &[f64]) -> f64 {
        match self {
            Functional::Constant(c) => *c,
            Functional::CoordinateSum => theta.iter().sum(),
            Functional::Coordinate(i) => theta[*i],
            Functional::MeanPredictive { features, labels } => {
                let mut acc = 0.0;
                for (row, y) in features.iter_rows().zip(labels) {
                    let z: f64 = row.iter().zip(theta).map(|(a, b)| a * b).sum();
                    acc += sigmoid(y * z);
                }
                acc / labels.len() as f64
            }
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            Functional::Constant(_) | Functional::CoordinateSum => Ok(()),
            Functional::Coordinate(i) => {
                if *i < dim {
                    Ok(())
                } else {
                    Err(Error::DimensionMismatch {
                        expected: dim,
                        actual: *i + 1,
                    })
                }
            }
            Functional::MeanPredictive { features, .. } => {
                if features.cols() == dim {
                    Ok(())
                } else {
                    Err(Error::DimensionMismatch {
                        expected: dim,
                        actual: features.cols(),
                    })
                }
            }
        }
    }
}

/// Average predictive probability over a test set, with the covariates
/// passed through the model's training-set normalization.
pub fn mean_predictive_functional(
    test_set: &LabeledDataset,
    model: &LogisticRegressionPosterior,
) -> Result<Functional> {
    let mut features = Mat::zeros(test_set.len(), test_set.dim());
    for i in 0..test_set.len() {
        let row = model.normalize_covariates(test_set.features.row(i))?;
        features.row_mut(i).copy_from_slice(&row);
    }
    Ok(Functional::MeanPredictive {
        features,
        labels: test_set.labels.clone(),
    })
}

/// Everything a single pipeline run needs besides the model, basis, and
/// functional.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub sampler: SamplerKind,
    pub step_size: f64,
    pub batch_size: Option<usize>,
    pub n_burn: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub seed: u64,
    pub initial_point: Option<Vec<f64>>,
    pub method: CvMethod,
    pub window: WindowSpec,
    pub ridge: Option<f64>,
}

impl PipelineConfig {
    fn sampler_config(&self, n_steps: usize, seed: u64) -> SamplerConfig {
        SamplerConfig {
            step_size: self.step_size,
            n_burn: self.n_burn,
            n_steps,
            batch_size: self.batch_size,
            seed,
            initial_point: self.initial_point.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_train < 2 || self.n_test < 2 {
            return Err(Error::InvalidParameter {
                context: "n_train and n_test must be at least 2",
            });
        }
        Ok(())
    }
}

/// Outcome of one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineResult {
    /// Evaluation-sample mean of `f - g_beta` (plain mean of `f` when no
    /// control variate is fitted).
    pub estimate: f64,
    pub fit: Option<FitResult>,
    /// Spectral variance of the raw series on the evaluation sample.
    pub raw_variance: f64,
    /// Spectral variance of the adjusted series on the evaluation sample.
    pub adjusted_variance: f64,
    pub raw_series: Vec<f64>,
    pub adjusted_series: Vec<f64>,
    /// Lag window used for the evaluation-sample diagnostics.
    pub window: LagWindow,
}

fn functional_series(f: &Functional, samples: &Mat) -> Result<Vec<f64>> {
    let out: Vec<f64> = samples.iter_rows().map(|row| f.evaluate(row)).collect();
    if out.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput {
            context: "functional produced a non-finite value",
        });
    }
    Ok(out)
}

fn fit_on_trajectory(
    traj: &Trajectory,
    basis: &ControlVariateBasis,
    f: &Functional,
    method: CvMethod,
    window: &WindowSpec,
    ridge: Option<f64>,
) -> Result<FitResult> {
    let kind = match method {
        CvMethod::Evm => ObjectiveKind::Evm,
        CvMethod::Esvm => ObjectiveKind::Esvm,
        CvMethod::None => unreachable!("no fit for the vanilla method"),
    };
    let basis_values = evaluate_basis(traj, basis)?;
    let f_values = functional_series(f, &traj.samples)?;
    let lag_window = match kind {
        ObjectiveKind::Esvm => Some(window.resolve(traj.len())?),
        ObjectiveKind::Evm => None,
    };
    let objective = assemble_quadratic(&f_values, &basis_values, kind, lag_window.as_ref(), ridge)?;
    solve_coefficients(&objective)
}

/// Train on one trajectory, estimate on an independent one.
///
/// With `method = None` the learning phase is skipped entirely; the
/// evaluation stream does not depend on whether it ran.
pub fn run_pipeline<M: TargetModel + ?Sized>(
    model: &M,
    basis: &ControlVariateBasis,
    f: &Functional,
    config: &PipelineConfig,
) -> Result<PipelineResult> {
    config.validate()?;
    f.check_dim(model.dim())?;
    if basis.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            actual: basis.dim(),
        });
    }

    let fit = match config.method {
        CvMethod::None => None,
        _ => {
            let learn = run_sampler(
                config.sampler,
                model,
                &config.sampler_config(config.n_train, config.seed),
            )?;
            Some(fit_on_trajectory(
                &learn,
                basis,
                f,
                config.method,
                &config.window,
                config.ridge,
            )?)
        }
    };

    let eval = run_sampler(
        config.sampler,
        model,
        &config.sampler_config(config.n_test, config.seed ^ EVAL_SEED_SALT),
    )?;
    let raw_series = functional_series(f, &eval.samples)?;
    let adjusted = match &fit {
        Some(r) => {
            let basis_values = evaluate_basis(&eval, basis)?;
            adjusted_series(&raw_series, &basis_values, &r.coefficients)?
        }
        None => raw_series.clone(),
    };

    let window = config.window.resolve(eval.len())?;
    let raw_variance = spectral_variance(&raw_series, &window)?;
    let adjusted_variance = spectral_variance(&adjusted, &window)?;
    let estimate = sample_mean(&adjusted)?;
    Ok(PipelineResult {
        estimate,
        fit,
        raw_variance,
        adjusted_variance,
        raw_series,
        adjusted_series: adjusted,
        window,
    })
}

/// Five-number summary plus mean and unbiased variance of the replicate
/// estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateSummary {
    pub mean: f64,
    pub variance: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Linear-interpolation quantile of a sorted slice.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

pub fn summarize_replicates(estimates: &[f64]) -> Result<ReplicateSummary> {
    if estimates.len() < 2 {
        return Err(Error::InvalidParameter {
            context: "replicate summary needs at least two estimates",
        });
    }
    let mut sorted = estimates.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(ReplicateSummary {
        mean: sample_mean(estimates)?,
        variance: empirical_variance(estimates)?,
        min: sorted[0],
        q1: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        q3: quantile(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}

/// Per-method replicate estimates and their summary.
#[derive(Debug, Clone)]
pub struct MethodSummary {
    pub method: CvMethod,
    pub estimates: Vec<f64>,
    pub summary: ReplicateSummary,
}

/// Replicate study over the vanilla, EVM, and ESVM methods.
#[derive(Debug, Clone)]
pub struct ReplicateReport {
    pub methods: Vec<MethodSummary>,
}

impl ReplicateReport {
    pub fn method(&self, method: CvMethod) -> &MethodSummary {
        self.methods
            .iter()
            .find(|m| m.method == method)
            .expect("all three methods are always present")
    }
}

/// Run `replicates` independent pipelines per method (seeds `seed + r`),
/// fitting coefficients anew on every replicate's learning sample.
///
/// The three methods share trajectories within a replicate: the sampler
/// output depends only on the seed, so the vanilla, EVM, and ESVM columns
/// see identical chains, exactly as if each had called [`run_pipeline`].
pub fn run_replicates<M: TargetModel + ?Sized>(
    model: &M,
    basis: &ControlVariateBasis,
    f: &Functional,
    config: &PipelineConfig,
    replicates: usize,
) -> Result<ReplicateReport> {
    if replicates < 2 {
        return Err(Error::InvalidParameter {
            context: "replicate study needs at least two replicates",
        });
    }
    config.validate()?;
    f.check_dim(model.dim())?;

    let mut estimates = [
        Vec::with_capacity(replicates),
        Vec::with_capacity(replicates),
        Vec::with_capacity(replicates),
    ];
    for r in 0..replicates {
        let seed = config.seed.wrapping_add(r as u64);
        run_one_replicate(model, basis, f, config, seed, &mut estimates).map_err(|e| {
            Error::ReplicateFailed {
                index: r,
                source: alloc::boxed::Box::new(e),
            }
        })?;
    }
    let [none_est, evm_est, esvm_est] = estimates;
    let methods = alloc::vec![
        MethodSummary {
            method: CvMethod::None,
            summary: summarize_replicates(&none_est)?,
            estimates: none_est,
        },
        MethodSummary {
            method: CvMethod::Evm,
            summary: summarize_replicates(&evm_est)?,
            estimates: evm_est,
        },
        MethodSummary {
            method: CvMethod::Esvm,
            summary: summarize_replicates(&esvm_est)?,
            estimates: esvm_est,
        },
    ];
    Ok(ReplicateReport { methods })
}

fn run_one_replicate<M: TargetModel + ?Sized>(
    model: &M,
    basis: &ControlVariateBasis,
    f: &Functional,
    config: &PipelineConfig,
    seed: u64,
    estimates: &mut [Vec<f64>; 3],
) -> Result<()> {
    let learn = run_sampler(
        config.sampler,
        model,
        &config.sampler_config(config.n_train, seed),
    )?;
    let eval = run_sampler(
        config.sampler,
        model,
        &config.sampler_config(config.n_test, seed ^ EVAL_SEED_SALT),
    )?;
    let raw = functional_series(f, &eval.samples)?;
    estimates[0].push(sample_mean(&raw)?);

    let eval_basis_values = evaluate_basis(&eval, basis)?;
    for (slot, method) in [(1usize, CvMethod::Evm), (2usize, CvMethod::Esvm)] {
        let fit = fit_on_trajectory(&learn, basis, f, method, &config.window, config.ridge)?;
        let adjusted = adjusted_series(&raw, &eval_basis_values, &fit.coefficients)?;
        estimates[slot].push(sample_mean(&adjusted)?);
    }
    Ok(())
}
