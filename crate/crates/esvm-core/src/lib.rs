//! Variance reduction for ergodic averages of Langevin-type MCMC chains.
//!
//! The crate builds dependent sample sequences with ULA, SGLD, SGLD-FP, or
//! SAGA-LD, constructs gradient-based (Stein) control variates from a family
//! of vector fields, and picks the control-variate coefficients by minimizing
//! either the marginal empirical variance (EVM) or a lag-windowed spectral
//! estimate of the asymptotic variance (ESVM). Both objectives are exactly
//! quadratic in the coefficients for linear families, so the fit reduces to a
//! ridge-regularized symmetric solve.
//!
//! The crate is `no_std`-compatible (with `alloc`); everything that touches
//! files, CSV, or a terminal lives in the companion CLI crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cv;
pub mod error;
pub mod fit;
mod linalg;
pub mod mat;
pub mod pipeline;
pub mod rng;
pub mod sampler;
pub mod target;
pub mod variance;

pub use cv::{adjusted_series, evaluate_basis, stein_value, ControlVariateBasis};
pub use error::Error;
pub use fit::{
    assemble_quadratic, fit_control_variate, solve_coefficients, FitResult, ObjectiveKind,
    QuadraticObjective,
};
pub use mat::Mat;
pub use pipeline::{
    mean_predictive_functional, run_pipeline, run_replicates, summarize_replicates, CvMethod,
    Functional, MethodSummary, PipelineConfig, PipelineResult, ReplicateReport, ReplicateSummary,
    WindowSpec,
};
pub use rng::{sample_minibatch, stream_rng};
pub use sampler::{
    find_mode, fp_gradient, run_saga_ld, run_sampler, run_sgld, run_sgld_fp, run_ula,
    FixedPointAnchor, SagaTable, SamplerConfig, SamplerKind, Trajectory,
};
pub use target::{
    full_gradient, generate_mixture_observations, potential, stochastic_gradient,
    synthetic_logistic_dataset, DiagonalGaussian, GaussianMixturePosterior, LabeledDataset,
    LogisticRegressionPosterior, RingBimodal, TargetModel,
};
pub use variance::{
    default_truncation, empirical_variance, make_lag_window, sample_autocovariance, sample_mean,
    spectral_variance, LagWindow,
};
