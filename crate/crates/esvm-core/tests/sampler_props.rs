//! Cross-sampler properties: full-batch collapse onto ULA and contraction of
//! synchronously coupled chains.

mod common;

use esvm_core::{
    generate_mixture_observations, run_saga_ld, run_sgld, run_sgld_fp, run_ula,
    DiagonalGaussian, GaussianMixturePosterior, SamplerConfig, Trajectory,
};

fn max_state_gap(a: &Trajectory, b: &Trajectory) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut worst: f64 = 0.0;
    for k in 0..a.len() {
        for j in 0..a.dim() {
            worst = worst.max((a.samples[(k, j)] - b.samples[(k, j)]).abs());
        }
    }
    worst
}

#[test]
fn all_stochastic_samplers_collapse_to_ula_at_full_batch() {
    let obs = generate_mixture_observations(23, 6, 1.0);
    let m = GaussianMixturePosterior::new(obs, 100.0).unwrap();
    let base = SamplerConfig::new(0.02, 20, 1000, 4242);
    let full = base.clone().with_batch_size(6);

    let ula = run_ula(&m, &base).unwrap();
    let sgld = run_sgld(&m, &full).unwrap();
    let fp = run_sgld_fp(&m, &full, Some(&[0.7])).unwrap();
    let saga = run_saga_ld(&m, &full).unwrap();

    assert!(max_state_gap(&ula, &sgld) <= 1e-12);
    assert!(max_state_gap(&ula, &fp) <= 1e-12);
    assert!(max_state_gap(&ula, &saga) <= 1e-12);
}

#[test]
fn coupled_chains_contract_at_theoretical_rate_on_diagonal_quadratics() {
    // On U with diagonal Hessian (precisions p_j) the synchronously coupled
    // distance obeys ||d_{k+1}|| <= sqrt(1 - kappa*gamma) ||d_k|| with
    // kappa = 2 m L / (m + L), provided gamma < 2 / (m + L).
    let precisions = vec![0.5, 1.0, 2.5];
    let (m_u, l_u): (f64, f64) = (0.5, 2.5);
    let kappa = 2.0 * m_u * l_u / (m_u + l_u);
    let gamma = 0.5; // < 2 / 3.0
    let rate = (1.0 - kappa * gamma).sqrt();

    let model = DiagonalGaussian::new(precisions).unwrap();
    let a = run_ula(
        &model,
        &SamplerConfig::new(gamma, 0, 200, 808).with_initial_point(vec![5.0, -3.0, 2.0]),
    )
    .unwrap();
    let b = run_ula(
        &model,
        &SamplerConfig::new(gamma, 0, 200, 808).with_initial_point(vec![-1.0, 4.0, 0.5]),
    )
    .unwrap();
    let dist = |k: usize| -> f64 {
        (0..3)
            .map(|j| {
                let d = a.samples[(k, j)] - b.samples[(k, j)];
                d * d
            })
            .sum::<f64>()
            .sqrt()
    };
    // stop once the gap reaches the rounding floor of O(1) states
    for k in 0..199 {
        let before = dist(k);
        let after = dist(k + 1);
        if before > 1e-8 {
            assert!(
                after <= rate * before * (1.0 + 1e-12),
                "step {k}: ratio {} exceeds bound {rate}",
                after / before
            );
        }
    }
}

#[test]
fn burn_in_shifts_recorded_states() {
    let m = DiagonalGaussian::isotropic(1);
    let long = run_ula(&m, &SamplerConfig::new(0.1, 0, 50, 3)).unwrap();
    let trimmed = run_ula(&m, &SamplerConfig::new(0.1, 10, 40, 3)).unwrap();
    for k in 0..40 {
        assert_eq!(trimmed.samples[(k, 0)], long.samples[(k + 10, 0)]);
        assert_eq!(trimmed.grad_estimates[(k, 0)], long.grad_estimates[(k + 10, 0)]);
    }
}

#[test]
fn sgld_fp_default_anchor_runs_on_logistic_model() {
    let data = esvm_core::synthetic_logistic_dataset(31, 80, 3).unwrap();
    let model = esvm_core::LogisticRegressionPosterior::from_dataset(&data, 50.0).unwrap();
    let cfg = SamplerConfig::new(0.05, 10, 200, 6).with_batch_size(8);
    let t = run_sgld_fp(&model, &cfg, None).unwrap();
    assert_eq!(t.len(), 200);
    assert!(t.samples.data().iter().all(|x| x.is_finite()));
}
