//! Shared oracles for the integration and acceptance suites. Everything here
//! is deliberately independent of the library's computation paths.

#![allow(dead_code)]

use esvm_core::{LagWindow, TargetModel};

/// Central-difference gradient with per-coordinate step `1e-5 * (1 + |x_j|)`.
pub fn fd_gradient<F>(f: F, theta: &[f64]) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut grad = vec![0.0; theta.len()];
    let mut probe = theta.to_vec();
    for j in 0..theta.len() {
        let h = 1e-5 * (1.0 + theta[j].abs());
        probe[j] = theta[j] + h;
        let up = f(&probe);
        probe[j] = theta[j] - h;
        let down = f(&probe);
        probe[j] = theta[j];
        grad[j] = (up - down) / (2.0 * h);
    }
    grad
}

/// `||a - b|| / (1 + ||a||)`.
pub fn relative_gradient_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    diff / (1.0 + norm)
}

/// Full potential as a closure for finite differencing.
pub fn potential_fn<'a, M: TargetModel + ?Sized>(model: &'a M) -> impl Fn(&[f64]) -> f64 + 'a {
    move |theta: &[f64]| {
        let mut u = model.base_potential(theta);
        for i in 0..model.n_components() {
            u += model.component_potential(i, theta);
        }
        u
    }
}

/// Direct-summation sample autocovariance: textbook two-pass evaluation of
/// the divisor-`n`, full-mean-centered formula.
pub fn autocovariance_oracle(values: &[f64], lag: usize) -> f64 {
    let n = values.len();
    assert!(lag < n);
    let mut mean = 0.0;
    let mut comp = 0.0;
    for &x in values {
        let t = mean + x;
        comp += if mean.abs() >= x.abs() {
            (mean - t) + x
        } else {
            (x - t) + mean
        };
        mean = t;
    }
    let mean = (mean + comp) / n as f64;
    let mut acc = 0.0;
    let mut c2 = 0.0;
    for k in 0..n - lag {
        let x = (values[k] - mean) * (values[k + lag] - mean);
        let t = acc + x;
        c2 += if acc.abs() >= x.abs() {
            (acc - t) + x
        } else {
            (x - t) + acc
        };
        acc = t;
    }
    (acc + c2) / n as f64
}

/// Dense quadratic-form route for the spectral variance:
/// `V = <A z, z>` with `A = n^{-1} (I - E/n) W (I - E/n)`, `W` the dense
/// Toeplitz matrix of window weights and `E` the all-ones matrix.
pub fn quadratic_form_variance(values: &[f64], window: &LagWindow) -> f64 {
    let n = values.len();
    let mut w = vec![vec![0.0; n]; n];
    for (j, row) in w.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            *cell = window.weight(j as isize - k as isize);
        }
    }
    // A = (W - EW/n - WE/n + EWE/n^2) / n expanded through row/column sums
    let nf = n as f64;
    let row_sums: Vec<f64> = w.iter().map(|row| row.iter().sum()).collect();
    let mut col_sums = vec![0.0; n];
    for row in &w {
        for (c, x) in col_sums.iter_mut().zip(row) {
            *c += x;
        }
    }
    let total: f64 = row_sums.iter().sum();
    let mut value = 0.0;
    for j in 0..n {
        for k in 0..n {
            let a_jk = (w[j][k] - col_sums[k] / nf - row_sums[j] / nf + total / (nf * nf)) / nf;
            value += a_jk * values[j] * values[k];
        }
    }
    value
}

/// All size-`m` subsets of `0..k`, in lexicographic order.
pub fn enumerate_subsets(k: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m);
    fn recurse(k: usize, m: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == m {
            out.push(current.clone());
            return;
        }
        for i in start..k {
            current.push(i);
            recurse(k, m, i + 1, current, out);
            current.pop();
        }
    }
    recurse(k, m, 0, &mut current, &mut out);
    out
}
