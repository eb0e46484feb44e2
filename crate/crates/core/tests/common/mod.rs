//! Problems and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ues::bench::{make_synthetic, random_classification, SyntheticKind};
use ues::problems::{ErmSpec, Loss};
use ues::{CompositeObjective, SparseDataset};

pub const SEED: u64 = 20_240_601;

/// Diagonal quadratic, dim 50, mu = 1, L = 100, started at ones.
pub fn quadratic_50() -> (CompositeObjective, Vec<f64>) {
    let p = make_synthetic(SyntheticKind::DiagonalQuadratic, 50, 1.0, 100.0, SEED).unwrap();
    (p.objective, p.x0)
}

pub fn dataset_200x50() -> Arc<SparseDataset> {
    Arc::new(random_classification(200, 50, SEED).unwrap())
}

/// Logistic regression on 200 x 50 synthetic data, lambda = 1e-3.
pub fn logistic_200x50() -> (CompositeObjective, Vec<f64>) {
    let obj = ErmSpec::new(Loss::Logistic, 1e-3, dataset_200x50()).build().unwrap();
    (obj, vec![0.0; 50])
}

/// Elastic net on 200 x 50 synthetic data, lambda1 = 1e-3, lambda2 = 1e-4.
pub fn elastic_net_200x50() -> (CompositeObjective, Vec<f64>) {
    let obj = ErmSpec::new(Loss::LeastSquares, 1e-3, dataset_200x50())
        .with_lambda2(1e-4)
        .build()
        .unwrap();
    (obj, vec![0.0; 50])
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * (2.0 * rng.gen::<f64>() - 1.0)).collect()
}

/// Central-difference gradient.
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut x = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = 1e-6 * (1.0 + x[i].abs());
            let orig = x[i];
            x[i] = orig + h;
            let up = f(&x);
            x[i] = orig - h;
            let down = f(&x);
            x[i] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Minimizer of `c|z| + gamma/2 (z - t)^2` by grid search with local
/// refinement.
pub fn grid_prox_scalar(t: f64, c: f64, gamma: f64) -> f64 {
    let obj = |z: f64| c * z.abs() + 0.5 * gamma * (z - t) * (z - t);
    let (mut lo, mut hi) = (-(t.abs() + 1.0), t.abs() + 1.0);
    for _ in 0..12 {
        let n = 200;
        let step = (hi - lo) / n as f64;
        let best = (0..=n)
            .map(|i| lo + i as f64 * step)
            .min_by(|a, b| obj(*a).total_cmp(&obj(*b)))
            .unwrap();
        lo = best - step;
        hi = best + step;
    }
    0.5 * (lo + hi)
}

/// Largest singular value by a dense SVD.
pub fn dense_sigma_max(data: &SparseDataset) -> f64 {
    let mut m = DMatrix::<f64>::zeros(data.rows(), data.cols());
    for r in 0..data.rows() {
        let (idx, vals) = data.row(r);
        for (&c, &v) in idx.iter().zip(vals) {
            m[(r, c)] = v;
        }
    }
    m.singular_values().max()
}

pub fn dense_random(rows: usize, cols: usize, seed: u64) -> SparseDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dense: Vec<Vec<f64>> = (0..rows).map(|_| random_vec(&mut rng, cols, 1.0)).collect();
    let labels = (0..rows).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    SparseDataset::from_dense(&dense, labels).unwrap()
}
