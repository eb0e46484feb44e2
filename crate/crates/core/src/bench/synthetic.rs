//! Seeded desk-scale problems.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dataio::SparseDataset;
use crate::error::{Error, Result};
use crate::objective::{CompositeObjective, SmoothOracle};
use crate::problems::{DiagonalQuadratic, ErmSpec, Loss};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// `f = mu/2 ||x||^2` with `L = mu`.
    ExtremalQuadratic,
    /// `f = 1/2 x^T diag(d) x` with `d` log-spaced in `[mu, l]`.
    DiagonalQuadratic,
    /// Regularized logistic regression on Gaussian features with labels from
    /// a planted separator; `lambda = mu`.
    RandomLogistic,
    /// Two-dimensional logistic regression, 100 points, `lambda = 0.01`,
    /// started at `(-20, 10)`.
    PlanarLogistic,
}

impl SyntheticKind {
    pub const ALL: [SyntheticKind; 4] = [
        SyntheticKind::ExtremalQuadratic,
        SyntheticKind::DiagonalQuadratic,
        SyntheticKind::RandomLogistic,
        SyntheticKind::PlanarLogistic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SyntheticKind::ExtremalQuadratic => "extremal-quadratic",
            SyntheticKind::DiagonalQuadratic => "diagonal-quadratic",
            SyntheticKind::RandomLogistic => "random-logistic",
            SyntheticKind::PlanarLogistic => "planar-logistic",
        }
    }
}

impl fmt::Display for SyntheticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SyntheticKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown synthetic problem `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticProblem {
    pub objective: CompositeObjective,
    pub x0: Vec<f64>,
}

pub const PLANAR_POINTS: usize = 100;
pub const PLANAR_LAMBDA: f64 = 0.01;
pub const PLANAR_START: [f64; 2] = [-20.0, 10.0];

/// Builds a synthetic objective and its default start.
///
/// Quadratics start at the all-ones vector, random logistic at zero with
/// `4 * dim` samples. `planar-logistic` ignores `dim`, `mu` and `l`.
pub fn make_synthetic(kind: SyntheticKind, dim: usize, mu: f64, l: f64, seed: u64) -> Result<SyntheticProblem> {
    if kind == SyntheticKind::PlanarLogistic {
        return planar_logistic(seed);
    }
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    if !(mu > 0.0 && mu <= l && l.is_finite()) {
        return Err(Error::invalid(format!("need 0 < mu <= l, got mu = {mu}, l = {l}")));
    }
    match kind {
        SyntheticKind::ExtremalQuadratic => {
            let f: Arc<dyn SmoothOracle> = Arc::new(DiagonalQuadratic::new(vec![mu; dim])?);
            Ok(SyntheticProblem { objective: CompositeObjective::smooth(f, mu, mu)?, x0: vec![1.0; dim] })
        }
        SyntheticKind::DiagonalQuadratic => {
            let diag = log_spaced(mu, l, dim)?;
            let f: Arc<dyn SmoothOracle> = Arc::new(DiagonalQuadratic::new(diag)?);
            Ok(SyntheticProblem { objective: CompositeObjective::smooth(f, mu, l)?, x0: vec![1.0; dim] })
        }
        SyntheticKind::RandomLogistic => {
            let data = random_classification(4 * dim, dim, seed)?;
            let objective = ErmSpec::new(Loss::Logistic, mu, Arc::new(data)).build()?;
            Ok(SyntheticProblem { objective, x0: vec![0.0; dim] })
        }
        SyntheticKind::PlanarLogistic => unreachable!(),
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n == 1 {
        if lo != hi {
            return Err(Error::invalid("a one-dimensional spectrum cannot span mu < l"));
        }
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut d: Vec<f64> =
        (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect();
    // Pin the extremes exactly so (mu, L) are the true constants.
    d[0] = lo;
    d[n - 1] = hi;
    Ok(d)
}

/// `rows x cols` dataset with standard normal features scaled by
/// `1/sqrt(cols)` and labels `sign(a^T w)` for a planted Gaussian `w`, with
/// 10% of labels flipped.
pub fn random_classification(rows: usize, cols: usize, seed: u64) -> Result<SparseDataset> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid("random dataset needs at least one row and column"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (cols as f64).sqrt();
    let w: Vec<f64> = (0..cols).map(|_| normal(&mut rng)).collect();
    let mut dense = Vec::with_capacity(rows);
    let mut labels = Vec::with_capacity(rows);
    for _ in 0..rows {
        let a: Vec<f64> = (0..cols).map(|_| scale * normal(&mut rng)).collect();
        let score: f64 = a.iter().zip(&w).map(|(p, q)| p * q).sum();
        let mut y = if score >= 0.0 { 1.0 } else { -1.0 };
        if rng.gen::<f64>() < 0.1 {
            y = -y;
        }
        dense.push(a);
        labels.push(y);
    }
    SparseDataset::from_dense(&dense, labels)
}

/// Two Gaussian clouds in the plane centred at `(1, 1)` and `(-1, -1)`.
pub fn planar_dataset(seed: u64) -> Result<SparseDataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dense = Vec::with_capacity(PLANAR_POINTS);
    let mut labels = Vec::with_capacity(PLANAR_POINTS);
    for i in 0..PLANAR_POINTS {
        let y: f64 = if i % 2 == 0 { 1.0 } else { -1.0 };
        let p: Vec<f64> = (0..2).map(|_| y + normal(&mut rng)).collect();
        dense.push(p);
        labels.push(y);
    }
    SparseDataset::from_dense(&dense, labels)
}

fn planar_logistic(seed: u64) -> Result<SyntheticProblem> {
    let data = planar_dataset(seed)?;
    let objective = ErmSpec::new(Loss::Logistic, PLANAR_LAMBDA, Arc::new(data)).build()?;
    Ok(SyntheticProblem { objective, x0: PLANAR_START.to_vec() })
}
