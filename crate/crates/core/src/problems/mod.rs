//! Empirical-risk objectives over a [`SparseDataset`]: logistic loss,
//! squared hinge loss, and elastic net. All use `mu = lambda1` and a
//! closed-form spectral upper bound for `L`.

mod quadratic;
mod spectral;

use std::sync::Arc;

pub use quadratic::DiagonalQuadratic;
pub use spectral::estimate_sigma_max;

use crate::dataio::SparseDataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm_sq};
use crate::objective::{CompositeObjective, L1Norm, SmoothOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    Logistic,
    SquaredHinge,
    LeastSquares,
}

/// Problem description shared by the ERM builders.
#[derive(Debug, Clone)]
pub struct ErmSpec {
    pub loss: Loss,
    /// l2 weight; also the strong convexity modulus.
    pub lambda1: f64,
    /// l1 weight (elastic net only). `h = lambda2/2 * ||x||_1`.
    pub lambda2: f64,
    pub dataset: Arc<SparseDataset>,
    /// Use the squared log-loss and the `max{0, y - a^T x}` hinge instead of
    /// the conventional forms.
    pub literal_losses: bool,
}

impl ErmSpec {
    pub fn new(loss: Loss, lambda1: f64, dataset: Arc<SparseDataset>) -> Self {
        Self { loss, lambda1, lambda2: 0.0, dataset, literal_losses: false }
    }

    pub fn with_lambda2(mut self, lambda2: f64) -> Self {
        self.lambda2 = lambda2;
        self
    }

    pub fn literal(mut self, on: bool) -> Self {
        self.literal_losses = on;
        self
    }

    /// Builds the objective for whichever loss the spec names.
    pub fn build(&self) -> Result<CompositeObjective> {
        match self.loss {
            Loss::Logistic => build_logistic(self),
            Loss::SquaredHinge => build_squared_hinge(self),
            Loss::LeastSquares => build_elastic_net(self),
        }
    }
}

const SIGMA_TOL: f64 = 1e-12;
const SIGMA_MAX_ITERS: usize = 200_000;
const SIGMA_SEED: u64 = 0x5eed;

/// Supremum of the second derivative of `log(1 + e^{-t})^2`, rounded up.
const SQUARED_LOG_LOSS_CURVATURE: f64 = 2.1;

fn validate(spec: &ErmSpec, expected: Loss) -> Result<()> {
    if spec.loss != expected {
        return Err(Error::invalid(format!("spec names {:?}, builder expects {expected:?}", spec.loss)));
    }
    if !(spec.lambda1 > 0.0 && spec.lambda1.is_finite()) {
        return Err(Error::invalid("lambda1 must be positive for strong convexity"));
    }
    if !(spec.lambda2 >= 0.0 && spec.lambda2.is_finite()) {
        return Err(Error::invalid("lambda2 must be nonnegative"));
    }
    if spec.dataset.rows() == 0 || spec.dataset.cols() == 0 {
        return Err(Error::invalid("empty dataset"));
    }
    Ok(())
}

fn sigma_sq(data: &SparseDataset) -> Result<f64> {
    let s = estimate_sigma_max(data, SIGMA_TOL, SIGMA_MAX_ITERS, SIGMA_SEED)?;
    Ok(s * s)
}

/// `log(1 + e^u)` without overflow.
fn softplus(u: f64) -> f64 {
    u.max(0.0) + (-u.abs()).exp().ln_1p()
}

fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// `softplus(u + du) - softplus(u)` without cancellation for small `du`.
fn softplus_diff(u: f64, du: f64) -> f64 {
    if du.abs() <= 1.0 {
        (sigmoid(u) * du.exp_m1()).ln_1p()
    } else {
        softplus(u + du) - softplus(u)
    }
}

/// `max(0, t + dt)^2 - max(0, t)^2`.
fn squared_hinge_diff(t: f64, dt: f64) -> f64 {
    let t1 = t + dt;
    if t >= 0.0 && t1 >= 0.0 {
        dt * (2.0 * t + dt)
    } else {
        t1.max(0.0).powi(2) - t.max(0.0).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LossKind {
    Logistic,
    SquaredLogistic,
    Hinge,
    LiteralHinge,
    Squares,
}

/// `(1/m) sum_i loss(a_i^T x, y_i) + lambda/2 ||x||^2`.
#[derive(Debug, Clone)]
pub struct ErmOracle {
    data: Arc<SparseDataset>,
    lambda: f64,
    kind: LossKind,
}

impl ErmOracle {
    /// Loss value and derivative w.r.t. the margin `z = a^T x`.
    fn loss(&self, z: f64, y: f64) -> (f64, f64) {
        match self.kind {
            LossKind::Logistic => {
                let t = y * z;
                (softplus(-t), -y * sigmoid(-t))
            }
            LossKind::SquaredLogistic => {
                let t = y * z;
                let s = softplus(-t);
                (s * s, -2.0 * s * y * sigmoid(-t))
            }
            LossKind::Hinge => {
                let r = (1.0 - y * z).max(0.0);
                (r * r, -2.0 * r * y)
            }
            LossKind::LiteralHinge => {
                let r = (y - z).max(0.0);
                (r * r, -2.0 * r)
            }
            LossKind::Squares => {
                let r = z - y;
                (r * r, 2.0 * r)
            }
        }
    }

    /// `loss(z_base + dz, y) - loss(z_base, y)`.
    fn loss_diff(&self, z_base: f64, dz: f64, y: f64) -> f64 {
        match self.kind {
            LossKind::Logistic => softplus_diff(-y * z_base, -y * dz),
            LossKind::SquaredLogistic => {
                let s = softplus(-y * z_base);
                let ds = softplus_diff(-y * z_base, -y * dz);
                ds * (2.0 * s + ds)
            }
            LossKind::Hinge => squared_hinge_diff(1.0 - y * z_base, -y * dz),
            LossKind::LiteralHinge => squared_hinge_diff(y - z_base, -dz),
            LossKind::Squares => dz * (2.0 * (z_base - y) + dz),
        }
    }

    /// Shared pass for the differenced value, optionally with the gradient
    /// at `x`.
    fn diff_pass(&self, x: &[f64], base: &[f64], want_grad: bool) -> (f64, Option<Vec<f64>>) {
        let m = self.data.rows() as f64;
        let labels = self.data.labels();
        let d: Vec<f64> = x.iter().zip(base).map(|(a, b)| a - b).collect();
        let mut total = 0.0;
        let mut weights = Vec::with_capacity(if want_grad { self.data.rows() } else { 0 });
        for r in 0..self.data.rows() {
            let z = self.data.row_dot(r, x);
            let dz = self.data.row_dot(r, &d);
            total += self.loss_diff(z - dz, dz, labels[r]);
            if want_grad {
                weights.push(self.loss(z, labels[r]).1 / m);
            }
        }
        let reg: f64 = d.iter().zip(x.iter().zip(base)).map(|(di, (a, b))| di * (a + b)).sum();
        let value = total / m + 0.5 * self.lambda * reg;
        let grad = want_grad.then(|| {
            let mut g = self.data.rmatvec(&weights);
            for (gi, xi) in g.iter_mut().zip(x) {
                *gi += self.lambda * xi;
            }
            g
        });
        (value, grad)
    }
}

impl SmoothOracle for ErmOracle {
    fn dim(&self) -> usize {
        self.data.cols()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let m = self.data.rows() as f64;
        let labels = self.data.labels();
        let total: f64 = (0..self.data.rows())
            .map(|r| self.loss(self.data.row_dot(r, x), labels[r]).0)
            .sum();
        total / m + 0.5 * self.lambda * norm_sq(x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.value_and_gradient(x).1
    }

    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let m = self.data.rows() as f64;
        let labels = self.data.labels();
        let mut total = 0.0;
        let weights: Vec<f64> = (0..self.data.rows())
            .map(|r| {
                let (l, d) = self.loss(self.data.row_dot(r, x), labels[r]);
                total += l;
                d / m
            })
            .collect();
        let mut g = self.data.rmatvec(&weights);
        for (gi, xi) in g.iter_mut().zip(x) {
            *gi += self.lambda * xi;
        }
        (total / m + 0.5 * self.lambda * dot(x, x), g)
    }

    fn value_diff(&self, x: &[f64], base: &[f64]) -> f64 {
        self.diff_pass(x, base, false).0
    }

    fn value_diff_and_gradient(&self, x: &[f64], base: &[f64]) -> (f64, Vec<f64>) {
        let (v, g) = self.diff_pass(x, base, true);
        (v, g.expect("gradient requested"))
    }
}

/// Logistic-loss ERM; `L = sigma_max(A)^2 / (4m) + lambda`.
pub fn build_logistic(spec: &ErmSpec) -> Result<CompositeObjective> {
    validate(spec, Loss::Logistic)?;
    let (kind, curvature) = if spec.literal_losses {
        (LossKind::SquaredLogistic, SQUARED_LOG_LOSS_CURVATURE)
    } else {
        (LossKind::Logistic, 0.25)
    };
    let m = spec.dataset.rows() as f64;
    let l = curvature * sigma_sq(&spec.dataset)? / m + spec.lambda1;
    let f = ErmOracle { data: spec.dataset.clone(), lambda: spec.lambda1, kind };
    CompositeObjective::smooth(Arc::new(f), spec.lambda1, l)
}

/// Squared-hinge ERM; `L = 2 sigma_max(A)^2 / m + lambda`.
pub fn build_squared_hinge(spec: &ErmSpec) -> Result<CompositeObjective> {
    validate(spec, Loss::SquaredHinge)?;
    let kind = if spec.literal_losses { LossKind::LiteralHinge } else { LossKind::Hinge };
    let m = spec.dataset.rows() as f64;
    let l = 2.0 * sigma_sq(&spec.dataset)? / m + spec.lambda1;
    let f = ErmOracle { data: spec.dataset.clone(), lambda: spec.lambda1, kind };
    CompositeObjective::smooth(Arc::new(f), spec.lambda1, l)
}

/// Elastic net: smooth part `(1/m) ||Ax - y||^2 + lambda1/2 ||x||^2`,
/// nonsmooth part `lambda2/2 ||x||_1`; `L = 2 sigma_max(A)^2 / m + lambda1`.
pub fn build_elastic_net(spec: &ErmSpec) -> Result<CompositeObjective> {
    validate(spec, Loss::LeastSquares)?;
    let m = spec.dataset.rows() as f64;
    let l = 2.0 * sigma_sq(&spec.dataset)? / m + spec.lambda1;
    let f = ErmOracle { data: spec.dataset.clone(), lambda: spec.lambda1, kind: LossKind::Squares };
    let h = L1Norm::new(0.5 * spec.lambda2)?;
    CompositeObjective::new(Arc::new(f), Arc::new(h), spec.lambda1, l)
}
