//! Objective abstraction for `F(x) = f(x) + h(x)`.
//!
//! `f` is smooth, `mu`-strongly convex and has an `L`-Lipschitz gradient; `h`
//! is convex with an exact proximal map. Solvers only talk to objectives
//! through [`SmoothOracle`] and [`NonsmoothTerm`], and keep their evaluation
//! counts in a per-run [`EvalCounts`] rather than inside the oracles.

use std::fmt;
use std::sync::Arc;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dist_sq, dot, mixed_tol, sub};

/// Smooth part `f` of the objective.
pub trait SmoothOracle: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    /// Value and gradient at the same point. Override when the two share work.
    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        (self.value(x), self.gradient(x))
    }

    /// `f(x) - f(base)`. The solvers measure their gap through such
    /// differences; override when they can be formed without cancelling two
    /// nearly equal values.
    fn value_diff(&self, x: &[f64], base: &[f64]) -> f64 {
        self.value(x) - self.value(base)
    }

    /// `(f(x) - f(base), grad f(x))`.
    fn value_diff_and_gradient(&self, x: &[f64], base: &[f64]) -> (f64, Vec<f64>) {
        (self.value_diff(x, base), self.gradient(x))
    }
}

/// Nonsmooth convex part `h` with an exact proximal map
/// `prox(x, gamma) = argmin_u { h(u) + gamma/2 ||x - u||^2 }`.
pub trait NonsmoothTerm: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;

    fn prox(&self, x: &[f64], gamma: f64) -> Vec<f64>;

    /// `h(x) - h(base)`.
    fn value_diff(&self, x: &[f64], base: &[f64]) -> f64 {
        self.value(x) - self.value(base)
    }

    /// True when `h` is identically zero.
    fn is_zero(&self) -> bool {
        false
    }

    /// Weight `c` when `h = c * ||.||_1` (the zero function reports `0`).
    /// Terms without a known separable subdifferential return `None`.
    fn l1_weight(&self) -> Option<f64> {
        None
    }
}

/// `h = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroTerm;

impl NonsmoothTerm for ZeroTerm {
    fn value(&self, _x: &[f64]) -> f64 {
        0.0
    }

    fn prox(&self, x: &[f64], _gamma: f64) -> Vec<f64> {
        x.to_vec()
    }

    fn value_diff(&self, _x: &[f64], _base: &[f64]) -> f64 {
        0.0
    }

    fn is_zero(&self) -> bool {
        true
    }

    fn l1_weight(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// Weighted l1 norm `h(x) = weight * ||x||_1`.
#[derive(Debug, Clone, Copy)]
pub struct L1Norm {
    weight: f64,
}

impl L1Norm {
    pub fn new(weight: f64) -> Result<Self> {
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::invalid(format!("l1 weight must be finite and >= 0, got {weight}")));
        }
        Ok(Self { weight })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

/// Closed-form soft threshold `sign(t) * max(|t| - tau, 0)`.
pub fn soft_threshold(t: f64, tau: f64) -> f64 {
    if t > tau {
        t - tau
    } else if t < -tau {
        t + tau
    } else {
        0.0
    }
}

impl NonsmoothTerm for L1Norm {
    fn value(&self, x: &[f64]) -> f64 {
        self.weight * x.iter().map(|v| v.abs()).sum::<f64>()
    }

    fn prox(&self, x: &[f64], gamma: f64) -> Vec<f64> {
        let tau = self.weight / gamma;
        x.iter().map(|&t| soft_threshold(t, tau)).collect()
    }

    fn value_diff(&self, x: &[f64], base: &[f64]) -> f64 {
        self.weight * x.iter().zip(base).map(|(a, b)| a.abs() - b.abs()).sum::<f64>()
    }

    fn is_zero(&self) -> bool {
        self.weight == 0.0
    }

    fn l1_weight(&self) -> Option<f64> {
        Some(self.weight)
    }
}

/// Per-run evaluation counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounts {
    pub fevals: u64,
    pub gevals: u64,
    pub proxevals: u64,
}

/// `F = f + h` together with its strong convexity modulus and gradient
/// Lipschitz constant.
#[derive(Clone)]
pub struct CompositeObjective {
    f: Arc<dyn SmoothOracle>,
    h: Arc<dyn NonsmoothTerm>,
    mu: f64,
    lipschitz: f64,
}

impl fmt::Debug for CompositeObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompositeObjective")
            .field("dim", &self.dim())
            .field("mu", &self.mu)
            .field("lipschitz", &self.lipschitz)
            .field("h_is_zero", &self.h.is_zero())
            .finish()
    }
}

impl CompositeObjective {
    pub fn new(
        f: Arc<dyn SmoothOracle>,
        h: Arc<dyn NonsmoothTerm>,
        mu: f64,
        lipschitz: f64,
    ) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::invalid(format!("mu must be positive, got {mu}")));
        }
        if !(lipschitz >= mu && lipschitz.is_finite()) {
            return Err(Error::invalid(format!(
                "need 0 < mu <= L, got mu = {mu}, L = {lipschitz}"
            )));
        }
        if f.dim() == 0 {
            return Err(Error::invalid("objective dimension must be positive"));
        }
        Ok(Self { f, h, mu, lipschitz })
    }

    /// Smooth objective with `h = 0`.
    pub fn smooth(f: Arc<dyn SmoothOracle>, mu: f64, lipschitz: f64) -> Result<Self> {
        Self::new(f, Arc::new(ZeroTerm), mu, lipschitz)
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn smooth_part(&self) -> &dyn SmoothOracle {
        self.f.as_ref()
    }

    pub fn nonsmooth_part(&self) -> &dyn NonsmoothTerm {
        self.h.as_ref()
    }

    pub fn is_smooth(&self) -> bool {
        self.h.is_zero()
    }

    /// Same oracles with different constants.
    pub fn with_constants(&self, mu: f64, lipschitz: f64) -> Result<Self> {
        Self::new(self.f.clone(), self.h.clone(), mu, lipschitz)
    }

    pub(crate) fn check_point(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim(), x.len())
    }

    /// `F(x) = f(x) + h(x)`; bumps `fevals` when counters are attached.
    pub fn evaluate(&self, x: &[f64], counts: Option<&mut EvalCounts>) -> Result<f64> {
        self.check_point(x)?;
        if let Some(c) = counts {
            c.fevals += 1;
        }
        Ok(self.f.value(x) + self.h.value(x))
    }
}

/// Residuals of the strong convexity and smoothness inequalities at one pair.
#[derive(Debug, Clone, Copy)]
pub struct PairResidual {
    /// `f(x) - f(y) - <grad f(y), x - y> - mu/2 ||x - y||^2`, should be >= 0.
    pub strong_convexity: f64,
    /// `f(y) + <grad f(y), x - y> + L/2 ||x - y||^2 - f(x)`, should be >= 0.
    pub smoothness: f64,
    pub strong_convexity_ok: bool,
    pub smoothness_ok: bool,
}

#[derive(Debug, Clone)]
pub struct AssumptionReport {
    pub pairs: Vec<PairResidual>,
}

impl AssumptionReport {
    pub fn violations(&self) -> usize {
        self.pairs
            .iter()
            .filter(|p| !(p.strong_convexity_ok && p.smoothness_ok))
            .count()
    }

    pub fn smoothness_violations(&self) -> usize {
        self.pairs.iter().filter(|p| !p.smoothness_ok).count()
    }

    pub fn strong_convexity_violations(&self) -> usize {
        self.pairs.iter().filter(|p| !p.strong_convexity_ok).count()
    }
}

/// Checks the strong convexity / Lipschitz-gradient inequalities of `f` with
/// the objective's reported `(mu, L)` on each `(x, y)` pair.
pub fn check_assumption1(
    obj: &CompositeObjective,
    samples: &[(Vec<f64>, Vec<f64>)],
) -> Result<AssumptionReport> {
    if samples.is_empty() {
        return Err(Error::invalid("need at least one sample pair"));
    }
    let f = obj.smooth_part();
    let mut pairs = Vec::with_capacity(samples.len());
    for (x, y) in samples {
        obj.check_point(x)?;
        obj.check_point(y)?;
        let fx = f.value(x);
        let (fy, gy) = f.value_and_gradient(y);
        let lin = fy + dot(&gy, &sub(x, y));
        let d2 = dist_sq(x, y);
        let strong = fx - lin - 0.5 * obj.mu() * d2;
        let smooth = lin + 0.5 * obj.lipschitz() * d2 - fx;
        let tol = mixed_tol(1e-9, fx);
        pairs.push(PairResidual {
            strong_convexity: strong,
            smoothness: smooth,
            strong_convexity_ok: strong >= -tol,
            smoothness_ok: smooth >= -tol,
        });
    }
    Ok(AssumptionReport { pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::DiagonalQuadratic;

    fn half_norm(dim: usize) -> Arc<dyn SmoothOracle> {
        Arc::new(DiagonalQuadratic::new(vec![1.0; dim]).unwrap())
    }

    #[test]
    fn evaluate_smooth_and_l1() {
        let obj = CompositeObjective::smooth(half_norm(2), 1.0, 1.0).unwrap();
        assert_eq!(obj.evaluate(&[3.0, 4.0], None).unwrap(), 12.5);

        let obj = CompositeObjective::new(half_norm(2), Arc::new(L1Norm::new(1.0).unwrap()), 1.0, 1.0)
            .unwrap();
        let mut c = EvalCounts::default();
        assert_eq!(obj.evaluate(&[1.0, -1.0], Some(&mut c)).unwrap(), 3.0);
        assert_eq!(c.fevals, 1);
    }

    #[test]
    fn evaluate_rejects_wrong_dimension() {
        let obj = CompositeObjective::smooth(half_norm(2), 1.0, 1.0).unwrap();
        assert!(matches!(
            obj.evaluate(&[1.0], None),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn constants_validated() {
        assert!(CompositeObjective::smooth(half_norm(2), 0.0, 1.0).is_err());
        assert!(CompositeObjective::smooth(half_norm(2), 2.0, 1.0).is_err());
        assert!(CompositeObjective::smooth(half_norm(2), 1.0, f64::INFINITY).is_err());
        assert!(L1Norm::new(-1.0).is_err());
    }

    #[test]
    fn zero_prox_is_identity() {
        for gamma in [1e-3, 1.0, 1e6] {
            assert_eq!(ZeroTerm.prox(&[1.5, -2.0], gamma), vec![1.5, -2.0]);
        }
    }

    #[test]
    fn soft_threshold_cases() {
        assert_eq!(soft_threshold(3.0, 1.0), 2.0);
        assert_eq!(soft_threshold(-3.0, 1.0), -2.0);
        assert_eq!(soft_threshold(0.5, 1.0), 0.0);
        assert_eq!(soft_threshold(-1.0, 1.0), 0.0);
    }

    #[test]
    fn assumption_check_on_diagonal_quadratic() {
        let f: Arc<dyn SmoothOracle> = Arc::new(DiagonalQuadratic::new(vec![1.0, 4.0]).unwrap());
        let obj = CompositeObjective::smooth(f.clone(), 1.0, 4.0).unwrap();
        let pairs = vec![
            (vec![0.0, 1.0], vec![0.0, 0.0]),
            (vec![1.0, 0.0], vec![0.0, 0.0]),
            (vec![-2.0, 3.5], vec![0.7, -1.1]),
        ];
        assert_eq!(check_assumption1(&obj, &pairs).unwrap().violations(), 0);

        // Claimed L = 3 below the true curvature 4.
        let bad = CompositeObjective::smooth(f, 1.0, 3.0).unwrap();
        let report = check_assumption1(&bad, &pairs[..1]).unwrap();
        assert_eq!(report.smoothness_violations(), 1);
        assert_eq!(report.strong_convexity_violations(), 0);
        assert!(check_assumption1(&bad, &[]).is_err());
    }
}
