//! Proximal gradient `G_gamma`, short step `x+` and long step `x++`.

use crate::error::{Error, Result};
use crate::linalg::add_scaled;
use crate::objective::{CompositeObjective, EvalCounts};

/// Everything derived from one gradient evaluation at a point `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxStepResult {
    /// Proximal gradient `G_gamma(x)`.
    pub g: Vec<f64>,
    /// Short step `x - g / gamma`.
    pub x_plus: Vec<f64>,
    /// Long step `x - g / mu`.
    pub x_plusplus: Vec<f64>,
    pub gamma: f64,
}

impl ProxStepResult {
    pub fn g_norm_sq(&self) -> f64 {
        crate::linalg::norm_sq(&self.g)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("gamma must be positive and finite, got {gamma}")))
    }
}

/// Proximal gradient step at `x` with constant `gamma`.
pub fn prox_gradient(obj: &CompositeObjective, x: &[f64], gamma: f64) -> Result<ProxStepResult> {
    obj.check_point(x)?;
    check_gamma(gamma)?;
    let grad = obj.smooth_part().gradient(x);
    Ok(step_from_gradient(obj, x, &grad, gamma, None))
}

/// Same as [`prox_gradient`] for an already evaluated `grad f(x)`.
/// Counts one prox evaluation when counters are attached.
pub(crate) fn step_from_gradient(
    obj: &CompositeObjective,
    x: &[f64],
    grad: &[f64],
    gamma: f64,
    counts: Option<&mut EvalCounts>,
) -> ProxStepResult {
    if let Some(c) = counts {
        c.proxevals += 1;
    }
    let h = obj.nonsmooth_part();
    let g = if h.is_zero() {
        grad.to_vec()
    } else {
        let forward = add_scaled(x, -1.0 / gamma, grad);
        let p = h.prox(&forward, gamma);
        x.iter().zip(&p).map(|(xi, pi)| gamma * (xi - pi)).collect()
    };
    let x_plus = add_scaled(x, -1.0 / gamma, &g);
    let x_plusplus = add_scaled(x, -1.0 / obj.mu(), &g);
    ProxStepResult { g, x_plus, x_plusplus, gamma }
}

/// Outcome of checking `G_gamma(x) - grad f(x)` against the subdifferential
/// of `h` at `x+`.
#[derive(Debug, Clone)]
pub struct MembershipReport {
    /// Componentwise `G_gamma(x) - grad f(x)`.
    pub residual: Vec<f64>,
    /// Coordinates that fail the membership test.
    pub violations: Vec<usize>,
    /// Largest distance of a component from its allowed set.
    pub max_excess: f64,
}

impl MembershipReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

const MEMBERSHIP_TOL: f64 = 1e-9;

/// Verifies `G_gamma(x) - grad f(x)` lies in `dh(x+)` for separable
/// `h = c ||.||_1` (including `h = 0`).
pub fn subgradient_membership(
    obj: &CompositeObjective,
    x: &[f64],
    gamma: f64,
) -> Result<MembershipReport> {
    obj.check_point(x)?;
    check_gamma(gamma)?;
    let c = obj.nonsmooth_part().l1_weight().ok_or_else(|| {
        Error::Unsupported("subgradient membership needs h = c * ||.||_1".into())
    })?;
    let grad = obj.smooth_part().gradient(x);
    let step = step_from_gradient(obj, x, &grad, gamma, None);
    let residual: Vec<f64> = step.g.iter().zip(&grad).map(|(g, d)| g - d).collect();
    let mut violations = Vec::new();
    let mut max_excess = 0.0f64;
    for (i, (&r, &xp)) in residual.iter().zip(&step.x_plus).enumerate() {
        let excess = if xp > 0.0 {
            (r - c).abs()
        } else if xp < 0.0 {
            (r + c).abs()
        } else {
            (r.abs() - c).max(0.0)
        };
        max_excess = max_excess.max(excess);
        if excess > MEMBERSHIP_TOL * (1.0 + c) {
            violations.push(i);
        }
    }
    Ok(MembershipReport { residual, violations, max_excess })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{L1Norm, NonsmoothTerm, SmoothOracle};
    use crate::problems::DiagonalQuadratic;
    use std::sync::Arc;

    fn quad(diag: Vec<f64>) -> Arc<dyn SmoothOracle> {
        Arc::new(DiagonalQuadratic::new(diag).unwrap())
    }

    #[test]
    fn smooth_case_reduces_to_gradient() {
        let obj = CompositeObjective::smooth(quad(vec![1.0, 1.0]), 1.0, 1.0).unwrap();
        let s = prox_gradient(&obj, &[2.0, 2.0], 10.0).unwrap();
        assert_eq!(s.g, vec![2.0, 2.0]);
        assert_eq!(s.x_plus, vec![1.8, 1.8]);
        assert_eq!(s.x_plusplus, vec![0.0, 0.0]);
        assert_eq!(s.gamma, 10.0);
    }

    #[test]
    fn l1_prox_gradient_example() {
        let obj = CompositeObjective::new(
            quad(vec![1.0, 1.0]),
            Arc::new(L1Norm::new(1.0).unwrap()),
            1.0,
            1.0,
        )
        .unwrap();
        let s = prox_gradient(&obj, &[3.0, 0.0], 1.0).unwrap();
        assert_eq!(s.g, vec![3.0, 0.0]);
        assert_eq!(s.x_plus, vec![0.0, 0.0]);
    }

    #[test]
    fn fixed_point_has_zero_gradient() {
        // argmin of 1/2|x|^2 + 0.5|x|_1 is 0.
        let obj = CompositeObjective::new(
            quad(vec![1.0, 2.0]),
            Arc::new(L1Norm::new(0.5).unwrap()),
            1.0,
            2.0,
        )
        .unwrap();
        let s = prox_gradient(&obj, &[0.0, 0.0], 2.0).unwrap();
        assert!(s.g.iter().all(|g| g.abs() < 1e-9));
    }

    #[test]
    fn rejects_bad_gamma() {
        let obj = CompositeObjective::smooth(quad(vec![1.0]), 1.0, 1.0).unwrap();
        assert!(prox_gradient(&obj, &[1.0], 0.0).is_err());
        assert!(prox_gradient(&obj, &[1.0], -1.0).is_err());
        assert!(prox_gradient(&obj, &[1.0], f64::NAN).is_err());
    }

    #[test]
    fn membership_sign_case() {
        // f = 1/2 x^2, h = 0.5|x|, x = 3, gamma = 2: x+ = 1.25 > 0, component = 0.5.
        let obj = CompositeObjective::new(
            quad(vec![1.0]),
            Arc::new(L1Norm::new(0.5).unwrap()),
            1.0,
            1.0,
        )
        .unwrap();
        let r = subgradient_membership(&obj, &[3.0], 2.0).unwrap();
        assert!(r.holds());
        assert_eq!(r.residual, vec![0.5]);
    }

    #[test]
    fn membership_smooth_is_zero() {
        let obj = CompositeObjective::smooth(quad(vec![1.0, 3.0]), 1.0, 3.0).unwrap();
        let r = subgradient_membership(&obj, &[1.0, -2.0], 3.0).unwrap();
        assert!(r.holds());
        assert!(r.residual.iter().all(|&v| v == 0.0));
    }

    struct Opaque;
    impl NonsmoothTerm for Opaque {
        fn value(&self, _x: &[f64]) -> f64 {
            0.0
        }
        fn prox(&self, x: &[f64], _gamma: f64) -> Vec<f64> {
            x.to_vec()
        }
    }

    #[test]
    fn membership_unsupported_term() {
        let obj = CompositeObjective::new(quad(vec![1.0]), Arc::new(Opaque), 1.0, 1.0).unwrap();
        assert!(matches!(
            subgradient_membership(&obj, &[1.0], 1.0),
            Err(Error::Unsupported(_))
        ));
    }
}
