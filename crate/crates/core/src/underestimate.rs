//! Global quadratic lower bounds `phi(x) = phi_star + mu/2 ||x - v||^2` on
//! `F`, built by convex averaging of the running bound with a fresh bound
//! anchored at a point `y`.
//!
//! The smooth track anchors fresh bounds at gradients,
//! `f(y) - ||grad f(y)||^2 / (2 mu) + mu/2 ||x - y++||^2`; the composite track
//! anchors them at proximal gradients,
//! `F(y+) + (1/(2 gamma) - 1/(2 mu)) ||G_gamma(y)||^2 + mu/2 ||x - y++||^2`.
//! Both are already in canonical form, so averaging two of them only moves
//! the minimizer along a segment and adjusts the minimum value.

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dist_sq, lincomb, norm_sq};
use crate::objective::CompositeObjective;
use crate::proxcore::{prox_gradient, ProxStepResult};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticLowerBound {
    pub phi_star: f64,
    pub v: Vec<f64>,
    pub mu: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    // alpha = 1 happens with fixed steps when mu = L; the average is then the
    // fresh bound itself, which is still a valid underestimator.
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}

impl QuadraticLowerBound {
    /// `phi_star + mu/2 ||x - v||^2`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.v.len(), x.len())?;
        Ok(self.phi_star + 0.5 * self.mu * dist_sq(x, &self.v))
    }

    /// Fresh smooth bound from `f(y)` and `grad f(y)`.
    pub fn fresh_smooth(f_y: f64, grad_y: &[f64], y: &[f64], mu: f64) -> Self {
        let v = crate::linalg::add_scaled(y, -1.0 / mu, grad_y);
        Self { phi_star: f_y - norm_sq(grad_y) / (2.0 * mu), v, mu }
    }

    /// Fresh composite bound from `F(y+)` and the step bundle at `y`.
    pub fn fresh_composite(f_y_plus: f64, steps: &ProxStepResult, mu: f64) -> Self {
        let coef = 0.5 / steps.gamma - 0.5 / mu;
        Self {
            phi_star: f_y_plus + coef * steps.g_norm_sq(),
            v: steps.x_plusplus.clone(),
            mu,
        }
    }

    /// `(1 - alpha) * self + alpha * fresh`, returned in canonical form.
    ///
    /// Uses `phi* = (1-a)(phi*_k + a mu/2 ||v_k - v_fresh||^2) + a phi*_fresh`
    /// which avoids forming the intermediate distance to the new minimizer.
    pub fn average(&self, fresh: &Self, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_dim(self.v.len(), fresh.v.len())?;
        let spread = dist_sq(&self.v, &fresh.v);
        let phi_star = (1.0 - alpha) * (self.phi_star + alpha * 0.5 * self.mu * spread)
            + alpha * fresh.phi_star;
        let v = lincomb(1.0 - alpha, &self.v, alpha, &fresh.v);
        Ok(Self { phi_star, v, mu: self.mu })
    }

    /// Initial smooth bound anchored at `x0`. Requires `h = 0`.
    pub fn init_smooth(obj: &CompositeObjective, x0: &[f64]) -> Result<Self> {
        require_smooth(obj)?;
        obj.check_point(x0)?;
        let (f0, g0) = obj.smooth_part().value_and_gradient(x0);
        Ok(Self::fresh_smooth(f0, &g0, x0, obj.mu()))
    }

    /// Initial composite bound anchored at `x0` with `gamma = L`.
    pub fn init_composite(obj: &CompositeObjective, x0: &[f64]) -> Result<Self> {
        let steps = prox_gradient(obj, x0, obj.lipschitz())?;
        let f_plus = obj.evaluate(&steps.x_plus, None)?;
        Ok(Self::fresh_composite(f_plus, &steps, obj.mu()))
    }

    /// Smooth update anchored at `y`. Requires `h = 0`.
    pub fn update_smooth(&self, obj: &CompositeObjective, y: &[f64], alpha: f64) -> Result<Self> {
        require_smooth(obj)?;
        check_alpha(alpha)?;
        obj.check_point(y)?;
        let (f_y, g_y) = obj.smooth_part().value_and_gradient(y);
        self.average(&Self::fresh_smooth(f_y, &g_y, y, self.mu), alpha)
    }

    /// Composite update anchored at `y`, using the step bundle computed at
    /// `y` with the constant the solver actually used.
    pub fn update_composite(
        &self,
        obj: &CompositeObjective,
        y: &[f64],
        steps: &ProxStepResult,
        alpha: f64,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        obj.check_point(y)?;
        check_dim(y.len(), steps.g.len())?;
        let f_plus = obj.evaluate(&steps.x_plus, None)?;
        self.average(&Self::fresh_composite(f_plus, steps, self.mu), alpha)
    }
}

fn require_smooth(obj: &CompositeObjective) -> Result<()> {
    if obj.is_smooth() {
        Ok(())
    } else {
        Err(Error::invalid("smooth lower bound requested for a composite objective (h != 0)"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{L1Norm, SmoothOracle};
    use crate::problems::DiagonalQuadratic;
    use std::sync::Arc;

    fn diag14() -> CompositeObjective {
        let f: Arc<dyn SmoothOracle> = Arc::new(DiagonalQuadratic::new(vec![1.0, 4.0]).unwrap());
        CompositeObjective::smooth(f, 1.0, 4.0).unwrap()
    }

    #[test]
    fn init_smooth_worked_example() {
        let lb = QuadraticLowerBound::init_smooth(&diag14(), &[1.0, 1.0]).unwrap();
        assert_eq!(lb.phi_star, -6.0);
        assert_eq!(lb.v, vec![0.0, -3.0]);
    }

    #[test]
    fn init_smooth_tight_on_extremal_quadratic() {
        let f: Arc<dyn SmoothOracle> = Arc::new(DiagonalQuadratic::new(vec![1.0, 1.0]).unwrap());
        let obj = CompositeObjective::smooth(f, 1.0, 1.0).unwrap();
        let lb = QuadraticLowerBound::init_smooth(&obj, &[2.0, 0.0]).unwrap();
        assert_eq!(lb.phi_star, 0.0);
        assert_eq!(lb.v, vec![0.0, 0.0]);
        // Started at the minimizer.
        let lb = QuadraticLowerBound::init_smooth(&obj, &[0.0, 0.0]).unwrap();
        assert_eq!((lb.phi_star, lb.v), (0.0, vec![0.0, 0.0]));
    }

    #[test]
    fn init_smooth_rejects_composite() {
        let f: Arc<dyn SmoothOracle> = Arc::new(DiagonalQuadratic::new(vec![1.0]).unwrap());
        let obj = CompositeObjective::new(f, Arc::new(L1Norm::new(0.1).unwrap()), 1.0, 1.0).unwrap();
        assert!(QuadraticLowerBound::init_smooth(&obj, &[1.0]).is_err());
    }

    #[test]
    fn init_composite_worked_example() {
        let lb = QuadraticLowerBound::init_composite(&diag14(), &[1.0, 1.0]).unwrap();
        assert_eq!(lb.phi_star, -6.09375);
        assert_eq!(lb.v, vec![0.0, -3.0]);
    }

    #[test]
    fn init_composite_coefficient_vanishes_when_mu_equals_l() {
        let f: Arc<dyn SmoothOracle> = Arc::new(DiagonalQuadratic::new(vec![2.0, 2.0]).unwrap());
        let obj = CompositeObjective::new(f, Arc::new(L1Norm::new(0.3).unwrap()), 2.0, 2.0).unwrap();
        let x0 = [1.0, -0.2];
        let lb = QuadraticLowerBound::init_composite(&obj, &x0).unwrap();
        let steps = prox_gradient(&obj, &x0, 2.0).unwrap();
        assert_eq!(lb.phi_star, obj.evaluate(&steps.x_plus, None).unwrap());
    }

    #[test]
    fn update_smooth_worked_example() {
        let obj = diag14();
        let lb0 = QuadraticLowerBound::init_smooth(&obj, &[1.0, 1.0]).unwrap();
        let lb1 = lb0.update_smooth(&obj, &[1.0, 1.0], 0.25).unwrap();
        assert_eq!(lb1.v, vec![0.0, -3.0]);
        assert_eq!(lb1.phi_star, -6.0);
    }

    #[test]
    fn update_composite_worked_example() {
        let obj = diag14();
        let x0 = [1.0, 1.0];
        let lb0 = QuadraticLowerBound::init_composite(&obj, &x0).unwrap();
        let steps = prox_gradient(&obj, &x0, 4.0).unwrap();
        let lb1 = lb0.update_composite(&obj, &x0, &steps, 0.5).unwrap();
        assert_eq!(lb1.v, vec![0.0, -3.0]);
        assert_eq!(lb1.phi_star, -6.09375);
    }

    #[test]
    fn update_rejects_bad_alpha() {
        let obj = diag14();
        let lb = QuadraticLowerBound::init_smooth(&obj, &[1.0, 1.0]).unwrap();
        for a in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(lb.update_smooth(&obj, &[1.0, 1.0], a).is_err(), "alpha {a}");
        }
        let steps = prox_gradient(&obj, &[1.0, 1.0], 4.0).unwrap();
        assert!(lb.update_composite(&obj, &[1.0, 1.0], &steps, 0.0).is_err());
    }

    #[test]
    fn eval_bound_cases() {
        let lb = QuadraticLowerBound { phi_star: -6.0, v: vec![0.0, -3.0], mu: 1.0 };
        assert_eq!(lb.eval(&[0.0, -3.0]).unwrap(), -6.0);
        assert_eq!(lb.eval(&[0.0, 0.0]).unwrap(), -1.5);
        assert!(lb.eval(&[0.0]).is_err());
    }

    #[test]
    fn fresh_smooth_is_tight_at_anchor() {
        let obj = diag14();
        let y = [0.3, -1.7];
        let (fy, gy) = obj.smooth_part().value_and_gradient(&y);
        let fresh = QuadraticLowerBound::fresh_smooth(fy, &gy, &y, obj.mu());
        let at = fresh.eval(&y).unwrap();
        assert!((at - fy).abs() <= 1e-12 * fy.abs());
    }
}
