//! Step computation shared by the fixed and adaptive Lipschitz modes, and
//! the search for `L_k`.

use crate::error::{Error, Result};
use crate::linalg::{add_scaled, lincomb, norm_sq};
use crate::objective::{CompositeObjective, EvalCounts};
use crate::proxcore::step_from_gradient;
use crate::underestimate::QuadraticLowerBound;

use super::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    SmoothPlain,
    SmoothAccel,
    CompositePlain,
    CompositeAccel,
}

impl SearchMode {
    pub fn is_accelerated(self) -> bool {
        matches!(self, SearchMode::SmoothAccel | SearchMode::CompositeAccel)
    }

    pub fn is_composite(self) -> bool {
        matches!(self, SearchMode::CompositePlain | SearchMode::CompositeAccel)
    }

    /// `mu / l` or `sqrt(mu / l)`.
    pub fn alpha_for(self, mu: f64, l: f64) -> f64 {
        let r = mu / l;
        if self.is_accelerated() {
            r.sqrt()
        } else {
            r
        }
    }
}

/// Ceiling on trial values relative to the first estimate.
const CEILING_FACTOR: f64 = 1e12;

/// Floor keeping `alpha_k < 1` strictly when `L_k` is searched.
pub(crate) fn clamp_above_mu(l: f64, mu: f64) -> f64 {
    l.max(mu * (1.0 + 1e-6))
}

/// Counting wrapper around an objective for one run.
///
/// Function values are reported relative to an anchor point, `F(x) - F(a)`,
/// which the outer loop keeps at the current iterate. Values and bounds then
/// stay on the scale of the gap instead of the scale of `F`, so the gap is
/// resolved to working precision even when `F^*` is far from zero.
pub(crate) struct Evaluator<'a> {
    pub obj: &'a CompositeObjective,
    pub counts: EvalCounts,
    pub anchor: Vec<f64>,
    /// `|F(a)|`, the magnitude lost to rounding in absolute values.
    pub scale: f64,
}

impl<'a> Evaluator<'a> {
    pub fn new(obj: &'a CompositeObjective, anchor: &[f64], scale: f64) -> Self {
        Self { obj, counts: EvalCounts::default(), anchor: anchor.to_vec(), scale: scale.abs() }
    }

    /// `(f(x) - f(a), grad f(x))`.
    pub fn value_grad(&mut self, x: &[f64]) -> (f64, Vec<f64>) {
        self.counts.fevals += 1;
        self.counts.gevals += 1;
        self.obj.smooth_part().value_diff_and_gradient(x, &self.anchor)
    }

    pub fn grad(&mut self, x: &[f64]) -> Vec<f64> {
        self.counts.gevals += 1;
        self.obj.smooth_part().gradient(x)
    }

    /// `F(x) - F(a)`, counted as one function evaluation.
    pub fn full_value(&mut self, x: &[f64]) -> f64 {
        self.counts.fevals += 1;
        self.obj.smooth_part().value_diff(x, &self.anchor) + self.h(x)
    }

    /// `h(x) - h(a)`.
    pub fn h(&self, x: &[f64]) -> f64 {
        self.obj.nonsmooth_part().value_diff(x, &self.anchor)
    }
}

/// Everything the outer loop needs from one accepted step.
#[derive(Debug, Clone)]
pub struct AcceptedStep {
    /// Reported `L_k`; `alpha` is derived from it.
    pub lk: f64,
    /// Constant used in the step `x_{k+1} = y_k - G_gamma(y_k) / gamma` and
    /// the fresh bound. Equals `lk` unless `lk` was lifted above `mu`.
    pub gamma: f64,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub y: Vec<f64>,
    pub x_next: Vec<f64>,
    /// `F(x_{k+1})`, relative to the evaluator's anchor.
    pub value_next: f64,
    /// Fresh lower bound anchored at `y`, in the same relative frame.
    pub fresh: QuadraticLowerBound,
    pub inner_count: usize,
}

struct Trial {
    step: AcceptedStep,
    /// `F(y)`, relative to the anchor, when it was evaluated.
    value_y: Option<f64>,
    /// `||G_gamma(y)||^2`.
    g_norm_sq: f64,
}

/// One candidate step with step constant `gamma` and reported constant
/// `l_eff`. For plain modes `y = x` and `(value_x, grad_x)` are reused.
#[allow(clippy::too_many_arguments)]
fn trial(
    ev: &mut Evaluator<'_>,
    mode: SearchMode,
    x: &[f64],
    v: &[f64],
    value_x: f64,
    grad_x: &[f64],
    gamma: f64,
    l_eff: f64,
    need_value_y: bool,
) -> Trial {
    let mu = ev.obj.mu();
    let alpha = mode.alpha_for(mu, l_eff);
    let beta = mode.is_accelerated().then(|| 1.0 / (1.0 + alpha));

    let (y, value_y, smooth_y, grad_y) = match beta {
        None => (x.to_vec(), Some(value_x), None, grad_x.to_vec()),
        Some(b) => {
            let y = lincomb(b, x, 1.0 - b, v);
            if mode.is_composite() && !need_value_y {
                let g = ev.grad(&y);
                (y, None, None, g)
            } else {
                let (fy, g) = ev.value_grad(&y);
                let full = fy + ev.h(&y);
                (y, Some(full), Some(fy), g)
            }
        }
    };

    let (x_next, value_next, fresh, g_norm_sq) = if mode.is_composite() {
        let steps = step_from_gradient(ev.obj, &y, &grad_y, gamma, Some(&mut ev.counts));
        let value_next = ev.full_value(&steps.x_plus);
        let fresh = QuadraticLowerBound::fresh_composite(value_next, &steps, mu);
        let gn = steps.g_norm_sq();
        (steps.x_plus, value_next, fresh, gn)
    } else {
        let x_next = add_scaled(&y, -1.0 / gamma, &grad_y);
        let value_next = ev.full_value(&x_next);
        // Smooth objectives: F(y) = f(y).
        let f_y = smooth_y.or(value_y).expect("smooth modes always evaluate f(y)");
        let fresh = QuadraticLowerBound::fresh_smooth(f_y, &grad_y, &y, mu);
        (x_next, value_next, fresh, norm_sq(&grad_y))
    };

    Trial {
        step: AcceptedStep {
            lk: l_eff,
            gamma,
            alpha,
            beta,
            y,
            x_next,
            value_next,
            fresh,
            inner_count: 1,
        },
        value_y,
        g_norm_sq,
    }
}

/// Sufficient decrease `F(y - G/gamma) <= F(y) - ||G||^2 / (2 gamma)`, with
/// a few ulps of slack for the boundary case `gamma = L` on quadratics.
fn descent_holds(value_next: f64, value_y: f64, g_norm_sq: f64, gamma: f64) -> bool {
    let slack = 4.0 * f64::EPSILON * (value_y.abs() + value_next.abs());
    value_next <= value_y - g_norm_sq / (2.0 * gamma) + slack
}

/// True when the required decrease is below the rounding level of `F` and
/// the trial does not increase `F` beyond it. Near a minimizer the test
/// cannot be decided, and the caller keeps an already accepted constant.
fn below_resolution(value_next: f64, value_y: f64, g_norm_sq: f64, gamma: f64, scale: f64) -> bool {
    let noise = 4.0 * f64::EPSILON * (scale + value_y.abs() + value_next.abs());
    g_norm_sq / (2.0 * gamma) <= noise && value_next <= value_y + noise
}

/// Fixed-constant step with `gamma = L`.
pub(crate) fn fixed_step(
    ev: &mut Evaluator<'_>,
    mode: SearchMode,
    x: &[f64],
    v: &[f64],
    value_x: f64,
    grad_x: &[f64],
) -> AcceptedStep {
    let l = ev.obj.lipschitz();
    trial(ev, mode, x, v, value_x, grad_x, l, l, false).step
}

/// Adaptive search for `L_k`, starting from `l_prev` at the first iteration
/// and from `l_prev / d` afterwards, multiplying by `u` until the
/// sufficient-decrease inequality holds. Once the trial is back at `l_prev`
/// a decrease too small to resolve in floating point is accepted.
/// `ceiling_base` is the first estimate `L0`; trials beyond `1e12 * L0`
/// abort the search.
#[allow(clippy::too_many_arguments)]
pub(crate) fn search(
    ev: &mut Evaluator<'_>,
    mode: SearchMode,
    x: &[f64],
    v: &[f64],
    value_x: f64,
    grad_x: &[f64],
    l_prev: f64,
    first: bool,
    ceiling_base: f64,
    cfg: &SolverConfig,
) -> Result<AcceptedStep> {
    let mu = ev.obj.mu();
    let ceiling = CEILING_FACTOR * ceiling_base;
    let mut l_s = if first { l_prev } else { l_prev / cfg.d };
    let mut inner = 0;
    loop {
        inner += 1;
        if !(l_s <= ceiling) {
            return Err(Error::DivergingSearch { trial: l_s, ceiling });
        }
        let t = trial(ev, mode, x, v, value_x, grad_x, l_s, clamp_above_mu(l_s, mu), true);
        let value_y = t.value_y.expect("adaptive trials evaluate F(y)");
        let (vn, g2) = (t.step.value_next, t.g_norm_sq);
        if descent_holds(vn, value_y, g2, l_s)
            || (l_s >= l_prev && below_resolution(vn, value_y, g2, l_s, ev.scale))
        {
            let mut step = t.step;
            step.inner_count = inner;
            return Ok(step);
        }
        l_s *= cfg.u;
    }
}

/// Smallest `gamma = L0 * u^j` satisfying sufficient decrease at `x0`, used
/// to anchor the first composite bound in adaptive mode.
pub(crate) fn initial_gamma(
    ev: &mut Evaluator<'_>,
    x0: &[f64],
    value_x0: f64,
    grad_x0: &[f64],
    l0: f64,
    cfg: &SolverConfig,
) -> Result<f64> {
    let ceiling = CEILING_FACTOR * l0;
    let mut gamma = l0;
    loop {
        if !(gamma <= ceiling) {
            return Err(Error::DivergingSearch { trial: gamma, ceiling });
        }
        let steps = step_from_gradient(ev.obj, x0, grad_x0, gamma, Some(&mut ev.counts));
        let value = ev.full_value(&steps.x_plus);
        let g2 = steps.g_norm_sq();
        if descent_holds(value, value_x0, g2, gamma)
            || below_resolution(value, value_x0, g2, gamma, ev.scale)
        {
            return Ok(gamma);
        }
        gamma *= cfg.u;
    }
}

/// Public form of the Lipschitz search for one iteration.
///
/// `k` selects the start: `l_prev` is used as `L0` when `k = 0` and divided
/// by `d` otherwise. Returns the accepted step, including `L_k`, `alpha_k`,
/// `beta_k`, `y_k`, `x_{k+1}` and the number of trials.
pub fn adaptive_l_search(
    obj: &CompositeObjective,
    x_k: &[f64],
    v_k: &[f64],
    l_prev: f64,
    k: usize,
    cfg: &SolverConfig,
    mode: SearchMode,
) -> Result<AcceptedStep> {
    cfg.validate()?;
    obj.check_point(x_k)?;
    obj.check_point(v_k)?;
    if !(l_prev > 0.0 && l_prev.is_finite()) {
        return Err(Error::invalid(format!("previous Lipschitz estimate must be positive, got {l_prev}")));
    }
    if !mode.is_composite() && !obj.is_smooth() {
        return Err(Error::invalid("smooth search mode on a composite objective"));
    }
    let mut ev = Evaluator::new(obj, x_k, obj.evaluate(x_k, None)?);
    let (value_x, grad_x) = if mode.is_accelerated() {
        (f64::NAN, Vec::new())
    } else {
        (0.0, ev.grad(x_k))
    };
    search(&mut ev, mode, x_k, v_k, value_x, &grad_x, l_prev, k == 0, l_prev, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::SmoothOracle;
    use crate::problems::DiagonalQuadratic;
    use std::sync::Arc;

    fn extremal(l: f64) -> CompositeObjective {
        let f: Arc<dyn SmoothOracle> = Arc::new(DiagonalQuadratic::new(vec![l, l]).unwrap());
        CompositeObjective::smooth(f, l, l).unwrap()
    }

    #[test]
    fn halving_then_true_constant() {
        let obj = extremal(3.0);
        let cfg = SolverConfig::default();
        for mode in [SearchMode::SmoothPlain, SearchMode::SmoothAccel, SearchMode::CompositePlain, SearchMode::CompositeAccel] {
            let s = adaptive_l_search(&obj, &[1.0, -2.0], &[0.5, 0.5], 3.0, 1, &cfg, mode).unwrap();
            assert_eq!(s.inner_count, 2, "{mode:?}");
            assert_eq!(s.gamma, 3.0);
            assert!(s.alpha < 1.0 && s.alpha > 0.0);
        }
    }

    #[test]
    fn large_initial_estimate_accepted_at_once() {
        let obj = extremal(3.0);
        let cfg = SolverConfig::default();
        let s = adaptive_l_search(&obj, &[1.0, -2.0], &[0.0, 0.0], 10.0, 0, &cfg, SearchMode::SmoothPlain)
            .unwrap();
        assert_eq!(s.inner_count, 1);
        assert_eq!(s.lk, 10.0);
        assert_eq!(s.alpha, 0.3);
    }

    #[test]
    fn rejects_bad_inputs() {
        let obj = extremal(1.0);
        let cfg = SolverConfig { u: 1.0, ..SolverConfig::default() };
        assert!(adaptive_l_search(&obj, &[1.0, 1.0], &[0.0, 0.0], 1.0, 0, &cfg, SearchMode::SmoothPlain).is_err());
        let cfg = SolverConfig::default();
        assert!(adaptive_l_search(&obj, &[1.0, 1.0], &[0.0, 0.0], 0.0, 0, &cfg, SearchMode::SmoothPlain).is_err());
        assert!(adaptive_l_search(&obj, &[1.0], &[0.0, 0.0], 1.0, 0, &cfg, SearchMode::SmoothPlain).is_err());
    }

    struct Cliff;
    impl SmoothOracle for Cliff {
        fn dim(&self) -> usize {
            1
        }
        // Reports a gradient that never yields decrease.
        fn value(&self, x: &[f64]) -> f64 {
            if x[0] == 1.0 { 0.0 } else { 1.0 }
        }
        fn gradient(&self, _x: &[f64]) -> Vec<f64> {
            vec![1.0]
        }
    }

    #[test]
    fn diverging_search_is_reported() {
        let obj = CompositeObjective::smooth(Arc::new(Cliff), 1.0, 1.0).unwrap();
        let err = adaptive_l_search(&obj, &[1.0], &[1.0], 1.0, 0, &SolverConfig::default(), SearchMode::SmoothPlain)
            .unwrap_err();
        assert!(matches!(err, Error::DivergingSearch { .. }), "{err:?}");
    }
}
