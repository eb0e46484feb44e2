//! Outer loop shared by the four UES solvers.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{add_scaled, dist, norm, sub};
use crate::objective::CompositeObjective;
use crate::proxcore::step_from_gradient;
use crate::underestimate::QuadraticLowerBound;

use super::adaptive::{clamp_above_mu, fixed_step, initial_gamma, search, Evaluator};
use super::{Algorithm, IterationRecord, Observer, Solution, SolverConfig, Termination, Trace, UesState};

/// Secant estimate `||grad f(x0 + delta) - grad f(x0)|| / ||delta||` along a
/// seeded random direction, lifted above `mu`.
fn secant_l0(ev: &mut Evaluator<'_>, x0: &[f64], grad0: &[f64], seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dir: Vec<f64> = (0..x0.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let n = norm(&dir);
    if n == 0.0 {
        dir[0] = 1.0;
    } else {
        dir.iter_mut().for_each(|d| *d /= n);
    }
    let scale = 1e-4 * (1.0 + norm(x0));
    let x1 = add_scaled(x0, scale, &dir);
    let g1 = ev.grad(&x1);
    let est = norm(&sub(&g1, grad0)) / dist(&x1, x0);
    let mu = ev.obj.mu();
    if est.is_finite() {
        clamp_above_mu(est, mu)
    } else {
        clamp_above_mu(ev.obj.lipschitz(), mu)
    }
}

/// Running sum kept as an unevaluated pair `hi + lo` (two-sum), used for
/// the absolute value `F(x_k)` while the loop works with increments.
#[derive(Debug, Clone, Copy)]
struct Compensated {
    hi: f64,
    lo: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let s = self.hi + x;
        let bp = s - self.hi;
        let err = (self.hi - (s - bp)) + (x - bp);
        self.hi = s;
        self.lo += err;
    }

    fn plus(self, x: f64) -> f64 {
        self.hi + (self.lo + x)
    }
}

fn absolute(bound: &QuadraticLowerBound, base: Compensated) -> QuadraticLowerBound {
    QuadraticLowerBound { phi_star: base.plus(bound.phi_star), v: bound.v.clone(), mu: bound.mu }
}

pub(crate) fn run(
    obj: &CompositeObjective,
    x0: &[f64],
    cfg: &SolverConfig,
    algorithm: Algorithm,
    mut observer: Option<Observer<'_>>,
) -> Result<(Solution, Trace)> {
    cfg.validate()?;
    obj.check_point(x0)?;
    let mode = algorithm
        .search_mode()
        .ok_or_else(|| Error::invalid("gradient descent is not a UES solver"))?;
    if !mode.is_composite() && !obj.is_smooth() {
        return Err(Error::invalid(format!(
            "{algorithm} requires h = 0; use the composite variant"
        )));
    }

    let start = Instant::now();
    let mu = obj.mu();
    // Values inside the loop are relative to the current iterate; `base`
    // holds the absolute F at that iterate.
    let (f0, g0) = obj.smooth_part().value_and_gradient(x0);
    let mut base = Compensated { hi: f0 + obj.nonsmooth_part().value(x0), lo: 0.0 };
    let mut ev = Evaluator::new(obj, x0, base.hi);
    ev.counts.fevals += 1;
    ev.counts.gevals += 1;
    let value0 = 0.0;

    let l_start = if cfg.adaptive {
        match cfg.l0 {
            Some(l0) => l0,
            None => secant_l0(&mut ev, x0, &g0, cfg.seed),
        }
    } else {
        obj.lipschitz()
    };

    let (mut bound, gamma0) = if mode.is_composite() {
        let gamma = if cfg.adaptive {
            initial_gamma(&mut ev, x0, value0, &g0, l_start, cfg)?
        } else {
            obj.lipschitz()
        };
        let steps = step_from_gradient(obj, x0, &g0, gamma, Some(&mut ev.counts));
        let f_plus = ev.full_value(&steps.x_plus);
        (QuadraticLowerBound::fresh_composite(f_plus, &steps, mu), gamma)
    } else {
        (QuadraticLowerBound::fresh_smooth(value0, &g0, x0, mu), l_start)
    };

    let mut x = x0.to_vec();
    let mut y = x0.to_vec();
    let mut value_x = value0;
    let mut grad_x = g0;
    let mut gap = value_x - bound.phi_star;

    let lk0 = if cfg.adaptive { clamp_above_mu(l_start, mu) } else { obj.lipschitz() };
    let alpha0 = mode.alpha_for(mu, lk0);
    let beta0 = mode.is_accelerated().then(|| 1.0 / (1.0 + alpha0));
    let mut lambda_cum = 1.0;

    let mut records = vec![IterationRecord {
        k: 0,
        fevals: ev.counts.fevals,
        gevals: ev.counts.gevals,
        proxevals: ev.counts.proxevals,
        cpu_ns: elapsed_ns(start),
        f_val: base.plus(value_x),
        phi_star: Some(base.plus(bound.phi_star)),
        gap: Some(gap),
        ratio: None,
        alpha: Some(alpha0),
        lk: lk0,
        lambda_cum: Some(lambda_cum),
        inner_count: 0,
    }];
    if let Some(obs) = observer.as_mut() {
        obs(&UesState {
            k: 0,
            x: &x,
            v: &bound.v,
            y: &y,
            alpha: alpha0,
            beta: beta0,
            lk: lk0,
            step_gamma: gamma0,
            bound: &absolute(&bound, base),
            f_val: base.plus(value_x),
            gap,
        });
    }

    // Next search starts from the previous trial constant.
    let mut l_prev = l_start;
    let mut k = 0;
    let termination = loop {
        if gap <= cfg.epsilon {
            break Termination::Certified;
        }
        if k >= cfg.max_iters {
            break Termination::MaxIterations;
        }

        let step = if cfg.adaptive {
            search(&mut ev, mode, &x, &bound.v, value_x, &grad_x, l_prev, k == 0, l_start, cfg)?
        } else {
            fixed_step(&mut ev, mode, &x, &bound.v, value_x, &grad_x)
        };
        l_prev = step.gamma;

        bound = bound.average(&step.fresh, step.alpha)?;
        lambda_cum *= 1.0 - step.alpha;
        let prev_gap = gap;
        gap = step.value_next - bound.phi_star;
        // Re-anchor at x_{k+1}.
        bound.phi_star -= step.value_next;
        base.add(step.value_next);
        x = step.x_next;
        y = step.y;
        ev.anchor.copy_from_slice(&x);
        ev.scale = base.hi.abs();
        value_x = 0.0;
        if !mode.is_accelerated() {
            grad_x = ev.grad(&x);
        }
        k += 1;

        records.push(IterationRecord {
            k,
            fevals: ev.counts.fevals,
            gevals: ev.counts.gevals,
            proxevals: ev.counts.proxevals,
            cpu_ns: elapsed_ns(start),
            f_val: base.plus(value_x),
            phi_star: Some(base.plus(bound.phi_star)),
            gap: Some(gap),
            ratio: Some(gap / prev_gap),
            alpha: Some(step.alpha),
            lk: step.lk,
            lambda_cum: Some(lambda_cum),
            inner_count: step.inner_count,
        });
        if let Some(obs) = observer.as_mut() {
            obs(&UesState {
                k,
                x: &x,
                v: &bound.v,
                y: &y,
                alpha: step.alpha,
                beta: step.beta,
                lk: step.lk,
                step_gamma: step.gamma,
                bound: &absolute(&bound, base),
                f_val: base.plus(value_x),
                gap,
            });
        }
        if !gap.is_finite() || !base.hi.is_finite() {
            return Err(Error::invalid(format!(
                "non-finite objective or gap at iteration {k}; check mu and L"
            )));
        }
    };

    let solution = Solution {
        x,
        f_val: base.plus(value_x),
        phi_star: Some(base.plus(bound.phi_star)),
        gap: Some(gap),
        iterations: k,
        termination,
        counts: ev.counts,
        cpu_ns: elapsed_ns(start),
    };
    let trace = Trace { algorithm, mu, lipschitz: obj.lipschitz(), records };
    Ok((solution, trace))
}

pub(crate) fn elapsed_ns(start: Instant) -> u64 {
    start.elapsed().as_nanos().min(u64::MAX as u128) as u64
}
