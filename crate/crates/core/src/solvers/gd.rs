//! Fixed-step gradient descent baseline.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::add_scaled;
use crate::objective::CompositeObjective;

use super::adaptive::Evaluator;
use super::engine::elapsed_ns;
use super::{Algorithm, IterationRecord, Solution, SolverConfig, Termination, Trace};

/// `x_{k+1} = x_k - grad f(x_k) / L` on a smooth objective.
///
/// GD has no certificate. When `cfg.reference_value` holds `F_ref`, the
/// trace reports `F(x_k) - F_ref` as the gap and the run stops once it is
/// at most `epsilon`; otherwise it runs for `max_iters` iterations. The
/// ratio column stays empty since there is no bound to contract.
fn absolute_value_grad(ev: &mut Evaluator<'_>, x: &[f64]) -> (f64, Vec<f64>) {
    ev.counts.fevals += 1;
    ev.counts.gevals += 1;
    ev.obj.smooth_part().value_and_gradient(x)
}

pub fn gradient_descent(
    obj: &CompositeObjective,
    x0: &[f64],
    cfg: &SolverConfig,
) -> Result<(Solution, Trace)> {
    cfg.validate()?;
    obj.check_point(x0)?;
    if !obj.is_smooth() {
        return Err(Error::invalid("gradient descent baseline requires h = 0"));
    }
    let start = Instant::now();
    let l = obj.lipschitz();
    let mut ev = Evaluator::new(obj, x0, 0.0);
    let mut x = x0.to_vec();
    let (mut value, mut grad) = absolute_value_grad(&mut ev, &x);
    let reference = cfg.reference_value;
    let mut records = Vec::new();
    let mut k = 0;
    let termination = loop {
        let gap = reference.map(|r| value - r);
        records.push(IterationRecord {
            k,
            fevals: ev.counts.fevals,
            gevals: ev.counts.gevals,
            proxevals: 0,
            cpu_ns: elapsed_ns(start),
            f_val: value,
            phi_star: None,
            gap,
            ratio: None,
            alpha: None,
            lk: l,
            lambda_cum: None,
            inner_count: usize::from(k > 0),
        });
        if gap.is_some_and(|g| g <= cfg.epsilon) {
            break Termination::ReachedReference;
        }
        if k >= cfg.max_iters {
            break Termination::MaxIterations;
        }
        x = add_scaled(&x, -1.0 / l, &grad);
        (value, grad) = absolute_value_grad(&mut ev, &x);
        k += 1;
        if !value.is_finite() {
            return Err(Error::invalid(format!("non-finite objective at iteration {k}")));
        }
    };
    let gap = reference.map(|r| value - r);
    let solution = Solution {
        x,
        f_val: value,
        phi_star: None,
        gap,
        iterations: k,
        termination,
        counts: ev.counts,
        cpu_ns: elapsed_ns(start),
    };
    let trace = Trace { algorithm: Algorithm::GradientDescent, mu: obj.mu(), lipschitz: l, records };
    Ok((solution, trace))
}
