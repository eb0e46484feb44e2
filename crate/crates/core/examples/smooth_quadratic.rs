//! Plain and accelerated UES on an ill-conditioned diagonal quadratic.

use std::sync::Arc;

use ues::problems::DiagonalQuadratic;
use ues::solvers::{asuesa, suesa};
use ues::{CompositeObjective, SolverConfig};

fn main() -> ues::Result<()> {
    let (mu, l): (f64, f64) = (1.0, 1000.0);
    let diag: Vec<f64> = (0..20).map(|i| mu * (l / mu).powf(i as f64 / 19.0)).collect();
    let obj = CompositeObjective::smooth(Arc::new(DiagonalQuadratic::new(diag)?), mu, l)?;
    let x0 = vec![1.0; 20];
    let cfg = SolverConfig::default().with_epsilon(1e-10);

    for (name, run) in [("suesa", suesa as fn(_, _, _) -> _), ("asuesa", asuesa)] {
        let (sol, trace) = run(&obj, &x0, &cfg)?;
        let last = trace.records.last().unwrap();
        println!(
            "{name:>7}: {:?} after {:5} iterations, F = {:.3e}, gap = {:.3e}, {} gradients",
            sol.termination, sol.iterations, sol.f_val, sol.gap.unwrap(), last.gevals
        );
    }
    Ok(())
}
