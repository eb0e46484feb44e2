//! Regularized logistic regression: ASUESA against gradient descent.
//!
//! Gradient descent has no lower bound, so its gap is measured against a
//! reference value from a tighter ASUESA run.

use std::sync::Arc;

use ues::bench::random_classification;
use ues::problems::{ErmSpec, Loss};
use ues::solvers::{asuesa, gradient_descent};
use ues::SolverConfig;

fn main() -> ues::Result<()> {
    let data = Arc::new(random_classification(500, 40, 7)?);
    let obj = ErmSpec::new(Loss::Logistic, 1e-3, data).build()?;
    println!("mu = {}, L = {:.4}", obj.mu(), obj.lipschitz());
    let x0 = vec![0.0; 40];

    let (reference, _) = asuesa(&obj, &x0, &SolverConfig::default().with_epsilon(1e-13))?;
    let cfg = SolverConfig::default();
    let (sol, _) = asuesa(&obj, &x0, &cfg)?;
    println!("asuesa: {} iterations, certified gap {:.2e}", sol.iterations, sol.gap.unwrap());

    let gd_cfg = SolverConfig { reference_value: Some(reference.f_val), ..cfg };
    let (gd, _) = gradient_descent(&obj, &x0, &gd_cfg)?;
    println!("gd:     {} iterations, F - F_ref = {:.2e}", gd.iterations, gd.gap.unwrap());
    Ok(())
}
