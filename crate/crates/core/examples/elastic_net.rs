//! Elastic-net least squares with the composite solvers.

use std::sync::Arc;

use ues::bench::random_classification;
use ues::problems::{ErmSpec, Loss};
use ues::solvers::{acuesa, cuesa};
use ues::SolverConfig;

fn main() -> ues::Result<()> {
    let data = Arc::new(random_classification(300, 60, 11)?);
    let obj = ErmSpec::new(Loss::LeastSquares, 1e-3, data).with_lambda2(0.05).build()?;
    let x0 = vec![0.0; 60];
    let cfg = SolverConfig::default();

    let (plain, _) = cuesa(&obj, &x0, &cfg)?;
    let (accel, trace) = acuesa(&obj, &x0, &cfg)?;
    let zeros = accel.x.iter().filter(|v| **v == 0.0).count();
    println!("cuesa:  {} iterations", plain.iterations);
    println!("acuesa: {} iterations, {} prox evaluations", accel.iterations, accel.counts.proxevals);
    println!("F = {:.6}, {zeros} of 60 coefficients exactly zero", accel.f_val);
    println!("lower bound phi* = {:.6}", trace.records.last().unwrap().phi_star.unwrap());
    Ok(())
}
