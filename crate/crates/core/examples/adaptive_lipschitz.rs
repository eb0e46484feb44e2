//! Lipschitz search: start far below and far above the true constant and
//! watch `L_k` settle.

use std::sync::Arc;

use ues::bench::random_classification;
use ues::problems::{ErmSpec, Loss};
use ues::solvers::{solve, Algorithm};
use ues::SolverConfig;

fn main() -> ues::Result<()> {
    let data = Arc::new(random_classification(400, 30, 3)?);
    let obj = ErmSpec::new(Loss::Logistic, 1e-2, data).build()?;
    let l = obj.lipschitz();
    println!("global L = {l:.5}");

    for l0 in [Some(l / 100.0), Some(100.0 * l), None] {
        let cfg = SolverConfig::default().adaptive(l0);
        let (sol, trace) = solve(Algorithm::Asuesa, &obj, &vec![0.0; 30], &cfg)?;
        let lk: Vec<String> = trace.records.iter().step_by(5).map(|r| format!("{:.4}", r.lk)).collect();
        let trials: usize = trace.records.iter().map(|r| r.inner_count).sum();
        println!("L0 = {l0:?}");
        println!("  {} iterations, {trials} trials, certified = {}", sol.iterations, sol.certified());
        println!("  L_k every 5 steps: {}", lk.join(" "));
    }

    let (fixed, _) = solve(Algorithm::Asuesa, &obj, &vec![0.0; 30], &SolverConfig::default())?;
    println!("fixed L: {} iterations", fixed.iterations);
    Ok(())
}
