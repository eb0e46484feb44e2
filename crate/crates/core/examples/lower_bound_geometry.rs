//! Follows the lower bound `phi_k` on a two-dimensional logistic problem.
//!
//! Prints the bound centre `v_k`, the iterate and the gap ratio, which for
//! SUESA sits on the line `1 - mu/L`.

use ues::bench::{make_synthetic, SyntheticKind};
use ues::solvers::{solve_observed, Algorithm, UesState};
use ues::SolverConfig;

fn main() -> ues::Result<()> {
    let p = make_synthetic(SyntheticKind::PlanarLogistic, 2, 0.0, 0.0, 0)?;
    let obj = &p.objective;
    println!("mu = {}, L = {:.4}, 1 - mu/L = {:.6}", obj.mu(), obj.lipschitz(), 1.0 - obj.mu() / obj.lipschitz());

    let mut prev_gap = None;
    let mut show = |s: &UesState<'_>| {
        if s.k % 100 == 0 {
            let ratio = prev_gap.map(|g: f64| s.gap / g).unwrap_or(f64::NAN);
            println!(
                "k = {:4}  x = ({:8.4}, {:8.4})  v = ({:8.4}, {:8.4})  phi* = {:.6}  gap = {:.3e}  ratio = {:.6}",
                s.k, s.x[0], s.x[1], s.v[0], s.v[1], s.bound.phi_star, s.gap, ratio
            );
        }
        prev_gap = Some(s.gap);
    };
    let (sol, _) = solve_observed(Algorithm::Suesa, obj, &p.x0, &SolverConfig::default(), &mut show)?;
    println!("{:?} after {} iterations at F = {:.8}", sol.termination, sol.iterations, sol.f_val);
    Ok(())
}
