//! Plugging in a user-defined smooth function.
//!
//! `f(x) = sum_i log cosh(x_i - c_i) + mu/2 ||x||^2` has curvature between
//! `mu` and `1 + mu`.

use std::sync::Arc;

use ues::objective::check_assumption1;
use ues::solvers::{solve, Algorithm};
use ues::{CompositeObjective, L1Norm, SmoothOracle, SolverConfig};

struct LogCosh {
    centre: Vec<f64>,
    mu: f64,
}

impl SmoothOracle for LogCosh {
    fn dim(&self) -> usize {
        self.centre.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.centre)
            .map(|(a, c)| {
                let t = (a - c).abs();
                // log cosh t without overflow
                t + (-2.0 * t).exp().ln_1p() - std::f64::consts::LN_2 + 0.5 * self.mu * a * a
            })
            .sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.centre).map(|(a, c)| (a - c).tanh() + self.mu * a).collect()
    }
}

fn main() -> ues::Result<()> {
    let mu = 0.05;
    let centre: Vec<f64> = (0..8).map(|i| i as f64 - 3.5).collect();
    let f = Arc::new(LogCosh { centre, mu });
    let obj = CompositeObjective::new(f, Arc::new(L1Norm::new(0.3)?), mu, 1.0 + mu)?;

    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..50)
        .map(|k| {
            let s = k as f64 * 0.37;
            ((0..8).map(|i| (s + i as f64).sin() * 4.0).collect(), (0..8).map(|i| (s * i as f64).cos()).collect())
        })
        .collect();
    println!("constant check: {} violations in 50 pairs", check_assumption1(&obj, &pairs)?.violations());

    for alg in [Algorithm::Cuesa, Algorithm::Acuesa] {
        let (sol, _) = solve(alg, &obj, &[0.0; 8], &SolverConfig::default())?;
        let x: Vec<String> = sol.x.iter().map(|v| format!("{v:.3}")).collect();
        println!("{alg}: {} iterations, x = [{}]", sol.iterations, x.join(", "));
    }
    Ok(())
}
