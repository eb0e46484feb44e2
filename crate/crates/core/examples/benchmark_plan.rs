//! A small benchmark plan: several solvers on one problem, CSV traces,
//! a summary and the ratio check against the theoretical lines.

use ues::bench::{ratio_report, run_plan, ProblemSource, RunPlan, RunSpec, SyntheticKind};
use ues::solvers::{solve, Algorithm};

fn main() -> ues::Result<()> {
    let out = std::env::temp_dir().join("ues-bench-example");
    let source = ProblemSource::Synthetic { kind: SyntheticKind::RandomLogistic, dim: 40, mu: 1e-3, l: 1.0 };
    let runs = vec![
        RunSpec::fixed(Algorithm::Suesa),
        RunSpec::fixed(Algorithm::Asuesa),
        RunSpec { algorithm: Algorithm::Asuesa, adaptive: true },
        RunSpec::fixed(Algorithm::GradientDescent),
    ];
    let mut plan = RunPlan::new(source, runs, &out);
    plan.jobs = 2;
    let summary = run_plan(&plan)?;
    summary.write_text(std::io::stdout().lock())?;
    println!("traces in {}", out.display());

    let problem = plan.problem.build(plan.seed)?;
    let (_, trace) = solve(Algorithm::Asuesa, &problem.objective, &problem.x0, &plan.cfg)?;
    let report = ratio_report(&trace);
    println!(
        "asuesa ratios: {} rows, {} above 1 - alpha, accelerated line {:.6}",
        report.rows.len(),
        report.flagged().len(),
        report.accelerated_line
    );
    Ok(())
}
