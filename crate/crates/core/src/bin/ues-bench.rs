use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, ValueEnum};

use ues::bench::{run_plan, ProblemSource, RunPlan, RunSpec, SyntheticKind};
use ues::problems::{ErmSpec, Loss};
use ues::{load_libsvm, Algorithm, Error, SolverConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LossArg {
    Logistic,
    SquaredHinge,
    ElasticNet,
}

/// Run UES solvers on an ERM problem or a synthetic instance and write
/// per-iteration CSV traces plus a summary.
#[derive(Debug, Parser)]
#[command(name = "ues-bench", version)]
struct Cli {
    /// Comma-separated runs: suesa, asuesa, cuesa, acuesa, gd, optionally
    /// suffixed with -adaptive (e.g. `asuesa,asuesa-adaptive,gd`).
    #[arg(long, value_delimiter = ',')]
    algo: Vec<String>,
    /// LIBSVM file (optionally .gz).
    #[arg(long, conflicts_with = "synthetic")]
    dataset: Option<PathBuf>,
    /// Built-in problem instead of a dataset.
    #[arg(long)]
    synthetic: Option<String>,
    #[arg(long, value_enum, default_value = "logistic")]
    loss: LossArg,
    /// l2 weight (= mu); also `mu` for random-logistic.
    #[arg(long, default_value_t = 1e-3)]
    lambda1: f64,
    /// l1 weight of the elastic net.
    #[arg(long, default_value_t = 0.0)]
    lambda2: f64,
    #[arg(long, default_value_t = 1e-8)]
    epsilon: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iters: usize,
    /// Use the Lipschitz search for every UES run.
    #[arg(long)]
    adaptive: bool,
    /// Initial Lipschitz estimate for adaptive runs.
    #[arg(long)]
    l0: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    u: f64,
    #[arg(long, default_value_t = 2.0)]
    d: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for traces and summary.txt.
    #[arg(long, default_value = "ues-out")]
    out: PathBuf,
    /// Exit with status 3 unless every UES run certifies.
    #[arg(long)]
    require_certificate: bool,
    /// Squared log-loss and the `y - a^T x` hinge.
    #[arg(long)]
    literal_paper_losses: bool,
    /// Pin the feature dimension of the dataset.
    #[arg(long)]
    dim_override: Option<usize>,
    /// Maximum runs executed concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Dimension of synthetic problems.
    #[arg(long, default_value_t = 50)]
    dim: usize,
    /// Strong convexity of synthetic quadratics.
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Smoothness of synthetic quadratics.
    #[arg(long, default_value_t = 100.0)]
    l: f64,
    /// Comma-separated start point.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<f64>>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse { .. } => 2,
        _ => 1,
    }
}

fn build_plan(cli: &Cli) -> Result<RunPlan, Error> {
    let problem = match (&cli.dataset, &cli.synthetic) {
        (Some(path), None) => {
            let data = Arc::new(load_libsvm(path, cli.dim_override)?);
            let loss = match cli.loss {
                LossArg::Logistic => Loss::Logistic,
                LossArg::SquaredHinge => Loss::SquaredHinge,
                LossArg::ElasticNet => Loss::LeastSquares,
            };
            if cli.lambda2 > 0.0 && loss != Loss::LeastSquares {
                return Err(Error::invalid("--lambda2 applies to --loss elastic-net only"));
            }
            let spec = ErmSpec::new(loss, cli.lambda1, data)
                .with_lambda2(cli.lambda2)
                .literal(cli.literal_paper_losses);
            ProblemSource::Erm(spec)
        }
        (None, Some(kind)) => {
            let kind: SyntheticKind = kind.parse()?;
            let mu = if kind == SyntheticKind::RandomLogistic { cli.lambda1 } else { cli.mu };
            let l = if kind == SyntheticKind::ExtremalQuadratic { mu } else { cli.l.max(mu) };
            ProblemSource::Synthetic { kind, dim: cli.dim, mu, l }
        }
        _ => return Err(Error::invalid("give exactly one of --dataset or --synthetic")),
    };
    let composite = matches!(&problem, ProblemSource::Erm(s) if s.lambda2 > 0.0);

    let mut runs: Vec<RunSpec> = if cli.algo.is_empty() {
        let defaults: &[Algorithm] = if composite {
            &[Algorithm::Cuesa, Algorithm::Acuesa]
        } else {
            &[Algorithm::Suesa, Algorithm::Asuesa, Algorithm::GradientDescent]
        };
        defaults.iter().map(|&a| RunSpec::fixed(a)).collect()
    } else {
        cli.algo.iter().map(|s| s.trim().parse()).collect::<Result<_, _>>()?
    };
    if cli.adaptive {
        for r in runs.iter_mut().filter(|r| r.algorithm.has_certificate()) {
            r.adaptive = true;
        }
        runs.dedup();
    }

    let mut plan = RunPlan::new(problem, runs, &cli.out);
    plan.cfg = SolverConfig {
        epsilon: cli.epsilon,
        max_iters: cli.max_iters,
        adaptive: cli.adaptive,
        l0: cli.l0,
        u: cli.u,
        d: cli.d,
        seed: cli.seed,
        reference_value: None,
    };
    plan.seed = cli.seed;
    plan.x0 = cli.x0.clone();
    plan.jobs = cli.jobs;
    Ok(plan)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let summary = match build_plan(&cli).and_then(|plan| run_plan(&plan)) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("ues-bench: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if summary.write_text(std::io::stdout().lock()).is_err() {
        return ExitCode::from(2);
    }
    if cli.require_certificate && !summary.all_certified() {
        eprintln!("ues-bench: at least one run did not certify");
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
