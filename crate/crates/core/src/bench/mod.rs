//! Benchmark plans: build a problem, run a set of solvers from the same
//! start, and write one CSV trace per run plus a plain-text summary.

mod report;
mod synthetic;

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub use report::{ratio_report, write_trace_csv, RatioReport, RatioRow, CSV_HEADER, RATIO_SLACK};
pub use synthetic::{
    planar_dataset, make_synthetic, random_classification, SyntheticKind, SyntheticProblem, PLANAR_LAMBDA,
    PLANAR_POINTS, PLANAR_START,
};

use crate::error::{Error, Result};
use crate::objective::CompositeObjective;
use crate::problems::ErmSpec;
use crate::solvers::{acuesa, solve, Algorithm, SolverConfig, Termination, Trace};

#[derive(Debug, Clone)]
pub enum ProblemSource {
    Erm(ErmSpec),
    Synthetic { kind: SyntheticKind, dim: usize, mu: f64, l: f64 },
}

impl ProblemSource {
    /// Objective and default start (zero for ERM problems).
    pub fn build(&self, seed: u64) -> Result<SyntheticProblem> {
        match self {
            ProblemSource::Erm(spec) => {
                let objective = spec.build()?;
                let x0 = vec![0.0; objective.dim()];
                Ok(SyntheticProblem { objective, x0 })
            }
            ProblemSource::Synthetic { kind, dim, mu, l } => make_synthetic(*kind, *dim, *mu, *l, seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub adaptive: bool,
}

impl RunSpec {
    pub fn fixed(algorithm: Algorithm) -> Self {
        Self { algorithm, adaptive: false }
    }

    pub fn name(&self) -> String {
        if self.adaptive {
            format!("{}-adaptive", self.algorithm)
        } else {
            self.algorithm.to_string()
        }
    }
}

impl fmt::Display for RunSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Accepts `suesa` or `suesa-adaptive`; gradient descent has no adaptive form.
impl FromStr for RunSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, adaptive) = match s.strip_suffix("-adaptive") {
            Some(base) => (base, true),
            None => (s, false),
        };
        let algorithm: Algorithm = name.parse()?;
        if adaptive && !algorithm.has_certificate() {
            return Err(Error::invalid("gradient descent has no adaptive variant"));
        }
        Ok(Self { algorithm, adaptive })
    }
}

#[derive(Debug, Clone)]
pub struct RunPlan {
    pub problem: ProblemSource,
    pub runs: Vec<RunSpec>,
    /// Shared settings; `adaptive` is taken from each [`RunSpec`].
    pub cfg: SolverConfig,
    pub seed: u64,
    /// Directory receiving `<run>.csv` files and `summary.txt`.
    pub out_dir: PathBuf,
    /// Start point; `None` uses the problem's default.
    pub x0: Option<Vec<f64>>,
    /// Maximum concurrent runs.
    pub jobs: usize,
}

impl RunPlan {
    pub fn new(problem: ProblemSource, runs: Vec<RunSpec>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            problem,
            runs,
            cfg: SolverConfig::default(),
            seed: 0,
            out_dir: out_dir.into(),
            x0: None,
            jobs: 1,
        }
    }

    fn validate(&self, obj: &CompositeObjective) -> Result<()> {
        if self.runs.is_empty() {
            return Err(Error::invalid("a plan needs at least one algorithm"));
        }
        if self.jobs == 0 {
            return Err(Error::invalid("jobs must be at least 1"));
        }
        self.cfg.validate()?;
        if !obj.is_smooth() {
            if let Some(r) = self.runs.iter().find(|r| !r.algorithm.is_composite()) {
                return Err(Error::invalid(format!(
                    "{r} needs h = 0 but the problem has an l1 term; use cuesa or acuesa"
                )));
            }
        }
        let mut names: Vec<String> = self.runs.iter().map(RunSpec::name).collect();
        names.sort();
        names.dedup();
        if names.len() != self.runs.len() {
            return Err(Error::invalid("each run may appear only once in a plan"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub run: RunSpec,
    pub csv_path: PathBuf,
    pub iterations: usize,
    pub termination: Option<Termination>,
    pub f_val: f64,
    pub gap: Option<f64>,
    pub fevals: u64,
    pub gevals: u64,
    pub proxevals: u64,
    pub cpu_ns: u64,
    /// Solver error, if the run aborted.
    pub error: Option<String>,
    /// Flags from [`ratio_report`].
    pub ratio_flags: usize,
}

impl RunSummary {
    pub fn certified(&self) -> bool {
        self.termination == Some(Termination::Certified)
    }
}

#[derive(Debug, Clone)]
pub struct PlanSummary {
    pub mu: f64,
    pub lipschitz: f64,
    /// `F_ref` used for gradient-descent gaps, when one was computed.
    pub reference_value: Option<f64>,
    pub runs: Vec<RunSummary>,
    pub summary_path: PathBuf,
}

impl PlanSummary {
    /// True when every run that keeps a certificate terminated certified.
    pub fn all_certified(&self) -> bool {
        self.runs.iter().filter(|r| r.run.algorithm.has_certificate()).all(RunSummary::certified)
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "mu = {}  L = {}", self.mu, self.lipschitz)?;
        if let Some(r) = self.reference_value {
            writeln!(out, "F_ref = {r}")?;
        }
        writeln!(
            out,
            "{:<18} {:>9} {:>14} {:>10} {:>10} {:>10} {:>14} {:>6}  status",
            "run", "iters", "gap", "fevals", "gevals", "proxevals", "cpu_ns", "flags"
        )?;
        for r in &self.runs {
            let status = match (&r.error, r.termination) {
                (Some(e), _) => format!("error: {e}"),
                (None, Some(Termination::Certified)) => "certified".into(),
                (None, Some(Termination::ReachedReference)) => "reached F_ref".into(),
                (None, Some(Termination::MaxIterations)) => "max iterations".into(),
                (None, None) => "not run".into(),
            };
            let gap = r.gap.map(|g| format!("{g:.3e}")).unwrap_or_else(|| "-".into());
            writeln!(
                out,
                "{:<18} {:>9} {:>14} {:>10} {:>10} {:>10} {:>14} {:>6}  {status}",
                r.run.name(),
                r.iterations,
                gap,
                r.fevals,
                r.gevals,
                r.proxevals,
                r.cpu_ns,
                r.ratio_flags
            )?;
        }
        Ok(())
    }
}

fn write_csv(path: &Path, trace: &Trace) -> Result<()> {
    write_trace_csv(trace, BufWriter::new(File::create(path)?))
}

/// Executes every run of the plan from the same start, writing
/// `<out_dir>/<run>.csv` and `<out_dir>/summary.txt`.
///
/// When gradient descent is in the plan, `F_ref` comes from an ACUESA run
/// to a certificate 1000 times tighter than `epsilon`. Solver failures are
/// recorded in the summary rather than aborting the plan; I/O failures
/// abort it.
pub fn run_plan(plan: &RunPlan) -> Result<PlanSummary> {
    let problem = plan.problem.build(plan.seed)?;
    let obj = &problem.objective;
    plan.validate(obj)?;
    let x0 = match &plan.x0 {
        Some(x0) => {
            obj.check_point(x0)?;
            x0.clone()
        }
        None => problem.x0.clone(),
    };
    fs::create_dir_all(&plan.out_dir)?;

    let reference_value = if plan.runs.iter().any(|r| !r.algorithm.has_certificate()) {
        let cfg = SolverConfig {
            epsilon: (plan.cfg.epsilon * 1e-3).max(1e-14),
            adaptive: false,
            ..plan.cfg.clone()
        };
        let (sol, _) = acuesa(obj, &x0, &cfg)?;
        Some(sol.f_val)
    } else {
        None
    };

    let slots: Vec<Mutex<Option<Result<RunSummary>>>> = plan.runs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = plan.jobs.min(plan.runs.len());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(run) = plan.runs.get(i) else { break };
                let out = execute(plan, obj, &x0, *run, reference_value);
                *slots[i].lock().expect("result slot poisoned") = Some(out);
            });
        }
    });

    let mut runs = Vec::with_capacity(slots.len());
    for slot in slots {
        runs.push(slot.into_inner().expect("result slot poisoned").expect("every run executed")?);
    }
    let summary = PlanSummary {
        mu: obj.mu(),
        lipschitz: obj.lipschitz(),
        reference_value,
        runs,
        summary_path: plan.out_dir.join("summary.txt"),
    };
    let mut f = BufWriter::new(File::create(&summary.summary_path)?);
    summary.write_text(&mut f)?;
    f.flush()?;
    Ok(summary)
}

fn execute(
    plan: &RunPlan,
    obj: &CompositeObjective,
    x0: &[f64],
    run: RunSpec,
    reference_value: Option<f64>,
) -> Result<RunSummary> {
    let cfg = SolverConfig { adaptive: run.adaptive, reference_value, ..plan.cfg.clone() };
    let csv_path = plan.out_dir.join(format!("{}.csv", run.name()));
    match solve(run.algorithm, obj, x0, &cfg) {
        Ok((sol, trace)) => {
            write_csv(&csv_path, &trace)?;
            Ok(RunSummary {
                run,
                csv_path,
                iterations: sol.iterations,
                termination: Some(sol.termination),
                f_val: sol.f_val,
                gap: sol.gap,
                fevals: sol.counts.fevals,
                gevals: sol.counts.gevals,
                proxevals: sol.counts.proxevals,
                cpu_ns: sol.cpu_ns,
                error: None,
                ratio_flags: ratio_report(&trace).flagged().len(),
            })
        }
        Err(e) => Ok(RunSummary {
            run,
            csv_path,
            iterations: 0,
            termination: None,
            f_val: f64::NAN,
            gap: None,
            fevals: 0,
            gevals: 0,
            proxevals: 0,
            cpu_ns: 0,
            error: Some(e.to_string()),
            ratio_flags: 0,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_spec_parsing() {
        assert_eq!("asuesa-adaptive".parse::<RunSpec>().unwrap(), RunSpec { algorithm: Algorithm::Asuesa, adaptive: true });
        assert_eq!("gd".parse::<RunSpec>().unwrap(), RunSpec::fixed(Algorithm::GradientDescent));
        assert!("gd-adaptive".parse::<RunSpec>().is_err());
        assert!("sgd".parse::<RunSpec>().is_err());
    }

    #[test]
    fn plan_validation() {
        let dir = std::env::temp_dir().join("ues-plan-validation");
        let src = ProblemSource::Synthetic { kind: SyntheticKind::ExtremalQuadratic, dim: 2, mu: 1.0, l: 1.0 };
        let plan = RunPlan::new(src.clone(), vec![], &dir);
        assert!(run_plan(&plan).is_err());
        let dup = RunPlan::new(src, vec![RunSpec::fixed(Algorithm::Suesa); 2], &dir);
        assert!(run_plan(&dup).is_err());
    }
}
