//! Underestimate-sequence solvers.
//!
//! Every solver keeps an iterate `x_k` and a quadratic lower bound
//! `phi_k` on `F`, and stops as soon as `F(x_k) - phi_k^* <= epsilon`, which
//! certifies `F(x_k) - F^* <= epsilon`. The gap contracts by `1 - alpha_k`
//! per iteration with `alpha_k = mu / L` (plain) or `sqrt(mu / L)`
//! (accelerated).
//!
//! | solver   | objective  | anchor `y_k`                  | `alpha_k`      |
//! |----------|------------|-------------------------------|----------------|
//! | SUESA    | `h = 0`    | `x_k`                         | `mu/L`         |
//! | ASUESA   | `h = 0`    | `beta x_k + (1 - beta) v_k`   | `sqrt(mu/L)`   |
//! | CUESA    | composite  | `x_k`                         | `mu/L`         |
//! | ACUESA   | composite  | `beta x_k + (1 - beta) v_k`   | `sqrt(mu/L)`   |
//!
//! With `SolverConfig::adaptive` the constant `L` is replaced per iteration
//! by an estimate `L_k` found by [`adaptive_l_search`].

mod adaptive;
mod engine;
mod gd;

use std::fmt;
use std::str::FromStr;

pub use adaptive::{adaptive_l_search, AcceptedStep, SearchMode};
pub use gd::gradient_descent;

use crate::error::{Error, Result};
use crate::objective::{CompositeObjective, EvalCounts};
use crate::underestimate::QuadraticLowerBound;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Certificate tolerance on `F(x_k) - phi_k^*`.
    pub epsilon: f64,
    pub max_iters: usize,
    /// Search for `L_k` each iteration instead of using the objective's `L`.
    pub adaptive: bool,
    /// Initial Lipschitz estimate for adaptive mode; `None` uses a secant
    /// estimate at `x0`.
    pub l0: Option<f64>,
    /// Increase factor of the Lipschitz search.
    pub u: f64,
    /// Decrease factor of the Lipschitz search.
    pub d: f64,
    /// Seed for the secant direction of the automatic `L0`.
    pub seed: u64,
    /// Target `F_ref` for the gradient-descent baseline, which has no
    /// lower bound of its own.
    pub reference_value: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-8,
            max_iters: 100_000,
            adaptive: false,
            l0: None,
            u: 2.0,
            d: 2.0,
            seed: 0,
            reference_value: None,
        }
    }
}

impl SolverConfig {
    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn adaptive(mut self, l0: Option<f64>) -> Self {
        self.adaptive = true;
        self.l0 = l0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::invalid(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.u > 1.0 && self.u.is_finite()) || !(self.d > 1.0 && self.d.is_finite()) {
            return Err(Error::invalid(format!(
                "search factors must exceed 1, got u = {}, d = {}",
                self.u, self.d
            )));
        }
        if let Some(l0) = self.l0 {
            if !(l0 > 0.0 && l0.is_finite()) {
                return Err(Error::invalid(format!("L0 must be positive, got {l0}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Suesa,
    Asuesa,
    Cuesa,
    Acuesa,
    GradientDescent,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Suesa,
        Algorithm::Asuesa,
        Algorithm::Cuesa,
        Algorithm::Acuesa,
        Algorithm::GradientDescent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Suesa => "suesa",
            Algorithm::Asuesa => "asuesa",
            Algorithm::Cuesa => "cuesa",
            Algorithm::Acuesa => "acuesa",
            Algorithm::GradientDescent => "gd",
        }
    }

    pub fn is_composite(self) -> bool {
        matches!(self, Algorithm::Cuesa | Algorithm::Acuesa)
    }

    pub fn is_accelerated(self) -> bool {
        matches!(self, Algorithm::Asuesa | Algorithm::Acuesa)
    }

    /// Whether the solver maintains a lower bound (everything except GD).
    pub fn has_certificate(self) -> bool {
        self != Algorithm::GradientDescent
    }

    pub(crate) fn search_mode(self) -> Option<SearchMode> {
        match self {
            Algorithm::Suesa => Some(SearchMode::SmoothPlain),
            Algorithm::Asuesa => Some(SearchMode::SmoothAccel),
            Algorithm::Cuesa => Some(SearchMode::CompositePlain),
            Algorithm::Acuesa => Some(SearchMode::CompositeAccel),
            Algorithm::GradientDescent => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// `F(x_k) - phi_k^* <= epsilon`.
    Certified,
    /// Gradient descent reached `F(x_k) - F_ref <= epsilon`.
    ReachedReference,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<f64>,
    pub f_val: f64,
    pub phi_star: Option<f64>,
    pub gap: Option<f64>,
    pub iterations: usize,
    pub termination: Termination,
    pub counts: EvalCounts,
    pub cpu_ns: u64,
}

impl Solution {
    pub fn certified(&self) -> bool {
        self.termination == Termination::Certified
    }
}

/// One row of a run's per-iteration trace. Row `k` describes `x_k`;
/// `alpha` and `lk` are the values used to reach it (row 0 shows the
/// starting values).
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub fevals: u64,
    pub gevals: u64,
    pub proxevals: u64,
    pub cpu_ns: u64,
    pub f_val: f64,
    pub phi_star: Option<f64>,
    pub gap: Option<f64>,
    /// `gap_k / gap_{k-1}`; undefined at `k = 0`.
    pub ratio: Option<f64>,
    pub alpha: Option<f64>,
    pub lk: f64,
    /// `prod_{i<k} (1 - alpha_i)`, equal to 1 at `k = 0`.
    pub lambda_cum: Option<f64>,
    /// Lipschitz trials spent on this iteration (1 in fixed-step mode).
    pub inner_count: usize,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub algorithm: Algorithm,
    pub mu: f64,
    pub lipschitz: f64,
    pub records: Vec<IterationRecord>,
}

/// Snapshot handed to observers after initialization (`k = 0`) and after
/// every iteration.
#[derive(Debug, Clone, Copy)]
pub struct UesState<'a> {
    pub k: usize,
    pub x: &'a [f64],
    pub v: &'a [f64],
    /// Anchor of the most recent bound update (`x_0` at `k = 0`).
    pub y: &'a [f64],
    pub alpha: f64,
    pub beta: Option<f64>,
    /// Lipschitz value reported for the step (`alpha` is derived from it).
    pub lk: f64,
    /// Constant used inside the step and the fresh bound.
    pub step_gamma: f64,
    pub bound: &'a QuadraticLowerBound,
    pub f_val: f64,
    pub gap: f64,
}

pub type Observer<'o> = &'o mut dyn FnMut(&UesState<'_>);

/// Smooth UES algorithm: gradient steps from `x_k`, bound anchored at `x_k`.
pub fn suesa(obj: &CompositeObjective, x0: &[f64], cfg: &SolverConfig) -> Result<(Solution, Trace)> {
    engine::run(obj, x0, cfg, Algorithm::Suesa, None)
}

/// Accelerated smooth UES algorithm.
pub fn asuesa(obj: &CompositeObjective, x0: &[f64], cfg: &SolverConfig) -> Result<(Solution, Trace)> {
    engine::run(obj, x0, cfg, Algorithm::Asuesa, None)
}

/// Composite UES algorithm: proximal gradient steps from `x_k`.
pub fn cuesa(obj: &CompositeObjective, x0: &[f64], cfg: &SolverConfig) -> Result<(Solution, Trace)> {
    engine::run(obj, x0, cfg, Algorithm::Cuesa, None)
}

/// Accelerated composite UES algorithm.
pub fn acuesa(obj: &CompositeObjective, x0: &[f64], cfg: &SolverConfig) -> Result<(Solution, Trace)> {
    engine::run(obj, x0, cfg, Algorithm::Acuesa, None)
}

pub fn solve(
    algorithm: Algorithm,
    obj: &CompositeObjective,
    x0: &[f64],
    cfg: &SolverConfig,
) -> Result<(Solution, Trace)> {
    match algorithm {
        Algorithm::GradientDescent => gradient_descent(obj, x0, cfg),
        alg => engine::run(obj, x0, cfg, alg, None),
    }
}

/// Runs a UES solver and calls `observer` with the full state at every
/// iteration. Gradient descent has no bound to observe and is rejected.
pub fn solve_observed(
    algorithm: Algorithm,
    obj: &CompositeObjective,
    x0: &[f64],
    cfg: &SolverConfig,
    observer: Observer<'_>,
) -> Result<(Solution, Trace)> {
    if !algorithm.has_certificate() {
        return Err(Error::invalid("gradient descent maintains no lower bound to observe"));
    }
    engine::run(obj, x0, cfg, algorithm, Some(observer))
}
