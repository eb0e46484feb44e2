//! Underestimate-sequence (UES) solvers for strongly convex problems
//! `min F(x) = f(x) + h(x)` with `f` `mu`-strongly convex and `L`-smooth and
//! `h` convex with a cheap proximal operator.
//!
//! Each solver maintains a quadratic lower bound `phi_k` on `F` alongside the
//! iterate `x_k`. The gap `F(x_k) - phi_k^*` upper-bounds the suboptimality,
//! so a run that stops with gap at most `epsilon` carries a certificate.
//!
//! ```
//! use std::sync::Arc;
//! use ues::{problems::DiagonalQuadratic, solvers, CompositeObjective, SolverConfig};
//!
//! let f = Arc::new(DiagonalQuadratic::new(vec![1.0, 4.0]).unwrap());
//! let obj = CompositeObjective::smooth(f, 1.0, 4.0).unwrap();
//! let (sol, _) = solvers::asuesa(&obj, &[1.0, 1.0], &SolverConfig::default()).unwrap();
//! assert!(sol.certified());
//! assert!(sol.f_val <= 1e-8);
//! ```

pub mod bench;
pub mod dataio;
pub mod error;
pub mod linalg;
pub mod objective;
pub mod problems;
pub mod proxcore;
pub mod solvers;
pub mod underestimate;

pub use dataio::{load_libsvm, parse_libsvm, write_libsvm, SparseDataset};
pub use error::{Error, Result};
pub use objective::{CompositeObjective, EvalCounts, L1Norm, NonsmoothTerm, SmoothOracle, ZeroTerm};
pub use proxcore::{prox_gradient, ProxStepResult};
pub use solvers::{Algorithm, Solution, SolverConfig, Trace};
pub use underestimate::QuadraticLowerBound;
