//! Linear programming for dispatch-sized problems.
//!
//! The crate provides a problem container with per-variable bounds, a
//! two-phase primal simplex solver (bounded variables, Bland's-rule
//! anti-cycling fallback), a point/residual checker, and a deterministic
//! LP-format text exporter for cross-checking with external solvers.
//!
//! Singleton constraint rows are folded into variable bounds before the
//! simplex runs, so models that encode per-sample robust capacity limits
//! as thousands of one-term rows solve at the size of their structural
//! core.

mod check;
mod error;
mod export;
mod problem;
mod simplex;
pub mod testkit;

pub use check::{check_point, ResidualReport};
pub use error::LpError;
pub use export::export_standard;
pub use problem::{LpProblem, Relation, Row, VarId, Variable};
pub use simplex::{solve, LpSolution, SolveOptions, SolveStatus};
