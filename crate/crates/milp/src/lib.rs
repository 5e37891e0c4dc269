//! Mixed-integer linear programming over exact rationals.
//!
//! Models are built with [`MilpModel`], solved by depth-first
//! branch-and-bound on top of a bounded-variable simplex using Bland's rule,
//! and can be exported to CPLEX-style LP text for external cross-checks.

pub mod bnb;
mod external;
pub mod lp_format;
pub mod model;
pub mod rational;
pub mod reference;
pub mod simplex;

pub use bnb::{lp_relax_solve, relaxation, solve, BranchRule, MilpSolution, SolveConfig, SolveError, SolveStatus, TieBreak};
pub use lp_format::{export_lp, export_lp_string, import_solution, sanitized_names, ImportedSolution, LpFormatError};
pub use model::{Constraint, LinExpr, MilpModel, ModelError, Relation, VarId, VarKind, Variable, Violation};
pub use rational::{ParseRationalError, Rational};
pub use simplex::{solve_lp, Lp, LpRow, LpSolution, LpStatus};
