//! Exact and approximate clearing solvers.

pub mod auto;
pub mod certify;
pub mod dedicated;
pub mod iterate;
pub mod linalg;
pub mod propagate;
pub mod report;
pub mod scc;

pub use auto::{solve_with_choice, IterationSettings, SolverChoice};
pub use certify::{certify_strong, exact_references, Reference};
pub use dedicated::{solve_dedicated, solve_dedicated_with, verify_branch};
pub use iterate::{
    iterate_clearing, iterate_clearing_from, FloatSystem, DEFAULT_DAMPING, DEFAULT_MAX_ITER,
};
pub use propagate::{propagate_pinned, solve_acyclic, solve_acyclic_with};
pub use report::{
    Branch, BranchAssignment, SolveReport, SolverKind, SolverOptions,
    DEFAULT_BIT_WARNING_THRESHOLD, DEFAULT_MAX_MIN_EXPRESSIONS,
};
pub use scc::{component_subinstance, solve_no_weakly_switched, solve_no_weakly_switched_with};
