//! Solver reports and options.

use std::fmt;

use crate::model::{Number, RecoveryVector};
use crate::numeric::bit_size;

/// Which solver produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverKind {
    /// Topological propagation on an acyclic auxiliary graph.
    Acyclic,
    /// Branch enumeration of the piecewise-linear payment map.
    Dedicated,
    /// SCC-by-SCC procedure for systems without weakly switched cycles.
    NoWeaklySwitched,
    /// Damped fixed-point iteration.
    Iterate,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Acyclic => "acyclic",
            SolverKind::Dedicated => "dedicated",
            SolverKind::NoWeaklySwitched => "scc",
            SolverKind::Iterate => "iterate",
        })
    }
}

/// Side chosen for one min-expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// The cap side (`r = 1`, or full CDS payment `(1 − r_R)·c`).
    Saturated,
    /// The proportional side (`r = a/l`, or `c·a/C`).
    Interior,
}

/// One flag per min-expression: first the non-CDS-debtor banks with positive liabilities
/// (index order), then the CDS contracts (contract order).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BranchAssignment {
    /// Labels of the min-expressions (`r:<bank>` or `p:<debtor>→<creditor>`).
    pub labels: Vec<String>,
    /// Chosen side for each expression.
    pub flags: Vec<Branch>,
}

/// Result of a solver run.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    /// Solver identity.
    pub solver: SolverKind,
    /// Exact solutions (exact solvers) or the final iterate (iteration).
    pub solutions: Vec<RecoveryVector>,
    /// Branch assignment behind each solution (branch-enumeration solver only).
    pub branches: Vec<BranchAssignment>,
    /// Residual of the final iterate (iteration only; exact solutions have residual 0).
    pub residual: Option<Number>,
    /// Iterations performed.
    pub iterations: usize,
    /// Whether the iteration met its tolerance (always `true` for exact solvers).
    pub converged: bool,
    /// Non-fatal observations such as coefficient growth.
    pub warnings: Vec<String>,
    /// Largest numerator/denominator bit size among exact solution entries.
    pub max_bits: u64,
}

impl SolveReport {
    pub(crate) fn exact(solver: SolverKind, solutions: Vec<RecoveryVector>) -> Self {
        let max_bits = solutions
            .iter()
            .filter_map(|s| s.as_rationals())
            .flatten()
            .map(|q| bit_size(&q))
            .max()
            .unwrap_or(0);
        Self {
            solver,
            solutions,
            branches: Vec::new(),
            residual: None,
            iterations: 0,
            converged: true,
            warnings: Vec::new(),
            max_bits,
        }
    }

    pub(crate) fn check_bits(&mut self, threshold: u64) {
        if self.max_bits > threshold {
            self.warnings.push(format!(
                "coefficient growth: exact rates use up to {} bits (threshold {threshold})",
                self.max_bits
            ));
        }
    }
}

/// Tunables shared by the exact solvers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Maximum number of min-expressions for branch enumeration (2^cap branches).
    pub max_min_expressions: usize,
    /// Bit size above which a coefficient-growth warning is attached.
    pub bit_warning_threshold: u64,
}

/// Default branch cap: 20 min-expressions, i.e. 2^20 branches.
pub const DEFAULT_MAX_MIN_EXPRESSIONS: usize = 20;

/// Default coefficient-growth warning threshold in bits (one machine word).
pub const DEFAULT_BIT_WARNING_THRESHOLD: u64 = 64;

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_min_expressions: DEFAULT_MAX_MIN_EXPRESSIONS,
            bit_warning_threshold: DEFAULT_BIT_WARNING_THRESHOLD,
        }
    }
}
