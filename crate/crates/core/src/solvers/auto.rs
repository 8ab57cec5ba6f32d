//! Solver selection by applicability.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::FinancialSystem;

use super::dedicated::solve_dedicated_with;
use super::iterate::{iterate_clearing, DEFAULT_DAMPING};
use super::propagate::solve_acyclic_with;
use super::report::{SolveReport, SolverOptions};
use super::scc::solve_no_weakly_switched_with;

/// Which solver to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SolverChoice {
    /// The first applicable of acyclic, SCC procedure and branch enumeration, falling
    /// back to iteration.
    #[default]
    Auto,
    /// Topological propagation.
    Acyclic,
    /// Branch enumeration over the dedicated-CDS-debtor map.
    Dedicated,
    /// SCC-by-SCC procedure.
    Scc,
    /// Damped fixed-point iteration.
    Iterate,
}

impl fmt::Display for SolverChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverChoice::Auto => "auto",
            SolverChoice::Acyclic => "acyclic",
            SolverChoice::Dedicated => "dedicated",
            SolverChoice::Scc => "scc",
            SolverChoice::Iterate => "iterate",
        })
    }
}

impl FromStr for SolverChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(SolverChoice::Auto),
            "acyclic" => Ok(SolverChoice::Acyclic),
            "dedicated" => Ok(SolverChoice::Dedicated),
            "scc" => Ok(SolverChoice::Scc),
            "iterate" => Ok(SolverChoice::Iterate),
            other => Err(Error::InvalidParam(format!("unknown solver `{other}`"))),
        }
    }
}

/// Iteration settings used by [`SolverChoice::Iterate`] and the automatic fallback.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationSettings {
    /// Sup-norm step tolerance.
    pub eps: f64,
    /// Iteration cap.
    pub max_iter: usize,
}

impl Default for IterationSettings {
    fn default() -> Self {
        Self {
            eps: 1e-9,
            max_iter: super::iterate::DEFAULT_MAX_ITER,
        }
    }
}

/// Runs the chosen solver. For [`SolverChoice::Auto`] the exact solvers are tried in the
/// order acyclic, SCC procedure, branch enumeration; each precondition failure is recorded
/// as a note and the next one is tried, ending with iteration.
/// Errors other than precondition failures are returned immediately.
pub fn solve_with_choice(
    sys: &FinancialSystem,
    choice: SolverChoice,
    opts: &SolverOptions,
    iter: IterationSettings,
) -> Result<(SolveReport, Vec<String>)> {
    let iterate = || iterate_clearing(sys, iter.eps, iter.max_iter, DEFAULT_DAMPING);
    let report = match choice {
        SolverChoice::Acyclic => solve_acyclic_with(sys, opts)?,
        SolverChoice::Dedicated => solve_dedicated_with(sys, opts)?,
        SolverChoice::Scc => solve_no_weakly_switched_with(sys, opts)?,
        SolverChoice::Iterate => iterate()?,
        SolverChoice::Auto => {
            let attempts: [(SolverChoice, &dyn Fn() -> Result<SolveReport>); 3] = [
                (SolverChoice::Acyclic, &|| solve_acyclic_with(sys, opts)),
                (SolverChoice::Scc, &|| {
                    solve_no_weakly_switched_with(sys, opts)
                }),
                (SolverChoice::Dedicated, &|| solve_dedicated_with(sys, opts)),
            ];
            let mut notes = Vec::new();
            for (name, attempt) in attempts {
                match attempt() {
                    Ok(r) => return Ok((r, notes)),
                    Err(e) if e.is_precondition() => {
                        notes.push(format!("{name} solver not applicable: {e}"))
                    }
                    Err(e) => return Err(e),
                }
            }
            return Ok((iterate()?, notes));
        }
    };
    Ok((report, Vec::new()))
}
