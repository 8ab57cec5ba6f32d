//! Strong ε-approximation certificates against exact reference solutions.

use std::cmp::Ordering;

use crate::analysis::{build_auxiliary_graph, is_acyclic};
use crate::error::{Error, Result};
use crate::model::{distance_inf, FinancialSystem, Number, RecoveryVector};

use super::dedicated::solve_dedicated;
use super::propagate::solve_acyclic;
use super::scc::solve_no_weakly_switched;

/// Where exact reference solutions come from.
#[derive(Clone, Debug, PartialEq)]
pub enum Reference {
    /// Try the acyclic, no-weakly-switched and branch-enumeration solvers in turn.
    Auto,
    /// Use the given exact clearing vectors (e.g. a fragment closed form).
    Given(Vec<RecoveryVector>),
}

/// Exact clearing vectors from the first applicable exact solver.
pub fn exact_references(sys: &FinancialSystem) -> Result<Vec<RecoveryVector>> {
    if is_acyclic(&build_auxiliary_graph(sys)) {
        return Ok(solve_acyclic(sys)?.solutions);
    }
    let mut reasons = Vec::new();
    let dedicated = solve_dedicated(sys);
    if let Ok(rep) = &dedicated {
        return Ok(rep.solutions.clone());
    }
    match solve_no_weakly_switched(sys) {
        Ok(rep) => return Ok(rep.solutions),
        Err(e) => reasons.push(e.to_string()),
    }
    if let Err(e) = dedicated {
        reasons.push(e.to_string());
    }
    Err(Error::NoExactReference(reasons.join("; ")))
}

/// Whether `candidate` lies within ℓ∞-distance `< eps` of some exact clearing vector.
pub fn certify_strong(
    sys: &FinancialSystem,
    candidate: &RecoveryVector,
    eps: &Number,
    reference: &Reference,
) -> Result<bool> {
    let refs = match reference {
        Reference::Auto => exact_references(sys)?,
        Reference::Given(v) => v.clone(),
    };
    if refs.is_empty() {
        return Err(Error::NoExactReference("empty reference set".into()));
    }
    for r in &refs {
        let d = distance_inf(candidate, r)?;
        if d.compare(eps) == Some(Ordering::Less) {
            return Ok(true);
        }
    }
    Ok(false)
}
