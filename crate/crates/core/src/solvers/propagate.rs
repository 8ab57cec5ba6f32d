//! Topological propagation of recovery rates, optionally with pinned nodes.

use crate::analysis::{build_auxiliary_graph, is_acyclic, topological_order};
use crate::error::{Error, Result};
use crate::model::{
    contract_liability, recovery_from, residual_of, FinancialSystem, RecoveryVector,
};
use crate::numeric::{Rational, Scalar};

use super::report::{SolveReport, SolverKind, SolverOptions};

/// Dependency adjacency: `j → i` whenever `r_i` depends on `r_j` (debtor → creditor for
/// payments, reference → debtor and reference → creditor for CDS liabilities and payments),
/// skipping arcs into pinned nodes.
fn dependency_adjacency(sys: &FinancialSystem, pinned: &[bool]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); sys.len()];
    for c in sys.contracts() {
        if !pinned[c.creditor] {
            adj[c.debtor].push(c.creditor);
        }
        if let Some(r) = c.reference {
            if !pinned[c.debtor] {
                adj[r].push(c.debtor);
            }
            if !pinned[c.creditor] {
                adj[r].push(c.creditor);
            }
        }
    }
    adj
}

/// Computes every recovery rate in topological order of the dependency graph, holding the
/// `pinned` nodes at the given values. Fails with [`Error::NotAcyclic`] when the graph
/// remaining after removing the pinned nodes' dependencies still has a cycle.
pub fn propagate_pinned<S: Scalar>(sys: &FinancialSystem, pinned: &[(usize, S)]) -> Result<Vec<S>> {
    let n = sys.len();
    let mut is_pinned = vec![false; n];
    for (i, _) in pinned {
        is_pinned[*i] = true;
    }
    let adj = dependency_adjacency(sys, &is_pinned);
    let order = topological_order(&adj).ok_or(Error::NotAcyclic)?;
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, c) in sys.contracts().iter().enumerate() {
        incoming[c.creditor].push(k);
        outgoing[c.debtor].push(k);
    }
    // Placeholder values for not-yet-computed entries are never read: topological order
    // guarantees all dependencies are final.
    let mut r: Vec<S> = vec![S::one_value(); n];
    for (i, v) in pinned {
        r[*i] = v.clone();
    }
    for &i in &order {
        if is_pinned[i] {
            continue;
        }
        let contracts = sys.contracts();
        let mut a = S::from_rational(sys.external_assets(i));
        for &k in &incoming[i] {
            let c = &contracts[k];
            a = a.add(&r[c.debtor].mul(&contract_liability(c, &r)));
        }
        let mut l = S::zero_value();
        for &k in &outgoing[i] {
            l = l.add(&contract_liability(&contracts[k], &r));
        }
        r[i] = recovery_from(&a, &l);
    }
    Ok(r)
}

/// Exact clearing vector of an acyclic system, computed bank by bank in topological order
/// of the auxiliary graph.
pub fn solve_acyclic(sys: &FinancialSystem) -> Result<SolveReport> {
    solve_acyclic_with(sys, &SolverOptions::default())
}

/// [`solve_acyclic`] with explicit options (only the bit-warning threshold applies).
pub fn solve_acyclic_with(sys: &FinancialSystem, opts: &SolverOptions) -> Result<SolveReport> {
    let aux = build_auxiliary_graph(sys);
    if !is_acyclic(&aux) {
        return Err(Error::NotAcyclic);
    }
    let r: Vec<Rational> = propagate_pinned(sys, &[])?;
    debug_assert!(num_traits::Zero::is_zero(&residual_of(sys, &r)));
    let mut report = SolveReport::exact(SolverKind::Acyclic, vec![RecoveryVector::rational(r)?]);
    report.check_bits(opts.bit_warning_threshold);
    Ok(report)
}
