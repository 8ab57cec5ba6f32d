//! SCC-by-SCC procedure for systems without weakly switched cycles.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::analysis::{build_auxiliary_graph, find_weakly_switched_cycle, scc_condensation};
use crate::error::{Error, Result};
use crate::model::{
    contract_liability, is_clearing, Bank, Contract, FinancialSystem, RecoveryVector,
};
use crate::numeric::Rational;

use super::dedicated::solve_dedicated_with;
use super::report::{SolveReport, SolverKind, SolverOptions};

/// Builds the sub-instance of component `members`: contracts inside the component are kept,
/// CDSes whose reference was already solved become debts with notional `(1 − r_R)·c`,
/// contracts leaving the component are redirected to a local sink bank, and payments from
/// already-solved banks are added to the external assets.
pub fn component_subinstance(
    sys: &FinancialSystem,
    members: &[usize],
    solved: &[Option<Rational>],
) -> Result<FinancialSystem> {
    let local: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let sink = members.len();
    let mut banks: Vec<Bank> = members
        .iter()
        .map(|&i| Bank {
            id: sys.id(i).to_string(),
            external_assets: sys.external_assets(i).clone(),
        })
        .collect();
    let mut sink_id = String::from("⊥");
    while sys.index_of(&sink_id).is_ok() {
        sink_id.push('⊥');
    }
    banks.push(Bank {
        id: sink_id,
        external_assets: Rational::zero(),
    });
    let known: Vec<Rational> = solved
        .iter()
        .map(|v| v.clone().unwrap_or_else(Rational::one))
        .collect();
    let mut contracts = Vec::new();
    for c in sys.contracts() {
        let debtor_in = local.get(&c.debtor).copied();
        let creditor_in = local.get(&c.creditor).copied();
        match (debtor_in, creditor_in) {
            (None, Some(j)) => {
                let r_debtor = solved[c.debtor].as_ref().ok_or_else(|| {
                    Error::InvalidSystem(format!(
                        "bank {} not solved before its creditor",
                        sys.id(c.debtor)
                    ))
                })?;
                banks[j].external_assets += r_debtor * contract_liability(c, &known);
            }
            (Some(i), target) => {
                let creditor = target.unwrap_or(sink);
                match c.reference {
                    Some(r) if !local.contains_key(&r) => {
                        let rr = solved[r].as_ref().ok_or_else(|| {
                            Error::InvalidSystem(format!(
                                "reference {} not solved before its debtor",
                                sys.id(r)
                            ))
                        })?;
                        let notional = (Rational::one() - rr) * &c.notional;
                        if notional.is_positive() {
                            contracts.push(Contract {
                                debtor: i,
                                creditor,
                                reference: None,
                                notional,
                            });
                        }
                    }
                    reference => contracts.push(Contract {
                        debtor: i,
                        creditor,
                        reference: reference.map(|r| local[&r]),
                        notional: c.notional.clone(),
                    }),
                }
            }
            (None, None) => {}
        }
    }
    crate::model::normalize_system(&FinancialSystem::new(banks, contracts)?)
}

/// Exact clearing vector for a system without weakly switched cycles.
///
/// SCCs of the auxiliary graph are processed in topological order; each component's
/// sub-instance has dedicated CDS debtors and is solved by branch enumeration. When a
/// component admits several clearing vectors the lexicographically largest (in bank index
/// order) is selected. Non-degeneracy is required of every component sub-instance.
pub fn solve_no_weakly_switched_with(
    sys: &FinancialSystem,
    opts: &SolverOptions,
) -> Result<SolveReport> {
    let aux = build_auxiliary_graph(sys);
    if let Some(w) = find_weakly_switched_cycle(&aux) {
        return Err(Error::WeaklySwitchedPresent(w.display(&aux)));
    }
    let cond = scc_condensation(&aux);
    let mut solved: Vec<Option<Rational>> = vec![None; sys.len()];
    let mut warnings = Vec::new();
    for members in &cond.components {
        let sub = component_subinstance(sys, members, &solved)?;
        let report = solve_dedicated_with(&sub, opts)?;
        warnings.extend(report.warnings.iter().cloned());
        let best = report
            .solutions
            .iter()
            .filter_map(|s| s.as_rationals())
            .max()
            .ok_or_else(|| {
                let ids: Vec<&str> = members.iter().map(|&i| sys.id(i)).collect();
                Error::InvalidSystem(format!(
                    "no clearing vector found for component {{{}}}",
                    ids.join(", ")
                ))
            })?;
        for (k, &i) in members.iter().enumerate() {
            solved[i] = Some(best[k].clone());
        }
    }
    let r: Vec<Rational> = solved
        .into_iter()
        .map(|v| v.expect("all components solved"))
        .collect();
    let vector = RecoveryVector::rational(r)?;
    if !is_clearing(sys, &vector)? {
        return Err(Error::InvalidSystem(
            "assembled vector failed the clearing check".into(),
        ));
    }
    let mut report = SolveReport::exact(SolverKind::NoWeaklySwitched, vec![vector]);
    warnings.dedup();
    report.warnings = warnings;
    report.check_bits(opts.bit_warning_threshold);
    Ok(report)
}

/// [`solve_no_weakly_switched_with`] using default options.
pub fn solve_no_weakly_switched(sys: &FinancialSystem) -> Result<SolveReport> {
    solve_no_weakly_switched_with(sys, &SolverOptions::default())
}
