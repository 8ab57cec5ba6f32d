//! The dedicated-CDS-debtor property.

use std::collections::BTreeSet;

use num_traits::Signed;

use crate::model::FinancialSystem;

/// Outcome of [`check_dedicated_cds_debtor`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DedicatedReport {
    /// `true` iff there are no violations.
    pub ok: bool,
    /// Violations as `(bank id, reason)`.
    pub violations: Vec<(String, String)>,
}

/// Checks that every CDS debtor has no positive debt contract as debtor and that all of
/// its CDSes share one reference bank.
pub fn check_dedicated_cds_debtor(sys: &FinancialSystem) -> DedicatedReport {
    let mut violations = Vec::new();
    for i in sys.cds_debtors() {
        if sys
            .outgoing(i)
            .any(|c| !c.is_cds() && c.notional.is_positive())
        {
            violations.push((
                sys.id(i).to_string(),
                "CDS debtor also owes a debt contract".into(),
            ));
        }
        let refs: BTreeSet<usize> = sys.outgoing(i).filter_map(|c| c.reference).collect();
        if refs.len() > 1 {
            let names: Vec<&str> = refs.iter().map(|&r| sys.id(r)).collect();
            violations.push((
                sys.id(i).to_string(),
                format!("CDSes on several reference banks: {}", names.join(", ")),
            ));
        }
    }
    DedicatedReport {
        ok: violations.is_empty(),
        violations,
    }
}
