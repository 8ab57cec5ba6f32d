//! Concrete financial systems realizing arithmetic fragment cycles.
//!
//! Fragment `k` of a cycle runs from junction `v{k}` to junction `v{k+1}` (indices modulo
//! the cycle length); its other banks are named `f{k}.<label>` after the fragment's node
//! labels. The banks labelled `c`, `c1` and `c2` get no assets and a unit debt to a fresh
//! sink `f{k}.<label>.sink`, which makes them clear at 0 as the transfer maps assume.
//!
//! A side contract that leaves a junction as a CDS on a `c` bank is split into a debt and a
//! CDS of half the notional each. Because the `c` banks clear at 0 the junction's liability
//! and payments are unchanged, but the junction becomes the debtor of a positive debt
//! contract, keeping the instance non-degenerate (junctions are reference banks).

use super::kinds::{Family, Fragment, FragmentKind, FragmentString};
use super::rewrite::solve_cycle_closed_form;
use crate::compiler::Network;
use crate::error::{Error, Result};
use crate::model::{FinancialSystem, RecoveryVector};
use crate::numeric::{int, rat, QuadraticSurd, Rational};
use crate::solvers::propagate_pinned;

/// Id of the junction at the start of fragment `k`.
pub fn junction_id(k: usize) -> String {
    format!("v{k}")
}

struct Emitter {
    net: Network,
}

impl Emitter {
    fn bank(&mut self, k: usize, label: &str, e: Rational) -> usize {
        self.net.bank(format!("f{k}.{label}"), e)
    }

    /// A bank forced to clear at 0: no assets, one unit debt to a fresh sink.
    fn grounded(&mut self, k: usize, label: &str) -> usize {
        let c = self.bank(k, label, int(0));
        let sink = self.bank(k, &format!("{label}.sink"), int(0));
        self.net.unit_debt(c, sink);
        c
    }

    /// Side contract of notional `n` from `debtor` to `creditor`, either a debt or a CDS on a
    /// fresh grounded bank `c_label`.
    fn side(
        &mut self,
        k: usize,
        debtor: usize,
        creditor: usize,
        n: Rational,
        c_label: Option<&str>,
        split: bool,
    ) {
        match c_label {
            None => self.net.debt(debtor, creditor, n),
            Some(label) => {
                let c = self.grounded(k, label);
                if split {
                    let half = n * rat(1, 2);
                    self.net.debt(debtor, creditor, half.clone());
                    self.net.cds(debtor, creditor, c, half);
                } else {
                    self.net.cds(debtor, creditor, c, n);
                }
            }
        }
    }

    fn fragment(&mut self, k: usize, f: &Fragment, start: usize, end: usize) {
        let n = int(i64::from(f.start_liability().expect("arithmetic fragment")));
        let letter = f.kind.letter();
        // Labels of the grounded references: of the start node's side contract and of the
        // middle node's contract.
        let (start_ref, mid_ref) = match letter {
            Some('b') if f.kind.family() == Family::G3 => (Some("c"), None),
            Some('b') => (None, Some("c")),
            Some('c') => (Some("c"), None),
            Some('d') => (Some("c1"), Some("c2")),
            _ => (None, None),
        };
        match f.kind.family() {
            Family::G1 => {
                let b2 = self.bank(k, "2", int(1));
                let b3 = self.bank(k, "3", int(0));
                let b4 = self.bank(k, "4", int(0));
                self.side(k, start, b4, n, start_ref, true);
                self.side(k, b2, b3, int(1), mid_ref, false);
                self.net.cds(b2, end, start, int(1));
            }
            Family::G2 => {
                let b2 = self.bank(k, "2", rat(1, 2));
                let b3 = self.bank(k, "3", int(0));
                let b4 = self.bank(k, "4", int(0));
                self.side(k, start, b4, n, start_ref, true);
                self.net.cds(b2, b3, start, int(1));
                self.side(k, b2, end, int(2), mid_ref, false);
            }
            Family::G3 => {
                let b2 = self.bank(k, "2", int(0));
                let b3 = self.bank(k, "3", int(0));
                self.side(k, start, b2, n, start_ref, true);
                self.net.cds(end, b3, start, int(1));
            }
            Family::D1 => self.net.debt(start, end, int(1)),
            Family::D2 => self.side(k, start, end, int(1), Some("c"), true),
        }
    }
}

/// Builds the concrete instance of an arithmetic fragment cycle. The end node of a `g₃`
/// fragment holds external assets 1; all other junctions hold none. A cycle made of a single
/// `g₁` fragment is rejected: its only junction would be both creditor and reference of the
/// same CDS.
pub fn emit_financial_system(c: &FragmentString) -> Result<FinancialSystem> {
    if !c.is_closed() {
        return Err(Error::InvalidParam(
            "only closed fragment cycles can be emitted".into(),
        ));
    }
    if !c.is_arithmetic() {
        return Err(Error::InvalidParam(format!(
            "{c} has fragments without coefficients"
        )));
    }
    let m = c.len();
    if m == 1 && c.fragments()[0].kind.family() == Family::G1 {
        return Err(Error::InvalidParam(
            "a one-fragment g1 cycle would need a CDS whose creditor is its own reference bank"
                .into(),
        ));
    }
    let mut em = Emitter {
        net: Network::new(),
    };
    let junctions: Vec<usize> = (0..m)
        .map(|k| {
            let prev = c.fragments()[c.predecessor_index(k).expect("closed")];
            let e = if prev.kind == FragmentKind::G3a || prev.kind == FragmentKind::G3b {
                int(1)
            } else {
                int(0)
            };
            em.net.bank(junction_id(k), e)
        })
        .collect();
    for (k, f) in c.fragments().iter().enumerate() {
        em.fragment(k, f, junctions[k], junctions[(k + 1) % m]);
    }
    em.net.to_system()
}

/// Emits the instance together with its exact clearing vector: the start junction is held
/// at the closed-form rate and every other rate follows by exact propagation in surd
/// arithmetic (the cycle runs through the start junction, so the rest is acyclic).
pub fn emit_with_closed_form(c: &FragmentString) -> Result<(FinancialSystem, RecoveryVector)> {
    let rate = solve_cycle_closed_form(c)?;
    let sys = emit_financial_system(c)?;
    let start = sys.index_of(&junction_id(0)).expect("junction v0 exists");
    let values = propagate_pinned::<QuadraticSurd>(&sys, &[(start, rate)])?;
    Ok((sys, RecoveryVector::surd(values)?))
}
