//! A small builder for networks assembled from gadget templates.

use crate::error::Result;
use crate::model::{Bank, Contract, FinancialSystem};
use crate::numeric::Rational;
use num_traits::One;

/// A contract between local bank indices of a [`Network`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalContract {
    /// Paying bank.
    pub debtor: usize,
    /// Receiving bank.
    pub creditor: usize,
    /// Reference bank of a CDS.
    pub reference: Option<usize>,
    /// Face value.
    pub notional: Rational,
}

/// Banks (by local name) and contracts between them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Network {
    /// Local bank names and external assets.
    pub banks: Vec<(String, Rational)>,
    /// Contracts.
    pub contracts: Vec<LocalContract>,
}

impl Network {
    /// Empty network.
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a bank and returns its local index.
    pub fn bank(&mut self, name: impl Into<String>, external_assets: Rational) -> usize {
        self.banks.push((name.into(), external_assets));
        self.banks.len() - 1
    }

    /// Adds a debt contract.
    pub fn debt(&mut self, debtor: usize, creditor: usize, notional: Rational) {
        self.contracts.push(LocalContract {
            debtor,
            creditor,
            reference: None,
            notional,
        });
    }

    /// Adds a unit-notional debt contract.
    pub fn unit_debt(&mut self, debtor: usize, creditor: usize) {
        self.debt(debtor, creditor, Rational::one());
    }

    /// Adds a CDS.
    pub fn cds(&mut self, debtor: usize, creditor: usize, reference: usize, notional: Rational) {
        self.contracts.push(LocalContract {
            debtor,
            creditor,
            reference: Some(reference),
            notional,
        });
    }

    /// Copies `other` into this network with bank names prefixed by `prefix.` and returns
    /// the index offset of the copied banks.
    pub fn embed(&mut self, other: &Network, prefix: &str) -> usize {
        let offset = self.banks.len();
        for (name, e) in &other.banks {
            let name = if prefix.is_empty() {
                name.clone()
            } else {
                format!("{prefix}.{name}")
            };
            self.banks.push((name, e.clone()));
        }
        for c in &other.contracts {
            self.contracts.push(LocalContract {
                debtor: c.debtor + offset,
                creditor: c.creditor + offset,
                reference: c.reference.map(|r| r + offset),
                notional: c.notional.clone(),
            });
        }
        offset
    }

    /// Number of banks.
    pub fn len(&self) -> usize {
        self.banks.len()
    }

    /// Whether the network has no banks.
    pub fn is_empty(&self) -> bool {
        self.banks.is_empty()
    }

    /// Converts to a validated system; `ids[i]` names local bank `i`.
    pub fn to_system_with_ids(&self, ids: &[String]) -> Result<FinancialSystem> {
        let banks = self
            .banks
            .iter()
            .zip(ids)
            .map(|((_, e), id)| Bank {
                id: id.clone(),
                external_assets: e.clone(),
            })
            .collect();
        let contracts = self
            .contracts
            .iter()
            .map(|c| Contract {
                debtor: c.debtor,
                creditor: c.creditor,
                reference: c.reference,
                notional: c.notional.clone(),
            })
            .collect();
        FinancialSystem::new(banks, contracts)
    }

    /// Converts to a validated system using the local names as ids.
    pub fn to_system(&self) -> Result<FinancialSystem> {
        let ids: Vec<String> = self.banks.iter().map(|(n, _)| n.clone()).collect();
        self.to_system_with_ids(&ids)
    }
}
