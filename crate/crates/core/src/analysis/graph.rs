//! Contract graph and tricolored auxiliary graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::FinancialSystem;
use crate::numeric::Rational;

/// Arc color in the auxiliary graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcColor {
    /// Debt contract debtor → creditor.
    Blue,
    /// CDS debtor → creditor.
    Orange,
    /// Reference bank → CDS debtor.
    Red,
}

impl fmt::Display for ArcColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArcColor::Blue => "blue",
            ArcColor::Orange => "orange",
            ArcColor::Red => "red",
        })
    }
}

/// A contract viewed as an arc of the contract graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractArc {
    /// Debtor index.
    pub from: usize,
    /// Creditor index.
    pub to: usize,
    /// Reference bank (CDS only).
    pub reference: Option<usize>,
    /// Notional.
    pub notional: Rational,
}

/// Multigraph with one blue arc per debt and one orange arc per CDS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractGraph {
    /// Vertex ids in index order.
    pub ids: Vec<String>,
    /// Arcs in contract order.
    pub arcs: Vec<ContractArc>,
}

impl ContractGraph {
    /// Blue arcs (debts).
    pub fn blue(&self) -> impl Iterator<Item = &ContractArc> {
        self.arcs.iter().filter(|a| a.reference.is_none())
    }

    /// Orange arcs (CDSes).
    pub fn orange(&self) -> impl Iterator<Item = &ContractArc> {
        self.arcs.iter().filter(|a| a.reference.is_some())
    }
}

/// Builds the contract graph of a normalized system.
pub fn build_contract_graph(sys: &FinancialSystem) -> ContractGraph {
    ContractGraph {
        ids: sys.ids(),
        arcs: sys
            .contracts()
            .iter()
            .map(|c| ContractArc {
                from: c.debtor,
                to: c.creditor,
                reference: c.reference,
                notional: c.notional.clone(),
            })
            .collect(),
    }
}

/// Tricolored simple digraph: blue and orange arcs of the contract graph collapsed to at
/// most one arc per color and ordered pair, plus one red arc reference → debtor for every
/// (debtor, reference) pair of some CDS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxiliaryGraph {
    ids: Vec<String>,
    blue: BTreeSet<(usize, usize)>,
    orange: BTreeSet<(usize, usize)>,
    red: BTreeSet<(usize, usize)>,
    orange_refs: BTreeMap<(usize, usize), BTreeSet<usize>>,
    out: Vec<Vec<(usize, ArcColor)>>,
    red_in: Vec<usize>,
}

impl AuxiliaryGraph {
    /// Builds a graph directly from arc sets (used by tests and generators).
    ///
    /// `orange_refs` lists the reference banks of the CDSes behind each orange arc.
    pub fn from_arcs(
        ids: Vec<String>,
        blue: impl IntoIterator<Item = (usize, usize)>,
        orange_refs: impl IntoIterator<Item = ((usize, usize), usize)>,
        red: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let n = ids.len();
        let blue: BTreeSet<_> = blue.into_iter().collect();
        let mut refs: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
        for (arc, r) in orange_refs {
            refs.entry(arc).or_default().insert(r);
        }
        let orange: BTreeSet<_> = refs.keys().copied().collect();
        let red: BTreeSet<_> = red.into_iter().collect();
        let mut out = vec![Vec::new(); n];
        let mut red_in = vec![0; n];
        for &(u, v) in &blue {
            out[u].push((v, ArcColor::Blue));
        }
        for &(u, v) in &orange {
            out[u].push((v, ArcColor::Orange));
        }
        for &(u, v) in &red {
            out[u].push((v, ArcColor::Red));
            red_in[v] += 1;
        }
        for list in &mut out {
            list.sort_unstable();
        }
        Self {
            ids,
            blue,
            orange,
            red,
            orange_refs: refs,
            out,
            red_in,
        }
    }

    /// Vertex ids.
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    /// Whether there are no vertices.
    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Blue arcs.
    pub fn blue(&self) -> &BTreeSet<(usize, usize)> {
        &self.blue
    }

    /// Orange arcs.
    pub fn orange(&self) -> &BTreeSet<(usize, usize)> {
        &self.orange
    }

    /// Red arcs.
    pub fn red(&self) -> &BTreeSet<(usize, usize)> {
        &self.red
    }

    /// Reference banks of the CDSes behind the orange arc `(u, v)`.
    pub fn orange_references(&self, u: usize, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.orange_refs.get(&(u, v)).into_iter().flatten().copied()
    }

    /// Outgoing arcs of `u`, sorted by (target, color).
    pub fn out_arcs(&self, u: usize) -> &[(usize, ArcColor)] {
        &self.out[u]
    }

    /// Whether the arc `(u, v)` of the given color exists.
    pub fn has_arc(&self, u: usize, v: usize, color: ArcColor) -> bool {
        match color {
            ArcColor::Blue => self.blue.contains(&(u, v)),
            ArcColor::Orange => self.orange.contains(&(u, v)),
            ArcColor::Red => self.red.contains(&(u, v)),
        }
    }

    /// Number of incoming red arcs.
    pub fn red_in_degree(&self, v: usize) -> usize {
        self.red_in[v]
    }

    /// Whether `v` has an outgoing blue arc.
    pub fn has_outgoing_blue(&self, v: usize) -> bool {
        self.out[v].iter().any(|&(_, c)| c == ArcColor::Blue)
    }

    /// Index of a vertex id.
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }
}

/// Builds the auxiliary graph of a normalized system.
pub fn build_auxiliary_graph(sys: &FinancialSystem) -> AuxiliaryGraph {
    let mut blue = Vec::new();
    let mut orange = Vec::new();
    let mut red = Vec::new();
    for c in sys.contracts() {
        match c.reference {
            None => blue.push((c.debtor, c.creditor)),
            Some(r) => {
                orange.push(((c.debtor, c.creditor), r));
                red.push((r, c.debtor));
            }
        }
    }
    AuxiliaryGraph::from_arcs(sys.ids(), blue, orange, red)
}
