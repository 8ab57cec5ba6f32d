//! Structural analysis: contract and auxiliary graphs, switch classes, switched cycles,
//! SCC condensation, the dedicated-CDS-debtor check and DOT export.

pub mod cycles;
pub mod dedicated;
pub mod dot;
pub mod graph;
pub mod scc;
pub mod switch;

pub use cycles::{
    check_simple_strongly_switched, find_simple_strongly_switched_cycle,
    find_strongly_switched_cycle, find_weakly_switched_cycle, CycleArc, CycleFlags, CycleWitness,
    SimpleSearch, DEFAULT_CYCLE_CAP,
};
pub use dedicated::{check_dedicated_cds_debtor, DedicatedReport};
pub use dot::export_dot;
pub use graph::{
    build_auxiliary_graph, build_contract_graph, ArcColor, AuxiliaryGraph, ContractArc,
    ContractGraph,
};
pub use scc::{is_acyclic, scc_condensation, topological_order, Condensation};
pub use switch::{classify_switch, switch_class_of, switch_classes, SwitchClass};
