//! Switched-node classification.

use std::fmt;

use super::graph::AuxiliaryGraph;
use crate::error::{Error, Result};

/// Switch class of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SwitchClass {
    /// At least two incoming red arcs, or one incoming red arc and an outgoing blue arc.
    On,
    /// Exactly one incoming red arc and no outgoing blue arc.
    Off,
    /// No incoming red arc.
    Neither,
}

impl fmt::Display for SwitchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SwitchClass::On => "on",
            SwitchClass::Off => "off",
            SwitchClass::Neither => "neither",
        })
    }
}

/// Classifies the node at index `v`.
pub fn switch_class_of(aux: &AuxiliaryGraph, v: usize) -> SwitchClass {
    match aux.red_in_degree(v) {
        0 => SwitchClass::Neither,
        1 if !aux.has_outgoing_blue(v) => SwitchClass::Off,
        _ => SwitchClass::On,
    }
}

/// Classifies the node with id `v`.
pub fn classify_switch(aux: &AuxiliaryGraph, v: &str) -> Result<SwitchClass> {
    let i = aux
        .index_of(v)
        .ok_or_else(|| Error::UnknownBank(v.to_string()))?;
    Ok(switch_class_of(aux, i))
}

/// Switch classes of all nodes in index order.
pub fn switch_classes(aux: &AuxiliaryGraph) -> Vec<SwitchClass> {
    (0..aux.len()).map(|v| switch_class_of(aux, v)).collect()
}
