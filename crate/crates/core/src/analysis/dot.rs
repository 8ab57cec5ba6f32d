//! Graphviz DOT export.

use std::fmt::Write;

use super::graph::build_auxiliary_graph;
use crate::model::FinancialSystem;
use crate::numeric::format_rational;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders the system as a DOT digraph: blue debt arcs, orange CDS arcs routed through a
/// small junction point that receives a dashed gray link from the reference bank, red
/// auxiliary arcs reference → debtor, and external assets as node labels. Output order is
/// deterministic (bank index order, then contract order).
pub fn export_dot(sys: &FinancialSystem) -> String {
    let mut out = String::new();
    out.push_str("digraph financial_system {\n");
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    for b in sys.banks() {
        // Quote the id alone so that the `\n` line break survives escaping.
        let id = quote(&b.id);
        let label = format!(
            "{}\\ne={}\"",
            &id[..id.len() - 1],
            format_rational(&b.external_assets)
        );
        let _ = writeln!(out, "  {id} [label={label}];");
    }
    for (k, c) in sys.contracts().iter().enumerate() {
        let from = quote(sys.id(c.debtor));
        let to = quote(sys.id(c.creditor));
        let label = quote(&format_rational(&c.notional));
        match c.reference {
            None => {
                let _ = writeln!(out, "  {from} -> {to} [color=blue, label={label}];");
            }
            Some(r) => {
                let junction = quote(&format!("cds{k}"));
                let _ = writeln!(out, "  {junction} [shape=point, width=0.05];");
                let _ = writeln!(
                    out,
                    "  {from} -> {junction} [color=orange, arrowhead=none, label={label}];"
                );
                let _ = writeln!(out, "  {junction} -> {to} [color=orange];");
                let _ = writeln!(
                    out,
                    "  {} -> {junction} [style=dashed, color=gray, arrowhead=none];",
                    quote(sys.id(r))
                );
            }
        }
    }
    let aux = build_auxiliary_graph(sys);
    for &(u, v) in aux.red() {
        let _ = writeln!(
            out,
            "  {} -> {} [color=red, constraint=false];",
            quote(sys.id(u)),
            quote(sys.id(v))
        );
    }
    out.push_str("}\n");
    out
}
