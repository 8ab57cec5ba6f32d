//! Circuit representation and construction.

use std::collections::HashSet;
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::numeric::{format_rational, Rational};

/// Gate kinds. Operands refer to earlier gates by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// The `i`-th circuit input.
    Input(usize),
    /// A rational constant.
    Const(Rational),
    /// `a + b`.
    Add,
    /// `a − b`.
    Sub,
    /// `a · b`.
    Mul,
    /// `max{a, b}`.
    Max,
    /// `min{a, b}`.
    Min,
    /// `|a − b|`.
    AbsDiff,
    /// `√a`.
    Sqrt,
    /// Multiplication by a non-negative rational constant. Factors in `[0,1]` are plain
    /// scalings; larger factors (such as the doubling inside square-root chains) are
    /// realized by the compiler through duplicate-and-add.
    ScaleConst(Rational),
}

impl GateKind {
    /// Number of operands.
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Input(_) | GateKind::Const(_) => 0,
            GateKind::Sqrt | GateKind::ScaleConst(_) => 1,
            _ => 2,
        }
    }

    /// Lower-case name used in files and messages.
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Input(_) => "input",
            GateKind::Const(_) => "const",
            GateKind::Add => "add",
            GateKind::Sub => "sub",
            GateKind::Mul => "mul",
            GateKind::Max => "max",
            GateKind::Min => "min",
            GateKind::AbsDiff => "absdiff",
            GateKind::Sqrt => "sqrt",
            GateKind::ScaleConst(_) => "scale",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Input(i) => write!(f, "input[{i}]"),
            GateKind::Const(q) => write!(f, "const({})", format_rational(q)),
            GateKind::ScaleConst(q) => write!(f, "scale({})", format_rational(q)),
            other => f.write_str(other.name()),
        }
    }
}

/// A gate with a unique string id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    /// Unique identifier.
    pub id: String,
    /// Operation.
    pub kind: GateKind,
    /// Operand gate indices (all smaller than this gate's index).
    pub operands: Vec<usize>,
}

/// Acyclic arithmetic circuit with gates in topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    outputs: Vec<usize>,
    inputs: Vec<usize>,
}

impl Circuit {
    /// Validates gates (topological operands, arities, unique ids, inputs numbered
    /// `0..n` exactly once) and outputs.
    pub fn new(gates: Vec<Gate>, outputs: Vec<usize>) -> Result<Self> {
        let mut ids = HashSet::new();
        let mut inputs: Vec<Option<usize>> = Vec::new();
        for (k, g) in gates.iter().enumerate() {
            if !ids.insert(g.id.as_str()) {
                return Err(Error::InvalidCircuit(format!(
                    "duplicate gate id `{}`",
                    g.id
                )));
            }
            if g.operands.len() != g.kind.arity() {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{}` ({}) expects {} operands, got {}",
                    g.id,
                    g.kind.name(),
                    g.kind.arity(),
                    g.operands.len()
                )));
            }
            if let Some(&bad) = g.operands.iter().find(|&&o| o >= k) {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{}` uses operand {bad} that is not earlier in topological order",
                    g.id
                )));
            }
            match &g.kind {
                GateKind::Input(i) => {
                    if inputs.len() <= *i {
                        inputs.resize(i + 1, None);
                    }
                    if inputs[*i].replace(k).is_some() {
                        return Err(Error::InvalidCircuit(format!("input {i} defined twice")));
                    }
                }
                GateKind::ScaleConst(q) if q.is_negative() => {
                    return Err(Error::InvalidCircuit(format!(
                        "gate `{}` has a negative scale",
                        g.id
                    )));
                }
                _ => {}
            }
        }
        let inputs: Vec<usize> = inputs
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::InvalidCircuit(format!("input {i} missing"))))
            .collect::<Result<_>>()?;
        if let Some(&bad) = outputs.iter().find(|&&o| o >= gates.len()) {
            return Err(Error::InvalidCircuit(format!(
                "output refers to missing gate {bad}"
            )));
        }
        Ok(Self {
            gates,
            outputs,
            inputs,
        })
    }

    /// Gates in topological order.
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Output gate indices.
    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Input gate indices, by input number.
    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    /// Number of inputs.
    pub fn n_inputs(&self) -> usize {
        self.inputs.len()
    }

    /// Number of gates.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    /// Whether the circuit has no gates.
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Index of a gate id.
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.gates.iter().position(|g| g.id == id)
    }

    /// Number of gates of each kind name, sorted by name.
    pub fn kind_counts(&self) -> Vec<(&'static str, usize)> {
        let mut counts: std::collections::BTreeMap<&'static str, usize> = Default::default();
        for g in &self.gates {
            *counts.entry(g.kind.name()).or_default() += 1;
        }
        counts.into_iter().collect()
    }
}

/// Incremental circuit builder; gates get ids `prefix + counter` unless named.
#[derive(Clone, Debug, Default)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    outputs: Vec<usize>,
    ids: HashSet<String>,
    n_inputs: usize,
}

impl CircuitBuilder {
    /// Empty builder.
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh_id(&mut self, hint: &str) -> String {
        let base = if hint.is_empty() {
            format!("g{}", self.gates.len())
        } else {
            hint.to_string()
        };
        let mut id = base.clone();
        let mut k = 1;
        while self.ids.contains(&id) {
            id = format!("{base}~{k}");
            k += 1;
        }
        id
    }

    /// Adds a gate with an id derived from `hint` (made unique if needed).
    pub fn push_named(&mut self, hint: &str, kind: GateKind, operands: Vec<usize>) -> usize {
        let id = self.fresh_id(hint);
        self.ids.insert(id.clone());
        if let GateKind::Input(i) = kind {
            self.n_inputs = self.n_inputs.max(i + 1);
        }
        self.gates.push(Gate { id, kind, operands });
        self.gates.len() - 1
    }

    /// Adds a gate with an automatic id.
    pub fn push(&mut self, kind: GateKind, operands: Vec<usize>) -> usize {
        self.push_named("", kind, operands)
    }

    /// Adds the next input gate.
    pub fn input(&mut self) -> usize {
        let i = self.n_inputs;
        self.push_named(&format!("x{i}"), GateKind::Input(i), vec![])
    }

    /// Constant gate.
    pub fn constant(&mut self, q: Rational) -> usize {
        self.push(GateKind::Const(q), vec![])
    }

    /// `a + b`.
    pub fn add(&mut self, a: usize, b: usize) -> usize {
        self.push(GateKind::Add, vec![a, b])
    }

    /// `a − b`.
    pub fn sub(&mut self, a: usize, b: usize) -> usize {
        self.push(GateKind::Sub, vec![a, b])
    }

    /// `a · b`.
    pub fn mul(&mut self, a: usize, b: usize) -> usize {
        self.push(GateKind::Mul, vec![a, b])
    }

    /// `max{a, b}`.
    pub fn max(&mut self, a: usize, b: usize) -> usize {
        self.push(GateKind::Max, vec![a, b])
    }

    /// `min{a, b}`.
    pub fn min(&mut self, a: usize, b: usize) -> usize {
        self.push(GateKind::Min, vec![a, b])
    }

    /// `|a − b|`.
    pub fn abs_diff(&mut self, a: usize, b: usize) -> usize {
        self.push(GateKind::AbsDiff, vec![a, b])
    }

    /// `√a`.
    pub fn sqrt(&mut self, a: usize) -> usize {
        self.push(GateKind::Sqrt, vec![a])
    }

    /// `q · a`.
    pub fn scale(&mut self, q: Rational, a: usize) -> usize {
        self.push(GateKind::ScaleConst(q), vec![a])
    }

    /// Marks a gate as the next output.
    pub fn output(&mut self, g: usize) {
        self.outputs.push(g);
    }

    /// Access to a gate being built.
    pub fn gate(&self, g: usize) -> &Gate {
        &self.gates[g]
    }

    /// Validates and returns the circuit.
    pub fn build(self) -> Result<Circuit> {
        Circuit::new(self.gates, self.outputs)
    }
}
