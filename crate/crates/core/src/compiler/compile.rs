//! Compilation of normalized circuits into financial systems.

use std::collections::VecDeque;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::gadgets::{instantiate_gadget, GadgetKind};
use super::net::Network;
use crate::circuits::{check_normalized, Circuit, GateKind};
use crate::error::{Error, Result};
use crate::model::{check_nondegenerate, FinancialSystem, RecoveryVector};
use crate::numeric::Rational;
use crate::solvers::{propagate_pinned, FloatSystem};

/// Banks realizing one circuit gate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateBanks {
    /// Gate id.
    pub gate: String,
    /// Gadget kind (`input` for circuit inputs).
    pub kind: String,
    /// Every bank of the gadget instance, including its fan-out duplications and sinks.
    pub banks: Vec<String>,
    /// Input port banks, by operand.
    pub inputs: Vec<String>,
    /// Bank whose clearing rate is the gate's value.
    pub value: String,
}

/// Correspondence between circuit gates and banks of the compiled system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortMap {
    /// Input banks (`1..n`), one per circuit input.
    pub inputs: Vec<String>,
    /// Output banks (`m−n+1..m`), each owing a unit debt to its input bank.
    pub outputs: Vec<String>,
    /// Gate-by-gate bank groups in topological order.
    pub gates: Vec<GateBanks>,
}

fn gadget_for(kind: &GateKind) -> Option<(GadgetKind, usize)> {
    // (gadget, index of the output port carrying the gate value)
    match kind {
        GateKind::Input(_) => None,
        GateKind::Const(q) => Some((GadgetKind::ConstSource(q.clone()), 0)),
        GateKind::Add => Some((GadgetKind::Add(2), 0)),
        GateKind::Mul => Some((GadgetKind::Mul, 0)),
        GateKind::AbsDiff => Some((GadgetKind::AbsDiff, 0)),
        GateKind::Sqrt => Some((GadgetKind::Sqrt, 0)),
        GateKind::ScaleConst(q) if q <= &Rational::one() => {
            Some((GadgetKind::ScaleConst(q.clone()), 1))
        }
        GateKind::ScaleConst(q) => Some((GadgetKind::ScaleRationalGuarded(q.clone()), 0)),
        GateKind::Sub | GateKind::Max | GateKind::Min => None,
    }
}

struct Builder {
    net: Network,
    group: Vec<usize>,
}

impl Builder {
    fn sink(&mut self, port: usize, name: &str) {
        let s = self.net.bank(name, Rational::from_integer(0.into()));
        self.net.unit_debt(port, s);
        self.group.push(s);
    }

    fn place(&mut self, kind: &GadgetKind, prefix: &str) -> Result<(Vec<usize>, Vec<usize>)> {
        let t = instantiate_gadget(kind, false)?;
        let offset = self.net.embed(&t.network, prefix);
        self.group.extend(offset..offset + t.network.len());
        Ok((
            t.inputs.iter().map(|i| i + offset).collect(),
            t.outputs.iter().map(|o| o + offset).collect(),
        ))
    }

    /// `uses` copies of the rate at `port` (a sink when unused).
    fn fan_out(&mut self, port: usize, uses: usize, gate: &str) -> Result<VecDeque<usize>> {
        let mut ports = VecDeque::from(vec![port]);
        if uses == 0 {
            self.sink(port, &format!("{gate}.unused"));
            return Ok(VecDeque::new());
        }
        let mut k = 0;
        while ports.len() < uses {
            k += 1;
            let src = ports.pop_front().expect("non-empty");
            let (ins, outs) = self.place(&GadgetKind::Dup, &format!("{gate}.fan{k}"))?;
            self.net.unit_debt(src, ins[0]);
            ports.extend(outs);
        }
        Ok(ports)
    }
}

/// Compiles a normalized circuit: one gadget instance per gate (numbered in gate order,
/// then template order), unit-debt wires along circuit arcs, duplication trees for
/// fan-out, and for each output a bank owing a unit debt to the matching input bank.
/// Input banks are `1..n` and output banks the last `n` ids. Clearing vectors restricted
/// to the input banks are exactly the fixed points of the circuit.
pub fn compile_circuit(c: &Circuit) -> Result<(FinancialSystem, PortMap)> {
    check_normalized(c)?;
    if c.outputs().len() != c.n_inputs() {
        return Err(Error::NotNormalized(format!(
            "a self-map needs as many outputs as inputs ({} vs {})",
            c.outputs().len(),
            c.n_inputs()
        )));
    }
    let mut uses = vec![0usize; c.len()];
    for g in c.gates() {
        for &o in &g.operands {
            uses[o] += 1;
        }
    }
    for &o in c.outputs() {
        uses[o] += 1;
    }
    let mut b = Builder {
        net: Network::new(),
        group: Vec::new(),
    };
    let input_banks: Vec<usize> = (0..c.n_inputs())
        .map(|i| {
            b.net
                .bank(format!("input{}", i + 1), Rational::from_integer(0.into()))
        })
        .collect();
    let mut ports: Vec<VecDeque<usize>> = Vec::with_capacity(c.len());
    let mut groups: Vec<GateBanks> = Vec::with_capacity(c.len());
    let mut group_banks: Vec<(Vec<usize>, Vec<usize>, usize)> = Vec::with_capacity(c.len());
    for (k, g) in c.gates().iter().enumerate() {
        b.group.clear();
        let (input_ports, value) = match &g.kind {
            GateKind::Input(i) => {
                b.group.push(input_banks[*i]);
                (vec![], input_banks[*i])
            }
            kind => {
                let (gadget, value_index) = gadget_for(kind).ok_or_else(|| {
                    Error::NotNormalized(format!(
                        "gate `{}` ({}) cannot be compiled",
                        g.id,
                        kind.name()
                    ))
                })?;
                let (ins, outs) = b.place(&gadget, &format!("{}.{}", g.id, g.kind.name()))?;
                for (j, &o) in g.operands.iter().enumerate() {
                    let src = ports[o].pop_front().ok_or_else(|| {
                        Error::DegenerateOutput(format!(
                            "gate `{}` ran out of fan-out ports",
                            c.gates()[o].id
                        ))
                    })?;
                    b.net.unit_debt(src, ins[j]);
                }
                for (j, &o) in outs.iter().enumerate() {
                    if j != value_index {
                        b.sink(o, &format!("{}.spare{j}", g.id));
                    }
                }
                (ins, outs[value_index])
            }
        };
        let fanned = b.fan_out(value, uses[k], &g.id)?;
        ports.push(fanned);
        group_banks.push((b.group.clone(), input_ports, value));
        groups.push(GateBanks {
            gate: g.id.clone(),
            kind: match gadget_for(&g.kind) {
                Some((gk, _)) => gk.to_string(),
                None => "input".to_string(),
            },
            banks: vec![],
            inputs: vec![],
            value: String::new(),
        });
    }
    let mut output_banks = Vec::new();
    for (k, &o) in c.outputs().iter().enumerate() {
        let y = b
            .net
            .bank(format!("output{}", k + 1), Rational::from_integer(0.into()));
        let src = ports[o]
            .pop_front()
            .ok_or_else(|| Error::DegenerateOutput(format!("output {k} has no free port")))?;
        b.net.unit_debt(src, y);
        b.net.unit_debt(y, input_banks[k]);
        output_banks.push(y);
    }
    if let Some((k, _)) = ports.iter().enumerate().find(|(_, p)| !p.is_empty()) {
        return Err(Error::DegenerateOutput(format!(
            "gate `{}` has unwired ports",
            c.gates()[k].id
        )));
    }
    let ids: Vec<String> = (1..=b.net.len()).map(|i| i.to_string()).collect();
    let sys = b.net.to_system_with_ids(&ids)?;
    let report = check_nondegenerate(&sys);
    if !report.ok {
        let v: Vec<String> = report
            .violations
            .iter()
            .map(|(id, why)| format!("{id}: {why:?}"))
            .collect();
        return Err(Error::DegenerateOutput(v.join("; ")));
    }
    let name = |i: usize| ids[i].clone();
    for (g, (banks, ins, value)) in groups.iter_mut().zip(group_banks) {
        g.banks = banks.into_iter().map(name).collect();
        g.inputs = ins.into_iter().map(name).collect();
        g.value = name(value);
    }
    let map = PortMap {
        inputs: input_banks.into_iter().map(name).collect(),
        outputs: output_banks.into_iter().map(name).collect(),
        gates: groups,
    };
    Ok((sys, map))
}

/// Recovery vector of a compiled system with the input banks planted at `x`: gadget
/// semantics are propagated forward in floating point (topologically where possible,
/// otherwise by iterating the remaining banks with the inputs held fixed).
pub fn plant_inputs(sys: &FinancialSystem, map: &PortMap, x: &[f64]) -> Result<RecoveryVector> {
    if x.len() != map.inputs.len() {
        return Err(Error::InvalidVector(format!(
            "expected {} input rates, got {}",
            map.inputs.len(),
            x.len()
        )));
    }
    let pins: Vec<(usize, f64)> = map
        .inputs
        .iter()
        .zip(x)
        .map(|(id, &v)| Ok((sys.index_of(id)?, v)))
        .collect::<Result<_>>()?;
    match propagate_pinned::<f64>(sys, &pins) {
        Ok(r) => RecoveryVector::float(r),
        Err(Error::NotAcyclic) => {
            let fs = FloatSystem::new(sys);
            let n = sys.len();
            let mut r = vec![1.0; n];
            for &(i, v) in &pins {
                r[i] = v;
            }
            let (mut liab, mut next) = (vec![0.0; n], vec![0.0; n]);
            for _ in 0..1_000_000 {
                fs.map_into(&r, &mut liab, &mut next);
                for &(i, v) in &pins {
                    next[i] = v;
                }
                let change = r
                    .iter()
                    .zip(&next)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                std::mem::swap(&mut r, &mut next);
                if change < 1e-15 {
                    break;
                }
            }
            RecoveryVector::float(r)
        }
        Err(e) => Err(e),
    }
}
