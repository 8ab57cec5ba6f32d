//! JSON file formats: instances, recovery vectors, circuits and port maps.
//!
//! Exact rationals are written as `"p/q"` strings (integers as `"p"`); on input, strings
//! in `p/q`, integer or decimal notation and JSON integers are accepted and parsed
//! exactly. Errors carry the line and column of the offending value.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::circuits::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::model::{Bank, Contract, FinancialSystem, RecoveryVector, Values};
use crate::numeric::{format_rational, parse_rational, Rational};

/// Serde adapter for exact rationals.
pub mod rational_string {
    use super::*;

    /// Writes `"p/q"`.
    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    struct RationalVisitor;

    impl<'de> Visitor<'de> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("a rational as a \"p/q\" or decimal string, or an integer")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
            parse_rational(v).map_err(E::custom)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
            Ok(Rational::from_integer(v.into()))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
            Ok(Rational::from_integer(v.into()))
        }
    }

    /// Reads a string or integer.
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }
}

/// Serde adapter for optional rationals.
pub mod optional_rational_string {
    use super::*;

    /// Writes `"p/q"` or nothing.
    pub fn serialize<S: Serializer>(
        q: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    struct Wrapped(#[serde(with = "super::rational_string")] Rational);

    /// Reads an optional string or integer.
    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        Ok(Option::<Wrapped>::deserialize(d)?.map(|w| w.0))
    }
}

/// One bank record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BankRecord {
    /// Bank identifier.
    pub id: String,
    /// External assets.
    #[serde(with = "rational_string")]
    pub external_assets: Rational,
}

/// One contract record; `reference` is present for CDSes only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractRecord {
    /// Paying bank.
    pub debtor: String,
    /// Receiving bank.
    pub creditor: String,
    /// Reference bank of a CDS.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    /// Face value.
    #[serde(with = "rational_string")]
    pub notional: Rational,
}

/// Instance file contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    /// Banks in index order.
    pub banks: Vec<BankRecord>,
    /// Contracts.
    #[serde(default)]
    pub contracts: Vec<ContractRecord>,
}

impl InstanceDocument {
    /// Parses JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance documents always serialize")
    }

    /// Document describing `sys`.
    pub fn from_system(sys: &FinancialSystem) -> Self {
        let banks = sys
            .banks()
            .iter()
            .map(|b| BankRecord {
                id: b.id.clone(),
                external_assets: b.external_assets.clone(),
            })
            .collect();
        let contracts = sys
            .contracts()
            .iter()
            .map(|c| ContractRecord {
                debtor: sys.id(c.debtor).to_string(),
                creditor: sys.id(c.creditor).to_string(),
                reference: c.reference.map(|r| sys.id(r).to_string()),
                notional: c.notional.clone(),
            })
            .collect();
        Self { banks, contracts }
    }

    /// Validated system (bank order preserved, contracts as listed).
    pub fn to_system(&self) -> Result<FinancialSystem> {
        let banks: Vec<Bank> = self
            .banks
            .iter()
            .map(|b| Bank {
                id: b.id.clone(),
                external_assets: b.external_assets.clone(),
            })
            .collect();
        let position: BTreeMap<&str, usize> = self
            .banks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.id.as_str(), i))
            .collect();
        let lookup = |id: &str| {
            position
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownBank(id.to_string()))
        };
        let contracts = self
            .contracts
            .iter()
            .map(|c| {
                Ok(Contract {
                    debtor: lookup(&c.debtor)?,
                    creditor: lookup(&c.creditor)?,
                    reference: c.reference.as_deref().map(lookup).transpose()?,
                    notional: c.notional.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FinancialSystem::new(banks, contracts)
    }
}

/// Parses an instance from JSON text.
pub fn parse_instance(text: &str) -> Result<FinancialSystem> {
    InstanceDocument::from_json(text)?.to_system()
}

/// Serializes an instance to pretty JSON.
pub fn instance_to_json(sys: &FinancialSystem) -> String {
    InstanceDocument::from_system(sys).to_json()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Reads an instance file.
pub fn read_instance(path: &Path) -> Result<FinancialSystem> {
    parse_instance(&read(path)?).map_err(|e| prefix(path, e))
}

/// Writes an instance file.
pub fn write_instance(path: &Path, sys: &FinancialSystem) -> Result<()> {
    write(path, &instance_to_json(sys))
}

fn prefix(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    }
}

/// Parses a recovery vector given as a JSON object mapping every bank id to a rate
/// string (exact `p/q` or decimal) or integer.
pub fn parse_vector(text: &str, sys: &FinancialSystem) -> Result<RecoveryVector> {
    #[derive(Deserialize)]
    struct Rate(#[serde(with = "rational_string")] Rational);
    let map: BTreeMap<String, Rate> = serde_json::from_str(text)?;
    if let Some(unknown) = map.keys().find(|k| sys.index_of(k).is_err()) {
        return Err(Error::UnknownBank(unknown.clone()));
    }
    let values = sys
        .ids()
        .iter()
        .map(|id| {
            map.get(id)
                .map(|r| r.0.clone())
                .ok_or_else(|| Error::InvalidVector(format!("missing rate for bank `{id}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    RecoveryVector::rational(values)
}

/// Reads a recovery-vector file.
pub fn read_vector(path: &Path, sys: &FinancialSystem) -> Result<RecoveryVector> {
    parse_vector(&read(path)?, sys).map_err(|e| prefix(path, e))
}

/// JSON object mapping bank ids to rates: `"p/q"` strings for rationals, surd
/// expressions for surds and decimal strings for floats.
pub fn vector_to_json(sys: &FinancialSystem, r: &RecoveryVector) -> String {
    let mut map = serde_json::Map::new();
    for (i, id) in sys.ids().into_iter().enumerate() {
        let v = match r.values() {
            Values::Rational(v) => format_rational(&v[i]),
            Values::Surd(v) => v[i].to_string(),
            Values::Float(v) => format!("{}", v[i]),
        };
        map.insert(id, serde_json::Value::String(v));
    }
    serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("string map serializes")
}

/// One gate record of a circuit file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateRecord {
    /// Gate id.
    pub id: String,
    /// Kind name: `input`, `const`, `add`, `sub`, `mul`, `max`, `min`, `absdiff`, `sqrt`
    /// or `scale`.
    pub kind: String,
    /// Operand gate ids.
    #[serde(default)]
    pub operands: Vec<String>,
    /// Value of `const` gates and factor of `scale` gates.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "optional_rational_string"
    )]
    pub constant: Option<Rational>,
}

/// Circuit file contents. Inputs are numbered by their position in `inputs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDocument {
    /// Ids of the input gates, in input order.
    pub inputs: Vec<String>,
    /// Ids of the output gates, in output order.
    pub outputs: Vec<String>,
    /// Gates in topological order.
    pub gates: Vec<GateRecord>,
}

impl CircuitDocument {
    /// Document describing `c`.
    pub fn from_circuit(c: &Circuit) -> Self {
        let id = |k: usize| c.gates()[k].id.clone();
        let gates = c
            .gates()
            .iter()
            .map(|g| GateRecord {
                id: g.id.clone(),
                kind: g.kind.name().to_string(),
                operands: g.operands.iter().map(|&o| id(o)).collect(),
                constant: match &g.kind {
                    GateKind::Const(q) | GateKind::ScaleConst(q) => Some(q.clone()),
                    _ => None,
                },
            })
            .collect();
        Self {
            inputs: c.inputs().iter().map(|&k| id(k)).collect(),
            outputs: c.outputs().iter().map(|&k| id(k)).collect(),
            gates,
        }
    }

    /// Validated circuit.
    pub fn to_circuit(&self) -> Result<Circuit> {
        let mut position: BTreeMap<&str, usize> = BTreeMap::new();
        let input_number: BTreeMap<&str, usize> = self
            .inputs
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect();
        let mut gates = Vec::with_capacity(self.gates.len());
        for (k, g) in self.gates.iter().enumerate() {
            let need_constant = || {
                g.constant.clone().ok_or_else(|| {
                    Error::InvalidCircuit(format!("gate `{}` needs a constant", g.id))
                })
            };
            let kind = match g.kind.as_str() {
                "input" => GateKind::Input(*input_number.get(g.id.as_str()).ok_or_else(|| {
                    Error::InvalidCircuit(format!("input gate `{}` is not listed in inputs", g.id))
                })?),
                "const" => GateKind::Const(need_constant()?),
                "scale" => GateKind::ScaleConst(need_constant()?),
                "add" => GateKind::Add,
                "sub" => GateKind::Sub,
                "mul" => GateKind::Mul,
                "max" => GateKind::Max,
                "min" => GateKind::Min,
                "absdiff" => GateKind::AbsDiff,
                "sqrt" => GateKind::Sqrt,
                other => {
                    return Err(Error::InvalidCircuit(format!(
                        "unknown gate kind `{other}`"
                    )))
                }
            };
            let operands = g
                .operands
                .iter()
                .map(|o| {
                    position.get(o.as_str()).copied().ok_or_else(|| {
                        Error::InvalidCircuit(format!(
                            "gate `{}` uses unknown or later gate `{o}`",
                            g.id
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if position.insert(g.id.as_str(), k).is_some() {
                return Err(Error::InvalidCircuit(format!(
                    "duplicate gate id `{}`",
                    g.id
                )));
            }
            gates.push(Gate {
                id: g.id.clone(),
                kind,
                operands,
            });
        }
        if let Some(missing) = self
            .inputs
            .iter()
            .find(|id| !position.contains_key(id.as_str()))
        {
            return Err(Error::InvalidCircuit(format!(
                "input `{missing}` has no gate"
            )));
        }
        let outputs = self
            .outputs
            .iter()
            .map(|o| {
                position
                    .get(o.as_str())
                    .copied()
                    .ok_or_else(|| Error::InvalidCircuit(format!("unknown output gate `{o}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Circuit::new(gates, outputs)
    }
}

/// Parses a circuit from JSON text.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let doc: CircuitDocument = serde_json::from_str(text)?;
    doc.to_circuit()
}

/// Serializes a circuit to pretty JSON.
pub fn circuit_to_json(c: &Circuit) -> String {
    serde_json::to_string_pretty(&CircuitDocument::from_circuit(c))
        .expect("circuit documents always serialize")
}

/// Reads a circuit file.
pub fn read_circuit(path: &Path) -> Result<Circuit> {
    parse_circuit(&read(path)?).map_err(|e| prefix(path, e))
}

/// Writes any serializable value as pretty JSON.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    write(path, &text)
}

/// Writes text to a file.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write(path, text)
}
