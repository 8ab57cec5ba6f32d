//! Forward evaluation of circuits.

use num_traits::{Signed, Zero};

use super::ir::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::numeric::rational::{approx_sqrt, exact_sqrt, round_dyadic, to_f64};
use crate::numeric::Rational;

/// Working precision (bits after the binary point) once a value has left exact rational
/// arithmetic through an irrational square root.
pub const SQRT_PRECISION_BITS: u64 = 256;

/// Value of one gate: an exact rational or a dyadic approximation accurate to roughly
/// `2^-SQRT_PRECISION_BITS` (relative to the magnitudes involved).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signal {
    /// Value (exact when `exact` is set).
    pub value: Rational,
    /// Whether the value is exact.
    pub exact: bool,
}

impl Signal {
    fn exact(value: Rational) -> Self {
        Self { value, exact: true }
    }

    fn combine(value: Rational, exact: bool) -> Self {
        if exact {
            Self::exact(value)
        } else {
            Self {
                value: round_dyadic(&value, SQRT_PRECISION_BITS),
                exact: false,
            }
        }
    }

    /// Floating approximation.
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.value)
    }
}

fn check_arity(c: &Circuit, x_len: usize) -> Result<()> {
    if x_len != c.n_inputs() {
        return Err(Error::InvalidVector(format!(
            "circuit has {} inputs, got {x_len} values",
            c.n_inputs()
        )));
    }
    Ok(())
}

/// Values of every gate (in gate order) at input `x`, in exact rational arithmetic except
/// after irrational square roots.
pub fn eval_gates(c: &Circuit, x: &[Rational]) -> Result<Vec<Signal>> {
    check_arity(c, x.len())?;
    let mut v: Vec<Signal> = Vec::with_capacity(c.len());
    for g in c.gates() {
        let op = |k: usize| &v[g.operands[k]];
        let s = match &g.kind {
            GateKind::Input(i) => Signal::exact(x[*i].clone()),
            GateKind::Const(q) => Signal::exact(q.clone()),
            GateKind::Add => {
                let (a, b) = (op(0), op(1));
                Signal::combine(&a.value + &b.value, a.exact && b.exact)
            }
            GateKind::Sub => {
                let (a, b) = (op(0), op(1));
                Signal::combine(&a.value - &b.value, a.exact && b.exact)
            }
            GateKind::Mul => {
                let (a, b) = (op(0), op(1));
                Signal::combine(&a.value * &b.value, a.exact && b.exact)
            }
            GateKind::Max => {
                let (a, b) = (op(0), op(1));
                Signal {
                    value: a.value.clone().max(b.value.clone()),
                    exact: a.exact && b.exact,
                }
            }
            GateKind::Min => {
                let (a, b) = (op(0), op(1));
                Signal {
                    value: a.value.clone().min(b.value.clone()),
                    exact: a.exact && b.exact,
                }
            }
            GateKind::AbsDiff => {
                let (a, b) = (op(0), op(1));
                Signal::combine((&a.value - &b.value).abs(), a.exact && b.exact)
            }
            GateKind::ScaleConst(q) => {
                let a = op(0);
                Signal::combine(&a.value * q, a.exact)
            }
            GateKind::Sqrt => {
                let a = op(0);
                if a.value.is_negative() {
                    return Err(Error::NegativeSqrtOperand(g.id.clone()));
                }
                match exact_sqrt(&a.value) {
                    Some(s) if a.exact => Signal::exact(s),
                    _ => Signal {
                        value: approx_sqrt(&a.value, SQRT_PRECISION_BITS),
                        exact: false,
                    },
                }
            }
        };
        v.push(s);
    }
    Ok(v)
}

/// Output values at input `x` (see [`eval_gates`] for precision).
pub fn eval_circuit(c: &Circuit, x: &[Rational]) -> Result<Vec<Rational>> {
    let v = eval_gates(c, x)?;
    Ok(c.outputs().iter().map(|&o| v[o].value.clone()).collect())
}

/// Whether evaluation at `x` stays in exact rational arithmetic.
pub fn eval_is_exact(c: &Circuit, x: &[Rational]) -> Result<bool> {
    let v = eval_gates(c, x)?;
    Ok(c.outputs().iter().all(|&o| v[o].exact))
}

/// Values of every gate in `f64`. Square roots of operands that are negative only by
/// rounding (above `-1e-12`) are treated as zero.
pub fn eval_gates_f64(c: &Circuit, x: &[f64]) -> Result<Vec<f64>> {
    check_arity(c, x.len())?;
    let mut v: Vec<f64> = Vec::with_capacity(c.len());
    for g in c.gates() {
        let op = |k: usize| v[g.operands[k]];
        let s = match &g.kind {
            GateKind::Input(i) => x[*i],
            GateKind::Const(q) => to_f64(q),
            GateKind::Add => op(0) + op(1),
            GateKind::Sub => op(0) - op(1),
            GateKind::Mul => op(0) * op(1),
            GateKind::Max => op(0).max(op(1)),
            GateKind::Min => op(0).min(op(1)),
            GateKind::AbsDiff => (op(0) - op(1)).abs(),
            GateKind::ScaleConst(q) => op(0) * to_f64(q),
            GateKind::Sqrt => {
                let a = op(0);
                if a < -1e-12 {
                    return Err(Error::NegativeSqrtOperand(g.id.clone()));
                }
                a.max(0.0).sqrt()
            }
        };
        v.push(s);
    }
    Ok(v)
}

/// Output values in `f64`.
pub fn eval_circuit_f64(c: &Circuit, x: &[f64]) -> Result<Vec<f64>> {
    let v = eval_gates_f64(c, x)?;
    Ok(c.outputs().iter().map(|&o| v[o]).collect())
}

/// Largest output coordinate of `|eval(a, x) − eval(b, x)|` (exact rational difference
/// of the possibly approximate values).
pub fn output_distance(a: &Circuit, b: &Circuit, x: &[Rational]) -> Result<Rational> {
    let va = eval_circuit(a, x)?;
    let vb = eval_circuit(b, x)?;
    if va.len() != vb.len() {
        return Err(Error::InvalidCircuit(
            "circuits have different output counts".into(),
        ));
    }
    Ok(va
        .iter()
        .zip(&vb)
        .fold(Rational::zero(), |m, (p, q)| m.max((p - q).abs())))
}
