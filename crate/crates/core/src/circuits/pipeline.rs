//! The normalization pipeline.
//!
//! Stages, applied in order by [`normalize_pipeline`]:
//!
//! 1. [`nonnegative_constants`]: a negative constant `−c` becomes `0 − c`.
//! 2. [`eliminate_min_max`]: `max{a,b} = ½((a+b) + |a−b|)`, `min{a,b} = ½((a+b) − |a−b|)`.
//! 3. [`split_signs`]: every signal `s` is carried as `s⁺ − s⁻` with `s⁺, s⁻ ≥ 0`, which
//!    pushes all subtractions to the outputs.
//! 4. [`top_abs_diff`]: the remaining output subtractions become absolute differences.
//! 5. [`scale_constants`]: with `C` the largest constant and `c = 1/C`, inputs and
//!    constants are scaled by `c` and products rescaled by `1/c`.
//! 6. [`range_reduce`] (stages 6 and 7): a sub-circuit squares `1/2` `d` times to obtain
//!    `t′ = 2^-(1+2^d)`, inputs are multiplied by `t′` and constants pre-multiplied, and every
//!    division by `t′` (after products and at the outputs) is realized by the chain of `d`
//!    square roots, a doubling, `d` squarings and another doubling.
//!
//! Copied gates keep their ids, so re-running a stage on its own output is the identity.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::eval::{eval_circuit, eval_gates};
use super::interval::{signal_bound, signal_bound_with_output_range, Interval};
use super::ir::{Circuit, CircuitBuilder, Gate, GateKind};
use crate::error::{Error, Result};
use crate::numeric::{format_rational, rat, Rational};

/// Interval certification accepts signals up to `1 + 2^-CERTIFICATION_SLACK_BITS`, which
/// absorbs the outward rounding of high-precision square roots.
pub const CERTIFICATION_SLACK_BITS: u64 = 100;

/// Copies `g` into `b` under its original id with remapped operands.
fn copy_gate(b: &mut CircuitBuilder, g: &Gate, map: &[usize]) -> usize {
    let ops = g.operands.iter().map(|&o| map[o]).collect();
    b.push_named(&g.id, g.kind.clone(), ops)
}

fn finish(b: CircuitBuilder) -> Result<Circuit> {
    b.build()
}

/// Stage 1: replaces each negative constant `−c` by `Sub(Const 0, Const c)`.
pub fn nonnegative_constants(c: &Circuit) -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    let mut map = Vec::with_capacity(c.len());
    for g in c.gates() {
        let new = match &g.kind {
            GateKind::Const(q) if q.is_negative() => {
                let zero = b.push_named(
                    &format!("{}.zero", g.id),
                    GateKind::Const(Rational::zero()),
                    vec![],
                );
                let mag = b.push_named(&format!("{}.abs", g.id), GateKind::Const(q.abs()), vec![]);
                b.push_named(&g.id, GateKind::Sub, vec![zero, mag])
            }
            _ => copy_gate(&mut b, g, &map),
        };
        map.push(new);
    }
    for &o in c.outputs() {
        b.output(map[o]);
    }
    finish(b)
}

/// Stage 2: rewrites `Max`/`Min` through the absolute-difference identities.
pub fn eliminate_min_max(c: &Circuit) -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    let mut map = Vec::with_capacity(c.len());
    for g in c.gates() {
        let new = match &g.kind {
            GateKind::Max | GateKind::Min => {
                let (x, y) = (map[g.operands[0]], map[g.operands[1]]);
                let sum = b.push_named(&format!("{}.sum", g.id), GateKind::Add, vec![x, y]);
                let gap = b.push_named(&format!("{}.gap", g.id), GateKind::AbsDiff, vec![x, y]);
                let kind = if g.kind == GateKind::Max {
                    GateKind::Add
                } else {
                    GateKind::Sub
                };
                let total = b.push_named(&format!("{}.total", g.id), kind, vec![sum, gap]);
                b.push_named(&g.id, GateKind::ScaleConst(rat(1, 2)), vec![total])
            }
            _ => copy_gate(&mut b, g, &map),
        };
        map.push(new);
    }
    for &o in c.outputs() {
        b.output(map[o]);
    }
    finish(b)
}

/// Positive and negative part of one original gate after sign splitting. A missing
/// negative part is identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPoint {
    /// Original gate index.
    pub gate: usize,
    /// Gate carrying `s⁺` in the split circuit.
    pub positive: usize,
    /// Gate carrying `s⁻`, if not identically zero.
    pub negative: Option<usize>,
}

/// `Σ` of the present terms (`None` when all are absent).
fn sum_opt(b: &mut CircuitBuilder, id: &str, terms: &[Option<usize>]) -> Option<usize> {
    let present: Vec<usize> = terms.iter().flatten().copied().collect();
    let mut it = present.into_iter();
    let first = it.next()?;
    let mut acc = first;
    let mut k = 0;
    for t in it {
        k += 1;
        let name = if k == 1 {
            id.to_string()
        } else {
            format!("{id}.{k}")
        };
        acc = b.push_named(&name, GateKind::Add, vec![acc, t]);
    }
    Some(acc)
}

/// Stage 3 with instrumentation: returns the split circuit and, for every original gate,
/// the gates carrying its positive and negative parts.
pub fn split_signs_instrumented(c: &Circuit) -> Result<(Circuit, Vec<SplitPoint>)> {
    let mut b = CircuitBuilder::new();
    let mut parts: Vec<(usize, Option<usize>)> = Vec::with_capacity(c.len());
    for g in c.gates() {
        let id = &g.id;
        let op = |k: usize| parts[g.operands[k]];
        let part = match &g.kind {
            GateKind::Input(_) => (copy_gate(&mut b, g, &[]), None),
            GateKind::Const(q) => {
                if q.is_negative() {
                    let p = b.push_named(id, GateKind::Const(Rational::zero()), vec![]);
                    let n = b.push_named(&format!("{id}.neg"), GateKind::Const(q.abs()), vec![]);
                    (p, Some(n))
                } else {
                    (copy_gate(&mut b, g, &[]), None)
                }
            }
            GateKind::Add => {
                let ((pa, na), (pb, nb)) = (op(0), op(1));
                let p = b.push_named(id, GateKind::Add, vec![pa, pb]);
                (p, sum_opt(&mut b, &format!("{id}.neg"), &[na, nb]))
            }
            GateKind::Sub => {
                let ((pa, na), (pb, nb)) = (op(0), op(1));
                let p = match nb {
                    Some(nb) => b.push_named(id, GateKind::Add, vec![pa, nb]),
                    None => pa,
                };
                let n = sum_opt(&mut b, &format!("{id}.neg"), &[na, Some(pb)]);
                (p, n)
            }
            GateKind::Mul => {
                let ((pa, na), (pb, nb)) = (op(0), op(1));
                let pp = b.push_named(&format!("{id}.pp"), GateKind::Mul, vec![pa, pb]);
                let p = match (na, nb) {
                    (Some(na), Some(nb)) => {
                        let nn = b.push_named(&format!("{id}.nn"), GateKind::Mul, vec![na, nb]);
                        b.push_named(id, GateKind::Add, vec![pp, nn])
                    }
                    _ => pp,
                };
                let pn =
                    nb.map(|nb| b.push_named(&format!("{id}.pn"), GateKind::Mul, vec![pa, nb]));
                let np =
                    na.map(|na| b.push_named(&format!("{id}.np"), GateKind::Mul, vec![na, pb]));
                (p, sum_opt(&mut b, &format!("{id}.neg"), &[pn, np]))
            }
            GateKind::AbsDiff => {
                // a − b = (a⁺ + b⁻) − (a⁻ + b⁺)
                let ((pa, na), (pb, nb)) = (op(0), op(1));
                let plus =
                    sum_opt(&mut b, &format!("{id}.plus"), &[Some(pa), nb]).expect("present");
                let minus =
                    sum_opt(&mut b, &format!("{id}.minus"), &[na, Some(pb)]).expect("present");
                (b.push_named(id, GateKind::AbsDiff, vec![plus, minus]), None)
            }
            GateKind::ScaleConst(q) => {
                let (pa, na) = op(0);
                let p = b.push_named(id, GateKind::ScaleConst(q.clone()), vec![pa]);
                let n = na.map(|na| {
                    b.push_named(
                        &format!("{id}.neg"),
                        GateKind::ScaleConst(q.clone()),
                        vec![na],
                    )
                });
                (p, n)
            }
            GateKind::Sqrt => {
                // The operand is non-negative, so it equals |a⁺ − a⁻|.
                let (pa, na) = op(0);
                let arg = match na {
                    Some(na) => b.push_named(&format!("{id}.arg"), GateKind::AbsDiff, vec![pa, na]),
                    None => pa,
                };
                (b.push_named(id, GateKind::Sqrt, vec![arg]), None)
            }
            GateKind::Max | GateKind::Min => {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{id}`: eliminate max/min before splitting signs"
                )));
            }
        };
        parts.push(part);
    }
    let mut outputs = Vec::new();
    for &o in c.outputs() {
        let out = match parts[o] {
            (p, None) => p,
            (p, Some(n)) => b.push_named(
                &format!("{}.out", c.gates()[o].id),
                GateKind::Sub,
                vec![p, n],
            ),
        };
        outputs.push(out);
    }
    for o in outputs {
        b.output(o);
    }
    let split = finish(b)?;
    let points = parts
        .into_iter()
        .enumerate()
        .map(|(gate, (positive, negative))| SplitPoint {
            gate,
            positive,
            negative,
        })
        .collect();
    Ok((split, points))
}

/// Stage 3: sign splitting.
pub fn split_signs(c: &Circuit) -> Result<Circuit> {
    split_signs_instrumented(c).map(|(s, _)| s)
}

/// Stage 4: output subtractions become absolute differences. Any other subtraction is an
/// error (the circuit was not sign-split).
pub fn top_abs_diff(c: &Circuit) -> Result<Circuit> {
    let outputs: HashSet<usize> = c.outputs().iter().copied().collect();
    let mut gates = c.gates().to_vec();
    for (k, g) in gates.iter_mut().enumerate() {
        if g.kind == GateKind::Sub {
            if !outputs.contains(&k) {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{}`: subtraction below the outputs; split signs first",
                    g.id
                )));
            }
            g.kind = GateKind::AbsDiff;
        }
    }
    Circuit::new(gates, c.outputs().to_vec())
}

/// Largest constant of the circuit (0 when there is none).
fn max_constant(c: &Circuit) -> Rational {
    c.gates()
        .iter()
        .filter_map(|g| match &g.kind {
            GateKind::Const(q) => Some(q.clone()),
            _ => None,
        })
        .fold(Rational::zero(), |a, b| a.max(b))
}

/// Stage 5: when the largest constant `C` exceeds 1, divides every signal by `C`:
/// inputs are scaled by `c = 1/C`, constants replaced by `q·c`, products rescaled by
/// `1/c`, and outputs rescaled by `1/c`. Circuits with all constants in `[0,1]` are
/// returned unchanged.
pub fn scale_constants(c: &Circuit) -> Result<Circuit> {
    let big = max_constant(c);
    if big <= Rational::one() {
        return Ok(c.clone());
    }
    let factor = Rational::one() / &big;
    let mut b = CircuitBuilder::new();
    let mut map = Vec::with_capacity(c.len());
    for g in c.gates() {
        let id = &g.id;
        let new = match &g.kind {
            GateKind::Input(_) => {
                let x = copy_gate(&mut b, g, &map);
                b.push_named(
                    &format!("{id}.scaled"),
                    GateKind::ScaleConst(factor.clone()),
                    vec![x],
                )
            }
            GateKind::Const(q) => b.push_named(id, GateKind::Const(q * &factor), vec![]),
            GateKind::Mul => {
                let ops = g.operands.iter().map(|&o| map[o]).collect();
                let raw = b.push_named(&format!("{id}.raw"), GateKind::Mul, ops);
                b.push_named(id, GateKind::ScaleConst(big.clone()), vec![raw])
            }
            GateKind::Sqrt => {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{id}`: square roots are not homogeneous and cannot be rescaled"
                )));
            }
            _ => copy_gate(&mut b, g, &map),
        };
        map.push(new);
    }
    let mut outputs = Vec::new();
    for &o in c.outputs() {
        let id = format!("{}.unscaled", c.gates()[o].id);
        outputs.push(b.push_named(&id, GateKind::ScaleConst(big.clone()), vec![map[o]]));
    }
    for o in outputs {
        b.output(o);
    }
    finish(b)
}

/// Appends the chain `y ↦ ((y^(1/2^d))·2)^(2^d)·2`, i.e. division by `t′ = 2^-(1+2^d)`
/// for `y = t′²·z`, and returns the last gate (named `id`).
fn restore_chain(b: &mut CircuitBuilder, id: &str, y: usize, d: u32) -> usize {
    let two = Rational::from_integer(BigInt::from(2));
    let mut s = y;
    for k in 1..=d {
        s = b.push_named(&format!("{id}.root{k}"), GateKind::Sqrt, vec![s]);
    }
    s = b.push_named(
        &format!("{id}.double1"),
        GateKind::ScaleConst(two.clone()),
        vec![s],
    );
    for k in 1..=d {
        s = b.push_named(&format!("{id}.square{k}"), GateKind::Mul, vec![s, s]);
    }
    b.push_named(id, GateKind::ScaleConst(two), vec![s])
}

/// Stages 6 and 7: range reduction by `t′ = 2^-(1+2^d)` with `d` from the interval pass,
/// and square-root chains in place of the divisions by `t′`. Requires a circuit without
/// `Sub`/`Max`/`Min`/`Sqrt` gates and with non-negative constants.
pub fn range_reduce(c: &Circuit) -> Result<Circuit> {
    for g in c.gates() {
        if matches!(
            g.kind,
            GateKind::Sub | GateKind::Max | GateKind::Min | GateKind::Sqrt
        ) || matches!(&g.kind, GateKind::Const(q) if q.is_negative())
        {
            return Err(Error::InvalidCircuit(format!(
                "gate `{}` ({}) must be removed before range reduction",
                g.id,
                g.kind.name()
            )));
        }
    }
    let d = signal_bound(c).d;
    let t_prime = Rational::new(BigInt::one(), BigInt::one() << (1 + (1usize << d)));
    let mut b = CircuitBuilder::new();
    // The T sub-circuit: 1/2 squared d times, then halved once more.
    let half = b.push_named("t.half", GateKind::Const(rat(1, 2)), vec![]);
    let mut t = half;
    for k in 1..=d {
        t = b.push_named(&format!("t.square{k}"), GateKind::Mul, vec![t, t]);
    }
    let tp = b.push_named("t.prime", GateKind::Mul, vec![t, half]);
    let mut map = Vec::with_capacity(c.len());
    for g in c.gates() {
        let id = &g.id;
        let new = match &g.kind {
            GateKind::Input(_) => {
                let x = copy_gate(&mut b, g, &map);
                b.push_named(&format!("{id}.reduced"), GateKind::Mul, vec![tp, x])
            }
            GateKind::Const(q) => b.push_named(id, GateKind::Const(q * &t_prime), vec![]),
            GateKind::Mul => {
                let ops = g.operands.iter().map(|&o| map[o]).collect();
                let raw = b.push_named(&format!("{id}.raw"), GateKind::Mul, ops);
                restore_chain(&mut b, id, raw, d)
            }
            _ => copy_gate(&mut b, g, &map),
        };
        map.push(new);
    }
    let mut outputs = Vec::new();
    for &o in c.outputs() {
        let id = format!("{}.restored", c.gates()[o].id);
        outputs.push(restore_chain(&mut b, &id, map[o], d));
    }
    for o in outputs {
        b.output(o);
    }
    finish(b)
}

/// Checks the normalized form: no `Sub`/`Max`/`Min`, constants in `[0,1]`, and every
/// signal certified by the interval pass to lie in `[0,1]` (up to
/// `2^-CERTIFICATION_SLACK_BITS`). Outputs are assumed to lie in `[0,1]` (the self-map
/// property), which the pass propagates back through the output restoration chains.
pub fn check_normalized(c: &Circuit) -> Result<()> {
    let slack = Rational::new(
        BigInt::one(),
        BigInt::one() << CERTIFICATION_SLACK_BITS as usize,
    );
    for g in c.gates() {
        match &g.kind {
            GateKind::Sub | GateKind::Max | GateKind::Min => {
                return Err(Error::NotNormalized(format!(
                    "gate `{}` is a {} gate",
                    g.id,
                    g.kind.name()
                )));
            }
            GateKind::Const(q) if q.is_negative() || q > &Rational::one() => {
                return Err(Error::NotNormalized(format!(
                    "constant `{}` = {} is outside [0,1]",
                    g.id,
                    format_rational(q)
                )));
            }
            _ => {}
        }
    }
    let bound =
        signal_bound_with_output_range(c, &Interval::new(Rational::zero(), Rational::one()));
    let (lo, hi) = (-slack.clone(), Rational::one() + slack);
    for (k, iv) in bound.intervals.iter().enumerate() {
        if !iv.within(&lo, &hi) {
            return Err(Error::NotNormalized(format!(
                "signal `{}` has range {iv}, not within [0,1]",
                c.gates()[k].id
            )));
        }
    }
    Ok(())
}

/// Sample points used to refute the self-map property: all cube vertices for up to 8
/// inputs (otherwise the two extreme vertices) and the centre.
fn refutation_points(n: usize) -> Vec<Vec<Rational>> {
    let mut pts = Vec::new();
    if n <= 8 {
        for mask in 0..(1u32 << n) {
            pts.push(
                (0..n)
                    .map(|i| Rational::from_integer(BigInt::from((mask >> i) & 1)))
                    .collect(),
            );
        }
    } else {
        pts.push(vec![Rational::zero(); n]);
        pts.push(vec![Rational::one(); n]);
    }
    pts.push(vec![rat(1, 2); n]);
    pts
}

fn check_self_mapping(c: &Circuit) -> Result<()> {
    if c.outputs().len() != c.n_inputs() {
        return Err(Error::InvalidCircuit(format!(
            "a self-map needs as many outputs as inputs ({} vs {})",
            c.outputs().len(),
            c.n_inputs()
        )));
    }
    let bound = signal_bound(c);
    let (zero, one) = (Rational::zero(), Rational::one());
    for &o in c.outputs() {
        let iv = &bound.intervals[o];
        if !iv.meets(&zero, &one) {
            return Err(Error::NotSelfMapping(format!(
                "output `{}` has range {iv}, disjoint from [0,1]",
                c.gates()[o].id
            )));
        }
    }
    for x in refutation_points(c.n_inputs()) {
        for (k, y) in eval_circuit(c, &x)?.iter().enumerate() {
            if y < &zero || y > &one {
                let pt: Vec<String> = x.iter().map(format_rational).collect();
                return Err(Error::NotSelfMapping(format!(
                    "output {k} is {} at ({})",
                    format_rational(y),
                    pt.join(", ")
                )));
            }
        }
    }
    Ok(())
}

/// Runs the whole pipeline on a circuit over `{+, −, ·, max, min, constants}` (absolute
/// differences and scalings are accepted as well) that maps `[0,1]^n` into itself.
pub fn normalize_pipeline(c: &Circuit) -> Result<Circuit> {
    if let Some(g) = c.gates().iter().find(|g| g.kind == GateKind::Sqrt) {
        return Err(Error::InvalidCircuit(format!(
            "gate `{}`: square roots are not part of the source basis",
            g.id
        )));
    }
    check_self_mapping(c)?;
    let c1 = nonnegative_constants(c)?;
    let c2 = eliminate_min_max(&c1)?;
    let c3 = split_signs(&c2)?;
    let c4 = top_abs_diff(&c3)?;
    let c5 = scale_constants(&c4)?;
    let c7 = range_reduce(&c5)?;
    check_normalized(&c7)?;
    Ok(c7)
}

/// Every gate value at `x` of the `positive` and `negative` gates of each split point, as
/// `(s⁺, s⁻)`; used to check the splitting invariant.
pub fn split_values(
    split: &Circuit,
    points: &[SplitPoint],
    x: &[Rational],
) -> Result<Vec<(Rational, Rational)>> {
    let v = eval_gates(split, x)?;
    Ok(points
        .iter()
        .map(|p| {
            let pos = v[p.positive].value.clone();
            let neg = p
                .negative
                .map(|n| v[n].value.clone())
                .unwrap_or_else(Rational::zero);
            (pos, neg)
        })
        .collect())
}
