//! Interval bounds on gate signals over the unit cube.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::eval::SQRT_PRECISION_BITS;
use super::ir::{Circuit, GateKind};
use crate::numeric::rational::{approx_sqrt, exact_sqrt};
use crate::numeric::{format_rational, Rational};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    /// Lower end.
    pub lo: Rational,
    /// Upper end.
    pub hi: Rational,
}

impl Interval {
    /// `[lo, hi]`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Self { lo, hi }
    }

    /// Degenerate interval `[q, q]`.
    pub fn point(q: Rational) -> Self {
        Self {
            lo: q.clone(),
            hi: q,
        }
    }

    /// Largest absolute value in the interval.
    pub fn magnitude(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    /// Whether `[lo, hi] ⊆ [a, b]`.
    pub fn within(&self, a: &Rational, b: &Rational) -> bool {
        &self.lo >= a && &self.hi <= b
    }

    /// Whether the interval meets `[a, b]`.
    pub fn meets(&self, a: &Rational, b: &Rational) -> bool {
        &self.hi >= a && &self.lo <= b
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

/// Per-gate intervals for inputs ranging over `[0,1]^n`, and the exponent `d`: the
/// smallest non-negative integer with every gate magnitude strictly below `2^(2^d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalBound {
    /// Interval of each gate, in gate order.
    pub intervals: Vec<Interval>,
    /// Range-reduction exponent.
    pub d: u32,
}

fn sqrt_down(q: &Rational) -> Rational {
    if !q.is_positive() {
        return Rational::zero();
    }
    approx_sqrt(q, SQRT_PRECISION_BITS)
}

fn sqrt_up(q: &Rational) -> Rational {
    if !q.is_positive() {
        return Rational::zero();
    }
    match exact_sqrt(q) {
        Some(s) => s,
        None => {
            approx_sqrt(q, SQRT_PRECISION_BITS)
                + Rational::new(BigInt::one(), BigInt::one() << SQRT_PRECISION_BITS as usize)
        }
    }
}

fn min2(a: Rational, b: Rational) -> Rational {
    a.min(b)
}

fn max2(a: Rational, b: Rational) -> Rational {
    a.max(b)
}

/// Interval image of one gate.
pub fn gate_interval(kind: &GateKind, ops: &[&Interval]) -> Interval {
    match kind {
        GateKind::Input(_) => Interval::new(Rational::zero(), Rational::one()),
        GateKind::Const(q) => Interval::point(q.clone()),
        GateKind::Add => Interval::new(&ops[0].lo + &ops[1].lo, &ops[0].hi + &ops[1].hi),
        GateKind::Sub => Interval::new(&ops[0].lo - &ops[1].hi, &ops[0].hi - &ops[1].lo),
        GateKind::Mul => {
            let (a, b) = (ops[0], ops[1]);
            let p = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
            let lo = p.iter().cloned().reduce(min2).expect("four products");
            let hi = p.iter().cloned().reduce(max2).expect("four products");
            Interval::new(lo, hi)
        }
        GateKind::Max => Interval::new(
            ops[0].lo.clone().max(ops[1].lo.clone()),
            ops[0].hi.clone().max(ops[1].hi.clone()),
        ),
        GateKind::Min => Interval::new(
            ops[0].lo.clone().min(ops[1].lo.clone()),
            ops[0].hi.clone().min(ops[1].hi.clone()),
        ),
        GateKind::AbsDiff => {
            let (a, b) = (ops[0], ops[1]);
            let lo = Rational::zero().max(&a.lo - &b.hi).max(&b.lo - &a.hi);
            let hi = (&a.hi - &b.lo).max(&b.hi - &a.lo);
            Interval::new(lo, hi)
        }
        GateKind::Sqrt => Interval::new(sqrt_down(&ops[0].lo), sqrt_up(&ops[0].hi)),
        GateKind::ScaleConst(q) => Interval::new(&ops[0].lo * q, &ops[0].hi * q),
    }
}

/// Smallest `d ≥ 0` with `m < 2^(2^d)`.
pub fn exponent_for(m: &Rational) -> u32 {
    let mut d = 0u32;
    loop {
        let bound = Rational::from_integer(BigInt::one() << (1usize << d));
        if m < &bound {
            return d;
        }
        d += 1;
    }
}

/// Interval pass over the circuit for inputs in `[0,1]^n`.
pub fn signal_bound(c: &Circuit) -> SignalBound {
    let mut intervals: Vec<Interval> = Vec::with_capacity(c.len());
    for g in c.gates() {
        let ops: Vec<&Interval> = g.operands.iter().map(|&o| &intervals[o]).collect();
        let iv = gate_interval(&g.kind, &ops);
        intervals.push(iv);
    }
    let m = intervals
        .iter()
        .map(Interval::magnitude)
        .fold(Rational::zero(), |a, b| a.max(b));
    SignalBound {
        d: exponent_for(&m),
        intervals,
    }
}

/// The unary tail feeding output `o`: gates walked backwards from the output while the
/// gate is a square root, a scaling or a squaring whose operand feeds nothing else.
/// Returned from the output backwards (the output itself first).
fn monotone_tail(c: &Circuit, o: usize, uses: &[usize]) -> Vec<usize> {
    let mut tail = vec![o];
    let mut g = o;
    loop {
        let gate = &c.gates()[g];
        let unary = match gate.kind {
            GateKind::Sqrt => true,
            GateKind::ScaleConst(ref q) => q.is_positive(),
            GateKind::Mul => gate.operands[0] == gate.operands[1],
            _ => false,
        };
        let prev = gate.operands.first().copied();
        match prev {
            Some(p) if unary && uses[p] == 1 => {
                tail.push(p);
                g = p;
            }
            _ => return tail,
        }
    }
}

/// Interval pass that additionally assumes every output lies in `range`: after the
/// forward pass, the assumption is propagated backwards through each output's monotone
/// unary tail (square roots, positive scalings and squarings), intersecting intervals
/// with the preimages.
pub fn signal_bound_with_output_range(c: &Circuit, range: &Interval) -> SignalBound {
    let mut bound = signal_bound(c);
    let mut uses = vec![0usize; c.len()];
    for g in c.gates() {
        let mut ops = g.operands.clone();
        ops.dedup();
        for o in ops {
            uses[o] += 1;
        }
    }
    for &o in c.outputs() {
        uses[o] += 1;
    }
    for &o in c.outputs() {
        let tail = monotone_tail(c, o, &uses);
        let iv = &mut bound.intervals[o];
        iv.lo = iv.lo.clone().max(range.lo.clone());
        iv.hi = iv.hi.clone().min(range.hi.clone());
        for w in tail.windows(2) {
            let (g, p) = (w[0], w[1]);
            let post = bound.intervals[g].clone();
            let pre_hi = match &c.gates()[g].kind {
                GateKind::Sqrt => &post.hi * &post.hi,
                GateKind::ScaleConst(q) => &post.hi / q,
                GateKind::Mul => sqrt_up(&post.hi),
                _ => unreachable!("tails contain unary gates only"),
            };
            let iv = &mut bound.intervals[p];
            iv.hi = iv.hi.clone().min(pre_hi);
        }
    }
    bound
}
