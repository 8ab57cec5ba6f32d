//! The gadget catalog: small networks whose clearing rates realize one arithmetic
//! operation on the rates of their input ports.
//!
//! Conventions shared by every template:
//!
//! * an input port has total liability exactly 1 (a single unit debt into the gadget),
//!   so its clearing rate equals whatever it receives;
//! * an output port has no liability inside the template; it is given exactly one unit
//!   debt by the surrounding network (a wire to the next gadget or to a sink), so its
//!   rate equals its inflow;
//! * all notionals are 1 unless a parameter is involved.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::net::Network;
use crate::error::{Error, Result};
use crate::numeric::rational::exact_sqrt;
use crate::numeric::{format_rational, int, rat, QuadraticSurd, Rational};

/// Catalog entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    /// `Σ r_j` over `k` inputs (callers guarantee the sum is at most 1).
    Add(usize),
    /// `(r, r)`.
    Dup,
    /// `(r, c·r)` for `c ∈ [0,1]`.
    ScaleConst(Rational),
    /// `q·r` for a rational `q = a/b ≥ 0`, valid when `q·r ≤ 1`: scaling by `1/b`
    /// followed by an `a`-fold duplicate-and-add.
    ScaleRationalGuarded(Rational),
    /// `max{0, r₁ − r₂}`.
    PosSub,
    /// `|r₁ − r₂|`.
    AbsDiff,
    /// `1 − r`.
    Inv,
    /// `√r`.
    Sqrt,
    /// `√c` for a constant `c ∈ [0,1]`, with `1 − c` provided as external assets.
    SqrtConst(Rational),
    /// `r₁·r₂`, assembled from the multiplication core, a positive subtraction and a
    /// fourfold duplicate-and-add.
    Mul,
    /// The non-degenerate multiplication core: `(a, b) ↦ a·min{1, ½ + b}`; on inputs
    /// `r₁/2, r₂/2` it yields `r₁(1 + r₂)/4`.
    MulCore,
    /// `max{r₁, r₂} = ½(r₁ + r₂) + ½|r₁ − r₂|`.
    Max,
    /// `min{r₁, r₂} = ½(r₁ + r₂) − ½|r₁ − r₂|`.
    Min,
    /// A single bank with external assets `c ∈ [0,1]`.
    ConstSource(Rational),
    /// `r₁·r₂` through a CDS debtor without external assets or debt (degenerate).
    DegenerateMul,
    /// `min{1, r₁/r₂}` (1 when `r₂ = 0`) through a CDS debtor without external assets or
    /// debt (degenerate).
    DegenerateDiv,
    /// Alternative multiplication gadget with a feedback loop. Its marked output carries
    /// `r₂`; the product `r₁·r₂` appears on the feedback node, exposed as an observed bank.
    AltMul,
}

impl GadgetKind {
    /// Every catalog entry with representative parameters.
    pub fn catalog() -> Vec<GadgetKind> {
        vec![
            GadgetKind::Add(2),
            GadgetKind::Dup,
            GadgetKind::ScaleConst(rat(1, 3)),
            GadgetKind::ScaleRationalGuarded(rat(3, 2)),
            GadgetKind::PosSub,
            GadgetKind::AbsDiff,
            GadgetKind::Inv,
            GadgetKind::Sqrt,
            GadgetKind::SqrtConst(rat(1, 4)),
            GadgetKind::Mul,
            GadgetKind::MulCore,
            GadgetKind::Max,
            GadgetKind::Min,
            GadgetKind::ConstSource(rat(2, 5)),
            GadgetKind::DegenerateMul,
            GadgetKind::DegenerateDiv,
            GadgetKind::AltMul,
        ]
    }

    /// Number of input ports.
    pub fn arity(&self) -> usize {
        match self {
            GadgetKind::Add(k) => *k,
            GadgetKind::ConstSource(_) | GadgetKind::SqrtConst(_) => 0,
            GadgetKind::Dup
            | GadgetKind::ScaleConst(_)
            | GadgetKind::ScaleRationalGuarded(_)
            | GadgetKind::Inv
            | GadgetKind::Sqrt => 1,
            _ => 2,
        }
    }

    /// Whether the kind is one of the two degenerate entries.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, GadgetKind::DegenerateMul | GadgetKind::DegenerateDiv)
    }

    /// Exact semantics on port rates (outputs followed by observed banks), or `None` when
    /// the result is irrational.
    pub fn semantics(&self, r: &[Rational]) -> Option<Vec<Rational>> {
        let one = Rational::one();
        let clamp = |q: Rational| q.max(Rational::zero()).min(Rational::one());
        Some(match self {
            GadgetKind::Add(_) => vec![r.iter().fold(Rational::zero(), |a, b| a + b).min(one)],
            GadgetKind::Dup => vec![r[0].clone(), r[0].clone()],
            GadgetKind::ScaleConst(c) => vec![r[0].clone(), c * &r[0]],
            GadgetKind::ScaleRationalGuarded(q) => vec![(q * &r[0]).min(one)],
            GadgetKind::PosSub => vec![clamp(&r[0] - &r[1])],
            GadgetKind::AbsDiff => vec![(&r[0] - &r[1]).abs()],
            GadgetKind::Inv => vec![&one - &r[0]],
            GadgetKind::Sqrt => vec![exact_sqrt(&r[0])?],
            GadgetKind::SqrtConst(c) => vec![exact_sqrt(c)?],
            GadgetKind::Mul | GadgetKind::DegenerateMul => vec![&r[0] * &r[1]],
            GadgetKind::MulCore => vec![&r[0] * (rat(1, 2) + &r[1]).min(one)],
            GadgetKind::Max => vec![r[0].clone().max(r[1].clone())],
            GadgetKind::Min => vec![r[0].clone().min(r[1].clone())],
            GadgetKind::ConstSource(c) => vec![c.clone()],
            GadgetKind::DegenerateDiv => {
                if r[1].is_zero() {
                    vec![one]
                } else {
                    vec![(&r[0] / &r[1]).min(one)]
                }
            }
            GadgetKind::AltMul => vec![r[1].clone(), &r[0] * &r[1]],
        })
    }

    /// Closed-form clearing rates of the template's cycle banks at port rates `r`, or
    /// `None` for kinds without an internal cycle.
    pub fn cycle_values(&self, r: &[Rational]) -> Option<Vec<QuadraticSurd>> {
        let root_core = |c: &Rational| {
            // 1 − √(p/q) = 1 − (1/q)·√(pq)
            let x = QuadraticSurd::new(
                Rational::one(),
                -Rational::new(1.into(), c.denom().clone()),
                c.numer() * c.denom(),
            )
            .expect("non-negative radicand");
            vec![x.clone(), x]
        };
        match self {
            GadgetKind::Sqrt => Some(root_core(&r[0])),
            GadgetKind::SqrtConst(c) => Some(root_core(c)),
            GadgetKind::AltMul => Some(vec![
                QuadraticSurd::from_rational(r[1].clone()),
                QuadraticSurd::from_rational(&r[0] * &r[1]),
            ]),
            _ => None,
        }
    }

    /// Exact semantics as quadratic surds; unlike [`GadgetKind::semantics`] this covers
    /// the square roots of rationals.
    pub fn semantics_surd(&self, r: &[Rational]) -> Vec<QuadraticSurd> {
        let sqrt = |c: &Rational| {
            QuadraticSurd::new(
                Rational::zero(),
                Rational::new(1.into(), c.denom().clone()),
                c.numer() * c.denom(),
            )
            .expect("non-negative radicand")
        };
        match self {
            GadgetKind::Sqrt => vec![sqrt(&r[0])],
            GadgetKind::SqrtConst(c) => vec![sqrt(c)],
            other => other
                .semantics(r)
                .expect("only square roots are irrational")
                .into_iter()
                .map(QuadraticSurd::from_rational)
                .collect(),
        }
    }

    /// Floating semantics (outputs followed by observed banks).
    pub fn semantics_f64(&self, r: &[f64]) -> Vec<f64> {
        match self {
            GadgetKind::Sqrt => vec![r[0].max(0.0).sqrt()],
            GadgetKind::SqrtConst(c) => vec![c.to_f64().unwrap_or(0.0).sqrt()],
            other => {
                let exact: Vec<Rational> = r
                    .iter()
                    .map(|&x| Rational::from_float(x).unwrap_or_else(Rational::zero))
                    .collect();
                other
                    .semantics(&exact)
                    .expect("only square roots are irrational")
                    .iter()
                    .map(|q| q.to_f64().unwrap_or(f64::NAN))
                    .collect()
            }
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetKind::Add(k) => write!(f, "Add({k})"),
            GadgetKind::Dup => f.write_str("Dup"),
            GadgetKind::ScaleConst(c) => write!(f, "ScaleConst({})", format_rational(c)),
            GadgetKind::ScaleRationalGuarded(q) => {
                write!(f, "ScaleRationalGuarded({})", format_rational(q))
            }
            GadgetKind::PosSub => f.write_str("PosSub"),
            GadgetKind::AbsDiff => f.write_str("AbsDiff"),
            GadgetKind::Inv => f.write_str("Inv"),
            GadgetKind::Sqrt => f.write_str("Sqrt"),
            GadgetKind::SqrtConst(c) => write!(f, "SqrtConst({})", format_rational(c)),
            GadgetKind::Mul => f.write_str("Mul"),
            GadgetKind::MulCore => f.write_str("MulCore"),
            GadgetKind::Max => f.write_str("Max"),
            GadgetKind::Min => f.write_str("Min"),
            GadgetKind::ConstSource(c) => write!(f, "ConstSource({})", format_rational(c)),
            GadgetKind::DegenerateMul => f.write_str("DegenerateMul"),
            GadgetKind::DegenerateDiv => f.write_str("DegenerateDiv"),
            GadgetKind::AltMul => f.write_str("AltMul"),
        }
    }
}

/// An instantiated gadget: its network, input ports, output ports (each to be given one
/// unit debt by the caller) and observed banks (read without extra wiring).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetTemplate {
    /// Catalog entry.
    pub kind: GadgetKind,
    /// Banks and contracts, with local names.
    pub network: Network,
    /// Input port banks.
    pub inputs: Vec<usize>,
    /// Output port banks.
    pub outputs: Vec<usize>,
    /// Banks whose rate is part of the semantics but which carry their own liability.
    pub observed: Vec<usize>,
    /// Banks on the gadget's internal cycle, in the order of [`GadgetKind::cycle_values`].
    pub cycle: Vec<usize>,
}

struct Placed {
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

/// Composite assembly: places sub-gadgets, wires ports and sinks loose outputs.
struct Assembly {
    net: Network,
    parts: usize,
    sinks: usize,
}

impl Assembly {
    fn new() -> Self {
        Self {
            net: Network::new(),
            parts: 0,
            sinks: 0,
        }
    }

    fn place(&mut self, kind: GadgetKind) -> Placed {
        let t = primitive(&kind);
        self.parts += 1;
        let prefix = format!("{}{}", short_name(&kind), self.parts);
        let offset = self.net.embed(&t.network, &prefix);
        Placed {
            inputs: t.inputs.iter().map(|i| i + offset).collect(),
            outputs: t.outputs.iter().map(|o| o + offset).collect(),
        }
    }

    fn wire(&mut self, out: usize, input: usize) {
        self.net.unit_debt(out, input);
    }

    fn sink(&mut self, out: usize) {
        self.sinks += 1;
        let s = self
            .net
            .bank(format!("sink{}", self.sinks), Rational::zero());
        self.net.unit_debt(out, s);
    }

    /// `k` copies of the rate at port `p` through a tree of `k − 1` duplications.
    fn fan_out(&mut self, p: usize, k: usize) -> Vec<usize> {
        let mut ports = std::collections::VecDeque::from(vec![p]);
        while ports.len() < k {
            let src = ports.pop_front().expect("non-empty");
            let d = self.place(GadgetKind::Dup);
            self.wire(src, d.inputs[0]);
            ports.extend(d.outputs);
        }
        ports.into_iter().collect()
    }

    fn finish(self, kind: GadgetKind, inputs: Vec<usize>, outputs: Vec<usize>) -> GadgetTemplate {
        GadgetTemplate {
            kind,
            network: self.net,
            inputs,
            outputs,
            observed: vec![],
            cycle: vec![],
        }
    }
}

fn short_name(kind: &GadgetKind) -> &'static str {
    match kind {
        GadgetKind::Add(_) => "add",
        GadgetKind::Dup | GadgetKind::ScaleConst(_) => "dup",
        GadgetKind::ScaleRationalGuarded(_) => "scale",
        GadgetKind::PosSub => "possub",
        GadgetKind::AbsDiff => "absdiff",
        GadgetKind::Inv => "inv",
        GadgetKind::Sqrt => "sqrt",
        GadgetKind::SqrtConst(_) => "sqrtconst",
        GadgetKind::Mul => "mul",
        GadgetKind::MulCore => "core",
        GadgetKind::Max => "max",
        GadgetKind::Min => "min",
        GadgetKind::ConstSource(_) => "const",
        GadgetKind::DegenerateMul => "degmul",
        GadgetKind::DegenerateDiv => "degdiv",
        GadgetKind::AltMul => "altmul",
    }
}

/// Local bank creation in declaration order.
struct Local {
    net: Network,
}

impl Local {
    fn new() -> Self {
        Self {
            net: Network::new(),
        }
    }

    fn bank(&mut self, name: &str) -> usize {
        self.net.bank(name, Rational::zero())
    }

    fn funded(&mut self, name: &str, e: Rational) -> usize {
        self.net.bank(name, e)
    }
}

fn template(
    kind: &GadgetKind,
    l: Local,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
) -> GadgetTemplate {
    GadgetTemplate {
        kind: kind.clone(),
        network: l.net,
        inputs,
        outputs,
        observed: vec![],
        cycle: vec![],
    }
}

/// Duplication with scaling: `in → b1 → out1` passes `r`; a funded CDS on `b1` delivers
/// `1 − r` to `b3`, and a CDS of notional `c` on `b3` delivers `c·r` to `out2`.
fn dup_template(kind: &GadgetKind, c: &Rational) -> GadgetTemplate {
    let mut l = Local::new();
    let input = l.bank("in");
    let b1 = l.bank("b1");
    let out1 = l.bank("out1");
    let b2 = l.funded("b2", int(1));
    let b3 = l.bank("b3");
    let b4 = l.bank("b4");
    let out2 = l.bank("out2");
    l.net.unit_debt(input, b1);
    l.net.unit_debt(b1, out1);
    l.net.cds(b2, b3, b1, int(1));
    l.net.unit_debt(b3, b4);
    if c.is_positive() {
        let b5 = l.funded("b5", c.clone());
        l.net.cds(b5, out2, b3, c.clone());
    }
    template(kind, l, vec![input], vec![out1, out2])
}

/// `1 − r` carried by a CDS on the input, routed through `b4`.
fn inv_template(kind: &GadgetKind) -> GadgetTemplate {
    let mut l = Local::new();
    let input = l.bank("in");
    let b1 = l.bank("b1");
    let b2 = l.bank("b2");
    let b3 = l.funded("b3", int(1));
    let b4 = l.bank("b4");
    let out = l.bank("out");
    l.net.unit_debt(input, b1);
    l.net.unit_debt(b1, b2);
    l.net.cds(b3, b4, b1, int(1));
    l.net.unit_debt(b4, out);
    template(kind, l, vec![input], vec![out])
}

fn pos_sub_template(kind: &GadgetKind) -> GadgetTemplate {
    let mut l = Local::new();
    let in1 = l.bank("in1");
    let in2 = l.bank("in2");
    let b1 = l.bank("b1");
    let b2 = l.bank("b2");
    let b3 = l.funded("b3", int(1));
    let b4 = l.bank("b4");
    let b5 = l.bank("b5");
    let b6 = l.bank("b6");
    let b7 = l.funded("b7", int(1));
    let out = l.bank("out");
    // b1 carries r₁; b4 receives 1 − r₁ and forwards it to b5, which also receives r₂.
    l.net.unit_debt(in1, b1);
    l.net.unit_debt(b1, b2);
    l.net.cds(b3, b4, b1, int(1));
    l.net.unit_debt(b4, b5);
    l.net.unit_debt(in2, b5);
    // r_b5 = min{1, 1 − r₁ + r₂}; the CDS on b5 pays 1 − r_b5 = max{0, r₁ − r₂}.
    l.net.unit_debt(b5, b6);
    l.net.cds(b7, out, b5, int(1));
    template(kind, l, vec![in1, in2], vec![out])
}

/// Two funded banks (assets `1 − c`) whose debts feed each other's CDS references; the
/// symmetric clearing rate `x` solves `x(2 − x) = 1 − c`, i.e. `x = 1 − √c`. Returns the
/// output and the two banks on the cycle, both clearing at `x`.
fn root_core(l: &mut Local, b1: usize, b5: usize) -> (usize, Vec<usize>) {
    let b2 = l.bank("r1");
    let b3 = l.bank("r2");
    let b4 = l.bank("r3");
    let b6 = l.bank("r4");
    let b7 = l.bank("r5");
    let b8 = l.bank("r6");
    let b9 = l.bank("r7");
    let b10 = l.funded("r8", int(1));
    let out = l.bank("out");
    l.net.unit_debt(b1, b2);
    l.net.unit_debt(b2, b3);
    l.net.cds(b1, b4, b6, int(1));
    l.net.cds(b5, b9, b2, int(1));
    l.net.unit_debt(b5, b6);
    l.net.unit_debt(b6, b7);
    l.net.unit_debt(b7, b8);
    // r_b7 = 1 − √c; a CDS on b7 pays √c.
    l.net.cds(b10, out, b7, int(1));
    (out, vec![b2, b6])
}

fn sqrt_const_template(kind: &GadgetKind, c: &Rational) -> GadgetTemplate {
    let mut l = Local::new();
    let a = Rational::one() - c;
    let b1 = l.funded("b1", a.clone());
    let b5 = l.funded("b2", a);
    let (out, cycle) = root_core(&mut l, b1, b5);
    let mut t = template(kind, l, vec![], vec![out]);
    t.cycle = cycle;
    t
}

fn sqrt_template(kind: &GadgetKind) -> GadgetTemplate {
    let mut l = Local::new();
    let input = l.bank("in");
    let b1 = l.bank("b1");
    let b2 = l.funded("b2", int(1));
    let b3 = l.bank("b3");
    let b4 = l.bank("b4");
    let b5 = l.funded("b5", int(1));
    let b6 = l.bank("b6");
    let b7 = l.bank("b7");
    let b8 = l.funded("b8", int(1));
    let b9 = l.bank("b9");
    // Two banks that each receive 1 − r, playing the funded banks of the root core.
    let p = l.bank("p1");
    let q = l.bank("p2");
    l.net.unit_debt(input, b1);
    l.net.cds(b2, b3, input, int(1));
    l.net.unit_debt(b3, b4);
    l.net.unit_debt(b4, q);
    l.net.cds(b5, b6, b3, int(1));
    l.net.unit_debt(b6, b7);
    l.net.cds(b8, b9, b6, int(1));
    l.net.unit_debt(b9, p);
    let (out, cycle) = root_core(&mut l, p, q);
    let mut t = template(kind, l, vec![input], vec![out]);
    t.cycle = cycle;
    t
}

fn mul_core_template(kind: &GadgetKind) -> GadgetTemplate {
    let mut l = Local::new();
    let in1 = l.bank("in1");
    let in2 = l.bank("in2");
    let b1 = l.bank("b1");
    let b2 = l.bank("b2");
    let b3 = l.funded("b3", int(1));
    let b4 = l.bank("b4");
    let b5 = l.bank("b5");
    let b6 = l.funded("b6", rat(1, 2));
    let b8 = l.funded("b7", int(1));
    let out = l.bank("out");
    l.net.unit_debt(in1, b1);
    l.net.unit_debt(b1, b2);
    l.net.cds(b3, b4, b1, int(1));
    l.net.unit_debt(b4, b5);
    l.net.unit_debt(in2, b6);
    // b6 owes (1 − r_b4) + (1 − r_b1) = r_a + (1 − r_a) = 1 and holds ½ + r_b.
    l.net.cds(b6, out, b4, int(1));
    l.net.cds(b6, b8, b1, int(1));
    template(kind, l, vec![in1, in2], vec![out])
}

fn degenerate_mul_template(kind: &GadgetKind) -> GadgetTemplate {
    let mut l = Local::new();
    let in1 = l.bank("in1");
    let in2 = l.bank("in2");
    let b1 = l.bank("b1");
    let b2 = l.bank("b2");
    let b3 = l.funded("b3", int(1));
    let b4 = l.bank("b4");
    let b5 = l.bank("b5");
    let b6 = l.bank("b6");
    let b8 = l.funded("b7", int(1));
    let out = l.bank("out");
    l.net.unit_debt(in1, b1);
    l.net.unit_debt(b1, b2);
    l.net.cds(b3, b4, b1, int(1));
    l.net.unit_debt(b4, b5);
    l.net.unit_debt(in2, b6);
    // b6 has no external assets and no debt: a degenerate CDS debtor.
    l.net.cds(b6, out, b4, int(1));
    l.net.cds(b6, b8, b1, int(1));
    template(kind, l, vec![in1, in2], vec![out])
}

fn degenerate_div_template(kind: &GadgetKind) -> GadgetTemplate {
    let mut l = Local::new();
    let in1 = l.bank("in1");
    let in2 = l.bank("in2");
    let b1 = l.bank("b1");
    let b2 = l.bank("b2");
    let b3 = l.funded("b3", int(1));
    let b4 = l.bank("b4");
    let b5 = l.bank("b5");
    let b6 = l.bank("b6");
    let b7 = l.bank("b7");
    let b8 = l.bank("b8");
    let b9 = l.funded("b9", int(1));
    let b10 = l.bank("b10");
    let b11 = l.bank("b11");
    let b12 = l.funded("b12", int(1));
    let out = l.bank("out");
    l.net.unit_debt(in2, b1);
    l.net.unit_debt(b1, b2);
    l.net.cds(b3, b4, b1, int(1));
    l.net.unit_debt(b4, b5);
    l.net.unit_debt(in1, b6);
    // b6 holds r₁ and owes 1 − r_b4 = r₂, so r_b6 = min{1, r₁/r₂}.
    l.net.cds(b6, b7, b4, int(1));
    l.net.unit_debt(b7, b8);
    l.net.cds(b9, b10, b6, int(1));
    l.net.unit_debt(b10, b11);
    l.net.cds(b12, out, b10, int(1));
    template(kind, l, vec![in1, in2], vec![out])
}

fn alt_mul_template(kind: &GadgetKind) -> GadgetTemplate {
    let mut l = Local::new();
    let in1 = l.bank("in1");
    let in2 = l.bank("in2");
    let b1 = l.bank("b1");
    let b2 = l.bank("b2");
    let b3 = l.funded("b3", int(1));
    let b4 = l.bank("b4");
    let b5 = l.bank("b5");
    let b6 = l.bank("b6");
    let x = l.bank("x");
    let out = l.bank("out");
    l.net.unit_debt(in1, b1);
    l.net.unit_debt(b1, b2);
    l.net.cds(b3, b4, b1, int(1));
    l.net.unit_debt(b4, b5);
    l.net.unit_debt(in2, b6);
    // b6 owes 1 to the marked output and 1 − r_b4 = r₁ to x through a CDS; x repays b6.
    l.net.unit_debt(b6, out);
    l.net.cds(b6, x, b4, int(1));
    l.net.unit_debt(x, b6);
    let mut t = template(kind, l, vec![in1, in2], vec![out]);
    t.observed = vec![x];
    t.cycle = vec![b6, x];
    t
}

fn add_template(kind: &GadgetKind, k: usize) -> GadgetTemplate {
    let mut l = Local::new();
    let inputs: Vec<usize> = (1..=k).map(|j| l.bank(&format!("in{j}"))).collect();
    let out = l.bank("out");
    for &i in &inputs {
        l.net.unit_debt(i, out);
    }
    template(kind, l, inputs, vec![out])
}

fn const_template(kind: &GadgetKind, c: &Rational) -> GadgetTemplate {
    let mut l = Local::new();
    let out = l.funded("out", c.clone());
    template(kind, l, vec![], vec![out])
}

fn abs_diff_template(kind: &GadgetKind) -> GadgetTemplate {
    let mut a = Assembly::new();
    let d1 = a.place(GadgetKind::Dup);
    let d2 = a.place(GadgetKind::Dup);
    let s1 = a.place(GadgetKind::PosSub);
    let s2 = a.place(GadgetKind::PosSub);
    let add = a.place(GadgetKind::Add(2));
    a.wire(d1.outputs[0], s1.inputs[0]);
    a.wire(d2.outputs[0], s1.inputs[1]);
    a.wire(d2.outputs[1], s2.inputs[0]);
    a.wire(d1.outputs[1], s2.inputs[1]);
    a.wire(s1.outputs[0], add.inputs[0]);
    a.wire(s2.outputs[0], add.inputs[1]);
    a.finish(kind.clone(), vec![d1.inputs[0], d2.inputs[0]], add.outputs)
}

fn mul_template(kind: &GadgetKind) -> GadgetTemplate {
    let mut a = Assembly::new();
    let half1 = a.place(GadgetKind::ScaleConst(rat(1, 2)));
    let half2 = a.place(GadgetKind::ScaleConst(rat(1, 2)));
    let quarter = a.place(GadgetKind::ScaleConst(rat(1, 4)));
    let core = a.place(GadgetKind::MulCore);
    let sub = a.place(GadgetKind::PosSub);
    a.wire(half1.outputs[0], quarter.inputs[0]);
    a.wire(half1.outputs[1], core.inputs[0]);
    a.wire(half2.outputs[1], core.inputs[1]);
    a.sink(half2.outputs[0]);
    a.sink(quarter.outputs[0]);
    // r₁(1 + r₂)/4 − r₁/4 = r₁r₂/4, then four copies are added back together.
    a.wire(core.outputs[0], sub.inputs[0]);
    a.wire(quarter.outputs[1], sub.inputs[1]);
    let copies = a.fan_out(sub.outputs[0], 4);
    let add = a.place(GadgetKind::Add(4));
    for (p, i) in copies.into_iter().zip(add.inputs.clone()) {
        a.wire(p, i);
    }
    a.finish(
        kind.clone(),
        vec![half1.inputs[0], half2.inputs[0]],
        add.outputs,
    )
}

fn max_min_template(kind: &GadgetKind, is_max: bool) -> GadgetTemplate {
    let mut a = Assembly::new();
    let h1 = a.place(GadgetKind::ScaleConst(rat(1, 2)));
    let h2 = a.place(GadgetKind::ScaleConst(rat(1, 2)));
    let t = abs_diff_template(&GadgetKind::AbsDiff);
    a.parts += 1;
    let offset = a.net.embed(&t.network, &format!("absdiff{}", a.parts));
    let (ad_inputs, ad_out) = (
        t.inputs.iter().map(|i| i + offset).collect::<Vec<_>>(),
        t.outputs[0] + offset,
    );
    a.wire(h1.outputs[0], ad_inputs[0]);
    a.wire(h2.outputs[0], ad_inputs[1]);
    let hd = a.place(GadgetKind::ScaleConst(rat(1, 2)));
    a.wire(ad_out, hd.inputs[0]);
    a.sink(hd.outputs[0]);
    let sum = a.place(GadgetKind::Add(2));
    a.wire(h1.outputs[1], sum.inputs[0]);
    a.wire(h2.outputs[1], sum.inputs[1]);
    let inputs = vec![h1.inputs[0], h2.inputs[0]];
    if is_max {
        let total = a.place(GadgetKind::Add(2));
        a.wire(sum.outputs[0], total.inputs[0]);
        a.wire(hd.outputs[1], total.inputs[1]);
        a.finish(kind.clone(), inputs, total.outputs)
    } else {
        let diff = a.place(GadgetKind::PosSub);
        a.wire(sum.outputs[0], diff.inputs[0]);
        a.wire(hd.outputs[1], diff.inputs[1]);
        a.finish(kind.clone(), inputs, diff.outputs)
    }
}

fn scale_rational_template(kind: &GadgetKind, q: &Rational) -> GadgetTemplate {
    let a_part = q.numer().to_usize().expect("validated numerator");
    let b_part = q.denom().clone();
    let mut a = Assembly::new();
    if a_part == 0 {
        let s = a.place(GadgetKind::ScaleConst(Rational::zero()));
        a.sink(s.outputs[0]);
        return a.finish(kind.clone(), s.inputs, vec![s.outputs[1]]);
    }
    let scaled = a.place(GadgetKind::ScaleConst(Rational::new(BigInt::one(), b_part)));
    a.sink(scaled.outputs[0]);
    if a_part == 1 {
        return a.finish(kind.clone(), scaled.inputs, vec![scaled.outputs[1]]);
    }
    let copies = a.fan_out(scaled.outputs[1], a_part);
    let add = a.place(GadgetKind::Add(a_part));
    for (p, i) in copies.into_iter().zip(add.inputs.clone()) {
        a.wire(p, i);
    }
    a.finish(kind.clone(), scaled.inputs, add.outputs)
}

/// Template for a kind whose parameters are already validated.
fn primitive(kind: &GadgetKind) -> GadgetTemplate {
    match kind {
        GadgetKind::Add(k) => add_template(kind, *k),
        GadgetKind::Dup => dup_template(kind, &Rational::one()),
        GadgetKind::ScaleConst(c) => dup_template(kind, c),
        GadgetKind::ScaleRationalGuarded(q) => scale_rational_template(kind, q),
        GadgetKind::PosSub => pos_sub_template(kind),
        GadgetKind::AbsDiff => abs_diff_template(kind),
        GadgetKind::Inv => inv_template(kind),
        GadgetKind::Sqrt => sqrt_template(kind),
        GadgetKind::SqrtConst(c) => sqrt_const_template(kind, c),
        GadgetKind::Mul => mul_template(kind),
        GadgetKind::MulCore => mul_core_template(kind),
        GadgetKind::Max => max_min_template(kind, true),
        GadgetKind::Min => max_min_template(kind, false),
        GadgetKind::ConstSource(c) => const_template(kind, c),
        GadgetKind::DegenerateMul => degenerate_mul_template(kind),
        GadgetKind::DegenerateDiv => degenerate_div_template(kind),
        GadgetKind::AltMul => alt_mul_template(kind),
    }
}

fn check_unit(name: &str, c: &Rational) -> Result<()> {
    if c.is_negative() || c > &Rational::one() {
        return Err(Error::InvalidParam(format!(
            "{name} parameter {} is outside [0,1]",
            format_rational(c)
        )));
    }
    Ok(())
}

/// Instantiates a catalog entry. Degenerate kinds require `allow_degenerate`.
pub fn instantiate_gadget(kind: &GadgetKind, allow_degenerate: bool) -> Result<GadgetTemplate> {
    match kind {
        GadgetKind::Add(0) => {
            return Err(Error::InvalidParam("Add needs at least one input".into()))
        }
        GadgetKind::ScaleConst(c) => check_unit("ScaleConst", c)?,
        GadgetKind::SqrtConst(c) => check_unit("SqrtConst", c)?,
        GadgetKind::ConstSource(c) => check_unit("ConstSource", c)?,
        GadgetKind::ScaleRationalGuarded(q) => {
            if q.is_negative() {
                return Err(Error::InvalidParam(format!(
                    "ScaleRationalGuarded factor {} is negative",
                    format_rational(q)
                )));
            }
            if q.numer().to_usize().map_or(true, |a| a > 1 << 16) {
                return Err(Error::InvalidParam(format!(
                    "ScaleRationalGuarded numerator of {} is too large",
                    format_rational(q)
                )));
            }
        }
        k if k.is_degenerate() && !allow_degenerate => {
            return Err(Error::DegenerateKindRequiresFlag(k.to_string()));
        }
        _ => {}
    }
    Ok(primitive(kind))
}
