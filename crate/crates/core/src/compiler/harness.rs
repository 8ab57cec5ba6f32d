//! Isolated checks of gadget semantics.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::gadgets::{instantiate_gadget, GadgetKind, GadgetTemplate};
use super::net::Network;
use crate::analysis::{build_auxiliary_graph, is_acyclic};
use crate::error::{Error, Result};
use crate::model::{clearing_residual, is_clearing, FinancialSystem, Mode, Number, RecoveryVector};
use crate::numeric::rational::to_f64;
use crate::numeric::{format_rational, QuadraticSurd, Rational};
use crate::solvers::{
    iterate_clearing, propagate_pinned, solve_acyclic, SolveReport, DEFAULT_DAMPING,
    DEFAULT_MAX_ITER,
};

/// Tolerance of the fixed-point iteration used for cyclic gadgets.
pub const HARNESS_EPS: f64 = 1e-12;

/// Largest accepted deviation from the semantics when a gadget is solved by iteration.
pub const FLOAT_SEMANTIC_TOLERANCE: f64 = 1e-9;

/// A gadget wired into a harness: one constant source per input, one sink per output.
#[derive(Clone, Debug)]
pub struct Harness {
    /// The harness system.
    pub system: FinancialSystem,
    /// Bank indices of the constant sources.
    pub sources: Vec<usize>,
    /// Bank indices of the input ports.
    pub inputs: Vec<usize>,
    /// Bank indices of the output ports followed by the observed banks.
    pub outputs: Vec<usize>,
    /// Bank indices of the gadget's internal cycle.
    pub cycle: Vec<usize>,
}

/// Builds the harness of `template` fed with the constant `inputs`.
pub fn build_harness(template: &GadgetTemplate, inputs: &[Rational]) -> Result<Harness> {
    if inputs.len() != template.inputs.len() {
        return Err(Error::InvalidParam(format!(
            "{} expects {} inputs, got {}",
            template.kind,
            template.inputs.len(),
            inputs.len()
        )));
    }
    if let Some(bad) = inputs
        .iter()
        .find(|x| x.is_negative() || *x > &Rational::from_integer(1.into()))
    {
        return Err(Error::InvalidParam(format!(
            "input {} is outside [0,1]",
            format_rational(bad)
        )));
    }
    let mut net = Network::new();
    let sources: Vec<usize> = inputs
        .iter()
        .enumerate()
        .map(|(j, x)| net.bank(format!("harness.src{}", j + 1), x.clone()))
        .collect();
    let offset = net.embed(&template.network, "");
    let ports: Vec<usize> = template.inputs.iter().map(|i| i + offset).collect();
    for (&s, &p) in sources.iter().zip(&ports) {
        net.unit_debt(s, p);
    }
    let mut outputs = Vec::new();
    for (k, o) in template.outputs.iter().enumerate() {
        let sink = net.bank(format!("harness.sink{}", k + 1), Rational::zero());
        net.unit_debt(o + offset, sink);
        outputs.push(o + offset);
    }
    outputs.extend(template.observed.iter().map(|o| o + offset));
    let cycle = template.cycle.iter().map(|c| c + offset).collect();
    Ok(Harness {
        system: net.to_system()?,
        sources,
        inputs: ports,
        outputs,
        cycle,
    })
}

/// How a harness was solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HarnessMethod {
    /// Exact topological propagation of an acyclic harness.
    Acyclic,
    /// Exact propagation with the cycle banks held at their closed-form rates, followed by
    /// an exact check that the resulting vector clears the whole harness.
    PinnedCycle,
    /// Fixed-point iteration at [`HARNESS_EPS`].
    Iterate,
}

/// Outcome of a successful semantics check.
#[derive(Clone, Debug)]
pub struct HarnessReport {
    /// Checked gadget.
    pub kind: GadgetKind,
    /// Harness system.
    pub system: FinancialSystem,
    /// Method that produced the clearing vector.
    pub method: HarnessMethod,
    /// Rates of the output ports and observed banks.
    pub outputs: Vec<Number>,
    /// Expected values (exact whenever the semantics is rational).
    pub expected: Vec<Number>,
    /// Clearing residual of the solution.
    pub residual: Number,
    /// Largest deviation between outputs and expected values.
    pub error: Number,
}

/// Solves the harness of `kind` at `inputs` and compares the outputs with the gadget's
/// semantics.
///
/// Acyclic harnesses are solved by exact propagation and compared exactly. Cyclic gadgets
/// with a closed-form cycle (the square roots and the alternative product) are solved exactly
/// by pinning the cycle banks, in surd arithmetic when the rates are irrational; the pinned
/// vector must satisfy the clearing equations exactly. Remaining cyclic harnesses fall back
/// to iteration at [`HARNESS_EPS`] with outputs within [`FLOAT_SEMANTIC_TOLERANCE`].
/// Degenerate kinds are admitted here so that their semantics can be studied.
pub fn gadget_clearing_check(kind: &GadgetKind, inputs: &[Rational]) -> Result<HarnessReport> {
    let template = instantiate_gadget(kind, true)?;
    let h = build_harness(&template, inputs)?;
    let sys = &h.system;
    let aux = build_auxiliary_graph(sys);
    let (method, r) = if is_acyclic(&aux) {
        (HarnessMethod::Acyclic, first_solution(solve_acyclic(sys)?)?)
    } else if let Some(values) = kind.cycle_values(inputs) {
        let pins: Vec<(usize, QuadraticSurd)> = h.cycle.iter().copied().zip(values).collect();
        let rates = propagate_pinned(sys, &pins)?;
        let r = match rates
            .iter()
            .map(QuadraticSurd::to_rational)
            .collect::<Option<Vec<_>>>()
        {
            Some(q) => RecoveryVector::rational(q)?,
            None => RecoveryVector::surd(rates)?,
        };
        if !is_clearing(sys, &r)? {
            return Err(Error::SemanticsMismatch(format!(
                "{kind}: closed-form cycle rates do not clear the harness"
            )));
        }
        (HarnessMethod::PinnedCycle, r)
    } else {
        let report = iterate_clearing(sys, HARNESS_EPS, DEFAULT_MAX_ITER, DEFAULT_DAMPING)?;
        if !report.converged {
            return Err(Error::SemanticsMismatch(format!(
                "{kind}: iteration did not converge"
            )));
        }
        (HarnessMethod::Iterate, first_solution(report)?)
    };
    let outputs: Vec<Number> = h.outputs.iter().map(|&o| r.get(o)).collect();
    let residual = clearing_residual(sys, &r)?;
    let (expected, error) = match r.mode() {
        Mode::Rational => {
            let exact = kind
                .semantics(inputs)
                .expect("rational vector implies rational semantics");
            let err = outputs
                .iter()
                .zip(&exact)
                .map(|(o, e)| (o.as_rational().expect("rational mode") - e).abs())
                .fold(Rational::zero(), |a, b| a.max(b));
            (
                exact.into_iter().map(Number::Rational).collect::<Vec<_>>(),
                Number::Rational(err),
            )
        }
        Mode::Surd => {
            let exact = kind.semantics_surd(inputs);
            let mut worst = QuadraticSurd::from_rational(Rational::zero());
            for (o, e) in outputs.iter().zip(&exact) {
                let o = match o {
                    Number::Surd(v) => v.clone(),
                    Number::Rational(q) => QuadraticSurd::from_rational(q.clone()),
                    Number::Float(_) => unreachable!("surd vector"),
                };
                let d = o.checked_sub(e)?;
                let d = if d.signum() == Ordering::Less {
                    d.checked_mul(&QuadraticSurd::from_rational(-Rational::one()))?
                } else {
                    d
                };
                if d.checked_sub(&worst)?.signum() == Ordering::Greater {
                    worst = d;
                }
            }
            (
                exact.into_iter().map(Number::Surd).collect::<Vec<_>>(),
                Number::Surd(worst),
            )
        }
        Mode::Float => {
            let x: Vec<f64> = inputs.iter().map(to_f64).collect();
            let sem = kind.semantics_f64(&x);
            let err = outputs
                .iter()
                .zip(&sem)
                .map(|(o, e)| (o.to_f64() - e).abs())
                .fold(0.0, f64::max);
            let expected: Vec<Number> = match kind.semantics(inputs) {
                Some(q) => q.into_iter().map(Number::Rational).collect(),
                None => sem.into_iter().map(Number::Float).collect(),
            };
            (expected, Number::Float(err))
        }
    };
    let ok = match &error {
        Number::Rational(e) => e.is_zero(),
        Number::Surd(e) => e.is_zero(),
        Number::Float(e) => *e <= FLOAT_SEMANTIC_TOLERANCE,
    };
    if !ok {
        let shown: Vec<String> = outputs.iter().map(|o| o.to_string()).collect();
        let want: Vec<String> = expected.iter().map(|o| o.to_string()).collect();
        return Err(Error::SemanticsMismatch(format!(
            "{kind} at ({}): outputs ({}) expected ({}), clearing residual {residual}",
            inputs
                .iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .join(", "),
            shown.join(", "),
            want.join(", ")
        )));
    }
    Ok(HarnessReport {
        kind: kind.clone(),
        system: h.system,
        method,
        outputs,
        expected,
        residual,
        error,
    })
}

fn first_solution(report: SolveReport) -> Result<RecoveryVector> {
    report
        .solutions
        .into_iter()
        .next()
        .ok_or_else(|| Error::SemanticsMismatch("no solution".into()))
}
