//! Damped fixed-point iteration of the clearing map in double precision.

use crate::error::{Error, Result};
use crate::model::{FinancialSystem, Number, RecoveryVector};
use crate::numeric::Scalar;

use super::report::{SolveReport, SolverKind};

/// Default damping factor α.
pub const DEFAULT_DAMPING: f64 = 0.5;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Flattened float view of a system for fast repeated evaluation of the clearing map.
#[derive(Clone, Debug)]
pub struct FloatSystem {
    external: Vec<f64>,
    debtor: Vec<usize>,
    creditor: Vec<usize>,
    reference: Vec<Option<usize>>,
    notional: Vec<f64>,
}

impl FloatSystem {
    /// Converts a system to floats.
    pub fn new(sys: &FinancialSystem) -> Self {
        let cs = sys.contracts();
        Self {
            external: sys
                .banks()
                .iter()
                .map(|b| b.external_assets.to_f64())
                .collect(),
            debtor: cs.iter().map(|c| c.debtor).collect(),
            creditor: cs.iter().map(|c| c.creditor).collect(),
            reference: cs.iter().map(|c| c.reference).collect(),
            notional: cs.iter().map(|c| c.notional.to_f64()).collect(),
        }
    }

    /// Number of banks.
    pub fn len(&self) -> usize {
        self.external.len()
    }

    /// Whether there are no banks.
    pub fn is_empty(&self) -> bool {
        self.external.is_empty()
    }

    /// Evaluates `f(r)` into `out` and returns `‖r − f(r)‖∞`.
    pub fn map_into(&self, r: &[f64], liab: &mut [f64], out: &mut [f64]) -> f64 {
        liab.iter_mut().for_each(|x| *x = 0.0);
        out.copy_from_slice(&self.external);
        for k in 0..self.debtor.len() {
            let amount = match self.reference[k] {
                None => self.notional[k],
                Some(rf) => (1.0 - r[rf]) * self.notional[k],
            };
            liab[self.debtor[k]] += amount;
            out[self.creditor[k]] += r[self.debtor[k]] * amount;
        }
        let mut res = 0.0f64;
        for i in 0..out.len() {
            let a = out[i];
            let l = liab[i];
            out[i] = if l == 0.0 || a >= l { 1.0 } else { a / l };
            res = res.max((r[i] - out[i]).abs());
        }
        res
    }
}

/// Runs `r ← (1 − α)·r + α·f(r)` from `start` until the residual `‖r − f(r)‖∞` drops below
/// `eps` or `max_iter` iterations. The report carries the final iterate and its residual.
pub fn iterate_clearing_from(
    sys: &FinancialSystem,
    start: Vec<f64>,
    eps: f64,
    max_iter: usize,
    damping: f64,
) -> Result<SolveReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParam(format!(
            "eps must be positive, got {eps}"
        )));
    }
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::InvalidParam(format!(
            "damping must lie in (0,1], got {damping}"
        )));
    }
    if start.len() != sys.len() {
        return Err(Error::InvalidVector(
            "start vector has the wrong length".into(),
        ));
    }
    let fs = FloatSystem::new(sys);
    let n = fs.len();
    let mut r = start;
    let mut f = vec![0.0; n];
    let mut liab = vec![0.0; n];
    let mut iterations = 0;
    let mut residual = fs.map_into(&r, &mut liab, &mut f);
    while residual >= eps && iterations < max_iter {
        for i in 0..n {
            r[i] = ((1.0 - damping) * r[i] + damping * f[i]).clamp(0.0, 1.0);
        }
        iterations += 1;
        residual = fs.map_into(&r, &mut liab, &mut f);
    }
    let converged = residual < eps;
    let mut warnings = Vec::new();
    if !converged {
        warnings.push(format!(
            "no convergence after {iterations} iterations (residual {residual:e})"
        ));
    }
    Ok(SolveReport {
        solver: SolverKind::Iterate,
        solutions: vec![RecoveryVector::float(r)?],
        branches: Vec::new(),
        residual: Some(Number::Float(residual)),
        iterations,
        converged,
        warnings,
        max_bits: 0,
    })
}

/// [`iterate_clearing_from`] starting at the all-ones vector.
pub fn iterate_clearing(
    sys: &FinancialSystem,
    eps: f64,
    max_iter: usize,
    damping: f64,
) -> Result<SolveReport> {
    iterate_clearing_from(sys, vec![1.0; sys.len()], eps, max_iter, damping)
}
