//! Branch enumeration for systems with the dedicated-CDS-debtor property.
//!
//! With dedicated CDS debtors the clearing conditions reduce to a piecewise-linear map in
//! the CDS payments `p` and the recovery rates `r′` of the remaining banks. Every
//! min-expression is resolved to one side, the induced linear system is solved exactly
//! and branch-consistent solutions are kept.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::analysis::check_dedicated_cds_debtor;
use crate::error::{Error, Result};
use crate::model::{
    check_nondegenerate, recovery_from, residual_of, FinancialSystem, RecoveryVector,
};
use crate::numeric::Rational;

use super::linalg::{solve_linear, LinearSolution};
use super::report::{Branch, BranchAssignment, SolveReport, SolverKind, SolverOptions};

/// Affine expression `Σ coeffs[v]·x_v + constant` over the branch variables.
#[derive(Clone, Debug)]
struct Affine {
    coeffs: Vec<Rational>,
    constant: Rational,
}

impl Affine {
    fn constant(nvars: usize, c: Rational) -> Self {
        Self {
            coeffs: vec![Rational::zero(); nvars],
            constant: c,
        }
    }

    fn var(nvars: usize, v: usize, scale: Rational) -> Self {
        let mut a = Self::constant(nvars, Rational::zero());
        a.coeffs[v] = scale;
        a
    }

    fn add_scaled(&mut self, other: &Affine, s: &Rational) {
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += y * s;
        }
        self.constant += &other.constant * s;
    }

    fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (c, v)| acc + c * v)
    }
}

/// One min-expression `value = min{left, right}`.
#[derive(Clone, Debug)]
struct MinExpr {
    label: String,
    var: usize,
    left: Affine,
    right: Affine,
}

struct Formulation {
    nvars: usize,
    exprs: Vec<MinExpr>,
    rate: Vec<Affine>,
    cds_debtor_refs: Vec<(usize, usize, Rational)>,
}

fn formulate(sys: &FinancialSystem) -> Formulation {
    let n = sys.len();
    let contracts = sys.contracts();
    let mut is_debtor = vec![false; n];
    for c in contracts.iter().filter(|c| c.is_cds()) {
        is_debtor[c.debtor] = true;
    }
    let mut debt_liab = vec![Rational::zero(); n];
    for c in contracts.iter().filter(|c| !c.is_cds()) {
        debt_liab[c.debtor] += &c.notional;
    }
    // Variable numbering: rate variables first, then one payment per CDS.
    let mut rate_var: Vec<Option<usize>> = vec![None; n];
    let mut nvars = 0;
    for i in 0..n {
        if !is_debtor[i] && debt_liab[i].is_positive() {
            rate_var[i] = Some(nvars);
            nvars += 1;
        }
    }
    let mut pay_var: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, c) in contracts.iter().enumerate() {
        if c.is_cds() {
            pay_var.insert(k, nvars);
            nvars += 1;
        }
    }
    let rate: Vec<Affine> = (0..n)
        .map(|i| match rate_var[i] {
            Some(v) => Affine::var(nvars, v, Rational::one()),
            None => Affine::constant(nvars, Rational::one()),
        })
        .collect();
    let mut assets: Vec<Affine> = (0..n)
        .map(|i| Affine::constant(nvars, sys.external_assets(i).clone()))
        .collect();
    for (k, c) in contracts.iter().enumerate() {
        match c.reference {
            None => {
                let r = rate[c.debtor].clone();
                assets[c.creditor].add_scaled(&r, &c.notional);
            }
            Some(_) => {
                let p = Affine::var(nvars, pay_var[&k], Rational::one());
                assets[c.creditor].add_scaled(&p, &Rational::one());
            }
        }
    }
    let mut exprs = Vec::new();
    for i in 0..n {
        if let Some(v) = rate_var[i] {
            let mut right = Affine::constant(nvars, Rational::zero());
            right.add_scaled(&assets[i], &(Rational::one() / &debt_liab[i]));
            exprs.push(MinExpr {
                label: format!("r:{}", sys.id(i)),
                var: v,
                left: Affine::constant(nvars, Rational::one()),
                right,
            });
        }
    }
    let mut cds_total = vec![Rational::zero(); n];
    for c in contracts.iter().filter(|c| c.is_cds()) {
        cds_total[c.debtor] += &c.notional;
    }
    let mut cds_debtor_refs = Vec::new();
    for (k, c) in contracts.iter().enumerate() {
        let Some(reference) = c.reference else {
            continue;
        };
        let mut left = Affine::constant(nvars, c.notional.clone());
        left.add_scaled(&rate[reference], &(-c.notional.clone()));
        let mut right = Affine::constant(nvars, Rational::zero());
        right.add_scaled(&assets[c.debtor], &(&c.notional / &cds_total[c.debtor]));
        exprs.push(MinExpr {
            label: format!("p:{}→{}", sys.id(c.debtor), sys.id(c.creditor)),
            var: pay_var[&k],
            left,
            right,
        });
    }
    for i in 0..n {
        if is_debtor[i] {
            let reference = sys
                .outgoing(i)
                .find_map(|c| c.reference)
                .expect("CDS debtor");
            cds_debtor_refs.push((i, reference, cds_total[i].clone()));
        }
    }
    // Assets of CDS debtors are needed for reconstruction; store them as extra rows.
    let mut rate_full = rate;
    for (i, _, _) in &cds_debtor_refs {
        rate_full[*i] = assets[*i].clone();
    }
    Formulation {
        nvars,
        exprs,
        rate: rate_full,
        cds_debtor_refs,
    }
}

fn branch_candidates(f: &Formulation, mask: u64) -> (Vec<Vec<Rational>>, Vec<String>) {
    let mut a = Vec::with_capacity(f.exprs.len());
    let mut b = Vec::with_capacity(f.exprs.len());
    for (e_idx, e) in f.exprs.iter().enumerate() {
        let side = if mask >> e_idx & 1 == 1 {
            &e.left
        } else {
            &e.right
        };
        // x_var − side = 0  ⇒  (e_var − coeffs)·x = constant
        let mut row: Vec<Rational> = side.coeffs.iter().map(|c| -c.clone()).collect();
        row[e.var] += Rational::one();
        a.push(row);
        b.push(side.constant.clone());
    }
    let mut warnings = Vec::new();
    let solutions = match solve_linear(a, b) {
        LinearSolution::Unique(x) => vec![x],
        LinearSolution::Inconsistent => Vec::new(),
        LinearSolution::Family {
            particular,
            free,
            directions,
        } => {
            warnings.push(format!(
                "branch {mask:#b} has a {}-dimensional solution family; sampled free variables at 0 and 1",
                free.len()
            ));
            let k = free.len().min(6);
            (0..1u64 << k)
                .map(|m| {
                    let mut x = particular.clone();
                    for (j, d) in directions.iter().enumerate().take(k) {
                        if m >> j & 1 == 1 {
                            for (xi, di) in x.iter_mut().zip(d) {
                                *xi += di;
                            }
                        }
                    }
                    x
                })
                .collect()
        }
    };
    (solutions, warnings)
}

fn consistent(f: &Formulation, mask: u64, x: &[Rational]) -> bool {
    f.exprs.iter().enumerate().all(|(e_idx, e)| {
        let l = e.left.eval(x);
        let r = e.right.eval(x);
        let ok_side = if mask >> e_idx & 1 == 1 {
            l <= r
        } else {
            r <= l
        };
        ok_side && !x[e.var].is_negative()
    })
}

fn reconstruct(sys: &FinancialSystem, f: &Formulation, x: &[Rational]) -> Vec<Rational> {
    let mut r: Vec<Rational> = f.rate.iter().map(|a| a.eval(x)).collect();
    let cds_assets: Vec<Rational> = f
        .cds_debtor_refs
        .iter()
        .map(|(i, _, _)| r[*i].clone())
        .collect();
    for ((i, reference, total), assets) in f.cds_debtor_refs.iter().zip(cds_assets) {
        let l = (Rational::one() - &r[*reference]) * total;
        r[*i] = recovery_from(&assets, &l);
    }
    debug_assert_eq!(r.len(), sys.len());
    r
}

/// Enumerates every branch assignment of the piecewise-linear map and returns all exact
/// clearing vectors found (deduplicated, sorted).
///
/// Requires the dedicated-CDS-debtor property, non-degeneracy and at most
/// `opts.max_min_expressions` min-expressions.
pub fn solve_dedicated_with(sys: &FinancialSystem, opts: &SolverOptions) -> Result<SolveReport> {
    let ded = check_dedicated_cds_debtor(sys);
    if !ded.ok {
        let msg: Vec<String> = ded
            .violations
            .iter()
            .map(|(b, why)| format!("{b}: {why}"))
            .collect();
        return Err(Error::NotDedicated(msg.join("; ")));
    }
    let nd = check_nondegenerate(sys);
    if !nd.ok {
        let msg: Vec<String> = nd
            .violations
            .iter()
            .map(|(b, why)| format!("{b}: {why}"))
            .collect();
        return Err(Error::Degenerate(msg.join("; ")));
    }
    let f = formulate(sys);
    let k = f.exprs.len();
    if k > opts.max_min_expressions || k >= 63 {
        return Err(Error::TooManyBranches {
            count: k,
            cap: opts.max_min_expressions,
        });
    }
    let found: Vec<(Vec<Rational>, u64, Vec<String>)> = (0..1u64 << k)
        .into_par_iter()
        .flat_map_iter(|mask| {
            let (cands, warnings) = branch_candidates(&f, mask);
            cands
                .into_iter()
                .filter(|x| consistent(&f, mask, x))
                .map(|x| reconstruct(sys, &f, &x))
                .filter(|r| r.iter().all(|v| !v.is_negative() && *v <= Rational::one()))
                .filter(|r| residual_of(sys, r).is_zero())
                .map(|r| (r, mask, warnings.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut unique: BTreeMap<Vec<Rational>, u64> = BTreeMap::new();
    let mut warnings: Vec<String> = Vec::new();
    for (r, mask, w) in found {
        unique.entry(r).or_insert(mask);
        for msg in w {
            if !warnings.contains(&msg) {
                warnings.push(msg);
            }
        }
    }
    let labels: Vec<String> = f.exprs.iter().map(|e| e.label.clone()).collect();
    let mut solutions = Vec::with_capacity(unique.len());
    let mut branches = Vec::with_capacity(unique.len());
    for (r, mask) in unique {
        solutions.push(RecoveryVector::rational(r)?);
        branches.push(BranchAssignment {
            labels: labels.clone(),
            flags: (0..k)
                .map(|e| {
                    if mask >> e & 1 == 1 {
                        Branch::Saturated
                    } else {
                        Branch::Interior
                    }
                })
                .collect(),
        });
    }
    let mut report = SolveReport::exact(SolverKind::Dedicated, solutions);
    report.branches = branches;
    report.warnings = warnings;
    report.check_bits(opts.bit_warning_threshold);
    Ok(report)
}

/// [`solve_dedicated_with`] using default options.
pub fn solve_dedicated(sys: &FinancialSystem) -> Result<SolveReport> {
    solve_dedicated_with(sys, &SolverOptions::default())
}

/// Checks that each flag of `branch` selects the minimal side at the solution `r`.
pub fn verify_branch(sys: &FinancialSystem, r: &[Rational], branch: &BranchAssignment) -> bool {
    let f = formulate(sys);
    if f.exprs.len() != branch.flags.len() || r.len() != sys.len() {
        return false;
    }
    // Recover the branch variables from the full rate vector. Payment expressions are
    // listed in the same order as the CDS contracts.
    let mut x = vec![Rational::zero(); f.nvars];
    let mut cds = sys.contracts().iter().filter(|c| c.is_cds());
    for e in &f.exprs {
        if let Some(id) = e.label.strip_prefix("r:") {
            match sys.index_of(id) {
                Ok(i) => x[e.var] = r[i].clone(),
                Err(_) => return false,
            }
        } else if let Some(c) = cds.next() {
            let reference = c.reference.expect("CDS contract has a reference");
            x[e.var] = &r[c.debtor] * (Rational::one() - &r[reference]) * &c.notional;
        }
    }
    f.exprs.iter().zip(&branch.flags).all(|(e, flag)| {
        let left = e.left.eval(&x);
        let right = e.right.eval(&x);
        match flag {
            Branch::Saturated => left <= right,
            Branch::Interior => right <= left,
        }
    })
}
