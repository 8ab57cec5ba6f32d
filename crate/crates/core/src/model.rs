//! Financial-system data model, the clearing map and verification of recovery vectors.
//!
//! A system consists of banks with non-negative external assets and two kinds of
//! contracts: debts (unconditional) and credit default swaps (payable in proportion to
//! `1 − r_R` of a reference bank `R`). For a recovery vector `r` the model evaluates
//!
//! * liabilities `l_i(r) = Σ_j [ c^∅_ij + Σ_k (1 − r_k) c^k_ij ]`,
//! * payments `p_ij(r) = r_i · l_ij(r)` and assets `a_i(r) = e_i + Σ_j p_ji(r)`,
//! * the clearing map `f_i(r) = a_i(r) / max{l_i(r), a_i(r)}` with `f_i = 1` when
//!   `a_i = l_i = 0`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{format_rational, QuadraticSurd, Rational, Scalar};

/// A bank: opaque string id plus external assets `e_i ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bank {
    /// Opaque identifier.
    pub id: String,
    /// External assets.
    pub external_assets: Rational,
}

/// A debt contract (`reference = None`) or a CDS written on `reference`.
///
/// Bank fields are dense indices into [`FinancialSystem::banks`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contract {
    /// Paying bank.
    pub debtor: usize,
    /// Receiving bank.
    pub creditor: usize,
    /// Reference bank for a CDS.
    pub reference: Option<usize>,
    /// Face value.
    pub notional: Rational,
}

impl Contract {
    /// Whether this is a credit default swap.
    pub fn is_cds(&self) -> bool {
        self.reference.is_some()
    }
}

/// The triplet `(N, e, c)`: banks, external assets and contracts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinancialSystem {
    banks: Vec<Bank>,
    contracts: Vec<Contract>,
    index: HashMap<String, usize>,
}

impl FinancialSystem {
    /// Builds a system from banks and index-based contracts, validating indices, signs and
    /// participant distinctness. The result is not merged; see [`normalize_system`].
    pub fn new(banks: Vec<Bank>, contracts: Vec<Contract>) -> Result<Self> {
        let mut index = HashMap::with_capacity(banks.len());
        for (i, b) in banks.iter().enumerate() {
            if b.external_assets.is_negative() {
                return Err(Error::InvalidSystem(format!(
                    "bank `{}` has negative external assets",
                    b.id
                )));
            }
            if index.insert(b.id.clone(), i).is_some() {
                return Err(Error::InvalidSystem(format!(
                    "duplicate bank id `{}`",
                    b.id
                )));
            }
        }
        let n = banks.len();
        for c in &contracts {
            let ids = [Some(c.debtor), Some(c.creditor), c.reference];
            if ids.iter().flatten().any(|&k| k >= n) {
                return Err(Error::UnknownBank(format!("index out of range in {c:?}")));
            }
            if c.notional.is_negative() {
                return Err(Error::MalformedContract(format!(
                    "negative notional on {} → {}",
                    banks[c.debtor].id, banks[c.creditor].id
                )));
            }
            if c.debtor == c.creditor {
                return Err(Error::MalformedContract(format!(
                    "self-contract on bank `{}`",
                    banks[c.debtor].id
                )));
            }
            if let Some(r) = c.reference {
                if r == c.debtor || r == c.creditor {
                    return Err(Error::MalformedContract(format!(
                        "CDS ({}, {}, {}) has non-distinct participants",
                        banks[c.debtor].id, banks[c.creditor].id, banks[r].id
                    )));
                }
            }
        }
        Ok(Self {
            banks,
            contracts,
            index,
        })
    }

    /// Banks in input order.
    pub fn banks(&self) -> &[Bank] {
        &self.banks
    }

    /// Contracts.
    pub fn contracts(&self) -> &[Contract] {
        &self.contracts
    }

    /// Number of banks.
    pub fn len(&self) -> usize {
        self.banks.len()
    }

    /// Whether the system has no banks.
    pub fn is_empty(&self) -> bool {
        self.banks.is_empty()
    }

    /// Dense index of a bank id.
    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownBank(id.to_string()))
    }

    /// Id of the bank at a dense index.
    pub fn id(&self, i: usize) -> &str {
        &self.banks[i].id
    }

    /// Bank ids in index order.
    pub fn ids(&self) -> Vec<String> {
        self.banks.iter().map(|b| b.id.clone()).collect()
    }

    /// External assets of bank `i`.
    pub fn external_assets(&self, i: usize) -> &Rational {
        &self.banks[i].external_assets
    }

    /// Contracts where `i` is the debtor.
    pub fn outgoing(&self, i: usize) -> impl Iterator<Item = &Contract> {
        self.contracts.iter().filter(move |c| c.debtor == i)
    }

    /// Banks that write at least one CDS.
    pub fn cds_debtors(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .contracts
            .iter()
            .filter(|c| c.is_cds())
            .map(|c| c.debtor)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Banks that serve as reference of at least one CDS.
    pub fn reference_banks(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.contracts.iter().filter_map(|c| c.reference).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Convenience builder using string ids; [`SystemBuilder::build`] returns a normalized
/// system.
#[derive(Clone, Debug, Default)]
pub struct SystemBuilder {
    banks: Vec<Bank>,
    contracts: Vec<(String, String, Option<String>, Rational)>,
}

impl SystemBuilder {
    /// Empty builder.
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a bank.
    pub fn bank(mut self, id: impl Into<String>, external_assets: Rational) -> Self {
        self.banks.push(Bank {
            id: id.into(),
            external_assets,
        });
        self
    }

    /// Adds a debt contract.
    pub fn debt(mut self, debtor: &str, creditor: &str, notional: Rational) -> Self {
        self.contracts
            .push((debtor.into(), creditor.into(), None, notional));
        self
    }

    /// Adds a CDS written by `debtor` to `creditor` on `reference`.
    pub fn cds(
        mut self,
        debtor: &str,
        creditor: &str,
        reference: &str,
        notional: Rational,
    ) -> Self {
        self.contracts.push((
            debtor.into(),
            creditor.into(),
            Some(reference.into()),
            notional,
        ));
        self
    }

    /// Validates and normalizes.
    pub fn build(self) -> Result<FinancialSystem> {
        let lookup: HashMap<&str, usize> = self
            .banks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.id.as_str(), i))
            .collect();
        let find = |id: &str| -> Result<usize> {
            lookup
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownBank(id.to_string()))
        };
        let mut contracts = Vec::with_capacity(self.contracts.len());
        for (d, c, r, n) in &self.contracts {
            contracts.push(Contract {
                debtor: find(d)?,
                creditor: find(c)?,
                reference: r.as_deref().map(find).transpose()?,
                notional: n.clone(),
            });
        }
        normalize_system(&FinancialSystem::new(self.banks, contracts)?)
    }
}

/// Merges duplicate contracts on the same pair/triple by summing notionals, drops
/// zero-notional contracts and orders contracts by `(debtor, creditor, reference)`.
///
/// Self-contracts and CDSes with non-distinct participants are rejected with
/// [`Error::MalformedContract`] (already at construction time).
pub fn normalize_system(sys: &FinancialSystem) -> Result<FinancialSystem> {
    let mut merged: BTreeMap<(usize, usize, Option<usize>), Rational> = BTreeMap::new();
    for c in &sys.contracts {
        *merged
            .entry((c.debtor, c.creditor, c.reference))
            .or_insert_with(Rational::zero) += &c.notional;
    }
    let contracts = merged
        .into_iter()
        .filter(|(_, n)| !n.is_zero())
        .map(|((debtor, creditor, reference), notional)| Contract {
            debtor,
            creditor,
            reference,
            notional,
        })
        .collect();
    FinancialSystem::new(sys.banks.clone(), contracts)
}

// ---------------------------------------------------------------------------
// Generic evaluation
// ---------------------------------------------------------------------------

/// Liability carried by a single contract under `r`: its notional for debts and
/// `(1 − r_R)·c` for a CDS on `R`.
pub fn contract_liability<S: Scalar>(c: &Contract, r: &[S]) -> S {
    let n = S::from_rational(&c.notional);
    match c.reference {
        None => n,
        Some(k) => S::one_value().sub(&r[k]).mul(&n),
    }
}

/// Total liabilities `l_i(r)` of every bank.
pub fn liabilities_of<S: Scalar>(sys: &FinancialSystem, r: &[S]) -> Vec<S> {
    let mut l = vec![S::zero_value(); sys.len()];
    for c in &sys.contracts {
        l[c.debtor] = l[c.debtor].add(&contract_liability(c, r));
    }
    l
}

/// Assets `a_i(r)` of every bank.
pub fn assets_of<S: Scalar>(sys: &FinancialSystem, r: &[S]) -> Vec<S> {
    let mut a: Vec<S> = sys
        .banks
        .iter()
        .map(|b| S::from_rational(&b.external_assets))
        .collect();
    for c in &sys.contracts {
        let p = r[c.debtor].mul(&contract_liability(c, r));
        a[c.creditor] = a[c.creditor].add(&p);
    }
    a
}

/// Resolves `min{1, a/l}` with the convention `1` for `l = 0`.
pub fn recovery_from<S: Scalar>(assets: &S, liability: &S) -> S {
    if liability.is_zero_value() || !(liability > assets) {
        S::one_value()
    } else {
        assets.div(liability)
    }
}

/// The clearing map `f(r)`.
pub fn clearing_map_of<S: Scalar>(sys: &FinancialSystem, r: &[S]) -> Vec<S> {
    let l = liabilities_of(sys, r);
    let a = assets_of(sys, r);
    a.iter().zip(&l).map(|(a, l)| recovery_from(a, l)).collect()
}

/// `‖r − f(r)‖∞` in the scalar type of `r`.
pub fn residual_of<S: Scalar>(sys: &FinancialSystem, r: &[S]) -> S {
    let f = clearing_map_of(sys, r);
    r.iter().zip(&f).fold(S::zero_value(), |acc, (x, y)| {
        acc.max_of(&x.sub(y).abs_val())
    })
}

// ---------------------------------------------------------------------------
// Modes and vectors
// ---------------------------------------------------------------------------

/// Numeric mode of a vector or value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Exact rationals.
    Rational,
    /// Exact quadratic surds over one radicand.
    Surd,
    /// Double precision floats.
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Rational => "rational",
            Mode::Surd => "surd",
            Mode::Float => "float",
        })
    }
}

/// A single value in one of the three modes.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    /// Exact rational.
    Rational(Rational),
    /// Exact surd.
    Surd(QuadraticSurd),
    /// Float.
    Float(f64),
}

impl Number {
    /// Mode of the value.
    pub fn mode(&self) -> Mode {
        match self {
            Number::Rational(_) => Mode::Rational,
            Number::Surd(_) => Mode::Surd,
            Number::Float(_) => Mode::Float,
        }
    }

    /// Floating approximation.
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Rational(q) => q.to_f64(),
            Number::Surd(s) => s.to_f64(),
            Number::Float(x) => *x,
        }
    }

    /// Exact rational value, when the number is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Number::Rational(q) => Some(q.clone()),
            Number::Surd(s) => s.to_rational(),
            Number::Float(_) => None,
        }
    }

    /// Exact comparison for exact modes, float comparison otherwise.
    pub fn compare(&self, other: &Number) -> Option<Ordering> {
        match (self, other) {
            (Number::Float(_), _) | (_, Number::Float(_)) => {
                self.to_f64().partial_cmp(&other.to_f64())
            }
            _ => self.to_surd().partial_cmp(&other.to_surd()),
        }
    }

    fn to_surd(&self) -> QuadraticSurd {
        match self {
            Number::Rational(q) => QuadraticSurd::from_rational(q.clone()),
            Number::Surd(s) => s.clone(),
            Number::Float(_) => unreachable!("float has no surd form"),
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Rational(q) => f.write_str(&format_rational(q)),
            Number::Surd(s) => write!(f, "{s}"),
            Number::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Vector payload of a [`RecoveryVector`].
#[derive(Clone, Debug, PartialEq)]
pub enum Values {
    /// Exact rationals.
    Rational(Vec<Rational>),
    /// Exact surds sharing one radicand.
    Surd(Vec<QuadraticSurd>),
    /// Floats.
    Float(Vec<f64>),
}

impl Values {
    /// Number of entries.
    pub fn len(&self) -> usize {
        match self {
            Values::Rational(v) => v.len(),
            Values::Surd(v) => v.len(),
            Values::Float(v) => v.len(),
        }
    }

    /// Whether empty.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Recovery rates in `[0,1]` for each bank, in the bank index order of a system.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryVector {
    values: Values,
}

fn check_unit<S: Scalar>(v: &[S]) -> Result<()> {
    for (i, x) in v.iter().enumerate() {
        let ok = matches!(
            x.partial_cmp(&S::zero_value()),
            Some(Ordering::Greater | Ordering::Equal)
        ) && matches!(
            x.partial_cmp(&S::one_value()),
            Some(Ordering::Less | Ordering::Equal)
        );
        if !ok {
            return Err(Error::InvalidVector(format!(
                "entry {i} = {x:?} is outside [0,1]"
            )));
        }
    }
    Ok(())
}

impl RecoveryVector {
    /// Exact rational vector; entries must lie in `[0,1]`.
    pub fn rational(values: Vec<Rational>) -> Result<Self> {
        check_unit(&values)?;
        Ok(Self {
            values: Values::Rational(values),
        })
    }

    /// Exact surd vector; entries must lie in `[0,1]` and share one radicand.
    pub fn surd(values: Vec<QuadraticSurd>) -> Result<Self> {
        let mut radicand: Option<&BigInt> = None;
        for v in &values {
            if v.is_rational() {
                continue;
            }
            match radicand {
                None => radicand = Some(v.radicand()),
                Some(d) if d == v.radicand() => {}
                Some(d) => {
                    return Err(Error::RadicandMismatch(format!(
                        "vector mixes sqrt({d}) and sqrt({})",
                        v.radicand()
                    )))
                }
            }
        }
        check_unit(&values)?;
        Ok(Self {
            values: Values::Surd(values),
        })
    }

    /// Float vector; entries must lie in `[0,1]`.
    pub fn float(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|x| x.is_nan()) {
            return Err(Error::InvalidVector("NaN entry".into()));
        }
        check_unit(&values)?;
        Ok(Self {
            values: Values::Float(values),
        })
    }

    /// The all-ones rational vector of length `n`.
    pub fn ones(n: usize) -> Self {
        Self {
            values: Values::Rational(vec![Rational::one(); n]),
        }
    }

    /// Payload.
    pub fn values(&self) -> &Values {
        &self.values
    }

    /// Mode.
    pub fn mode(&self) -> Mode {
        match self.values {
            Values::Rational(_) => Mode::Rational,
            Values::Surd(_) => Mode::Surd,
            Values::Float(_) => Mode::Float,
        }
    }

    /// Length.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Whether empty.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry `i`.
    pub fn get(&self, i: usize) -> Number {
        match &self.values {
            Values::Rational(v) => Number::Rational(v[i].clone()),
            Values::Surd(v) => Number::Surd(v[i].clone()),
            Values::Float(v) => Number::Float(v[i]),
        }
    }

    /// Entry of bank `id`.
    pub fn get_by_id(&self, sys: &FinancialSystem, id: &str) -> Result<Number> {
        Ok(self.get(sys.index_of(id)?))
    }

    /// Exact rational entries, if the vector is rational (or a surd vector without
    /// irrational entries).
    pub fn as_rationals(&self) -> Option<Vec<Rational>> {
        match &self.values {
            Values::Rational(v) => Some(v.clone()),
            Values::Surd(v) => v.iter().map(|s| s.to_rational()).collect(),
            Values::Float(_) => None,
        }
    }

    /// Entries promoted to surds (rational and surd modes only).
    pub fn to_surds(&self) -> Option<Vec<QuadraticSurd>> {
        match &self.values {
            Values::Rational(v) => Some(v.iter().cloned().map(QuadraticSurd::from).collect()),
            Values::Surd(v) => Some(v.clone()),
            Values::Float(_) => None,
        }
    }

    /// Floating approximation of every entry.
    pub fn to_f64s(&self) -> Vec<f64> {
        match &self.values {
            Values::Rational(v) => v.iter().map(Scalar::to_f64).collect(),
            Values::Surd(v) => v.iter().map(QuadraticSurd::to_f64).collect(),
            Values::Float(v) => v.clone(),
        }
    }

    /// Formats as `(v1, v2, ...)`.
    pub fn to_tuple_string(&self) -> String {
        let parts: Vec<String> = (0..self.len()).map(|i| self.get(i).to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for RecoveryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tuple_string())
    }
}

fn check_len(sys: &FinancialSystem, r: &RecoveryVector) -> Result<()> {
    if r.len() != sys.len() {
        return Err(Error::InvalidVector(format!(
            "vector has {} entries but the system has {} banks",
            r.len(),
            sys.len()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

macro_rules! dispatch {
    ($r:expr, |$v:ident| $body:expr, $wrap_r:path, $wrap_s:path, $wrap_f:path) => {
        match $r.values() {
            Values::Rational($v) => $wrap_r($body),
            Values::Surd($v) => $wrap_s($body),
            Values::Float($v) => $wrap_f($body),
        }
    };
}

/// Total liabilities `l_i(r)` of bank `id`.
pub fn total_liability(sys: &FinancialSystem, r: &RecoveryVector, id: &str) -> Result<Number> {
    check_len(sys, r)?;
    let i = sys.index_of(id)?;
    Ok(dispatch!(
        r,
        |v| liabilities_of(sys, v)[i].clone(),
        Number::Rational,
        Number::Surd,
        Number::Float
    ))
}

/// Assets `a_i(r)` of bank `id`.
pub fn assets(sys: &FinancialSystem, r: &RecoveryVector, id: &str) -> Result<Number> {
    check_len(sys, r)?;
    let i = sys.index_of(id)?;
    Ok(dispatch!(
        r,
        |v| assets_of(sys, v)[i].clone(),
        Number::Rational,
        Number::Surd,
        Number::Float
    ))
}

/// The clearing map `f(r)`, in the mode of `r`.
pub fn clearing_map(sys: &FinancialSystem, r: &RecoveryVector) -> Result<RecoveryVector> {
    check_len(sys, r)?;
    let values = dispatch!(
        r,
        |v| clearing_map_of(sys, v),
        Values::Rational,
        Values::Surd,
        Values::Float
    );
    Ok(RecoveryVector { values })
}

/// `‖r − f(r)‖∞`, in the mode of `r`.
pub fn clearing_residual(sys: &FinancialSystem, r: &RecoveryVector) -> Result<Number> {
    check_len(sys, r)?;
    Ok(dispatch!(
        r,
        |v| residual_of(sys, v),
        Number::Rational,
        Number::Surd,
        Number::Float
    ))
}

/// Whether `r` is an exact fixed point of the clearing map. Requires an exact mode.
pub fn is_clearing(sys: &FinancialSystem, r: &RecoveryVector) -> Result<bool> {
    if r.mode() == Mode::Float {
        return Err(Error::ModeMismatch(
            "exact clearing check on a float vector".into(),
        ));
    }
    let res = clearing_residual(sys, r)?;
    Ok(match res {
        Number::Rational(q) => q.is_zero(),
        Number::Surd(s) => s.is_zero(),
        Number::Float(_) => unreachable!(),
    })
}

/// Whether `r` is a weak ε-approximate fixed point, `‖r − f(r)‖∞ < ε` (strict).
pub fn is_weak_eps(sys: &FinancialSystem, r: &RecoveryVector, eps: &Number) -> Result<bool> {
    let res = clearing_residual(sys, r)?;
    Ok(res.compare(eps) == Some(Ordering::Less))
}

/// `‖r1 − r2‖∞`, promoting rational → surd → float as needed.
pub fn distance_inf(r1: &RecoveryVector, r2: &RecoveryVector) -> Result<Number> {
    if r1.len() != r2.len() {
        return Err(Error::InvalidVector(
            "vectors have different lengths".into(),
        ));
    }
    let mode = r1.mode().max(r2.mode());
    Ok(match mode {
        Mode::Rational => {
            let (a, b) = (r1.as_rationals().unwrap(), r2.as_rationals().unwrap());
            Number::Rational(a.iter().zip(&b).fold(Rational::zero(), |m, (x, y)| {
                m.max_of(&Scalar::abs_val(&(x - y)))
            }))
        }
        Mode::Surd => {
            let (a, b) = (r1.to_surds().unwrap(), r2.to_surds().unwrap());
            let mut best = QuadraticSurd::from_rational(Rational::zero());
            for (x, y) in a.iter().zip(&b) {
                let diff = x.checked_sub(y)?;
                let d = Scalar::abs_val(&diff);
                if d.checked_sub(&best)?.signum() == Ordering::Greater {
                    best = d;
                }
            }
            Number::Surd(best)
        }
        Mode::Float => {
            let (a, b) = (r1.to_f64s(), r2.to_f64s());
            Number::Float(
                a.iter()
                    .zip(&b)
                    .fold(0.0f64, |m, (x, y)| m.max((x - y).abs())),
            )
        }
    })
}

// ---------------------------------------------------------------------------
// Non-degeneracy
// ---------------------------------------------------------------------------

/// Which non-degeneracy condition a bank violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DegeneracyCondition {
    /// A CDS debtor with zero external assets and no positive debt obligation.
    CdsDebtorWithoutFunding,
    /// A reference bank without a positive debt obligation.
    ReferenceWithoutDebt,
}

impl fmt::Display for DegeneracyCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegeneracyCondition::CdsDebtorWithoutFunding => {
                "CDS debtor has no external assets and no debt contract"
            }
            DegeneracyCondition::ReferenceWithoutDebt => {
                "reference bank is not the debtor of any debt contract"
            }
        })
    }
}

/// Outcome of [`check_nondegenerate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonDegeneracyReport {
    /// `true` iff there are no violations.
    pub ok: bool,
    /// Violations as `(bank id, condition)`.
    pub violations: Vec<(String, DegeneracyCondition)>,
}

/// Checks the two non-degeneracy conditions: every CDS debtor has positive external assets
/// or is debtor of a positive debt contract, and every reference bank is debtor of a
/// positive debt contract.
pub fn check_nondegenerate(sys: &FinancialSystem) -> NonDegeneracyReport {
    let n = sys.len();
    let mut has_debt = vec![false; n];
    for c in sys.contracts() {
        if !c.is_cds() && c.notional.is_positive() {
            has_debt[c.debtor] = true;
        }
    }
    let mut violations = Vec::new();
    for i in sys.cds_debtors() {
        if !sys.external_assets(i).is_positive() && !has_debt[i] {
            violations.push((
                sys.id(i).to_string(),
                DegeneracyCondition::CdsDebtorWithoutFunding,
            ));
        }
    }
    for k in sys.reference_banks() {
        if !has_debt[k] {
            violations.push((
                sys.id(k).to_string(),
                DegeneracyCondition::ReferenceWithoutDebt,
            ));
        }
    }
    NonDegeneracyReport {
        ok: violations.is_empty(),
        violations,
    }
}
