//! Shared generators for the integration tests.
#![allow(dead_code)]

use cdsclear::circuits::{gate_interval, Circuit, CircuitBuilder, GateKind, Interval};
use cdsclear::numeric::{rat, Rational};
use num_traits::One;
use rand::Rng;

/// Random small rational `p/q` with `q ∈ {1,2,3,4}` in `[lo, hi]`.
pub fn small_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rational {
    let q = rng.gen_range(1..=4);
    let p = rng.gen_range(lo * q..=hi * q);
    rat(p, q)
}

/// Random circuit over `{+, −, ·, max, min, constants}` with `n_inputs` inputs and `ops`
/// random operations, each output clamped into `[0,1]` by `min(1, max(0, ·))` so that the
/// circuit is a self-map of the unit cube.
pub fn random_source_circuit<R: Rng>(rng: &mut R, n_inputs: usize, ops: usize) -> Circuit {
    let mut b = CircuitBuilder::new();
    let mut pool: Vec<usize> = (0..n_inputs).map(|_| b.input()).collect();
    for _ in 0..ops {
        let pick = |rng: &mut R, pool: &[usize]| pool[rng.gen_range(0..pool.len())];
        let g = match rng.gen_range(0..6) {
            0 => b.constant(small_rational(rng, -2, 2)),
            1 => {
                let (x, y) = (pick(rng, &pool), pick(rng, &pool));
                b.add(x, y)
            }
            2 => {
                let (x, y) = (pick(rng, &pool), pick(rng, &pool));
                b.sub(x, y)
            }
            3 => {
                let (x, y) = (pick(rng, &pool), pick(rng, &pool));
                b.mul(x, y)
            }
            4 => {
                let (x, y) = (pick(rng, &pool), pick(rng, &pool));
                b.max(x, y)
            }
            _ => {
                let (x, y) = (pick(rng, &pool), pick(rng, &pool));
                b.min(x, y)
            }
        };
        pool.push(g);
    }
    let zero = b.constant(rat(0, 1));
    let one = b.constant(rat(1, 1));
    for k in 0..n_inputs {
        let s = pool[pool.len() - 1 - (k % pool.len())];
        let lower = b.max(s, zero);
        let clamped = b.min(lower, one);
        b.output(clamped);
    }
    b.build().expect("generated circuit is valid")
}

/// Random normalized single-input circuit with at most `max_gates` gates: operations are
/// drawn from `{+, ·, |·−·|, scale, const}` and rejected whenever the interval pass would
/// leave `[0,1]`. The last gate is the output.
pub fn random_normalized_circuit<R: Rng>(rng: &mut R, max_gates: usize) -> Circuit {
    let mut b = CircuitBuilder::new();
    let x = b.input();
    let mut pool = vec![x];
    let mut ranges: Vec<Interval> = vec![Interval::new(rat(0, 1), rat(1, 1))];
    let target = rng.gen_range(2..=max_gates.max(2));
    let mut attempts = 0;
    while pool.len() < target && attempts < 200 {
        attempts += 1;
        let a = rng.gen_range(0..pool.len());
        let c = rng.gen_range(0..pool.len());
        let (kind, ops): (GateKind, Vec<usize>) = match rng.gen_range(0..6) {
            0 => (GateKind::Const(small_rational(rng, 0, 1)), vec![]),
            1 => (GateKind::Add, vec![a, c]),
            2 | 3 => (GateKind::Mul, vec![a, c]),
            4 => (GateKind::AbsDiff, vec![a, c]),
            _ => (GateKind::ScaleConst(small_rational(rng, 0, 1)), vec![a]),
        };
        let iv = gate_interval(&kind, &ops.iter().map(|&o| &ranges[o]).collect::<Vec<_>>());
        if iv.hi > Rational::one() {
            continue;
        }
        let g = b.push(kind, ops.iter().map(|&o| pool[o]).collect());
        pool.push(g);
        ranges.push(iv);
    }
    b.output(*pool.last().expect("non-empty"));
    b.build().expect("generated circuit is valid")
}

/// Random system with `n` banks and up to `m` contracts (about a third of them CDSes),
/// notionals and assets drawn from small rationals. With `acyclic` every auxiliary arc
/// goes from a lower to a higher bank index, so the auxiliary graph is a DAG.
pub fn random_system<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    acyclic: bool,
) -> cdsclear::FinancialSystem {
    use cdsclear::model::{Bank, Contract};
    let banks: Vec<Bank> = (0..n)
        .map(|i| Bank {
            id: format!("b{i}"),
            external_assets: small_rational(rng, 0, 2),
        })
        .collect();
    let mut contracts = Vec::new();
    for _ in 0..m {
        let cds = n >= 3 && rng.gen_bool(0.35);
        let notional = loop {
            let q = small_rational(rng, 0, 2);
            if q > rat(0, 1) {
                break q;
            }
        };
        let mut pick = |k: usize| -> Vec<usize> {
            let mut v: Vec<usize> = Vec::new();
            while v.len() < k {
                let x = rng.gen_range(0..n);
                if !v.contains(&x) {
                    v.push(x);
                }
            }
            if acyclic {
                v.sort_unstable();
            }
            v
        };
        let contract = if cds {
            // Sorted triples give reference < debtor < creditor.
            let v = pick(3);
            Contract {
                debtor: v[1],
                creditor: v[2],
                reference: Some(v[0]),
                notional,
            }
        } else {
            let v = pick(2);
            Contract {
                debtor: v[0],
                creditor: v[1],
                reference: None,
                notional,
            }
        };
        contracts.push(contract);
    }
    cdsclear::FinancialSystem::new(banks, contracts).expect("generated system is valid")
}
