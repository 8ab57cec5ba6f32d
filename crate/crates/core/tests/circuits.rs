mod support;

use cdsclear::circuits::{
    check_normalized, eliminate_min_max, eval_circuit, eval_gates, eval_is_exact,
    nonnegative_constants, normalize_pipeline, range_reduce, signal_bound,
    split_signs_instrumented, split_values, CircuitBuilder, GateKind,
};
use cdsclear::numeric::{int, rat, Rational};
use cdsclear::Error;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid() -> Vec<Rational> {
    (0..=4).map(|k| rat(k, 4)).collect()
}

#[test]
fn constant_circuit_ignores_input() {
    let mut b = CircuitBuilder::new();
    let _x = b.input();
    let h = b.constant(rat(1, 2));
    b.output(h);
    let c = b.build().unwrap();
    for x in grid() {
        assert_eq!(eval_circuit(&c, &[x]).unwrap(), vec![rat(1, 2)]);
    }
}

#[test]
fn max_identity_and_squaring() {
    let mut b = CircuitBuilder::new();
    let x = b.input();
    let y = b.input();
    let m = b.max(x, y);
    let s = b.add(x, y);
    let gap = b.abs_diff(x, y);
    let t = b.add(s, gap);
    let h = b.scale(rat(1, 2), t);
    b.output(m);
    b.output(h);
    let c = b.build().unwrap();
    let out = eval_circuit(&c, &[rat(3, 10), rat(7, 10)]).unwrap();
    assert_eq!(out, vec![rat(7, 10), rat(7, 10)]);

    let mut b = CircuitBuilder::new();
    let x = b.input();
    let sq = b.mul(x, x);
    b.output(sq);
    let c = b.build().unwrap();
    assert_eq!(eval_circuit(&c, &[rat(1, 2)]).unwrap(), vec![rat(1, 4)]);
}

#[test]
fn negative_square_root_is_reported() {
    let mut b = CircuitBuilder::new();
    let x = b.input();
    let one = b.constant(int(1));
    let neg = b.sub(x, one);
    let r = b.sqrt(neg);
    b.output(r);
    let c = b.build().unwrap();
    assert!(matches!(
        eval_circuit(&c, &[rat(1, 2)]),
        Err(Error::NegativeSqrtOperand(_))
    ));
    assert_eq!(eval_circuit(&c, &[int(1)]).unwrap(), vec![int(0)]);
}

#[test]
fn rejects_malformed_gate_lists() {
    use cdsclear::circuits::{Circuit, Gate};
    let bad_order = vec![
        Gate {
            id: "a".into(),
            kind: GateKind::Add,
            operands: vec![1, 1],
        },
        Gate {
            id: "x".into(),
            kind: GateKind::Input(0),
            operands: vec![],
        },
    ];
    assert!(matches!(
        Circuit::new(bad_order, vec![0]),
        Err(Error::InvalidCircuit(_))
    ));
    let dup = vec![
        Gate {
            id: "x".into(),
            kind: GateKind::Input(0),
            operands: vec![],
        },
        Gate {
            id: "x".into(),
            kind: GateKind::Sqrt,
            operands: vec![0],
        },
    ];
    assert!(matches!(
        Circuit::new(dup, vec![1]),
        Err(Error::InvalidCircuit(_))
    ));
    let arity = vec![
        Gate {
            id: "x".into(),
            kind: GateKind::Input(0),
            operands: vec![],
        },
        Gate {
            id: "m".into(),
            kind: GateKind::Mul,
            operands: vec![0],
        },
    ];
    assert!(matches!(
        Circuit::new(arity, vec![1]),
        Err(Error::InvalidCircuit(_))
    ));
}

#[test]
fn bound_of_adder_tree() {
    // Depth-3 tree of additions over constants 1: every level doubles the bound.
    let mut b = CircuitBuilder::new();
    let _x = b.input();
    let mut layer: Vec<usize> = (0..8).map(|_| b.constant(int(1))).collect();
    while layer.len() > 1 {
        layer = layer.chunks(2).map(|p| b.add(p[0], p[1])).collect();
    }
    b.output(layer[0]);
    let c = b.build().unwrap();
    let bound = signal_bound(&c);
    assert_eq!(bound.intervals[layer[0]].hi, int(8));
    assert_eq!(bound.d, 2);
}

#[test]
fn bound_of_single_input() {
    let mut b = CircuitBuilder::new();
    let x = b.input();
    b.output(x);
    let bound = signal_bound(&b.build().unwrap());
    assert_eq!(bound.intervals[0].hi, int(1));
    assert_eq!(bound.d, 0);
}

#[test]
fn bound_of_squaring_chain_is_strict() {
    for k in 0..=4u32 {
        let mut b = CircuitBuilder::new();
        let _x = b.input();
        let mut s = b.constant(int(2));
        for _ in 0..k {
            s = b.mul(s, s);
        }
        b.output(s);
        let c = b.build().unwrap();
        let value = eval_circuit(&c, &[int(0)]).unwrap()[0].clone();
        let expected = Rational::from_integer(num_bigint::BigInt::from(1) << (1usize << k));
        assert_eq!(value, expected);
        let bound = signal_bound(&c);
        assert_eq!(bound.intervals[s].hi, expected);
        assert_eq!(bound.d, k + 1);
    }
}

#[test]
fn identity_survives_normalization() {
    let mut b = CircuitBuilder::new();
    let x = b.input();
    b.output(x);
    let c = b.build().unwrap();
    let n = normalize_pipeline(&c).unwrap();
    for k in 0..10 {
        let x = rat(k, 9);
        let got = eval_circuit(&n, &[x.clone()]).unwrap()[0].clone();
        assert!((got - x).abs() < rat(1, 1_000_000_000_000));
    }
}

#[test]
fn max_of_x_and_complement_survives_normalization() {
    let mut b = CircuitBuilder::new();
    let x = b.input();
    let one = b.constant(int(1));
    let y = b.sub(one, x);
    let m = b.max(x, y);
    b.output(m);
    let c = b.build().unwrap();
    let n = normalize_pipeline(&c).unwrap();
    check_normalized(&n).unwrap();
    for x in grid() {
        let want = eval_circuit(&c, &[x.clone()]).unwrap()[0].clone();
        let got = eval_circuit(&n, &[x]).unwrap()[0].clone();
        assert!((want - got).abs() < rat(1, 1_000_000_000_000));
    }
}

#[test]
fn root_chain_divides_by_t_prime() {
    // t′ = 2^-(1+2^d) with d = 2 is 1/32; the chain maps t′·x back to x.
    let mut b = CircuitBuilder::new();
    let x = b.input();
    let mut s = x;
    for _ in 0..2 {
        s = b.sqrt(s);
    }
    s = b.scale(int(2), s);
    for _ in 0..2 {
        s = b.mul(s, s);
    }
    s = b.scale(int(2), s);
    b.output(s);
    let c = b.build().unwrap();
    let input = rat(1, 32) * rat(1, 2);
    let out = eval_circuit(&c, &[input]).unwrap()[0].clone();
    assert!((out - rat(1, 2)).abs() < rat(1, 1_000_000_000_000));
}

#[test]
fn self_map_violations_are_rejected() {
    let mut b = CircuitBuilder::new();
    let x = b.input();
    let two = b.constant(int(2));
    let y = b.add(x, two);
    b.output(y);
    let c = b.build().unwrap();
    assert!(matches!(
        normalize_pipeline(&c),
        Err(Error::NotSelfMapping(_))
    ));

    let mut b = CircuitBuilder::new();
    let x = b.input();
    let d = b.add(x, x);
    b.output(d);
    let c = b.build().unwrap();
    assert!(matches!(
        normalize_pipeline(&c),
        Err(Error::NotSelfMapping(_))
    ));
}

#[test]
fn square_roots_are_outside_the_source_basis() {
    let mut b = CircuitBuilder::new();
    let x = b.input();
    let r = b.sqrt(x);
    b.output(r);
    assert!(matches!(
        normalize_pipeline(&b.build().unwrap()),
        Err(Error::InvalidCircuit(_))
    ));
}

#[test]
fn min_max_elimination_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let c = support::random_source_circuit(&mut rng, 2, 6);
        let once = eliminate_min_max(&c).unwrap();
        let twice = eliminate_min_max(&once).unwrap();
        assert_eq!(once, twice);
        assert!(once
            .gates()
            .iter()
            .all(|g| !matches!(g.kind, GateKind::Max | GateKind::Min)));
    }
}

#[test]
fn sign_splitting_invariant_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let c = support::random_source_circuit(&mut rng, 2, 6);
        let pre = eliminate_min_max(&nonnegative_constants(&c).unwrap()).unwrap();
        let (split, points) = split_signs_instrumented(&pre).unwrap();
        for _ in 0..5 {
            let x: Vec<Rational> = (0..2)
                .map(|_| support::small_rational(&mut rng, 0, 1))
                .collect();
            let original = eval_gates(&pre, &x).unwrap();
            for (p, (pos, neg)) in points
                .iter()
                .zip(split_values(&split, &points, &x).unwrap())
            {
                assert!(!pos.is_negative() && !neg.is_negative());
                assert_eq!(&pos - &neg, original[p.gate].value);
            }
        }
        let subs: Vec<usize> = split
            .gates()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.kind == GateKind::Sub)
            .map(|(k, _)| k)
            .collect();
        assert!(subs.iter().all(|k| split.outputs().contains(k)));
    }
}

#[test]
fn normalization_is_equivalent_and_range_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tol = rat(1, 1_000_000_000_000);
    let mut checked = 0;
    for _ in 0..20 {
        let n_inputs = rng.gen_range(1..=2);
        let c = support::random_source_circuit(&mut rng, n_inputs, 5);
        let n = normalize_pipeline(&c).unwrap();
        check_normalized(&n).unwrap();
        assert!(n
            .gates()
            .iter()
            .all(|g| !matches!(g.kind, GateKind::Sub | GateKind::Max | GateKind::Min)));
        for _ in 0..5 {
            let x: Vec<Rational> = (0..n_inputs)
                .map(|_| support::small_rational(&mut rng, 0, 1))
                .collect();
            let want = eval_circuit(&c, &x).unwrap();
            let got = eval_circuit(&n, &x).unwrap();
            let exact = eval_is_exact(&n, &x).unwrap();
            for (w, g) in want.iter().zip(&got) {
                if exact {
                    assert_eq!(w, g);
                } else {
                    assert!((w - g).abs() <= tol, "{w} vs {g}");
                }
            }
            for v in eval_gates(&n, &x).unwrap() {
                assert!(
                    !v.value.is_negative() && v.value <= Rational::from_integer(1.into()) + &tol
                );
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 100);
}

#[test]
fn range_reduction_requires_split_circuits() {
    let mut b = CircuitBuilder::new();
    let x = b.input();
    let y = b.sub(x, x);
    b.output(y);
    assert!(range_reduce(&b.build().unwrap()).is_err());
    assert!(Rational::zero() < rat(1, 2));
}
