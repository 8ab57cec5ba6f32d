//! Acceptance criteria, one PASS/FAIL line each. Run with `cargo test --test acceptance`.

mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cdsclear::analysis::{
    build_auxiliary_graph, find_strongly_switched_cycle, find_weakly_switched_cycle, is_acyclic,
    switch_class_of, ArcColor, AuxiliaryGraph, SwitchClass,
};
use cdsclear::circuits::{eval_circuit_f64, Circuit, CircuitBuilder};
use cdsclear::cli::{run, Cli};
use cdsclear::compiler::{
    build_harness, compile_circuit, gadget_clearing_check, instantiate_gadget, plant_inputs,
    GadgetKind, HarnessMethod,
};
use cdsclear::fragments::{
    assign_arithmetic, compose_cycle, emit_financial_system, fibonacci, fibonacci_map,
    solve_cycle_closed_form, FragmentString, MoebiusTransform,
};
use cdsclear::instances::{
    acyclic_cds_chain, irrational_cycle, multiple_equilibria, weakly_switched_cycle,
};
use cdsclear::io::write_instance;
use cdsclear::model::{
    check_nondegenerate, clearing_residual, distance_inf, is_clearing, is_weak_eps,
    normalize_system, RecoveryVector,
};
use cdsclear::numeric::{int, rat, QuadraticSurd, Rational};
use cdsclear::solvers::{
    iterate_clearing, solve_acyclic, solve_acyclic_with, solve_dedicated, solve_no_weakly_switched,
    SolverOptions, DEFAULT_DAMPING,
};
use cdsclear::{Error, Number};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || {
        format!("{what} took {took:?}, limit {limit:?}")
    })
}

fn rv(v: &[(i64, i64)]) -> RecoveryVector {
    RecoveryVector::rational(v.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
}

fn golden() -> QuadraticSurd {
    QuadraticSurd::new(rat(3, 2), rat(-1, 2), 5.into()).unwrap()
}

/// 1. Example 1 solved through the command-line front end.
fn example_one() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("example1.json");
    write_instance(&path, &acyclic_cds_chain()).map_err(|e| e.to_string())?;
    let cli = Cli::try_parse_from([
        "cdsclear",
        "solve",
        path.to_str().unwrap(),
        "--mode",
        "rational",
    ])
    .map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    let code = run(&cli, &mut out).map_err(|e| e.to_string())?;
    let text = String::from_utf8(out).map_err(|e| e.to_string())?;
    ensure(code == 0, || format!("exit code {code}"))?;
    ensure(text.contains("solver: acyclic"), || text.clone())?;
    ensure(text.contains("solution 1: (2/3, 1, 2/3, 1, 1, 1)"), || {
        text.clone()
    })?;
    within(start, Duration::from_secs(1), "solve")?;
    Ok(format!(
        "(2/3, 1, 2/3, 1, 1, 1) via acyclic in {:?}",
        start.elapsed()
    ))
}

/// 2. Irrational benchmark: iteration against 1 − √2/2, and the quadratic checked exactly.
fn irrational_benchmark() -> Outcome {
    let start = Instant::now();
    let sys = irrational_cycle();
    let report =
        iterate_clearing(&sys, 1e-9, 100_000, DEFAULT_DAMPING).map_err(|e| e.to_string())?;
    ensure(report.converged, || "iteration did not converge".into())?;
    let target = 1.0 - std::f64::consts::SQRT_2 / 2.0;
    let mut worst: f64 = 0.0;
    for id in ["2", "3", "6", "7"] {
        let v = report.solutions[0]
            .get_by_id(&sys, id)
            .map_err(|e| e.to_string())?
            .to_f64();
        worst = worst.max((v - target).abs());
    }
    ensure(worst <= 1e-8, || format!("deviation {worst:e}"))?;
    // r ↦ (4r − 1)/(2r) has the fixed-point equation 2r² − 4r + 1 = 0.
    let map = MoebiusTransform::new(int(4), int(-1), int(2), int(0)).map_err(|e| e.to_string())?;
    let fixed = map
        .fixed_points_in_unit_interval()
        .map_err(|e| e.to_string())?;
    let expected = QuadraticSurd::new(int(1), rat(-1, 2), 2.into()).unwrap();
    ensure(fixed == vec![expected.clone()], || {
        format!("fixed points {fixed:?}")
    })?;
    let r = &fixed[0];
    let two = QuadraticSurd::from_rational(int(2));
    let four = QuadraticSurd::from_rational(int(4));
    let one = QuadraticSurd::from_rational(int(1));
    let quad = two
        .checked_mul(&r.checked_mul(r).unwrap())
        .and_then(|a| a.checked_sub(&four.checked_mul(r).unwrap()))
        .and_then(|a| a.checked_add(&one))
        .map_err(|e| e.to_string())?;
    ensure(quad.is_zero(), || format!("2r² − 4r + 1 = {quad}"))?;
    within(start, Duration::from_secs(1), "benchmark")?;
    Ok(format!(
        "max deviation {worst:.1e}; 2r² − 4r + 1 = 0 exactly at r = {expected}"
    ))
}

/// 3. Weak approximation far from the exact fixed point.
fn weak_versus_strong() -> Outcome {
    let sys = multiple_equilibria(&rat(1, 100));
    let exact = rv(&[(1, 1), (1, 1), (1, 1), (1, 1), (0, 1), (1, 1)]);
    let perturbed = rv(&[(1, 1), (49, 50), (1, 1), (1, 1), (51, 100), (1, 1)]);
    let zero = clearing_residual(&sys, &exact).map_err(|e| e.to_string())?;
    ensure(zero == Number::Rational(int(0)), || {
        format!("residual of exact point {zero}")
    })?;
    let res = clearing_residual(&sys, &perturbed).map_err(|e| e.to_string())?;
    ensure(
        res.compare(&Number::Rational(rat(1, 100)))
            .is_some_and(|o| o.is_le()),
        || format!("residual {res}"),
    )?;
    let dist = distance_inf(&exact, &perturbed).map_err(|e| e.to_string())?;
    ensure(dist == Number::Rational(rat(51, 100)), || {
        format!("distance {dist}")
    })?;
    ensure(
        dist.compare(&Number::Rational(rat(1, 2)))
            .is_some_and(|o| o.is_gt()),
        || "distance ≤ 1/2".into(),
    )?;
    // Strict weak test: just above the residual passes.
    let weak = is_weak_eps(&sys, &perturbed, &Number::Rational(rat(101, 10_000)))
        .map_err(|e| e.to_string())?;
    ensure(weak, || "not weakly approximate at 101/10000".into())?;
    Ok(format!(
        "residual(r) = 0, residual(r′) = {res} ≤ 1/100, ‖r′ − r‖∞ = {dist} > 1/2"
    ))
}

/// 4. Every equilibrium of the multiple-equilibria system, checked against a scan of the reduced
/// two-variable map `r₂ = min(1, 2(1 − r₅))`, `r₅ = min(1, 25(1 − r₂))`.
fn multiplicity_oracle() -> Outcome {
    let sys = multiple_equilibria(&rat(1, 100));
    let report = solve_dedicated(&sys).map_err(|e| e.to_string())?;
    let sols = &report.solutions;
    for want in [
        rv(&[(1, 1), (1, 1), (1, 1), (1, 1), (0, 1), (1, 1)]),
        rv(&[(1, 1), (48, 49), (1, 1), (1, 1), (25, 49), (1, 1)]),
    ] {
        ensure(sols.contains(&want), || format!("missing {want}"))?;
    }
    for s in sols {
        ensure(is_clearing(&sys, s).map_err(|e| e.to_string())?, || {
            format!("{s} not clearing")
        })?;
    }
    let phi = |r5: f64| {
        let r2 = (2.0 * (1.0 - r5)).min(1.0);
        (25.0 * (1.0 - r2)).min(1.0) - r5
    };
    let step = 1e-6;
    let n = (1.0 / step) as usize;
    let mut roots: Vec<f64> = Vec::new();
    let mut prev = phi(0.0);
    if prev == 0.0 {
        roots.push(0.0);
    }
    for k in 1..=n {
        let x = k as f64 * step;
        let y = phi(x);
        if y == 0.0 {
            roots.push(x);
        } else if prev != 0.0 && (prev < 0.0) != (y < 0.0) {
            let (mut lo, mut hi) = (x - step, x);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if (phi(mid) < 0.0) == (phi(lo) < 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = y;
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 10.0 * step);
    let mut found: Vec<f64> = sols.iter().map(|s| s.get(4).to_f64()).collect();
    found.sort_by(f64::total_cmp);
    ensure(found.len() == roots.len(), || {
        format!("solver {found:?} vs scan {roots:?}")
    })?;
    for (a, b) in found.iter().zip(&roots) {
        ensure((a - b).abs() <= 1e-6, || {
            format!("solver {found:?} vs scan {roots:?}")
        })?;
    }
    Ok(format!(
        "{} exact equilibria, matching the scan at r₅ ∈ {roots:.6?}",
        sols.len()
    ))
}

/// 5. Closed form of k copies of g1a′ and iteration on the emitted instances.
fn fragment_closed_form() -> Outcome {
    let mut iterated = Vec::new();
    for k in 1..=8 {
        let string = vec!["g1a"; k].join(".");
        let cycle = assign_arithmetic(
            &FragmentString::parse(&string)
                .unwrap()
                .close_cycle()
                .unwrap(),
        )
        .map_err(|e| e.to_string())?;
        let r = solve_cycle_closed_form(&cycle).map_err(|e| e.to_string())?;
        ensure(r == golden(), || format!("k = {k}: {r}"))?;
        // A single g1 fragment cannot be realized (its only junction would reference itself).
        if k == 1 {
            continue;
        }
        let sys = emit_financial_system(&cycle).map_err(|e| e.to_string())?;
        let rep =
            iterate_clearing(&sys, 1e-12, 100_000, DEFAULT_DAMPING).map_err(|e| e.to_string())?;
        let v0 = rep.solutions[0]
            .get_by_id(&sys, "v0")
            .map_err(|e| e.to_string())?
            .to_f64();
        ensure((v0 - golden().to_f64()).abs() <= 1e-8, || {
            format!("k = {k}: iterate {v0}")
        })?;
        iterated.push(k);
    }
    // Fibonacci identity: the k-fold composition of (1 − r)/(2 − r) has coefficients
    // (−f_{k−2}, f_k, −f_k, f_{k+2}) up to scale; checked k ≤ 12.
    for k in 1..=12i64 {
        let cycle = assign_arithmetic(
            &FragmentString::parse(&vec!["g1a"; k as usize].join("."))
                .unwrap()
                .close_cycle()
                .unwrap(),
        )
        .map_err(|e| e.to_string())?;
        let m = compose_cycle(&cycle).map_err(|e| e.to_string())?;
        ensure(m.equivalent(&fibonacci_map(k)), || {
            format!("k = {k}: {m} vs {}", fibonacci_map(k))
        })?;
    }
    ensure(fibonacci(24) == 46368.into(), || "Fibonacci numbers".into())?;
    Ok(format!("(3 − √5)/2 for k = 1..8; iteration agrees on emitted k = {iterated:?}; Fibonacci identity k ≤ 12"))
}

/// 6. Weakly switched cycle: iteration, classification and refusal of the SCC procedure.
fn weakly_switched_golden() -> Outcome {
    let sys = weakly_switched_cycle();
    let rep = iterate_clearing(&sys, 1e-12, 100_000, DEFAULT_DAMPING).map_err(|e| e.to_string())?;
    let r = rep.solutions[0]
        .get_by_id(&sys, "R")
        .map_err(|e| e.to_string())?
        .to_f64();
    ensure((r - golden().to_f64()).abs() <= 1e-8, || {
        format!("r_R = {r}")
    })?;
    let aux = build_auxiliary_graph(&sys);
    ensure(find_weakly_switched_cycle(&aux).is_some(), || {
        "no weakly switched cycle".into()
    })?;
    ensure(find_strongly_switched_cycle(&aux).is_none(), || {
        "unexpected strongly switched cycle".into()
    })?;
    match solve_no_weakly_switched(&sys) {
        Err(Error::WeaklySwitchedPresent(c)) => Ok(format!(
            "r_R = {r:.10}; weakly (not strongly) switched; refused on {c}"
        )),
        other => Err(format!("SCC procedure returned {other:?}")),
    }
}

/// 7. Gadget catalog on the grid and non-degeneracy of every kind.
fn gadget_suite() -> Outcome {
    let grid: Vec<Rational> = (0..=4).map(|k| rat(k, 4)).collect();
    let mut checks = 0;
    for kind in GadgetKind::catalog() {
        let points: Vec<Vec<Rational>> = match kind.arity() {
            0 => vec![vec![]],
            1 => grid.iter().map(|x| vec![x.clone()]).collect(),
            2 => grid
                .iter()
                .flat_map(|x| grid.iter().map(move |y| vec![x.clone(), y.clone()]))
                .collect(),
            k => vec![vec![rat(1, 2 * k as i64); k], vec![rat(1, k as i64); k]],
        };
        for x in points {
            // Keep sums and scalings in range, as the compiler guarantees for its callers.
            let admissible = match &kind {
                GadgetKind::Add(_) => x.iter().fold(int(0), |a, b| a + b) <= int(1),
                GadgetKind::ScaleRationalGuarded(q) => q * &x[0] <= int(1),
                _ => true,
            };
            if !admissible {
                continue;
            }
            let rep =
                gadget_clearing_check(&kind, &x).map_err(|e| format!("{kind} at {x:?}: {e}"))?;
            match rep.method {
                HarnessMethod::Iterate => ensure(rep.residual.to_f64() <= 1e-12, || {
                    format!("{kind}: residual {}", rep.residual)
                })?,
                _ => ensure(
                    rep.residual == Number::Rational(int(0)) || rep.residual.to_f64() == 0.0,
                    || format!("{kind}: residual {}", rep.residual),
                )?,
            }
            checks += 1;
        }
        let t = instantiate_gadget(&kind, true).map_err(|e| e.to_string())?;
        let h = build_harness(&t, &vec![rat(1, 2); t.inputs.len()]).map_err(|e| e.to_string())?;
        let nd = check_nondegenerate(&h.system).ok;
        ensure(nd == !kind.is_degenerate(), || {
            format!("{kind}: non-degenerate = {nd}")
        })?;
    }
    for kind in [GadgetKind::DegenerateMul, GadgetKind::DegenerateDiv] {
        let t = instantiate_gadget(&kind, true).map_err(|e| e.to_string())?;
        let h = build_harness(&t, &vec![rat(1, 2); t.inputs.len()]).map_err(|e| e.to_string())?;
        ensure(!check_nondegenerate(&h.system).ok, || {
            format!("{kind} passed the non-degeneracy check")
        })?;
    }
    Ok(format!(
        "{} kinds, {checks} grid checks; degenerate kinds rejected",
        GadgetKind::catalog().len()
    ))
}

/// Fixed points of a single-input circuit on `[0,1]` by a grid of step `step` plus bisection.
/// A run of grid points where the circuit is exactly the identity is represented by its
/// two ends and its midpoint.
fn circuit_fixed_points(c: &Circuit, step: f64) -> Vec<f64> {
    let g = |x: f64| eval_circuit_f64(c, &[x]).expect("circuit evaluates")[0] - x;
    let n = (1.0 / step).round() as usize;
    let mut roots = Vec::new();
    let mut run: Option<(f64, f64)> = None;
    let close_run = |run: &mut Option<(f64, f64)>, roots: &mut Vec<f64>| {
        if let Some((a, b)) = run.take() {
            roots.push(a);
            if b > a {
                roots.push(0.5 * (a + b));
                roots.push(b);
            }
        }
    };
    let mut prev = f64::NAN;
    for k in 0..=n {
        let x = (k as f64 * step).min(1.0);
        let y = g(x);
        if y == 0.0 {
            run = Some(run.map_or((x, x), |(a, _)| (a, x)));
        } else {
            close_run(&mut run, &mut roots);
            if prev != 0.0 && !prev.is_nan() && (prev < 0.0) != (y < 0.0) {
                let (mut lo, mut hi) = (x - step, x);
                let lo_neg = prev < 0.0;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if (g(mid) < 0.0) == lo_neg {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
        }
        prev = y;
    }
    close_run(&mut run, &mut roots);
    roots
}

/// 8. Compiler round-trip on random normalized circuits.
fn compiler_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut planted, mut worst_res, mut iterated, mut worst_fix) = (0, 0.0f64, 0, 0.0f64);
    for i in 0..50 {
        let c = support::random_normalized_circuit(&mut rng, 10);
        let (sys, map) = compile_circuit(&c).map_err(|e| format!("circuit {i}: {e}"))?;
        let roots = circuit_fixed_points(&c, 1e-6);
        ensure(!roots.is_empty(), || {
            format!("circuit {i}: no fixed point found")
        })?;
        for &x in &roots {
            let r = plant_inputs(&sys, &map, &[x]).map_err(|e| e.to_string())?;
            let res = clearing_residual(&sys, &r)
                .map_err(|e| e.to_string())?
                .to_f64();
            ensure(res <= 1e-9, || {
                format!("circuit {i}: planted {x} has residual {res:e}")
            })?;
            worst_res = worst_res.max(res);
            planted += 1;
        }
        let rep =
            iterate_clearing(&sys, 1e-12, 100_000, DEFAULT_DAMPING).map_err(|e| e.to_string())?;
        if rep.converged {
            let x = rep.solutions[0]
                .get_by_id(&sys, &map.inputs[0])
                .map_err(|e| e.to_string())?
                .to_f64();
            let gap = (eval_circuit_f64(&c, &[x]).map_err(|e| e.to_string())?[0] - x).abs();
            ensure(gap <= 1e-6, || {
                format!("circuit {i}: iterate maps to x = {x} with |C(x) − x| = {gap:e}")
            })?;
            worst_fix = worst_fix.max(gap);
            iterated += 1;
        }
    }
    ensure(iterated > 0, || {
        "iteration converged on no compiled circuit".into()
    })?;
    within(start, Duration::from_secs(60), "round trip")?;
    Ok(format!(
        "{planted} planted fixed points, max residual {worst_res:.1e}; {iterated}/50 iterations map back within {worst_fix:.1e}; {:?}",
        start.elapsed()
    ))
}

/// Existence of weakly / strongly switched simple cycles by exhaustive enumeration.
fn brute_force_switched(aux: &AuxiliaryGraph) -> (bool, bool) {
    fn dfs(
        aux: &AuxiliaryGraph,
        start: usize,
        x: usize,
        reds: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        found: &mut (bool, bool),
    ) {
        for &(y, color) in aux.out_arcs(x) {
            let red = color == ArcColor::Red;
            if red {
                reds.push(y);
            }
            if y == start {
                let on = |v: &usize| switch_class_of(aux, *v) == SwitchClass::On;
                found.0 |= reds.iter().any(on);
                found.1 |= !reds.is_empty() && reds.iter().all(on);
            } else if y > start && !on_path[y] {
                on_path[y] = true;
                dfs(aux, start, y, reds, on_path, found);
                on_path[y] = false;
            }
            if red {
                reds.pop();
            }
        }
    }
    let mut found = (false, false);
    for s in 0..aux.len() {
        let mut on_path = vec![false; aux.len()];
        on_path[s] = true;
        dfs(aux, s, s, &mut Vec::new(), &mut on_path, &mut found);
    }
    found
}

/// 9. Detection equivalence and solver cross-checks.
fn detection_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut switched = 0;
    for i in 0..200 {
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(1..=2 * n);
        let sys = normalize_system(&support::random_system(&mut rng, n, m, false))
            .map_err(|e| e.to_string())?;
        let aux = build_auxiliary_graph(&sys);
        let (weak, strong) = brute_force_switched(&aux);
        let got = (
            find_weakly_switched_cycle(&aux).is_some(),
            find_strongly_switched_cycle(&aux).is_some(),
        );
        ensure(got == (weak, strong), || {
            format!(
                "system {i}: detection {got:?}, enumeration {:?}",
                (weak, strong)
            )
        })?;
        switched += usize::from(weak);
    }
    let mut acyclic = 0;
    for i in 0..200 {
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(0..=2 * n);
        let sys = normalize_system(&support::random_system(&mut rng, n, m, true))
            .map_err(|e| e.to_string())?;
        ensure(is_acyclic(&build_auxiliary_graph(&sys)), || {
            format!("system {i} is cyclic")
        })?;
        let a = solve_acyclic(&sys).map_err(|e| e.to_string())?;
        let b = solve_no_weakly_switched(&sys).map_err(|e| e.to_string())?;
        ensure(a.solutions == b.solutions, || {
            format!("acyclic system {i}: solvers disagree")
        })?;
        acyclic += 1;
    }
    Ok(format!("200 random systems ({switched} with weakly switched cycles) agree; {acyclic} acyclic cross-checks exact"))
}

fn squaring_chain(stages: usize) -> Circuit {
    let mut b = CircuitBuilder::new();
    let _x = b.input();
    let mut g = b.constant(rat(1, 2));
    for _ in 0..stages {
        g = b.mul(g, g);
    }
    b.output(g);
    b.build().expect("valid chain")
}

/// 10. Exponential coefficient growth along a squaring chain.
fn coefficient_growth() -> Outcome {
    let opts = SolverOptions::default();
    let (sys3, map3) = compile_circuit(&squaring_chain(3)).map_err(|e| e.to_string())?;
    let rep3 = solve_acyclic_with(&sys3, &opts).map_err(|e| e.to_string())?;
    let out = map3.outputs[0].clone();
    let v = rep3.solutions[0]
        .get_by_id(&sys3, &out)
        .map_err(|e| e.to_string())?;
    ensure(v == Number::Rational(rat(1, 256)), || {
        format!("3-stage output {v}")
    })?;
    ensure(rep3.warnings.is_empty(), || {
        format!("3-stage warnings {:?}", rep3.warnings)
    })?;
    let (sys6, map6) = compile_circuit(&squaring_chain(6)).map_err(|e| e.to_string())?;
    let rep6 = solve_acyclic_with(&sys6, &opts).map_err(|e| e.to_string())?;
    let v6 = rep6.solutions[0]
        .get_by_id(&sys6, &map6.outputs[0])
        .map_err(|e| e.to_string())?;
    let want = Rational::one() / Rational::from_integer(num_bigint::BigInt::one() << 64usize);
    ensure(v6 == Number::Rational(want), || {
        format!("6-stage output {v6}")
    })?;
    let warning = rep6
        .warnings
        .iter()
        .find(|w| w.contains("coefficient growth"));
    ensure(warning.is_some(), || {
        format!("no bit-size warning: {:?}", rep6.warnings)
    })?;
    ensure(!v6.as_rational().unwrap().is_zero(), || "underflow".into())?;
    Ok(format!(
        "1/256 after 3 stages; 6 stages give 2^-64 with \"{}\"",
        warning.unwrap()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Example 1 golden solve", example_one),
        ("irrational benchmark", irrational_benchmark),
        ("weak vs strong approximation", weak_versus_strong),
        ("multiplicity oracle", multiplicity_oracle),
        ("fragment closed form", fragment_closed_form),
        ("weakly switched cycle golden test", weakly_switched_golden),
        ("gadget semantics suite", gadget_suite),
        ("compiler round trip", compiler_round_trip),
        ("detection equivalence", detection_equivalence),
        ("coefficient-growth witness", coefficient_growth),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} — {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} — {why}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
