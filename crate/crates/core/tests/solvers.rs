use cdsclear::instances::{
    acyclic_cds_chain, irrational_cycle, multiple_equilibria, weakly_switched_cycle,
};
use cdsclear::model::{clearing_residual, is_clearing, RecoveryVector};
use cdsclear::numeric::{int, rat};
use cdsclear::solvers::{
    certify_strong, iterate_clearing, solve_acyclic, solve_dedicated, solve_dedicated_with,
    solve_no_weakly_switched, verify_branch, Reference, SolverKind, SolverOptions,
};
use cdsclear::{Error, Number};

fn rv(v: &[(i64, i64)]) -> RecoveryVector {
    RecoveryVector::rational(v.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
}

#[test]
fn acyclic_chain_matches_hand_computation() {
    let sys = acyclic_cds_chain();
    let report = solve_acyclic(&sys).unwrap();
    assert_eq!(report.solver, SolverKind::Acyclic);
    assert_eq!(report.solutions.len(), 1);
    assert_eq!(
        report.solutions[0].to_tuple_string(),
        "(2/3, 1, 2/3, 1, 1, 1)"
    );
    assert!(is_clearing(&sys, &report.solutions[0]).unwrap());
}

#[test]
fn acyclic_solver_rejects_cycles() {
    assert_eq!(
        solve_acyclic(&irrational_cycle()).unwrap_err(),
        Error::NotAcyclic
    );
}

#[test]
fn dedicated_solver_finds_all_three_equilibria() {
    let sys = multiple_equilibria(&rat(1, 100));
    let report = solve_dedicated(&sys).unwrap();
    let got: Vec<String> = report
        .solutions
        .iter()
        .map(|s| s.to_tuple_string())
        .collect();
    for want in [
        "(1, 1, 1, 1, 0, 1)",
        "(1, 48/49, 1, 1, 25/49, 1)",
        "(1, 0, 1, 1, 1, 1)",
    ] {
        assert!(got.iter().any(|g| g == want), "missing {want} in {got:?}");
    }
    assert_eq!(report.solutions.len(), report.branches.len());
    for (s, b) in report.solutions.iter().zip(&report.branches) {
        assert!(is_clearing(&sys, s).unwrap());
        assert!(verify_branch(&sys, &s.as_rationals().unwrap(), b));
    }
}

#[test]
fn dedicated_solver_honours_branch_cap() {
    let sys = multiple_equilibria(&rat(1, 100));
    let opts = SolverOptions {
        max_min_expressions: 1,
        ..SolverOptions::default()
    };
    assert!(matches!(
        solve_dedicated_with(&sys, &opts),
        Err(Error::TooManyBranches { .. })
    ));
}

#[test]
fn dedicated_solver_rejects_mixed_debtors() {
    assert!(matches!(
        solve_dedicated(&weakly_switched_cycle()),
        Err(Error::NotDedicated(_))
    ));
}

#[test]
fn iteration_converges_on_irrational_cycle() {
    let sys = irrational_cycle();
    let report = iterate_clearing(&sys, 1e-9, 100_000, 0.5).unwrap();
    assert!(report.converged);
    let target = 1.0 - std::f64::consts::SQRT_2 / 2.0;
    let r = report.solutions[0].to_f64s();
    for i in [1, 2, 5, 6] {
        assert!((r[i] - target).abs() < 1e-8, "bank {} = {}", i + 1, r[i]);
    }
}

#[test]
fn scc_procedure_refuses_weakly_switched_cycle() {
    let err = solve_no_weakly_switched(&weakly_switched_cycle()).unwrap_err();
    assert!(matches!(err, Error::WeaklySwitchedPresent(_)));
}

#[test]
fn scc_procedure_agrees_with_acyclic_solver() {
    let sys = acyclic_cds_chain();
    let a = solve_acyclic(&sys).unwrap();
    let b = solve_no_weakly_switched(&sys).unwrap();
    assert_eq!(a.solutions, b.solutions);
}

#[test]
fn residual_and_weak_points() {
    let sys = multiple_equilibria(&rat(1, 100));
    let exact = rv(&[(1, 1), (1, 1), (1, 1), (1, 1), (0, 1), (1, 1)]);
    assert_eq!(
        clearing_residual(&sys, &exact).unwrap(),
        Number::Rational(int(0))
    );
    let weak = rv(&[(1, 1), (49, 50), (1, 1), (1, 1), (51, 100), (1, 1)]);
    let res = clearing_residual(&sys, &weak)
        .unwrap()
        .as_rational()
        .unwrap();
    assert!(res <= rat(1, 100));
}

#[test]
fn strong_certification_uses_exact_references() {
    let sys = multiple_equilibria(&rat(1, 100));
    let near = rv(&[(1, 1), (97, 100), (1, 1), (1, 1), (1, 2), (1, 1)]);
    let eps = Number::Rational(rat(1, 10));
    assert!(certify_strong(&sys, &near, &eps, &Reference::Auto).unwrap());
    let weak = rv(&[(1, 1), (49, 50), (1, 1), (1, 1), (51, 100), (1, 1)]);
    let tiny = Number::Rational(rat(1, 100));
    // The weak point is far from (1,1,1,1,0,1) but close to the interior equilibrium.
    assert!(certify_strong(&sys, &weak, &tiny, &Reference::Auto).unwrap());
    let only_first = Reference::Given(vec![rv(&[(1, 1), (1, 1), (1, 1), (1, 1), (0, 1), (1, 1)])]);
    assert!(!certify_strong(&sys, &weak, &tiny, &only_first).unwrap());
}

#[test]
fn pinned_cds_debtor_still_waits_for_its_reference() {
    // The creditor is listed before the reference; with the debtor pinned, only the
    // reference → creditor dependency orders the two correctly.
    let sys = cdsclear::SystemBuilder::new()
        .bank("a", int(0))
        .bank("d", int(1))
        .bank("k", rat(1, 2))
        .bank("s", int(0))
        .debt("a", "s", int(1))
        .debt("k", "s", int(1))
        .debt("d", "s", int(1))
        .cds("d", "a", "k", int(1))
        .build()
        .unwrap();
    let r = cdsclear::solvers::propagate_pinned(&sys, &[(1, rat(1, 2))]).unwrap();
    assert_eq!(r, vec![rat(1, 4), rat(1, 2), rat(1, 2), int(1)]);
}
