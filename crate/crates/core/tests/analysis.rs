mod support;

use cdsclear::analysis::{
    build_auxiliary_graph, build_contract_graph, check_dedicated_cds_debtor,
    check_simple_strongly_switched, export_dot, find_simple_strongly_switched_cycle,
    find_strongly_switched_cycle, find_weakly_switched_cycle, is_acyclic, scc_condensation,
    switch_classes, ArcColor, AuxiliaryGraph, CycleArc, CycleWitness, SimpleSearch, SwitchClass,
    DEFAULT_CYCLE_CAP,
};
use cdsclear::instances::{
    acyclic_cds_chain, irrational_cycle, multiple_equilibria, weakly_switched_cycle,
};
use cdsclear::model::normalize_system;
use cdsclear::numeric::{int, rat};
use cdsclear::solvers::{solve_acyclic, solve_no_weakly_switched};
use cdsclear::SystemBuilder;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every simple directed cycle of the auxiliary graph, one entry per choice of arc colors,
/// found by plain depth-first search from each cycle's smallest node.
fn all_simple_cycles(aux: &AuxiliaryGraph) -> Vec<Vec<CycleArc>> {
    fn dfs(
        aux: &AuxiliaryGraph,
        start: usize,
        x: usize,
        path: &mut Vec<CycleArc>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<Vec<CycleArc>>,
    ) {
        for &(y, color) in aux.out_arcs(x) {
            let arc = CycleArc {
                from: x,
                to: y,
                color,
            };
            if y == start {
                let mut cycle = path.clone();
                cycle.push(arc);
                out.push(cycle);
            } else if y > start && !on_path[y] {
                on_path[y] = true;
                path.push(arc);
                dfs(aux, start, y, path, on_path, out);
                path.pop();
                on_path[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..aux.len() {
        let mut on_path = vec![false; aux.len()];
        on_path[s] = true;
        dfs(aux, s, s, &mut Vec::new(), &mut on_path, &mut out);
    }
    out
}

/// Reachability matrix by Floyd–Warshall over the uncolored arcs.
fn reachability(aux: &AuxiliaryGraph) -> Vec<Vec<bool>> {
    let n = aux.len();
    let mut reach = vec![vec![false; n]; n];
    for (x, row) in reach.iter_mut().enumerate() {
        for &(y, _) in aux.out_arcs(x) {
            row[y] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

#[test]
fn switch_classes_of_the_irrational_cycle() {
    let sys = irrational_cycle();
    let aux = build_auxiliary_graph(&sys);
    let on: Vec<String> = switch_classes(&aux)
        .iter()
        .enumerate()
        .filter(|(_, c)| **c == SwitchClass::On)
        .map(|(i, _)| sys.id(i).to_string())
        .collect();
    assert_eq!(on, ["2", "7"]);
    let cycle = find_strongly_switched_cycle(&aux).expect("strongly switched cycle");
    assert_eq!(cycle.display(&aux), "2→3→7→6");
    assert!(cycle.verify(&aux));
    assert!(cycle.flags.strongly_switched);
}

#[test]
fn weakly_but_not_strongly_switched_cycle() {
    let aux = build_auxiliary_graph(&weakly_switched_cycle());
    let weak = find_weakly_switched_cycle(&aux).expect("weakly switched cycle");
    assert!(weak.flags.weakly_switched && !weak.flags.strongly_switched);
    assert!(find_strongly_switched_cycle(&aux).is_none());
}

#[test]
fn acyclic_chain_has_no_cycles() {
    let aux = build_auxiliary_graph(&acyclic_cds_chain());
    assert!(is_acyclic(&aux));
    assert!(find_weakly_switched_cycle(&aux).is_none());
    assert!(scc_condensation(&aux).nontrivial().next().is_none());
}

#[test]
fn contract_graph_splits_debts_and_cdses() {
    let g = build_contract_graph(&multiple_equilibria(&rat(1, 100)));
    assert_eq!(g.blue().count(), 2);
    assert_eq!(g.orange().count(), 2);
}

#[test]
fn dedicated_cds_debtor_check() {
    assert!(check_dedicated_cds_debtor(&multiple_equilibria(&rat(1, 100))).ok);
    let report = check_dedicated_cds_debtor(&irrational_cycle());
    assert!(!report.ok);
    let ids: Vec<&str> = report
        .violations
        .iter()
        .map(|(id, _)| id.as_str())
        .collect();
    assert_eq!(ids, ["2", "7"]);
}

#[test]
fn simple_condition_rejects_cycles_without_red_arcs() {
    let sys = SystemBuilder::new()
        .bank("a", int(1))
        .bank("b", int(0))
        .debt("a", "b", int(1))
        .debt("b", "a", int(1))
        .build()
        .unwrap();
    let aux = build_auxiliary_graph(&sys);
    let arcs = vec![
        CycleArc {
            from: 0,
            to: 1,
            color: ArcColor::Blue,
        },
        CycleArc {
            from: 1,
            to: 0,
            color: ArcColor::Blue,
        },
    ];
    let w = CycleWitness::new(&aux, arcs).unwrap();
    assert!(!w.flags.red);
    assert!(check_simple_strongly_switched(&aux, &w).is_err());
    assert!(CycleWitness::new(
        &aux,
        vec![CycleArc {
            from: 0,
            to: 1,
            color: ArcColor::Red
        }]
    )
    .is_err());
}

#[test]
fn dot_without_cdses_has_only_blue_arcs() {
    let sys = SystemBuilder::new()
        .bank("a", int(1))
        .bank("b", int(0))
        .bank("c", int(0))
        .debt("a", "b", rat(1, 2))
        .debt("b", "c", int(1))
        .build()
        .unwrap();
    let dot = export_dot(&sys);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("color=blue").count(), 2);
    assert!(!dot.contains("orange") && !dot.contains("red") && !dot.contains("dashed"));
}

#[test]
fn dot_marks_cdses_and_references() {
    let dot = export_dot(&acyclic_cds_chain());
    assert!(dot.contains("color=orange"));
    assert!(dot.contains("style=dashed"));
    assert!(dot.contains("color=red"));
    assert_eq!(
        dot,
        export_dot(&acyclic_cds_chain()),
        "output is deterministic"
    );
}

#[test]
fn detection_agrees_with_brute_force_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut weak_seen, mut strong_seen, mut simple_seen) = (0, 0, 0);
    for _ in 0..200 {
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(1..=2 * n);
        let sys = normalize_system(&support::random_system(&mut rng, n, m, false)).unwrap();
        let aux = build_auxiliary_graph(&sys);
        let flags: Vec<_> = all_simple_cycles(&aux)
            .into_iter()
            .map(|arcs| {
                CycleWitness::new(&aux, arcs)
                    .expect("enumerated cycle is valid")
                    .flags
            })
            .collect();
        let weak = flags.iter().any(|f| f.weakly_switched);
        let strong = flags.iter().any(|f| f.strongly_switched);
        let simple = flags.iter().any(|f| f.simple_strongly_switched);

        assert_eq!(is_acyclic(&aux), flags.is_empty());
        let found_weak = find_weakly_switched_cycle(&aux);
        assert_eq!(found_weak.is_some(), weak);
        if let Some(w) = found_weak {
            assert!(w.verify(&aux) && w.flags.weakly_switched);
        }
        let found_strong = find_strongly_switched_cycle(&aux);
        assert_eq!(found_strong.is_some(), strong);
        if let Some(w) = found_strong {
            assert!(w.verify(&aux) && w.flags.strongly_switched);
        }
        match find_simple_strongly_switched_cycle(&aux, DEFAULT_CYCLE_CAP) {
            SimpleSearch::Found(w) => {
                assert!(simple);
                assert!(w.verify(&aux) && w.flags.simple_strongly_switched);
                assert!(check_simple_strongly_switched(&aux, &w).unwrap());
            }
            SimpleSearch::NotFound => assert!(!simple),
            SimpleSearch::Inconclusive { .. } => panic!("cap reached on a small graph"),
        }

        let reach = reachability(&aux);
        let cond = scc_condensation(&aux);
        for x in 0..aux.len() {
            for y in 0..aux.len() {
                let same = cond.component_of[x] == cond.component_of[y];
                assert_eq!(same, x == y || (reach[x][y] && reach[y][x]));
            }
        }
        weak_seen += usize::from(weak);
        strong_seen += usize::from(strong);
        simple_seen += usize::from(simple);
    }
    assert!(
        weak_seen > 10 && strong_seen > 5 && simple_seen > 0,
        "generator exercises switched cycles"
    );
}

#[test]
fn acyclic_and_scc_solvers_agree_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(0..=2 * n);
        let sys = normalize_system(&support::random_system(&mut rng, n, m, true)).unwrap();
        assert!(is_acyclic(&build_auxiliary_graph(&sys)));
        let a = solve_acyclic(&sys).unwrap();
        let b = solve_no_weakly_switched(&sys).unwrap();
        assert_eq!(a.solutions, b.solutions);
    }
}
