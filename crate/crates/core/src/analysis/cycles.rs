//! Switched-cycle detection and the simple-strongly-switched condition.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use super::graph::{ArcColor, AuxiliaryGraph};
use super::scc::condense;
use super::switch::{switch_class_of, SwitchClass};
use crate::error::{Error, Result};

/// One arc of a cycle witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CycleArc {
    /// Tail.
    pub from: usize,
    /// Head.
    pub to: usize,
    /// Color.
    pub color: ArcColor,
}

/// Classification flags of a cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CycleFlags {
    /// Contains at least one red arc.
    pub red: bool,
    /// Some red arc has a switched-on head.
    pub weakly_switched: bool,
    /// Contains a red arc and every red arc has a switched-on head.
    pub strongly_switched: bool,
    /// Strongly switched and every red arc satisfies the exit conditions.
    pub simple_strongly_switched: bool,
}

/// A directed cycle of the auxiliary graph together with its classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWitness {
    /// Arcs in cycle order; `arcs[i].to == arcs[i+1].from` and the last arc closes the
    /// cycle.
    pub arcs: Vec<CycleArc>,
    /// Classification recomputed from the graph.
    pub flags: CycleFlags,
}

impl CycleWitness {
    /// Validates `arcs` as a simple directed cycle of `aux` and classifies it.
    pub fn new(aux: &AuxiliaryGraph, arcs: Vec<CycleArc>) -> Result<Self> {
        validate_cycle(aux, &arcs)?;
        let flags = classify_arcs(aux, &arcs);
        Ok(Self { arcs, flags })
    }

    /// Nodes in cycle order.
    pub fn nodes(&self) -> Vec<usize> {
        self.arcs.iter().map(|a| a.from).collect()
    }

    /// Re-checks that the witness is a cycle of `aux` with exactly the stored flags.
    pub fn verify(&self, aux: &AuxiliaryGraph) -> bool {
        validate_cycle(aux, &self.arcs).is_ok() && classify_arcs(aux, &self.arcs) == self.flags
    }

    /// Human-readable form such as `2→3→7→6`, rotated to start at the smallest node index.
    pub fn display(&self, aux: &AuxiliaryGraph) -> String {
        let nodes = self.nodes();
        let start = (0..nodes.len()).min_by_key(|&i| nodes[i]).unwrap_or(0);
        let rotated: Vec<&str> = (0..nodes.len())
            .map(|k| aux.ids()[nodes[(start + k) % nodes.len()]].as_str())
            .collect();
        rotated.join("→")
    }
}

impl fmt::Display for CycleFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = if self.simple_strongly_switched {
            "simple strongly switched"
        } else if self.strongly_switched {
            "strongly switched"
        } else if self.weakly_switched {
            "weakly switched"
        } else if self.red {
            "red"
        } else {
            "plain"
        };
        f.write_str(label)
    }
}

fn validate_cycle(aux: &AuxiliaryGraph, arcs: &[CycleArc]) -> Result<()> {
    if arcs.is_empty() {
        return Err(Error::NotACycle("empty arc list".into()));
    }
    let mut seen = BTreeSet::new();
    for (k, a) in arcs.iter().enumerate() {
        if a.from >= aux.len() || a.to >= aux.len() || !aux.has_arc(a.from, a.to, a.color) {
            return Err(Error::NotACycle(format!("arc {k} is not in the graph")));
        }
        let next = &arcs[(k + 1) % arcs.len()];
        if a.to != next.from {
            return Err(Error::NotACycle(format!(
                "arcs {k} and {} do not chain",
                k + 1
            )));
        }
        if !seen.insert(a.from) {
            return Err(Error::NotACycle("node repeated".into()));
        }
    }
    Ok(())
}

fn classify_arcs(aux: &AuxiliaryGraph, arcs: &[CycleArc]) -> CycleFlags {
    let reds: Vec<&CycleArc> = arcs.iter().filter(|a| a.color == ArcColor::Red).collect();
    let on = |a: &&CycleArc| switch_class_of(aux, a.to) == SwitchClass::On;
    let red = !reds.is_empty();
    let weakly_switched = reds.iter().any(on);
    let strongly_switched = red && reds.iter().all(on);
    let members: BTreeSet<usize> = arcs.iter().map(|a| a.from).collect();
    let simple_strongly_switched = strongly_switched
        && reds
            .iter()
            .all(|a| red_arc_has_exits(aux, &members, a.from, a.to));
    CycleFlags {
        red,
        weakly_switched,
        strongly_switched,
        simple_strongly_switched,
    }
}

/// Exit condition for one endpoint `x` of a red arc: a non-red arc `(x, y)` with `y ∉ C`;
/// if it is orange, some reference bank `R` of a CDS behind it lies outside `C` and has a
/// non-red outgoing arc to a node outside `C`.
fn has_exit(aux: &AuxiliaryGraph, members: &BTreeSet<usize>, x: usize) -> bool {
    aux.out_arcs(x).iter().any(|&(y, color)| {
        if members.contains(&y) {
            return false;
        }
        match color {
            ArcColor::Blue => true,
            ArcColor::Orange => aux.orange_references(x, y).any(|r| {
                !members.contains(&r)
                    && aux
                        .out_arcs(r)
                        .iter()
                        .any(|&(z, c)| c != ArcColor::Red && !members.contains(&z))
            }),
            ArcColor::Red => false,
        }
    })
}

fn red_arc_has_exits(aux: &AuxiliaryGraph, members: &BTreeSet<usize>, u: usize, v: usize) -> bool {
    has_exit(aux, members, u) && has_exit(aux, members, v)
}

/// Breadth-first search for a path `from ⇝ to` using arcs accepted by `allow`; prefers
/// blue over orange over red between the same pair of nodes.
fn bfs_path(
    aux: &AuxiliaryGraph,
    from: usize,
    to: usize,
    allow: &dyn Fn(usize, usize, ArcColor) -> bool,
) -> Option<Vec<CycleArc>> {
    let n = aux.len();
    let mut parent: Vec<Option<CycleArc>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = Vec::new();
            let mut cur = to;
            while cur != from {
                let arc = parent[cur].expect("bfs parent");
                path.push(arc);
                cur = arc.from;
            }
            path.reverse();
            return Some(path);
        }
        for &(y, color) in aux.out_arcs(x) {
            if !seen[y] && allow(x, y, color) {
                seen[y] = true;
                parent[y] = Some(CycleArc {
                    from: x,
                    to: y,
                    color,
                });
                queue.push_back(y);
            }
        }
    }
    None
}

fn search_red_cycles(aux: &AuxiliaryGraph, strongly: bool) -> Option<CycleWitness> {
    let on = |v: usize| switch_class_of(aux, v) == SwitchClass::On;
    let allow = |_: usize, y: usize, c: ArcColor| !strongly || c != ArcColor::Red || on(y);
    for &(u, v) in aux.red() {
        if !on(v) {
            continue;
        }
        if let Some(path) = bfs_path(aux, v, u, &allow) {
            let mut arcs = vec![CycleArc {
                from: u,
                to: v,
                color: ArcColor::Red,
            }];
            arcs.extend(path);
            return Some(CycleWitness::new(aux, arcs).expect("search yields a valid cycle"));
        }
    }
    None
}

/// A weakly switched cycle, if one exists: for each red arc `(u, v)` with `v` switched
/// on (in index order) test reachability `v ⇝ u` over all arcs.
pub fn find_weakly_switched_cycle(aux: &AuxiliaryGraph) -> Option<CycleWitness> {
    search_red_cycles(aux, false)
}

/// A strongly switched cycle, if one exists: the same search in the subgraph without red
/// arcs whose head is not switched on.
pub fn find_strongly_switched_cycle(aux: &AuxiliaryGraph) -> Option<CycleWitness> {
    search_red_cycles(aux, true)
}

/// Checks whether a strongly switched cycle is simple: for every red arc `(u, v)` both
/// endpoints have a non-red arc leaving the cycle, with the reference-bank side condition
/// for orange exits.
pub fn check_simple_strongly_switched(aux: &AuxiliaryGraph, c: &CycleWitness) -> Result<bool> {
    validate_cycle(aux, &c.arcs)?;
    let flags = classify_arcs(aux, &c.arcs);
    if !flags.red {
        return Err(Error::NotStronglySwitched("cycle has no red arc".into()));
    }
    if !flags.strongly_switched {
        return Err(Error::NotStronglySwitched(
            "a red arc has a head that is not switched on".into(),
        ));
    }
    Ok(flags.simple_strongly_switched)
}

/// Outcome of the exhaustive simple-strongly-switched search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimpleSearch {
    /// A qualifying cycle.
    Found(CycleWitness),
    /// All simple cycles were examined and none qualifies.
    NotFound,
    /// The cycle cap was reached before the search finished.
    Inconclusive {
        /// Number of simple cycles examined.
        examined: usize,
    },
}

/// Default cap on the number of simple cycles examined.
pub const DEFAULT_CYCLE_CAP: usize = 100_000;

/// Searches for a simple strongly switched cycle by enumerating the simple cycles of the
/// subgraph without red arcs into nodes that are not switched on. Worst-case exponential;
/// reports [`SimpleSearch::Inconclusive`] once `cap` cycles have been examined.
pub fn find_simple_strongly_switched_cycle(aux: &AuxiliaryGraph, cap: usize) -> SimpleSearch {
    let n = aux.len();
    let on: Vec<bool> = (0..n)
        .map(|v| switch_class_of(aux, v) == SwitchClass::On)
        .collect();
    let allowed = |_x: usize, y: usize, c: ArcColor| c != ArcColor::Red || on[y];
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let mut v: Vec<usize> = aux
                .out_arcs(x)
                .iter()
                .filter(|&&(y, c)| allowed(x, y, c))
                .map(|&(y, _)| y)
                .collect();
            v.dedup();
            v
        })
        .collect();
    let cond = condense(&adj);
    let mut examined = 0usize;
    let mut path = Vec::new();
    let mut on_path = vec![false; n];
    for s in 0..n {
        if cond.components[cond.component_of[s]].len() < 2 {
            continue;
        }
        let comp = cond.component_of[s];
        let mut result = None;
        let finished = enumerate_from(
            s,
            s,
            &adj,
            &|w| w > s && cond.component_of[w] == comp,
            &mut path,
            &mut on_path,
            &mut |cycle| {
                examined += 1;
                if let Some(w) = qualify_node_cycle(aux, &on, cycle) {
                    result = Some(w);
                    return false;
                }
                examined < cap
            },
        );
        if let Some(w) = result {
            return SimpleSearch::Found(w);
        }
        if !finished {
            return SimpleSearch::Inconclusive { examined };
        }
    }
    SimpleSearch::NotFound
}

/// Depth-first enumeration of simple cycles through `start`; `visit` returns `false` to
/// stop. Returns `false` when stopped early.
fn enumerate_from(
    start: usize,
    x: usize,
    adj: &[Vec<usize>],
    admissible: &dyn Fn(usize) -> bool,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    path.push(x);
    on_path[x] = true;
    for &y in &adj[x] {
        if y == start {
            if !visit(path) {
                path.pop();
                on_path[x] = false;
                return false;
            }
        } else if !on_path[y]
            && admissible(y)
            && !enumerate_from(start, y, adj, admissible, path, on_path, visit)
        {
            path.pop();
            on_path[x] = false;
            return false;
        }
    }
    path.pop();
    on_path[x] = false;
    true
}

/// Chooses arc colors for a node cycle so that it is simple strongly switched, if
/// possible.
fn qualify_node_cycle(aux: &AuxiliaryGraph, on: &[bool], nodes: &[usize]) -> Option<CycleWitness> {
    let members: BTreeSet<usize> = nodes.iter().copied().collect();
    let k = nodes.len();
    let pairs: Vec<(usize, usize)> = (0..k).map(|i| (nodes[i], nodes[(i + 1) % k])).collect();
    let non_red = |x: usize, y: usize| {
        if aux.has_arc(x, y, ArcColor::Blue) {
            Some(ArcColor::Blue)
        } else if aux.has_arc(x, y, ArcColor::Orange) {
            Some(ArcColor::Orange)
        } else {
            None
        }
    };
    let red_ok = |x: usize, y: usize| aux.has_arc(x, y, ArcColor::Red) && on[y];
    let forced: Vec<usize> = (0..k)
        .filter(|&i| non_red(pairs[i].0, pairs[i].1).is_none())
        .collect();
    let chosen_red: BTreeSet<usize> = if forced.is_empty() {
        let pick = (0..k).find(|&i| {
            let (x, y) = pairs[i];
            red_ok(x, y) && red_arc_has_exits(aux, &members, x, y)
        })?;
        BTreeSet::from([pick])
    } else {
        if !forced.iter().all(|&i| {
            let (x, y) = pairs[i];
            red_ok(x, y) && red_arc_has_exits(aux, &members, x, y)
        }) {
            return None;
        }
        forced.into_iter().collect()
    };
    let arcs = pairs
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| CycleArc {
            from: x,
            to: y,
            color: if chosen_red.contains(&i) {
                ArcColor::Red
            } else {
                non_red(x, y).unwrap()
            },
        })
        .collect();
    let w = CycleWitness::new(aux, arcs).ok()?;
    w.flags.simple_strongly_switched.then_some(w)
}
