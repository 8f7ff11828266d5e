//! Closure of a set of Moufang loops under the cyclic and dihedral
//! constructions, up to isomorphism.
//!
//! The search runs in rounds. Each round takes the unprocessed classes,
//! enumerates their parameter tuples, applies them and matches the outputs
//! against the classes known at the start of the round (in parallel). A
//! serial merge in (class, tuple) order then registers new classes and
//! edges, so the graph does not depend on the number of threads.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::constructions::{find_all_params, Kind, Params};
use crate::loops::{find_isomorphism, Fingerprint, LoopInvariants};
use crate::par::Executor;
use crate::LoopTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplorerError {
    #[error("no seeds given")]
    NoSeeds,
    #[error("seeds have different orders")]
    MixedOrders,
    #[error("seed {0} is not a Moufang loop")]
    NotMoufang(usize),
}

#[derive(Debug, Clone)]
pub struct ClosureOptions {
    /// Keep associative outputs (groups) as classes.
    pub include_associative: bool,
    pub executor: Executor,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            include_associative: false,
            executor: Executor::sequential(),
        }
    }
}

/// An isomorphism class with its first-discovered representative.
#[derive(Debug, Clone)]
pub struct Node {
    pub id: usize,
    pub fingerprint: Fingerprint,
    pub table: LoopTable,
    pub nucleus: usize,
    pub associator_subloop: usize,
    pub associative: bool,
    pub seed: bool,
    invariants: LoopInvariants,
}

/// An undirected edge; `forward` maps the representative of `a` to a loop
/// isomorphic to `b`, `reverse` the other way.
#[derive(Debug, Clone)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub kind: Kind,
    pub forward: Params,
    pub reverse: Option<Params>,
}

/// Checks made on every application during the search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ApplicationStats {
    pub applications: usize,
    /// Outputs that are not Moufang.
    pub not_moufang: usize,
    /// Outputs whose associator triples differ from the input's.
    pub associator_changes: usize,
    /// Outputs at distance other than `n²/4` from the input.
    pub distance_failures: usize,
    /// Outputs isomorphic to their input.
    pub self_loops: usize,
    /// Associative outputs dropped because groups are excluded.
    pub associative_dropped: usize,
}

#[derive(Debug, Clone)]
pub struct ConstructionGraph {
    pub order: usize,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub seeds: Vec<usize>,
    pub stats: ApplicationStats,
}

struct Applied {
    source: usize,
    params: Params,
    table: LoopTable,
    invariants: LoopInvariants,
    matched: Option<usize>,
    moufang: bool,
    associative: bool,
    same_associators: bool,
    quarter: bool,
}

struct Registry {
    nodes: Vec<Node>,
    buckets: HashMap<Fingerprint, Vec<usize>>,
}

impl Registry {
    fn find(&self, t: &LoopTable, inv: &LoopInvariants, from: usize) -> Option<usize> {
        self.buckets.get(&inv.fingerprint)?.iter().copied().find(|&id| {
            id >= from && find_isomorphism(t, inv, &self.nodes[id].table, &self.nodes[id].invariants).is_some()
        })
    }

    fn add(&mut self, table: LoopTable, invariants: LoopInvariants, seed: bool) -> usize {
        let id = self.nodes.len();
        self.buckets.entry(invariants.fingerprint.clone()).or_default().push(id);
        self.nodes.push(Node {
            id,
            fingerprint: invariants.fingerprint.clone(),
            nucleus: invariants.fingerprint.nucleus,
            associator_subloop: invariants.fingerprint.associator_subloop,
            associative: invariants.fingerprint.nonassociating_triples == 0,
            seed,
            table,
            invariants,
        });
        id
    }
}

fn same_associators(a: &LoopTable, b: &LoopTable) -> bool {
    let n = a.order();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| a.associator(x, y, z) == b.associator(x, y, z))))
}

/// Breadth-first closure from `seeds` under both constructions.
pub fn closure(seeds: &[LoopTable], options: &ClosureOptions) -> Result<ConstructionGraph, ExplorerError> {
    let order = seeds.first().ok_or(ExplorerError::NoSeeds)?.order();
    for (i, s) in seeds.iter().enumerate() {
        if s.order() != order {
            return Err(ExplorerError::MixedOrders);
        }
        if !s.is_moufang() {
            return Err(ExplorerError::NotMoufang(i));
        }
    }
    let ex = &options.executor;
    let mut reg = Registry {
        nodes: Vec::new(),
        buckets: HashMap::new(),
    };
    let mut seed_ids = Vec::new();
    for (s, inv) in seeds.iter().zip(ex.map(seeds, LoopInvariants::compute)) {
        let id = match reg.find(s, &inv, 0) {
            Some(id) => id,
            None => reg.add(s.clone(), inv, true),
        };
        if !seed_ids.contains(&id) {
            seed_ids.push(id);
        }
    }

    let mut edges: BTreeMap<(usize, usize, Kind), Edge> = BTreeMap::new();
    let mut stats = ApplicationStats::default();
    let mut processed = 0;
    while processed < reg.nodes.len() {
        let frontier: Vec<usize> = (processed..reg.nodes.len()).collect();
        let snapshot = reg.nodes.len();
        processed = snapshot;

        let tasks: Vec<(usize, Params)> = ex
            .map(&frontier, |&id| find_all_params(&reg.nodes[id].table))
            .into_iter()
            .zip(&frontier)
            .flat_map(|(ps, &id)| ps.into_iter().map(move |p| (id, p)))
            .collect();
        let reg_ref = &reg;
        let applied: Vec<Applied> = ex.map(&tasks, |(source, params)| {
            let input = &reg_ref.nodes[*source].table;
            let table = params.apply_unchecked(input);
            let invariants = LoopInvariants::compute(&table);
            let associative = invariants.fingerprint.nonassociating_triples == 0;
            let matched = reg_ref.find(&table, &invariants, 0);
            Applied {
                source: *source,
                params: params.clone(),
                moufang: table.is_moufang(),
                associative,
                same_associators: same_associators(input, &table),
                quarter: 4 * input.distance(&table).unwrap_or(0) == order * order,
                matched,
                table,
                invariants,
            }
        });

        for a in applied {
            stats.applications += 1;
            stats.not_moufang += usize::from(!a.moufang);
            stats.associator_changes += usize::from(!a.same_associators);
            stats.distance_failures += usize::from(!a.quarter);
            if a.associative && !options.include_associative {
                stats.associative_dropped += 1;
                continue;
            }
            let target = match a.matched.or_else(|| reg.find(&a.table, &a.invariants, snapshot)) {
                Some(t) => t,
                None => reg.add(a.table, a.invariants, false),
            };
            if target == a.source {
                stats.self_loops += 1;
                continue;
            }
            let kind = a.params.kind();
            let key = (a.source.min(target), a.source.max(target), kind);
            match edges.get_mut(&key) {
                None => {
                    edges.insert(
                        key,
                        Edge {
                            a: a.source,
                            b: target,
                            kind,
                            forward: a.params,
                            reverse: None,
                        },
                    );
                }
                Some(e) if e.reverse.is_none() && e.a == target => e.reverse = Some(a.params),
                Some(_) => {}
            }
        }
    }
    Ok(ConstructionGraph {
        order,
        nodes: reg.nodes,
        edges: edges.into_values().collect(),
        seeds: seed_ids,
        stats,
    })
}

/// One connected component and its shared invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub nodes: Vec<usize>,
    pub size: usize,
    /// `|N|` of the first member.
    pub nucleus: usize,
    /// `|A(L)|` of the first member.
    pub associator_subloop: usize,
    /// Every member has the same `|N|` and `|A(L)|`.
    pub uniform: bool,
}

impl ConstructionGraph {
    /// Id of the class containing `t`, if any.
    pub fn find_class(&self, t: &LoopTable) -> Option<usize> {
        let inv = LoopInvariants::compute(t);
        self.nodes.iter().find_map(|n| {
            (n.fingerprint == inv.fingerprint && find_isomorphism(t, &inv, &n.table, &n.invariants).is_some())
                .then_some(n.id)
        })
    }

    /// Checks that no two classes are isomorphic (pairs with equal
    /// fingerprints are tested directly).
    pub fn classes_distinct(&self) -> bool {
        self.nodes.iter().enumerate().all(|(i, a)| {
            self.nodes[i + 1..].iter().all(|b| {
                a.fingerprint != b.fingerprint
                    || find_isomorphism(&a.table, &a.invariants, &b.table, &b.invariants).is_none()
            })
        })
    }

    /// Every edge has a witness in each direction.
    pub fn is_undirected(&self) -> bool {
        self.edges.iter().all(|e| e.reverse.is_some())
    }

    /// Re-applies every stored witness and checks the target class.
    pub fn witnesses_valid(&self) -> bool {
        let check = |p: &Params, from: usize, to: usize| {
            let src = &self.nodes[from].table;
            let dst = &self.nodes[to];
            p.apply(src).is_ok_and(|out| {
                let inv = LoopInvariants::compute(&out);
                find_isomorphism(&out, &inv, &dst.table, &dst.invariants).is_some()
            })
        };
        self.edges
            .iter()
            .all(|e| check(&e.forward, e.a, e.b) && e.reverse.as_ref().is_none_or(|r| check(r, e.b, e.a)))
    }

    /// Connected components, largest first (ties by least member).
    pub fn components(&self) -> Vec<ComponentReport> {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (ra, rb) = (root(&mut parent, e.a), root(&mut parent, e.b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..n {
            let r = root(&mut parent, x);
            groups.entry(r).or_default().push(x);
        }
        let mut out: Vec<ComponentReport> = groups
            .into_values()
            .map(|nodes| {
                let first = &self.nodes[nodes[0]];
                let uniform = nodes.iter().all(|&i| {
                    self.nodes[i].nucleus == first.nucleus
                        && self.nodes[i].associator_subloop == first.associator_subloop
                });
                ComponentReport {
                    size: nodes.len(),
                    nucleus: first.nucleus,
                    associator_subloop: first.associator_subloop,
                    uniform,
                    nodes,
                }
            })
            .collect();
        out.sort_by(|a, b| b.size.cmp(&a.size).then(a.nodes[0].cmp(&b.nodes[0])));
        out
    }

    /// Node ids in fingerprint order (ties by discovery order).
    fn stable_order(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.nodes.len()).collect();
        ids.sort_by(|&a, &b| {
            self.nodes[a]
                .fingerprint
                .cmp(&self.nodes[b].fingerprint)
                .then(a.cmp(&b))
        });
        ids
    }

    /// DOT text with nodes sorted by fingerprint and renumbered in that order.
    pub fn export_dot(&self) -> String {
        let ids = self.stable_order();
        let mut label = vec![0usize; self.nodes.len()];
        for (k, &id) in ids.iter().enumerate() {
            label[id] = k;
        }
        let mut s = String::from("digraph closure {\n");
        for &id in &ids {
            let n = &self.nodes[id];
            let _ = writeln!(
                s,
                "  n{} [label=\"{}: |N|={} |A|={}\"{}];",
                label[id],
                label[id],
                n.nucleus,
                n.associator_subloop,
                if n.seed { ", shape=box" } else { "" }
            );
        }
        let mut lines: Vec<(usize, usize, Kind)> = self
            .edges
            .iter()
            .map(|e| {
                let (x, y) = (label[e.a], label[e.b]);
                (x.min(y), x.max(y), e.kind)
            })
            .collect();
        lines.sort();
        for (x, y, kind) in lines {
            let _ = writeln!(s, "  n{x} -> n{y} [dir=none, label=\"{kind}\"];");
        }
        s.push_str("}\n");
        s
    }

    pub fn summary(&self) -> GraphSummary {
        let ids = self.stable_order();
        let mut label = vec![0usize; self.nodes.len()];
        for (k, &id) in ids.iter().enumerate() {
            label[id] = k;
        }
        let components = self
            .components()
            .into_iter()
            .map(|c| {
                let mut nodes: Vec<usize> = c.nodes.iter().map(|&i| label[i]).collect();
                nodes.sort_unstable();
                ComponentSummary {
                    size: c.size,
                    nucleus: c.nucleus,
                    associator_subloop: c.associator_subloop,
                    uniform: c.uniform,
                    nodes,
                }
            })
            .collect();
        let count = |k: Kind| self.edges.iter().filter(|e| e.kind == k).count();
        GraphSummary {
            order: self.order,
            classes: self.nodes.len(),
            components,
            cyclic_edges: count(Kind::Cyclic),
            dihedral_edges: count(Kind::Dihedral),
            witnesses: self.edges.len() + self.edges.iter().filter(|e| e.reverse.is_some()).count(),
            missing_reverse: self.edges.iter().filter(|e| e.reverse.is_none()).count(),
            stats: self.stats,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub size: usize,
    pub nucleus: usize,
    pub associator_subloop: usize,
    pub uniform: bool,
    /// Node labels as in the DOT export.
    pub nodes: Vec<usize>,
}

/// Report with a fixed field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub order: usize,
    pub classes: usize,
    pub components: Vec<ComponentSummary>,
    pub cyclic_edges: usize,
    pub dihedral_edges: usize,
    pub witnesses: usize,
    pub missing_reverse: usize,
    pub stats: ApplicationStats,
}

impl GraphSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}
