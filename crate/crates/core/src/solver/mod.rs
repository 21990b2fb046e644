//! Bounded search tree for Bicluster Editing.
//!
//! Every search node is an instance `(G, k)` of its own: the edits chosen on
//! the way down are committed to `G` and conflicts are re-derived from the
//! result. A node first removes bicluster components, answers directly when
//! the graph is empty or has maximum degree two, and otherwise branches with
//! the first applicable rule:
//!
//! 1. a degree-one vertex,
//! 2. a twin class with at least two members,
//! 3. the merge rule, when every conflicting pair differs in one neighbour,
//! 4. a general conflicting pair `u, v` with `deg(u) ≥ 3`.
//!
//! Rules 2 and 4 put `u, v` either in one bicluster or in different ones.
//! Their children can be filtered with the deletion-maximal condition, see
//! [`PruneMode`].

mod paths;
mod rules;

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{BipartiteGraph, EditSet, Side, VertexRef};
use crate::kernel::Instance;

pub use paths::Change;

/// How children are filtered by the deletion-maximal condition: a vertex of
/// degree `d` carries at most `d - 1` edits, or exactly `d` deletions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PruneMode {
    Off,
    /// Counts the edits a child adds against degrees in the node's graph.
    /// Only children of the pair and twin rules are filtered.
    Local,
    /// Counts all accumulated edits against degrees in the input graph and
    /// filters every child.
    Global,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub prune: PruneMode,
    /// Upper bound on the number of classes a pair branch enumerates.
    pub cap: usize,
    /// Search nodes shallower than this explore their children in parallel.
    pub parallel_depth: usize,
    /// Use the degree-one, twin and merge rules. Without them only general
    /// pairs are branched on.
    pub special_rules: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { prune: PruneMode::Local, cap: 100, parallel_depth: 0, special_rules: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("vertex {0} has degree {1}, expected at most 2")]
    DegreeTooHigh(VertexRef, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Yes,
    No,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub max_depth: usize,
    /// Bicluster components removed inside the search.
    pub components_removed: u64,
    pub degree_one: u64,
    pub twins: u64,
    pub merge: u64,
    pub general: u64,
    pub degree_two_leaves: u64,
    pub pruned: u64,
}

impl SolveStats {
    fn absorb(&mut self, o: &SolveStats) {
        self.nodes += o.nodes;
        self.max_depth = self.max_depth.max(o.max_depth);
        self.components_removed += o.components_removed;
        self.degree_one += o.degree_one;
        self.twins += o.twins;
        self.merge += o.merge;
        self.general += o.general;
        self.degree_two_leaves += o.degree_two_leaves;
        self.pruned += o.pruned;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub decision: Decision,
    /// Witness cost for a decision, the optimum for an optimization.
    pub cost: Option<usize>,
    /// Edits relative to the input graph.
    pub witness: Option<EditSet>,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn is_yes(&self) -> bool {
        self.decision == Decision::Yes
    }
}

/// A search node. `edits` is the net change relative to the input graph;
/// `spent + remaining` is the initial budget.
#[derive(Debug, Clone)]
pub struct SearchState {
    pub graph: BipartiteGraph,
    pub remaining: usize,
    pub spent: usize,
    pub edits: EditSet,
    pub depth: usize,
    original: Arc<BipartiteGraph>,
    counts: [Vec<usize>; 2],
    inserted: [Vec<usize>; 2],
}

impl SearchState {
    pub fn new(inst: &Instance) -> Self {
        let g = &inst.graph;
        let zeros = |s| vec![0; g.side_len(s)];
        SearchState {
            graph: g.clone(),
            remaining: inst.budget,
            spent: 0,
            edits: EditSet::new(),
            depth: 0,
            original: Arc::new(g.clone()),
            counts: [zeros(Side::Left), zeros(Side::Right)],
            inserted: [zeros(Side::Left), zeros(Side::Right)],
        }
    }

    pub fn original(&self) -> &BipartiteGraph {
        &self.original
    }

    pub fn original_degree(&self, v: VertexRef) -> usize {
        self.original.degree(v)
    }

    /// Net accumulated edits incident to `v`.
    pub fn edit_count(&self, v: VertexRef) -> usize {
        self.counts[v.side as usize][v.index]
    }

    fn record(&mut self, l: usize, r: usize) {
        let orig = self.original.has_edge(l, r);
        let set = if orig { &self.edits.deletions } else { &self.edits.insertions };
        let delta: isize = if set.contains(&(l, r)) { -1 } else { 1 };
        self.edits.toggle(l, r, orig);
        let bump = |x: &mut usize| *x = x.checked_add_signed(delta).unwrap();
        bump(&mut self.counts[0][l]);
        bump(&mut self.counts[1][r]);
        if !orig {
            bump(&mut self.inserted[0][l]);
            bump(&mut self.inserted[1][r]);
        }
    }

    /// The child with `changes` committed. `None` if they exceed the budget.
    pub fn apply(&self, changes: &[Change]) -> Option<SearchState> {
        if changes.len() > self.remaining {
            return None;
        }
        let mut s = self.clone();
        for c in changes {
            debug_assert_eq!(s.graph.has_edge(c.left, c.right), !c.insert);
            s.graph.set_edge(c.left, c.right, c.insert);
            s.record(c.left, c.right);
        }
        s.remaining -= changes.len();
        s.spent += changes.len();
        s.depth += 1;
        Some(s)
    }

    fn violates_globally(&self, v: VertexRef) -> bool {
        let (d, c) = (self.original_degree(v), self.edit_count(v));
        c > d || (c == d && self.inserted[v.side as usize][v.index] > 0)
    }
}

/// Whether a child survives the deletion-maximal filter.
pub fn prune_deletion_maximal(state: &SearchState, changes: &[Change], mode: PruneMode) -> bool {
    match mode {
        PruneMode::Off => true,
        PruneMode::Local => {
            let g = &state.graph;
            let mut tally = [vec![(0usize, false); g.side_len(Side::Left)], vec![(0, false); g.side_len(Side::Right)]];
            for c in changes {
                for (s, i) in [(0, c.left), (1, c.right)] {
                    tally[s][i].0 += 1;
                    tally[s][i].1 |= c.insert;
                }
            }
            changes.iter().all(|c| {
                [VertexRef::left(c.left), VertexRef::right(c.right)].iter().all(|&v| {
                    let (n, ins) = tally[v.side as usize][v.index];
                    let d = g.degree(v);
                    n < d || (n == d && !ins)
                })
            })
        }
        PruneMode::Global => match state.apply(changes) {
            None => false,
            Some(child) => changes
                .iter()
                .all(|c| !child.violates_globally(VertexRef::left(c.left)) && !child.violates_globally(VertexRef::right(c.right))),
        },
    }
}

/// The rule a search node branches with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dispatch {
    DegreeOne(VertexRef),
    /// A member of a twin class and its smallest conflict partner.
    Twins { member: VertexRef, partner: VertexRef },
    Merge { u: VertexRef, v: VertexRef },
    General { u: VertexRef, v: VertexRef },
}

/// Chooses the branching rule for a graph without bicluster components and
/// with a vertex of degree at least three. `None` if there is no conflict.
pub fn select_branch_pair(g: &BipartiteGraph, cfg: &SolverConfig) -> Option<Dispatch> {
    if cfg.special_rules {
        if let Some(u) = g.all_vertices().find(|&v| g.degree(v) == 1) {
            let tp = g.twin_classes();
            // The rule needs another neighbour of v outside R_u.
            let v = VertexRef { side: u.side.other(), index: g.nbrs(u).ones().next().unwrap() };
            if g.degree(v) > tp.class_of(u).len() {
                return Some(Dispatch::DegreeOne(u));
            }
        }
        let tp = g.twin_classes();
        for side in Side::BOTH {
            for class in tp.classes(side) {
                if class.len() >= 2 {
                    let member = VertexRef { side, index: class[0] };
                    if let Some(partner) = g.find_conflict(member) {
                        return Some(Dispatch::Twins { member, partner });
                    }
                }
            }
        }
        if rules::merge_precondition(g) {
            let md = g.max_degree();
            if let Some(u) = g.all_vertices().find(|&v| g.degree(v) == md) {
                if let Some(v) = g.find_conflict(u) {
                    return Some(Dispatch::Merge { u, v });
                }
            }
        }
    }
    let tp = g.twin_classes();
    let mut best: Option<((usize, usize), Dispatch)> = None;
    for u in g.all_vertices().filter(|&u| g.degree(u) >= 3) {
        for v in g.conflict_partners(u) {
            let ps = rules::pair_sets(g, &tp, u, v);
            let (c, d) = (ps.common.len().min(cfg.cap), ps.differ.len().min(cfg.cap));
            let key = (c + d, c);
            if best.as_ref().map_or(true, |(k, _)| key > *k) {
                best = Some((key, Dispatch::General { u, v }));
            }
        }
    }
    best.map(|(_, d)| d)
}

fn build(state: &SearchState, children: Vec<Vec<Change>>, prune: PruneMode, pruned: &mut u64) -> Vec<SearchState> {
    let mut out = Vec::new();
    for ch in children {
        if ch.len() > state.remaining {
            continue;
        }
        if !prune_deletion_maximal(state, &ch, prune) {
            *pruned += 1;
            continue;
        }
        out.extend(state.apply(&ch));
    }
    out
}

fn pair_children(state: &SearchState, u: VertexRef, v: VertexRef, cfg: &SolverConfig, same: bool, diff: bool) -> Vec<Vec<Change>> {
    let g = &state.graph;
    let tp = g.twin_classes();
    let mut ps = rules::pair_sets(g, &tp, u, v);
    ps.common.truncate(cfg.cap);
    ps.differ.truncate(cfg.cap);
    let mut out = Vec::new();
    if same {
        out.extend(rules::same_children(g, u.side, ps.ru, ps.rv, &ps.differ, state.remaining));
    }
    if diff {
        out.extend(rules::diff_children(g, u.side, ps.ru, ps.rv, &ps.common, state.remaining));
    }
    out
}

fn local_prune(cfg: &SolverConfig) -> PruneMode {
    cfg.prune
}

fn exchange_prune(cfg: &SolverConfig) -> PruneMode {
    match cfg.prune {
        PruneMode::Global => PruneMode::Global,
        _ => PruneMode::Off,
    }
}

/// Children placing `u` and `v` in one bicluster. `u`, `v` must conflict.
pub fn branch_same(state: &SearchState, u: VertexRef, v: VertexRef, cfg: &SolverConfig) -> Vec<SearchState> {
    build(state, pair_children(state, u, v, cfg, true, false), local_prune(cfg), &mut 0)
}

/// Children placing `u` and `v` in different biclusters.
pub fn branch_diff(state: &SearchState, u: VertexRef, v: VertexRef, cfg: &SolverConfig) -> Vec<SearchState> {
    build(state, pair_children(state, u, v, cfg, false, true), local_prune(cfg), &mut 0)
}

/// Children for a degree-one vertex `u` whose neighbour has another
/// neighbour outside the twin class of `u`.
pub fn branch_degree_one(state: &SearchState, u: VertexRef, cfg: &SolverConfig) -> Vec<SearchState> {
    let tp = state.graph.twin_classes();
    build(state, rules::degree_one_children(&state.graph, &tp, u), exchange_prune(cfg), &mut 0)
}

fn twin_children(state: &SearchState, member: VertexRef, partner: VertexRef) -> Vec<Vec<Change>> {
    let g = &state.graph;
    let tp = g.twin_classes();
    let (c, d) = rules::twin_sets(g, &tp, member, partner);
    let (rr, ru) = (tp.class_of(member), tp.class_of(partner));
    let mut out = rules::same_children(g, member.side, rr, ru, &d, state.remaining);
    out.extend(rules::diff_children(g, member.side, rr, ru, &c, state.remaining));
    out
}

/// Children for the twin class of `member` against the conflicting vertex
/// `partner`.
pub fn branch_twins(state: &SearchState, member: VertexRef, partner: VertexRef, cfg: &SolverConfig) -> Vec<SearchState> {
    build(state, twin_children(state, member, partner), local_prune(cfg), &mut 0)
}

/// The two merge children: delete `uz` or insert `vz`.
pub fn branch_merge_d1(state: &SearchState, u: VertexRef, v: VertexRef, cfg: &SolverConfig) -> Vec<SearchState> {
    build(state, rules::merge_children(&state.graph, u, v), exchange_prune(cfg), &mut 0)
}

/// Exact optimum of a graph of maximum degree two.
pub fn solve_max_degree_two(g: &BipartiteGraph) -> Result<SolveResult, SolverError> {
    if let Some(v) = g.all_vertices().find(|&v| g.degree(v) > 2) {
        return Err(SolverError::DegreeTooHigh(v, g.degree(v)));
    }
    let (cost, changes) = paths::solve_components(g).expect("degree checked");
    let mut w = EditSet::new();
    for c in changes {
        w.toggle(c.left, c.right, !c.insert);
    }
    Ok(SolveResult {
        decision: Decision::Yes,
        cost: Some(cost),
        witness: Some(w),
        stats: SolveStats { nodes: 1, degree_two_leaves: 1, ..Default::default() },
    })
}

#[derive(Default)]
struct Counters {
    nodes: AtomicU64,
    max_depth: AtomicUsize,
    components_removed: AtomicU64,
    degree_one: AtomicU64,
    twins: AtomicU64,
    merge: AtomicU64,
    general: AtomicU64,
    degree_two_leaves: AtomicU64,
    pruned: AtomicU64,
}

impl Counters {
    fn snapshot(&self) -> SolveStats {
        let l = |a: &AtomicU64| a.load(Ordering::Relaxed);
        SolveStats {
            nodes: l(&self.nodes),
            max_depth: self.max_depth.load(Ordering::Relaxed),
            components_removed: l(&self.components_removed),
            degree_one: l(&self.degree_one),
            twins: l(&self.twins),
            merge: l(&self.merge),
            general: l(&self.general),
            degree_two_leaves: l(&self.degree_two_leaves),
            pruned: l(&self.pruned),
        }
    }
}

struct Search<'a> {
    cfg: &'a SolverConfig,
    stats: Counters,
}

fn bump(a: &AtomicU64) {
    a.fetch_add(1, Ordering::Relaxed);
}

impl Search<'_> {
    fn run(&self, mut st: SearchState) -> Option<EditSet> {
        bump(&self.stats.nodes);
        self.stats.max_depth.fetch_max(st.depth, Ordering::Relaxed);
        for comp in st.graph.bicluster_components() {
            if comp.is_bicluster {
                for v in comp.vertices() {
                    st.graph.remove_vertex(v);
                }
                bump(&self.stats.components_removed);
            }
        }
        if st.graph.is_empty() {
            return Some(st.edits);
        }
        if st.graph.max_degree() <= 2 {
            bump(&self.stats.degree_two_leaves);
            let (cost, changes) = paths::solve_components(&st.graph).expect("degree checked");
            if cost > st.remaining {
                return None;
            }
            for c in changes {
                st.record(c.left, c.right);
            }
            return Some(st.edits);
        }
        if st.remaining == 0 {
            return None;
        }
        let children = self.children(&st);
        if st.depth < self.cfg.parallel_depth {
            children.into_par_iter().find_map_first(|c| self.run(c))
        } else {
            children.into_iter().find_map(|c| self.run(c))
        }
    }

    fn children(&self, st: &SearchState) -> Vec<SearchState> {
        let cfg = self.cfg;
        let mut pruned = 0;
        let out = match select_branch_pair(&st.graph, cfg) {
            Some(Dispatch::DegreeOne(u)) => {
                bump(&self.stats.degree_one);
                let tp = st.graph.twin_classes();
                build(st, rules::degree_one_children(&st.graph, &tp, u), exchange_prune(cfg), &mut pruned)
            }
            Some(Dispatch::Twins { member, partner }) => {
                bump(&self.stats.twins);
                build(st, twin_children(st, member, partner), local_prune(cfg), &mut pruned)
            }
            Some(Dispatch::Merge { u, v }) => {
                bump(&self.stats.merge);
                build(st, rules::merge_children(&st.graph, u, v), exchange_prune(cfg), &mut pruned)
            }
            Some(Dispatch::General { u, v }) => {
                bump(&self.stats.general);
                build(st, pair_children(st, u, v, cfg, true, true), local_prune(cfg), &mut pruned)
            }
            None => unreachable!("a graph without bicluster components has a conflict"),
        };
        self.stats.pruned.fetch_add(pruned, Ordering::Relaxed);
        out
    }
}

/// Decides whether `inst` has a solution within its budget.
pub fn solve_decision(inst: &Instance) -> SolveResult {
    solve_decision_with(inst, &SolverConfig::default())
}

pub fn solve_decision_with(inst: &Instance, cfg: &SolverConfig) -> SolveResult {
    let search = Search { cfg, stats: Counters::default() };
    let found = search.run(SearchState::new(inst));
    let stats = search.stats.snapshot();
    match found {
        Some(w) => {
            debug_assert!(inst.graph.apply_edits(&w).map_or(false, |h| h.is_bicluster_graph()));
            SolveResult { decision: Decision::Yes, cost: Some(w.cost()), witness: Some(w), stats }
        }
        None => SolveResult { decision: Decision::No, cost: None, witness: None, stats },
    }
}

/// Minimum editing cost, by trying budgets `0, 1, 2, …`.
pub fn solve_optimal(g: &BipartiteGraph) -> SolveResult {
    solve_optimal_with(g, &SolverConfig::default())
}

pub fn solve_optimal_with(g: &BipartiteGraph, cfg: &SolverConfig) -> SolveResult {
    let mut stats = SolveStats::default();
    for k in 0.. {
        let mut r = solve_decision_with(&Instance::new(g.clone(), k), cfg);
        stats.absorb(&r.stats);
        if r.is_yes() {
            r.cost = Some(k);
            r.stats = stats;
            return r;
        }
    }
    unreachable!("deleting every edge is always a solution")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p6() -> BipartiteGraph {
        BipartiteGraph::from_edges(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)]).unwrap()
    }

    fn fig5() -> BipartiteGraph {
        BipartiteGraph::from_edges(
            6,
            3,
            [(0, 0), (1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (4, 1), (5, 1), (4, 2), (5, 2)],
        )
        .unwrap()
    }

    #[test]
    fn decision_examples() {
        assert!(!solve_decision(&Instance::new(p6(), 0)).is_yes());
        let r = solve_decision(&Instance::new(p6(), 1));
        assert_eq!(r.cost, Some(1));
        assert_eq!(r.witness.unwrap().deletions.len(), 1);
        assert!(!solve_decision(&Instance::new(fig5(), 1)).is_yes());
        let r = solve_decision(&Instance::new(fig5(), 2));
        let w = r.witness.unwrap();
        assert_eq!((w.deletions.len(), w.insertions.len()), (2, 0));
    }

    #[test]
    fn optimal_examples() {
        let k = BipartiteGraph::from_matrix(&[&[1, 1], &[1, 1]]);
        let r = solve_optimal(&k);
        assert_eq!(r.cost, Some(0));
        assert!(r.witness.unwrap().is_empty());
    }

    #[test]
    fn degree_two_examples() {
        assert_eq!(solve_max_degree_two(&p6()).unwrap().cost, Some(1));
        assert!(matches!(solve_max_degree_two(&fig5()), Err(SolverError::DegreeTooHigh(..))));
    }

    #[test]
    fn pair_branches_on_p6() {
        let st = SearchState::new(&Instance::new(p6(), 3));
        let cfg = SolverConfig { prune: PruneMode::Off, ..Default::default() };
        let (l1, l2) = (VertexRef::left(0), VertexRef::left(1));
        let same: Vec<_> = branch_same(&st, l2, l1, &cfg).into_iter().map(|c| c.edits).collect();
        assert_eq!(same.len(), 2);
        assert!(same.iter().any(|e| e.deletions.contains(&(1, 1))));
        assert!(same.iter().any(|e| e.insertions.contains(&(0, 1))));
        let diff: Vec<_> = branch_diff(&st, l1, l2, &cfg).into_iter().map(|c| c.edits).collect();
        assert_eq!(diff.len(), 2);
        assert!(diff.iter().all(|e| e.cost() == 1));
    }

    #[test]
    fn prune_filter_examples() {
        // l1 has degree 2 (r0, r1); r2 is isolated.
        let g = BipartiteGraph::from_edges(2, 3, [(0, 0), (1, 0), (1, 1)]).unwrap();
        let st = SearchState::new(&Instance::new(g, 5));
        for mode in [PruneMode::Local, PruneMode::Global] {
            assert!(!prune_deletion_maximal(&st, &[Change::delete(1, 0), Change::insert(1, 2)], mode));
            assert!(prune_deletion_maximal(&st, &[Change::delete(1, 0), Change::delete(1, 1)], mode));
            assert!(prune_deletion_maximal(&st, &[Change::delete(1, 1)], mode));
            assert!(prune_deletion_maximal(&st, &[], mode));
        }
    }
}
