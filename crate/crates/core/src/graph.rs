//! Bipartite graphs stored as mirrored per-vertex bitsets.
//!
//! Every edge joins a left vertex to a right vertex, so same-side edges are
//! not representable. Vertices can be masked out (the kernel rules remove
//! vertices); masked vertices keep their index but have no edges and are
//! skipped by every query that enumerates vertices.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} is out of range")]
    OutOfRange(VertexRef),
    #[error("vertex {0} has been removed")]
    Removed(VertexRef),
    #[error("vertices {0} and {1} are on different sides")]
    DifferentSides(VertexRef, VertexRef),
    #[error("edge ({0}, {1}) is listed twice")]
    DuplicateEdge(usize, usize),
    #[error("cannot delete ({0}, {1}): not an edge")]
    DeleteNonEdge(usize, usize),
    #[error("cannot insert ({0}, {1}): already an edge")]
    InsertExisting(usize, usize),
    #[error("pair ({0}, {1}) is both inserted and deleted")]
    ConflictingEdit(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    #[inline]
    pub(crate) fn idx(self) -> usize {
        self as usize
    }
}

/// A vertex named by its side and its 0-based index within that side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexRef {
    pub side: Side,
    pub index: usize,
}

impl VertexRef {
    pub fn left(index: usize) -> Self {
        VertexRef { side: Side::Left, index }
    }

    pub fn right(index: usize) -> Self {
        VertexRef { side: Side::Right, index }
    }
}

impl fmt::Display for VertexRef {
    /// 1-based, `l3` / `r1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.side {
            Side::Left => 'l',
            Side::Right => 'r',
        };
        write!(f, "{}{}", p, self.index + 1)
    }
}

/// An edge as a `(left, right)` index pair.
pub type Edge = (usize, usize);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n: [usize; 2],
    adj: [Vec<FixedBitSet>; 2],
    alive: [FixedBitSet; 2],
    edges: usize,
}

impl fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BipartiteGraph")
            .field("n_left", &self.n[0])
            .field("n_right", &self.n[1])
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl BipartiteGraph {
    /// Edgeless graph with every vertex alive.
    pub fn new(n_left: usize, n_right: usize) -> Self {
        let row = |n_other| FixedBitSet::with_capacity(n_other);
        let mut alive = [
            FixedBitSet::with_capacity(n_left),
            FixedBitSet::with_capacity(n_right),
        ];
        alive[0].insert_range(..);
        alive[1].insert_range(..);
        BipartiteGraph {
            n: [n_left, n_right],
            adj: [
                (0..n_left).map(|_| row(n_right)).collect(),
                (0..n_right).map(|_| row(n_left)).collect(),
            ],
            alive,
            edges: 0,
        }
    }

    pub fn from_edges<I>(n_left: usize, n_right: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = BipartiteGraph::new(n_left, n_right);
        for (l, r) in edges {
            g.check(VertexRef::left(l))?;
            g.check(VertexRef::right(r))?;
            if g.has_edge(l, r) {
                return Err(GraphError::DuplicateEdge(l, r));
            }
            g.set_edge(l, r, true);
        }
        Ok(g)
    }

    /// Builds a graph from a 0/1 matrix, one row per left vertex.
    pub fn from_matrix(rows: &[&[u8]]) -> Self {
        let n_right = rows.first().map_or(0, |r| r.len());
        let mut g = BipartiteGraph::new(rows.len(), n_right);
        for (l, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n_right, "ragged adjacency matrix");
            for (r, &x) in row.iter().enumerate() {
                if x != 0 {
                    g.set_edge(l, r, true);
                }
            }
        }
        g
    }

    /// Total vertex slots on a side, dead ones included.
    #[inline]
    pub fn side_len(&self, side: Side) -> usize {
        self.n[side.idx()]
    }

    pub fn n_left(&self) -> usize {
        self.alive[0].count_ones(..)
    }

    pub fn n_right(&self) -> usize {
        self.alive[1].count_ones(..)
    }

    /// Number of alive vertices.
    pub fn vertex_count(&self) -> usize {
        self.n_left() + self.n_right()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count() == 0
    }

    #[inline]
    pub fn is_alive(&self, v: VertexRef) -> bool {
        v.index < self.n[v.side.idx()] && self.alive[v.side.idx()].contains(v.index)
    }

    pub fn check(&self, v: VertexRef) -> Result<(), GraphError> {
        if v.index >= self.n[v.side.idx()] {
            Err(GraphError::OutOfRange(v))
        } else if !self.alive[v.side.idx()].contains(v.index) {
            Err(GraphError::Removed(v))
        } else {
            Ok(())
        }
    }

    /// Alive vertices of one side in increasing index order.
    pub fn vertices(&self, side: Side) -> impl Iterator<Item = usize> + '_ {
        self.alive[side.idx()].ones()
    }

    /// All alive vertices, left side first.
    pub fn all_vertices(&self) -> impl Iterator<Item = VertexRef> + '_ {
        self.vertices(Side::Left)
            .map(VertexRef::left)
            .chain(self.vertices(Side::Right).map(VertexRef::right))
    }

    pub fn alive_mask(&self, side: Side) -> &FixedBitSet {
        &self.alive[side.idx()]
    }

    #[inline]
    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        self.adj[0][l].contains(r)
    }

    /// Edges in `(left, right)` lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj[0]
            .iter()
            .enumerate()
            .flat_map(|(l, row)| row.ones().map(move |r| (l, r)))
    }

    /// The neighbourhood of `v` as a bitset over the opposite side.
    pub fn neighbors(&self, v: VertexRef) -> Result<&FixedBitSet, GraphError> {
        self.check(v)?;
        Ok(self.nbrs(v))
    }

    /// Unchecked neighbourhood access.
    #[inline]
    pub fn nbrs(&self, v: VertexRef) -> &FixedBitSet {
        &self.adj[v.side.idx()][v.index]
    }

    #[inline]
    pub fn degree(&self, v: VertexRef) -> usize {
        self.nbrs(v).count_ones(..)
    }

    pub fn max_degree(&self) -> usize {
        self.all_vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Union of the neighbourhoods of a same-side vertex set.
    pub fn neighbors_of_set(&self, side: Side, set: &[usize]) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n[side.other().idx()]);
        for &x in set {
            out.union_with(&self.adj[side.idx()][x]);
        }
        out
    }

    /// `N(u) ∩ N(v) ≠ ∅` and `N(u) △ N(v) ≠ ∅`.
    pub fn in_conflict(&self, u: VertexRef, v: VertexRef) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u.side != v.side {
            return Err(GraphError::DifferentSides(u, v));
        }
        Ok(self.conflict_unchecked(u, v))
    }

    #[inline]
    pub(crate) fn conflict_unchecked(&self, u: VertexRef, v: VertexRef) -> bool {
        let (a, b) = (self.nbrs(u), self.nbrs(v));
        !a.is_disjoint(b) && a != b
    }

    /// Smallest-index same-side vertex in conflict with `u`, if any.
    pub fn find_conflict(&self, u: VertexRef) -> Option<VertexRef> {
        if !self.is_alive(u) {
            return None;
        }
        self.conflict_partners(u).next()
    }

    /// All same-side vertices in conflict with `u`, in increasing order.
    pub fn conflict_partners(&self, u: VertexRef) -> impl Iterator<Item = VertexRef> + '_ {
        // Partners share a neighbour, so they lie in N(N(u)).
        let mut second = FixedBitSet::with_capacity(self.n[u.side.idx()]);
        for w in self.nbrs(u).ones() {
            second.union_with(&self.adj[u.side.other().idx()][w]);
        }
        second
            .into_ones()
            .map(move |i| VertexRef { side: u.side, index: i })
            .filter(move |&v| v != u && self.nbrs(v) != self.nbrs(u))
    }

    pub fn twin_classes(&self) -> TwinPartition {
        let classes = Side::BOTH.map(|side| {
            let mut groups: HashMap<&FixedBitSet, usize> = HashMap::new();
            let mut out: Vec<Vec<usize>> = Vec::new();
            for i in self.vertices(side) {
                let key = &self.adj[side.idx()][i];
                match groups.get(key) {
                    Some(&c) => out[c].push(i),
                    None => {
                        groups.insert(key, out.len());
                        out.push(vec![i]);
                    }
                }
            }
            out
        });
        TwinPartition::from_classes(self.n, classes)
    }

    /// Connected components, each flagged with whether it induces a complete
    /// bipartite graph. Components are ordered by their first vertex
    /// (left side first).
    pub fn bicluster_components(&self) -> Vec<Component> {
        let mut seen = Side::BOTH.map(|s| FixedBitSet::with_capacity(self.n[s.idx()]));
        let mut out = Vec::new();
        for start in self.all_vertices() {
            if seen[start.side.idx()].contains(start.index) {
                continue;
            }
            let mut members = [Vec::new(), Vec::new()];
            let mut stack = vec![start];
            seen[start.side.idx()].insert(start.index);
            let mut internal_edges = 0;
            while let Some(v) = stack.pop() {
                members[v.side.idx()].push(v.index);
                let other = v.side.other();
                for w in self.nbrs(v).ones() {
                    if v.side == Side::Left {
                        internal_edges += 1;
                    }
                    if !seen[other.idx()].contains(w) {
                        seen[other.idx()].insert(w);
                        stack.push(VertexRef { side: other, index: w });
                    }
                }
            }
            members[0].sort_unstable();
            members[1].sort_unstable();
            let is_bicluster = internal_edges == members[0].len() * members[1].len();
            let [left, right] = members;
            out.push(Component { left, right, is_bicluster });
        }
        out
    }

    pub fn is_bicluster_graph(&self) -> bool {
        self.bicluster_components().iter().all(|c| c.is_bicluster)
    }

    /// Returns `self` edited by `e`; the original is left untouched.
    pub fn apply_edits(&self, e: &EditSet) -> Result<BipartiteGraph, GraphError> {
        let mut g = self.clone();
        e.validate_against(self)?;
        for &(l, r) in &e.deletions {
            g.set_edge(l, r, false);
        }
        for &(l, r) in &e.insertions {
            g.set_edge(l, r, true);
        }
        Ok(g)
    }

    /// Returns a copy with the given vertices (and their edges) masked out.
    pub fn without_vertices(&self, vs: &[VertexRef]) -> Result<BipartiteGraph, GraphError> {
        let mut g = self.clone();
        for &v in vs {
            g.check(v)?;
            g.remove_vertex(v);
        }
        Ok(g)
    }

    /// Renumbers alive vertices densely. Returns the compact graph and, per
    /// side, the original index of every new index.
    pub fn compact(&self) -> (BipartiteGraph, [Vec<usize>; 2]) {
        let maps = Side::BOTH.map(|s| self.vertices(s).collect::<Vec<_>>());
        let mut inv = [vec![usize::MAX; self.n[0]], vec![usize::MAX; self.n[1]]];
        for s in 0..2 {
            for (new, &old) in maps[s].iter().enumerate() {
                inv[s][old] = new;
            }
        }
        let mut g = BipartiteGraph::new(maps[0].len(), maps[1].len());
        for (l, r) in self.edges() {
            g.set_edge(inv[0][l], inv[1][r], true);
        }
        (g, maps)
    }

    pub(crate) fn set_edge(&mut self, l: usize, r: usize, present: bool) {
        if self.adj[0][l].contains(r) != present {
            self.adj[0][l].set(r, present);
            self.adj[1][r].set(l, present);
            if present {
                self.edges += 1;
            } else {
                self.edges -= 1;
            }
        }
    }

    pub(crate) fn remove_vertex(&mut self, v: VertexRef) {
        let nbrs: Vec<usize> = self.nbrs(v).ones().collect();
        for w in nbrs {
            match v.side {
                Side::Left => self.set_edge(v.index, w, false),
                Side::Right => self.set_edge(w, v.index, false),
            }
        }
        self.alive[v.side.idx()].set(v.index, false);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub is_bicluster: bool,
}

impl Component {
    pub fn vertices(&self) -> impl Iterator<Item = VertexRef> + '_ {
        self.left
            .iter()
            .map(|&i| VertexRef::left(i))
            .chain(self.right.iter().map(|&i| VertexRef::right(i)))
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Per side, the partition of alive vertices into classes of equal
/// neighbourhood. Classes are ordered by smallest member and each class is
/// sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinPartition {
    classes: [Vec<Vec<usize>>; 2],
    class_of: [Vec<usize>; 2],
}

impl TwinPartition {
    fn from_classes(n: [usize; 2], classes: [Vec<Vec<usize>>; 2]) -> Self {
        let mut class_of = [vec![usize::MAX; n[0]], vec![usize::MAX; n[1]]];
        for s in 0..2 {
            for (c, members) in classes[s].iter().enumerate() {
                for &m in members {
                    class_of[s][m] = c;
                }
            }
        }
        TwinPartition { classes, class_of }
    }

    pub fn classes(&self, side: Side) -> &[Vec<usize>] {
        &self.classes[side.idx()]
    }

    /// Index of the class containing `v`, or `None` for dead vertices.
    pub fn class_index(&self, v: VertexRef) -> Option<usize> {
        match self.class_of[v.side.idx()].get(v.index) {
            Some(&c) if c != usize::MAX => Some(c),
            _ => None,
        }
    }

    /// The class containing `v`. Panics if `v` is not alive.
    pub fn class_of(&self, v: VertexRef) -> &[usize] {
        let c = self.class_index(v).expect("vertex has no twin class");
        &self.classes[v.side.idx()][c]
    }

    pub fn has_nontrivial_class(&self) -> bool {
        self.classes.iter().flatten().any(|c| c.len() > 1)
    }
}

/// Insertions and deletions, each a set of `(left, right)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EditSet {
    pub insertions: BTreeSet<Edge>,
    pub deletions: BTreeSet<Edge>,
}

impl EditSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The edits turning `from` into `to` (both over the same vertex slots).
    pub fn between(from: &BipartiteGraph, to: &BipartiteGraph) -> EditSet {
        let mut e = EditSet::new();
        for l in 0..from.side_len(Side::Left) {
            let a = &from.adj[0][l];
            let b = &to.adj[0][l];
            for r in a.difference(b) {
                e.deletions.insert((l, r));
            }
            for r in b.difference(a) {
                e.insertions.insert((l, r));
            }
        }
        e
    }

    pub fn cost(&self) -> usize {
        self.insertions.len() + self.deletions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cost() == 0
    }

    /// Records flipping the pair `(l, r)` whose current state is `present`,
    /// cancelling an earlier edit of the same pair if there is one.
    pub fn toggle(&mut self, l: usize, r: usize, present_in_original: bool) {
        let set = if present_in_original {
            &mut self.deletions
        } else {
            &mut self.insertions
        };
        if !set.remove(&(l, r)) {
            set.insert((l, r));
        }
    }

    /// Number of edits incident to `v`.
    pub fn incident_count(&self, v: VertexRef) -> usize {
        let hit = |&(l, r): &Edge| match v.side {
            Side::Left => l == v.index,
            Side::Right => r == v.index,
        };
        self.insertions.iter().filter(|e| hit(e)).count()
            + self.deletions.iter().filter(|e| hit(e)).count()
    }

    pub fn validate_against(&self, g: &BipartiteGraph) -> Result<(), GraphError> {
        for &(l, r) in self.deletions.iter().chain(&self.insertions) {
            g.check(VertexRef::left(l))?;
            g.check(VertexRef::right(r))?;
        }
        if let Some(&(l, r)) = self.insertions.intersection(&self.deletions).next() {
            return Err(GraphError::ConflictingEdit(l, r));
        }
        if let Some(&(l, r)) = self.deletions.iter().find(|&&(l, r)| !g.has_edge(l, r)) {
            return Err(GraphError::DeleteNonEdge(l, r));
        }
        if let Some(&(l, r)) = self.insertions.iter().find(|&&(l, r)| g.has_edge(l, r)) {
            return Err(GraphError::InsertExisting(l, r));
        }
        Ok(())
    }
}

/// Edits of `e` incident to `v`; validates `v` and `e` against `g`.
pub fn per_vertex_edit_count(
    g: &BipartiteGraph,
    e: &EditSet,
    v: VertexRef,
) -> Result<usize, GraphError> {
    g.check(v)?;
    e.validate_against(g)?;
    Ok(e.incident_count(v))
}
