//! Brute-force ground truth for small graphs.
//!
//! A biclustering is encoded as a set partition of one side (the smaller
//! one) plus, for every vertex of the other side, either a block of that
//! partition or "unattached". Unattached vertices and blocks that receive no
//! partner are clusters with only one side, i.e. isolated vertices in the
//! bicluster graph.
//!
//! Given the partition, the cost of a biclustering is the sum over the other
//! side of each vertex's incident edits, and each of those depends only on
//! that vertex's own choice. The plain and twin-respecting searches use this
//! to pick every choice independently. The deletion-maximal search has a
//! condition on both sides and walks the full product instead.

use thiserror::Error;

use crate::graph::{BipartiteGraph, Side};

/// Default bound on enumerated states.
pub const DEFAULT_STATE_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for exhaustive search: {states} states exceeds limit {limit}")]
    TooLarge { states: u128, limit: u64 },
    #[error("biclustering covers {got:?} vertices but the graph has {expected:?}")]
    VertexMismatch { expected: (usize, usize), got: (usize, usize) },
}

/// A cluster id for every vertex slot of both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biclustering {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Biclustering {
    /// Every vertex in its own cluster.
    pub fn singletons(g: &BipartiteGraph) -> Self {
        let nl = g.side_len(Side::Left);
        Biclustering {
            left: (0..nl).collect(),
            right: (nl..nl + g.side_len(Side::Right)).collect(),
        }
    }

    /// Clusters are the connected components of `g` (meaningful when `g` is
    /// a bicluster graph).
    pub fn from_components(g: &BipartiteGraph) -> Self {
        let mut b = Biclustering::singletons(g);
        for (id, c) in g.bicluster_components().iter().enumerate() {
            for &l in &c.left {
                b.left[l] = id;
            }
            for &r in &c.right {
                b.right[r] = id;
            }
        }
        b
    }

    /// The bicluster graph this clustering stands for.
    pub fn to_graph(&self, g: &BipartiteGraph) -> BipartiteGraph {
        let mut h = g.clone();
        for l in g.vertices(Side::Left) {
            for r in g.vertices(Side::Right) {
                h.set_edge(l, r, self.left[l] == self.right[r]);
            }
        }
        h
    }
}

/// `|E(G) △ E(B)|` over alive vertices.
pub fn cost(g: &BipartiteGraph, b: &Biclustering) -> Result<usize, OracleError> {
    let expected = (g.side_len(Side::Left), g.side_len(Side::Right));
    let got = (b.left.len(), b.right.len());
    if expected != got {
        return Err(OracleError::VertexMismatch { expected, got });
    }
    let mut total = 0;
    for l in g.vertices(Side::Left) {
        for r in g.vertices(Side::Right) {
            if g.has_edge(l, r) != (b.left[l] == b.right[r]) {
                total += 1;
            }
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// All biclusterings.
    Plain,
    /// Only biclusterings keeping every twin class in one cluster.
    TwinRespecting,
    /// Only biclusterings where each vertex `v` has either exactly `deg(v)`
    /// incident edits, all deletions, or at most `deg(v) - 1`.
    DeletionMaximal,
}

pub fn oracle_opt(g: &BipartiteGraph) -> Result<(usize, Biclustering), OracleError> {
    oracle_opt_with(g, OracleMode::Plain, DEFAULT_STATE_LIMIT)
}

pub fn oracle_opt_twin_respecting(
    g: &BipartiteGraph,
) -> Result<(usize, Biclustering), OracleError> {
    oracle_opt_with(g, OracleMode::TwinRespecting, DEFAULT_STATE_LIMIT)
}

pub fn oracle_opt_deletion_maximal(
    g: &BipartiteGraph,
) -> Result<(usize, Biclustering), OracleError> {
    oracle_opt_with(g, OracleMode::DeletionMaximal, DEFAULT_STATE_LIMIT)
}

/// Bell numbers, saturating.
fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for x in &row {
            let y = next.last().unwrap().saturating_add(*x);
            next.push(y);
        }
        row = next;
    }
    row[0]
}

/// Number of states the search for `mode` walks on a graph whose
/// partitioned side has `p` vertices and other side `q`.
pub fn state_count(mode: OracleMode, p: usize, q: usize) -> u128 {
    match mode {
        OracleMode::Plain | OracleMode::TwinRespecting => {
            bell(p).saturating_mul((q as u128).max(1) * (p as u128 + 1))
        }
        OracleMode::DeletionMaximal => {
            bell(p).saturating_mul((p as u128 + 1).saturating_pow(q as u32))
        }
    }
}

/// Dense 0/1 matrix with the partitioned side as rows.
struct Dense {
    p: usize,
    q: usize,
    adj: Vec<Vec<bool>>,
}

impl Dense {
    fn at(&self, p: usize, q: usize) -> bool {
        self.adj[p][q]
    }
}

pub fn oracle_opt_with(
    g: &BipartiteGraph,
    mode: OracleMode,
    limit: u64,
) -> Result<(usize, Biclustering), OracleError> {
    let (c, maps) = g.compact();
    let (nl, nr) = (c.side_len(Side::Left), c.side_len(Side::Right));
    let swapped = nr < nl;
    let (p, q) = if swapped { (nr, nl) } else { (nl, nr) };
    let states = state_count(mode, p, q);
    if states > limit as u128 {
        return Err(OracleError::TooLarge { states, limit });
    }
    let adj = (0..p)
        .map(|i| {
            (0..q)
                .map(|j| if swapped { c.has_edge(j, i) } else { c.has_edge(i, j) })
                .collect()
        })
        .collect();
    let dense = Dense { p, q, adj };

    let (best, rgs, assign) = match mode {
        OracleMode::Plain => separable(&dense, None),
        OracleMode::TwinRespecting => separable(&dense, Some(twin_reps(&dense))),
        OracleMode::DeletionMaximal => full_deletion_maximal(&dense),
    };

    // Cluster ids on the compact graph: blocks first, then fresh ids for
    // unattached vertices.
    let blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
    let mut next = blocks;
    let mut q_ids = vec![0; q];
    let q_reps = twin_reps_cols(&dense);
    for j in 0..q {
        q_ids[j] = if assign[j] < blocks {
            assign[j]
        } else if mode == OracleMode::TwinRespecting && q_reps[j] != j {
            q_ids[q_reps[j]]
        } else {
            next += 1;
            next - 1
        };
    }
    let (cl, cr) = if swapped { (q_ids, rgs) } else { (rgs, q_ids) };

    let mut b = Biclustering::singletons(g);
    let offset = b.left.len() + b.right.len();
    for x in b.left.iter_mut().chain(b.right.iter_mut()) {
        *x += offset;
    }
    for (i, &orig) in maps[0].iter().enumerate() {
        b.left[orig] = cl[i];
    }
    for (i, &orig) in maps[1].iter().enumerate() {
        b.right[orig] = cr[i];
    }
    Ok((best, b))
}

/// Smallest same-row index for each row (twin representative).
fn twin_reps(d: &Dense) -> Vec<usize> {
    (0..d.p)
        .map(|i| (0..=i).find(|&k| d.adj[k] == d.adj[i]).unwrap())
        .collect()
}

fn twin_reps_cols(d: &Dense) -> Vec<usize> {
    let col = |j: usize| (0..d.p).map(|i| d.at(i, j)).collect::<Vec<_>>();
    let cols: Vec<_> = (0..d.q).map(col).collect();
    (0..d.q)
        .map(|j| (0..=j).find(|&k| cols[k] == cols[j]).unwrap())
        .collect()
}

/// Calls `f` with every restricted growth string of length `n`, in
/// lexicographic order.
fn for_each_partition(n: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(a: &mut Vec<usize>, n: usize, max: usize, f: &mut impl FnMut(&[usize])) {
        if a.len() == n {
            f(a);
            return;
        }
        let hi = if a.is_empty() { 0 } else { max + 1 };
        for x in 0..=hi {
            a.push(x);
            rec(a, n, max.max(x), f);
            a.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), n, 0, f);
}

type Found = (usize, Vec<usize>, Vec<usize>);

fn separable(d: &Dense, reps: Option<Vec<usize>>) -> Found {
    let mut best: Option<Found> = None;
    let degs: Vec<usize> = (0..d.q).map(|j| (0..d.p).filter(|&i| d.at(i, j)).count()).collect();
    for_each_partition(d.p, &mut |rgs| {
        if let Some(reps) = &reps {
            if (0..d.p).any(|i| rgs[i] != rgs[reps[i]]) {
                return;
            }
        }
        let blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut size = vec![0usize; blocks];
        for &x in rgs {
            size[x] += 1;
        }
        let mut total = 0;
        let mut assign = Vec::with_capacity(d.q);
        let mut common = vec![0usize; blocks];
        for j in 0..d.q {
            common.iter_mut().for_each(|c| *c = 0);
            for i in 0..d.p {
                if d.at(i, j) {
                    common[rgs[i]] += 1;
                }
            }
            // unattached is encoded as `blocks`, tried last
            let mut choice = (degs[j], blocks);
            for b in 0..blocks {
                let c = degs[j] + size[b] - 2 * common[b];
                if c < choice.0 {
                    choice = (c, b);
                }
            }
            total += choice.0;
            assign.push(choice.1);
        }
        if best.as_ref().map_or(true, |b| total < b.0) {
            best = Some((total, rgs.to_vec(), assign));
        }
    });
    best.expect("at least one partition")
}

fn violates(deg: usize, edits: usize, ins: usize) -> bool {
    edits > deg || (edits == deg && ins > 0)
}

fn full_deletion_maximal(d: &Dense) -> Found {
    struct Search<'a> {
        d: &'a Dense,
        rgs: Vec<usize>,
        blocks: usize,
        deg_p: Vec<usize>,
        deg_q: Vec<usize>,
        edits_p: Vec<usize>,
        ins_p: Vec<usize>,
        assign: Vec<usize>,
        best: Option<Found>,
    }

    impl Search<'_> {
        fn rec(&mut self, j: usize, acc: usize) {
            if j == self.d.q {
                if self.best.as_ref().map_or(true, |b| acc < b.0) {
                    self.best = Some((acc, self.rgs.clone(), self.assign.clone()));
                }
                return;
            }
            for choice in 0..=self.blocks {
                let (mut e, mut ins) = (0, 0);
                for i in 0..self.d.p {
                    let inside = self.rgs[i] == choice;
                    if inside != self.d.at(i, j) {
                        e += 1;
                        ins += inside as usize;
                    }
                }
                if violates(self.deg_q[j], e, ins) {
                    continue;
                }
                let mut ok = true;
                for i in 0..self.d.p {
                    let inside = self.rgs[i] == choice;
                    if inside != self.d.at(i, j) {
                        self.edits_p[i] += 1;
                        self.ins_p[i] += inside as usize;
                    }
                    ok &= !violates(self.deg_p[i], self.edits_p[i], self.ins_p[i]);
                }
                if ok {
                    self.assign.push(choice);
                    self.rec(j + 1, acc + e);
                    self.assign.pop();
                }
                for i in 0..self.d.p {
                    let inside = self.rgs[i] == choice;
                    if inside != self.d.at(i, j) {
                        self.edits_p[i] -= 1;
                        self.ins_p[i] -= inside as usize;
                    }
                }
            }
        }
    }

    let deg_p = (0..d.p).map(|i| (0..d.q).filter(|&j| d.at(i, j)).count()).collect();
    let deg_q = (0..d.q).map(|j| (0..d.p).filter(|&i| d.at(i, j)).count()).collect();
    let mut s = Search {
        d,
        rgs: Vec::new(),
        blocks: 0,
        deg_p,
        deg_q,
        edits_p: vec![0; d.p],
        ins_p: vec![0; d.p],
        assign: Vec::new(),
        best: None,
    };
    for_each_partition(d.p, &mut |rgs| {
        s.rgs = rgs.to_vec();
        s.blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
        s.rec(0, 0);
    });
    // All-singletons deletes every edge and always satisfies the condition.
    s.best.expect("the all-deletion biclustering is always admissible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BipartiteGraph;

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
    fn cost_examples() {
        let g = p6();
        assert_eq!(cost(&g, &Biclustering::singletons(&g)), Ok(5));
        let b = Biclustering { left: vec![0, 0, 1], right: vec![0, 1, 1] };
        assert_eq!(cost(&g, &b), Ok(1));
        let k = BipartiteGraph::from_matrix(&[&[1, 1], &[1, 1]]);
        assert_eq!(cost(&k, &Biclustering::from_components(&k)), Ok(0));
        let bad = Biclustering { left: vec![0], right: vec![0] };
        assert!(matches!(cost(&g, &bad), Err(OracleError::VertexMismatch { .. })));
    }

    #[test]
    fn bell_numbers() {
        let b: Vec<u128> = (0..8).map(bell).collect();
        assert_eq!(b, vec![1, 1, 2, 5, 15, 52, 203, 877]);
        let mut count = 0;
        for_each_partition(5, &mut |_| count += 1);
        assert_eq!(count, 52);
    }

    #[test]
    fn oracle_examples() {
        let (c, b) = oracle_opt(&p6()).unwrap();
        assert_eq!(c, 1);
        assert_eq!(cost(&p6(), &b), Ok(1));
        assert_eq!(oracle_opt(&fig5()).unwrap().0, 2);
        let k22 = BipartiteGraph::from_matrix(&[&[1, 1], &[1, 1]]);
        assert_eq!(oracle_opt(&k22).unwrap().0, 0);
    }

    #[test]
    fn restricted_examples() {
        let (c, b) = oracle_opt_twin_respecting(&fig5()).unwrap();
        assert_eq!(c, 2);
        assert_eq!(b.left[0], b.left[1]);
        assert_eq!(b.left[2], b.left[3]);
        assert_eq!(b.left[4], b.left[5]);
        let single = BipartiteGraph::from_matrix(&[&[1]]);
        assert_eq!(oracle_opt_deletion_maximal(&single).unwrap().0, 0);
        assert_eq!(oracle_opt_deletion_maximal(&p6()).unwrap().0, 1);
    }

    #[test]
    fn too_large_is_an_error() {
        let g = BipartiteGraph::new(12, 12);
        assert!(matches!(
            oracle_opt_with(&g, OracleMode::DeletionMaximal, 1_000),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn dead_vertices_are_ignored() {
        let g = p6().without_vertices(&[crate::graph::VertexRef::left(1)]).unwrap();
        let (c, b) = oracle_opt(&g).unwrap();
        assert_eq!(c, 0);
        assert_eq!(b.left.len(), 3);
    }
}
