//! Exact solving when every vertex has degree at most two.
//!
//! Such a graph is a union of paths and even cycles. A path is cut into
//! consecutive segments; each cut costs one deletion and a segment with `p`
//! left and `q` right vertices and `s` vertices costs `p·q - (s - 1)`
//! insertions. A cycle either becomes one bicluster or loses some edge and
//! is solved as a path.

use fixedbitset::FixedBitSet;

use crate::graph::{BipartiteGraph, Side, VertexRef};

/// A change relative to the graph it was computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Change {
    pub left: usize,
    pub right: usize,
    pub insert: bool,
}

impl Change {
    pub fn delete(left: usize, right: usize) -> Self {
        Change { left, right, insert: false }
    }

    pub fn insert(left: usize, right: usize) -> Self {
        Change { left, right, insert: true }
    }

    pub(crate) fn between(a: VertexRef, b: VertexRef, insert: bool) -> Self {
        match a.side {
            Side::Left => Change { left: a.index, right: b.index, insert },
            Side::Right => Change { left: b.index, right: a.index, insert },
        }
    }
}

fn edge_between(a: VertexRef, b: VertexRef) -> Change {
    Change::between(a, b, false)
}

/// Changes that turn the walk `seq[i..j]` into one bicluster.
fn segment_changes(g: &BipartiteGraph, seq: &[VertexRef], out: &mut Vec<Change>) {
    let (ls, rs): (Vec<&VertexRef>, Vec<&VertexRef>) = seq.iter().partition(|v| v.side == Side::Left);
    for l in &ls {
        for r in &rs {
            if !g.has_edge(l.index, r.index) {
                out.push(Change::insert(l.index, r.index));
            }
        }
    }
}

fn segment_cost(seq: &[VertexRef]) -> usize {
    let p = seq.iter().filter(|v| v.side == Side::Left).count();
    let q = seq.len() - p;
    p * q - (seq.len() - 1)
}

/// Optimal cuts of a path given by its vertex sequence.
fn path_dp(g: &BipartiteGraph, seq: &[VertexRef]) -> (usize, Vec<Change>) {
    let n = seq.len();
    // best[j]: cost of the prefix seq[..j] ending a segment at j - 1.
    let mut best = vec![usize::MAX; n + 1];
    let mut from = vec![0; n + 1];
    best[0] = 0;
    for j in 1..=n {
        for i in 0..j {
            let c = best[i] + segment_cost(&seq[i..j]) + usize::from(i > 0);
            if c < best[j] {
                best[j] = c;
                from[j] = i;
            }
        }
    }
    let mut changes = Vec::new();
    let mut j = n;
    while j > 0 {
        let i = from[j];
        segment_changes(g, &seq[i..j], &mut changes);
        if i > 0 {
            changes.push(edge_between(seq[i - 1], seq[i]));
        }
        j = i;
    }
    changes.sort();
    (best[n], changes)
}

fn cycle_solve(g: &BipartiteGraph, cyc: &[VertexRef]) -> (usize, Vec<Change>) {
    let m = cyc.len();
    let half = m / 2;
    let mut best_cost = half * half - m;
    let mut best = Vec::new();
    segment_changes(g, cyc, &mut best);
    for cut in 0..m {
        // Remove the edge cyc[cut] - cyc[cut + 1] and walk from cyc[cut + 1].
        let walk: Vec<_> = (1..=m).map(|s| cyc[(cut + s) % m]).collect();
        let (c, mut ch) = path_dp(g, &walk);
        if c + 1 < best_cost {
            best_cost = c + 1;
            ch.push(edge_between(cyc[cut], cyc[(cut + 1) % m]));
            ch.sort();
            best = ch;
        }
    }
    (best_cost, best)
}

/// Solves every component; `None` if some vertex has degree above two.
pub(crate) fn solve_components(g: &BipartiteGraph) -> Option<(usize, Vec<Change>)> {
    if g.max_degree() > 2 {
        return None;
    }
    let mut seen = [
        FixedBitSet::with_capacity(g.side_len(Side::Left)),
        FixedBitSet::with_capacity(g.side_len(Side::Right)),
    ];
    let mark = |seen: &mut [FixedBitSet; 2], v: VertexRef| {
        seen[v.side as usize].insert(v.index);
    };
    let is_seen = |seen: &[FixedBitSet; 2], v: VertexRef| seen[v.side as usize].contains(v.index);
    let walk = |seen: &mut [FixedBitSet; 2], start: VertexRef| -> Vec<VertexRef> {
        let mut seq = vec![start];
        mark(seen, start);
        let mut cur = start;
        loop {
            let next = g
                .nbrs(cur)
                .ones()
                .map(|i| VertexRef { side: cur.side.other(), index: i })
                .find(|&w| !is_seen(seen, w));
            match next {
                Some(w) => {
                    mark(seen, w);
                    seq.push(w);
                    cur = w;
                }
                None => return seq,
            }
        }
    };
    let mut total = 0;
    let mut changes = Vec::new();
    // Paths first, each walked from an endpoint.
    for v in g.all_vertices() {
        if !is_seen(&seen, v) && g.degree(v) <= 1 {
            let seq = walk(&mut seen, v);
            let (c, ch) = path_dp(g, &seq);
            total += c;
            changes.extend(ch);
        }
    }
    // What remains are cycles.
    for v in g.all_vertices() {
        if !is_seen(&seen, v) {
            let seq = walk(&mut seen, v);
            let (c, ch) = cycle_solve(g, &seq);
            total += c;
            changes.extend(ch);
        }
    }
    changes.sort();
    Some((total, changes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> BipartiteGraph {
        let mut e = Vec::new();
        for i in 0..n {
            e.push((i, i));
            e.push(((i + 1) % n, i));
        }
        BipartiteGraph::from_edges(n, n, e).unwrap()
    }

    #[test]
    fn small_cycles() {
        assert_eq!(solve_components(&cycle(2)).unwrap().0, 0);
        assert_eq!(solve_components(&cycle(3)).unwrap().0, 2);
        assert_eq!(solve_components(&cycle(4)).unwrap().0, 3);
    }

    #[test]
    fn p6_cuts_the_middle_edge() {
        let g = BipartiteGraph::from_edges(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)]).unwrap();
        assert_eq!(solve_components(&g), Some((1, vec![Change::delete(1, 1)])));
    }

    #[test]
    fn rejects_degree_three() {
        let g = BipartiteGraph::from_matrix(&[&[1, 1, 1]]);
        assert!(solve_components(&g).is_none());
    }
}
