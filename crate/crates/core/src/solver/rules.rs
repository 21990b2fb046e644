//! Branching rules. Every generator works on the twin quotient of the
//! current graph: a twin class is edited as a unit, so twins always receive
//! identical edits.

use fixedbitset::FixedBitSet;

use super::paths::Change;
use crate::graph::{BipartiteGraph, Side, TwinPartition, VertexRef};

fn vref(side: Side, index: usize) -> VertexRef {
    VertexRef { side, index }
}

/// Sets `a × b` to `present`, emitting only the pairs that change.
fn set_block(g: &BipartiteGraph, side: Side, a: &[usize], b: &[usize], present: bool, out: &mut Vec<Change>) {
    for &x in a {
        for &y in b {
            let c = Change::between(vref(side, x), vref(side.other(), y), present);
            if g.has_edge(c.left, c.right) != present {
                out.push(c);
            }
        }
    }
}

/// Other-side twin classes contained in `set`, by smallest member.
fn classes_in<'a>(tp: &'a TwinPartition, side: Side, set: &FixedBitSet) -> Vec<&'a [usize]> {
    tp.classes(side)
        .iter()
        .filter(|c| set.contains(c[0]))
        .map(|c| c.as_slice())
        .collect()
}

pub(crate) struct PairSets<'a> {
    pub ru: &'a [usize],
    pub rv: &'a [usize],
    /// Classes in `N(u) ∩ N(v)`.
    pub common: Vec<&'a [usize]>,
    /// Classes in `N(u) △ N(v)`.
    pub differ: Vec<&'a [usize]>,
}

pub(crate) fn pair_sets<'a>(g: &BipartiteGraph, tp: &'a TwinPartition, u: VertexRef, v: VertexRef) -> PairSets<'a> {
    let (nu, nv) = (g.nbrs(u), g.nbrs(v));
    let mut common = nu.clone();
    common.intersect_with(nv);
    let mut differ = nu.clone();
    differ.symmetric_difference_with(nv);
    let other = u.side.other();
    PairSets {
        ru: tp.class_of(u),
        rv: tp.class_of(v),
        common: classes_in(tp, other, &common),
        differ: classes_in(tp, other, &differ),
    }
}

/// `u` and `v` in one bicluster: each class of `differ` joins both or
/// neither.
pub(crate) fn same_children(
    g: &BipartiteGraph,
    side: Side,
    ru: &[usize],
    rv: &[usize],
    differ: &[&[usize]],
    budget: usize,
) -> Vec<Vec<Change>> {
    if differ.len() > budget || differ.len() >= usize::BITS as usize {
        return Vec::new();
    }
    let both: Vec<usize> = ru.iter().chain(rv).copied().collect();
    let mut out = Vec::new();
    for mask in 0u128..(1u128 << differ.len()) {
        let mut ch = Vec::new();
        for (i, k) in differ.iter().enumerate() {
            set_block(g, side, &both, k, mask >> i & 1 == 1, &mut ch);
        }
        if ch.len() <= budget {
            out.push(ch);
        }
    }
    out
}

/// `u` and `v` in different biclusters: each class of `common` leaves at
/// least one of them.
pub(crate) fn diff_children(
    g: &BipartiteGraph,
    side: Side,
    ru: &[usize],
    rv: &[usize],
    common: &[&[usize]],
    budget: usize,
) -> Vec<Vec<Change>> {
    if common.len() > budget || common.len() >= usize::BITS as usize {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 0u128..(1u128 << common.len()) {
        let mut ch = Vec::new();
        for (i, k) in common.iter().enumerate() {
            let from = if mask >> i & 1 == 1 { rv } else { ru };
            set_block(g, side, from, k, false, &mut ch);
        }
        if ch.len() <= budget {
            out.push(ch);
        }
    }
    out
}

/// The deletions of `class × nbrs`, `class` on `side`.
fn drop_edges(g: &BipartiteGraph, side: Side, class: &[usize], nbrs: &[usize]) -> Vec<Change> {
    let mut ch = Vec::new();
    set_block(g, side, class, nbrs, false, &mut ch);
    ch
}

fn others(g: &BipartiteGraph, w: VertexRef, v: usize) -> Vec<usize> {
    g.nbrs(w).ones().filter(|&x| x != v).collect()
}

/// Branching on a degree-one vertex `u` with neighbour `v`. `W = N(v) \ R_u`
/// must be nonempty.
pub(crate) fn degree_one_children(g: &BipartiteGraph, tp: &TwinPartition, u: VertexRef) -> Vec<Vec<Change>> {
    let side = u.side;
    let v = g.nbrs(u).ones().next().expect("degree-one vertex");
    let ru = tp.class_of(u);
    let mut w = g.nbrs(vref(side.other(), v)).clone();
    for &x in ru {
        w.set(x, false);
    }
    let wc = classes_in(tp, side, &w);
    debug_assert!(!wc.is_empty());
    let cut_u = drop_edges(g, side, ru, &[v]);
    let deg = |c: &[usize]| g.degree(vref(side, c[0]));
    // Same: the class keeps only v. Diff: the class loses v.
    let same = |c: &[usize]| drop_edges(g, side, c, &others(g, vref(side, c[0]), v));
    let diff = |c: &[usize]| drop_edges(g, side, c, &[v]);
    let join = |a: Vec<Change>, b: Vec<Change>| a.into_iter().chain(b).collect::<Vec<_>>();

    if wc.len() == 1 {
        let rw = wc[0];
        return match (deg(rw) == 2, rw.len() == 1) {
            (true, true) => vec![same(rw)],
            (true, false) => vec![cut_u, same(rw)],
            (false, true) => vec![same(rw), diff(rw)],
            (false, false) => vec![cut_u, same(rw), diff(rw)],
        };
    }
    if let Some(pos) = wc.iter().position(|c| deg(c) == 2) {
        let rw = wc[pos];
        let rest: Vec<_> = wc.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, c)| *c).collect();
        let second = rest.iter().find(|c| deg(c) == 2).copied().unwrap_or(rest[0]);
        if deg(second) == 2 {
            return vec![cut_u, join(same(rw), same(second))];
        }
        return vec![cut_u, join(same(rw), same(second)), join(same(rw), diff(second))];
    }
    let (x, y) = (wc[0], wc[1]);
    vec![
        cut_u,
        join(diff(x), diff(y)),
        join(diff(x), same(y)),
        join(same(x), diff(y)),
        join(same(x), same(y)),
    ]
}

/// Class sets for the twin rule: returns `(C, D)` for the pair `(R, u)`.
pub(crate) fn twin_sets<'a>(
    g: &BipartiteGraph,
    tp: &'a TwinPartition,
    r: VertexRef,
    u: VertexRef,
) -> (Vec<&'a [usize]>, Vec<&'a [usize]>) {
    let (nr, nu) = (g.nbrs(r), g.nbrs(u));
    let mut i = nr.clone();
    i.intersect_with(nu);
    let mut x = nr.clone();
    x.difference_with(nu);
    let mut y = nu.clone();
    y.difference_with(nr);
    let other = r.side.other();
    let (i, x, y) = (classes_in(tp, other, &i), classes_in(tp, other, &x), classes_in(tp, other, &y));
    if i.len() >= 2 {
        let d = x.first().or(y.first()).copied().into_iter().collect();
        (i[..2].to_vec(), d)
    } else {
        let d = x.first().into_iter().chain(y.first()).copied().collect();
        (i, d)
    }
}

/// The merge rule: `N(v) ⊂ N(u)` with `N(u) \ N(v) = {z}`.
pub(crate) fn merge_children(g: &BipartiteGraph, u: VertexRef, v: VertexRef) -> Vec<Vec<Change>> {
    let mut z = g.nbrs(u).clone();
    z.difference_with(g.nbrs(v));
    let z = vref(u.side.other(), z.ones().next().expect("u has an extra neighbour"));
    vec![vec![Change::between(u, z, false)], vec![Change::between(v, z, true)]]
}

/// Whether every conflicting pair differs in exactly one neighbour.
pub(crate) fn merge_precondition(g: &BipartiteGraph) -> bool {
    for side in Side::BOTH {
        for a in g.vertices(side) {
            let u = vref(side, a);
            if g.degree(u) < 2 {
                return false;
            }
            for v in g.conflict_partners(u) {
                let mut d = g.nbrs(u).clone();
                d.symmetric_difference_with(g.nbrs(v));
                if d.count_ones(..) != 1 {
                    return false;
                }
            }
        }
    }
    true
}
