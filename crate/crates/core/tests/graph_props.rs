mod common;

use bicluster_core::graph::{per_vertex_edit_count, GraphError};
use bicluster_core::io::{parse_instance, write_instance};
use bicluster_core::{BipartiteGraph, EditSet, Side, VertexRef};
use common::{all_up_to, from_bits};
use proptest::prelude::*;

fn same_side_pairs(g: &BipartiteGraph) -> Vec<(VertexRef, VertexRef)> {
    let mut out = Vec::new();
    for side in Side::BOTH {
        let vs: Vec<_> = g.vertices(side).map(|i| VertexRef { side, index: i }).collect();
        for &a in &vs {
            for &b in &vs {
                out.push((a, b));
            }
        }
    }
    out
}

#[test]
fn conflict_free_iff_bicluster_graph() {
    for g in all_up_to(3) {
        let any_conflict = same_side_pairs(&g).iter().any(|&(a, b)| g.in_conflict(a, b).unwrap());
        assert_eq!(!any_conflict, g.is_bicluster_graph(), "{:?}", g);
    }
}

#[test]
fn conflict_is_symmetric_and_irreflexive() {
    for g in all_up_to(3) {
        for (a, b) in same_side_pairs(&g) {
            assert_eq!(g.in_conflict(a, b), g.in_conflict(b, a));
            if a == b {
                assert!(!g.in_conflict(a, b).unwrap());
            }
        }
    }
}

#[test]
fn find_conflict_is_the_first_partner() {
    for g in all_up_to(3) {
        for u in g.all_vertices() {
            let expect = g
                .vertices(u.side)
                .map(|i| VertexRef { side: u.side, index: i })
                .find(|&v| g.in_conflict(u, v).unwrap());
            assert_eq!(g.find_conflict(u), expect);
            if expect.is_none() {
                let comp = g.bicluster_components().into_iter().find(|c| c.vertices().any(|v| v == u)).unwrap();
                assert!(comp.is_bicluster);
            }
        }
    }
}

#[test]
fn usage_errors() {
    let g = common::p6();
    assert_eq!(g.neighbors(VertexRef::left(3)), Err(GraphError::OutOfRange(VertexRef::left(3))));
    assert!(matches!(g.in_conflict(VertexRef::left(0), VertexRef::right(0)), Err(GraphError::DifferentSides(..))));
    let mut e = EditSet::new();
    e.deletions.insert((0, 2));
    assert_eq!(g.apply_edits(&e), Err(GraphError::DeleteNonEdge(0, 2)));
    let mut e = EditSet::new();
    e.insertions.insert((0, 0));
    assert_eq!(g.apply_edits(&e), Err(GraphError::InsertExisting(0, 0)));
}

fn graph_strategy(max: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max, 1..=max).prop_flat_map(|(nl, nr)| {
        any::<u64>().prop_map(move |bits| from_bits(nl, nr, bits & ((1u64 << (nl * nr)) - 1)))
    })
}

proptest! {
    #[test]
    fn twin_classes_group_equal_neighbourhoods(g in graph_strategy(6)) {
        let tp = g.twin_classes();
        for side in Side::BOTH {
            let mut covered = 0;
            for class in tp.classes(side) {
                covered += class.len();
                let first = g.nbrs(VertexRef { side, index: class[0] });
                for &m in class {
                    prop_assert_eq!(g.nbrs(VertexRef { side, index: m }), first);
                }
            }
            prop_assert_eq!(covered, g.vertices(side).count());
            let cs = tp.classes(side);
            for i in 0..cs.len() {
                for j in i + 1..cs.len() {
                    prop_assert!(cs[i][0] < cs[j][0]);
                    prop_assert_ne!(g.nbrs(VertexRef { side, index: cs[i][0] }), g.nbrs(VertexRef { side, index: cs[j][0] }));
                }
            }
        }
    }

    #[test]
    fn edit_counts_sum_to_cost(g in graph_strategy(6), flips in any::<u64>()) {
        let (nl, nr) = (g.side_len(Side::Left), g.side_len(Side::Right));
        let mut e = EditSet::new();
        for l in 0..nl {
            for r in 0..nr {
                if flips >> (l * nr + r) & 1 == 1 {
                    if g.has_edge(l, r) { e.deletions.insert((l, r)); } else { e.insertions.insert((l, r)); }
                }
            }
        }
        let left: usize = (0..nl).map(|l| per_vertex_edit_count(&g, &e, VertexRef::left(l)).unwrap()).sum();
        let right: usize = (0..nr).map(|r| per_vertex_edit_count(&g, &e, VertexRef::right(r)).unwrap()).sum();
        prop_assert_eq!(left, e.cost());
        prop_assert_eq!(right, e.cost());
        let h = g.apply_edits(&e).unwrap();
        prop_assert_eq!(h.edge_count() + e.deletions.len(), g.edge_count() + e.insertions.len());
        prop_assert_eq!(EditSet::between(&g, &h), e);
    }

    #[test]
    fn instance_text_round_trips(g in graph_strategy(7)) {
        prop_assert_eq!(parse_instance(&write_instance(&g)).unwrap(), g);
    }
}
