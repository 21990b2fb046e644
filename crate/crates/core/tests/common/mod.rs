#![allow(dead_code)]

use bicluster_core::BipartiteGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Graph whose edge `(l, r)` is bit `l * nr + r` of `bits`.
pub fn from_bits(nl: usize, nr: usize, bits: u64) -> BipartiteGraph {
    let mut e = Vec::new();
    for l in 0..nl {
        for r in 0..nr {
            if bits >> (l * nr + r) & 1 == 1 {
                e.push((l, r));
            }
        }
    }
    BipartiteGraph::from_edges(nl, nr, e).unwrap()
}

/// Every graph with exactly `nl` left and `nr` right vertices.
pub fn all_graphs(nl: usize, nr: usize) -> impl Iterator<Item = BipartiteGraph> {
    (0..1u64 << (nl * nr)).map(move |b| from_bits(nl, nr, b))
}

/// Every graph with at most `n` vertices per side.
pub fn all_up_to(n: usize) -> Vec<BipartiteGraph> {
    let mut out = Vec::new();
    for nl in 0..=n {
        for nr in 0..=n {
            out.extend(all_graphs(nl, nr));
        }
    }
    out
}

/// Seeded random graphs with side sizes in `1..=n` and mixed densities.
pub fn random_graphs(count: usize, n: usize, seed: u64) -> Vec<BipartiteGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (nl, nr) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            let p = rng.gen_range(0.15..0.85);
            let mut e = Vec::new();
            for l in 0..nl {
                for r in 0..nr {
                    if rng.gen_bool(p) {
                        e.push((l, r));
                    }
                }
            }
            BipartiteGraph::from_edges(nl, nr, e).unwrap()
        })
        .collect()
}

pub fn p6() -> BipartiteGraph {
    BipartiteGraph::from_edges(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)]).unwrap()
}
