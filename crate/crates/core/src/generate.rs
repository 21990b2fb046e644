//! Instance generators. All of them are pure functions of their arguments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::BipartiteGraph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("the number of copies must be at least 1")]
    NoCopies,
    #[error("probability {0} is outside [0, 1]")]
    Probability(f64),
}

fn check_p(p: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GenError::Probability(p))
    }
}

/// `copies` disjoint six-vertex paths. Copy `i` uses left and right indices
/// `3i..3i+3`.
pub fn gen_p6(copies: usize) -> Result<BipartiteGraph, GenError> {
    if copies == 0 {
        return Err(GenError::NoCopies);
    }
    let edges = (0..copies).flat_map(|i| {
        let o = 3 * i;
        [(o, o), (o + 1, o), (o + 1, o + 1), (o + 2, o + 1), (o + 2, o + 2)]
    });
    Ok(BipartiteGraph::from_edges(3 * copies, 3 * copies, edges).expect("valid by construction"))
}

/// `copies` disjoint copies of a six-vertex path whose left vertices are
/// all doubled: left `a..f`, right `g, h, i`, edges `{a,b}×{g}`,
/// `{c,d}×{g,h}` and `{e,f}×{h,i}`. Each copy has 9 vertices and needs 2
/// edits, and none of the reduction rules applies.
pub fn gen_tight(copies: usize) -> Result<BipartiteGraph, GenError> {
    if copies == 0 {
        return Err(GenError::NoCopies);
    }
    let edges = (0..copies).flat_map(|i| {
        let (a, g) = (6 * i, 3 * i);
        [
            (a, g),
            (a + 1, g),
            (a + 2, g),
            (a + 3, g),
            (a + 2, g + 1),
            (a + 3, g + 1),
            (a + 4, g + 1),
            (a + 5, g + 1),
            (a + 4, g + 2),
            (a + 5, g + 2),
        ]
    });
    Ok(BipartiteGraph::from_edges(6 * copies, 3 * copies, edges).expect("valid by construction"))
}

/// Each pair is an edge independently with probability `p`. Pairs are drawn
/// in row-major order from a ChaCha8 stream seeded with `seed`.
pub fn gen_random(n_left: usize, n_right: usize, p: f64, seed: u64) -> Result<BipartiteGraph, GenError> {
    check_p(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for l in 0..n_left {
        for r in 0..n_right {
            if rng.gen_bool(p) {
                edges.push((l, r));
            }
        }
    }
    Ok(BipartiteGraph::from_edges(n_left, n_right, edges).expect("valid by construction"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Planted {
    pub graph: BipartiteGraph,
    /// Pairs flipped away from the planted blocks; an upper bound on the
    /// optimum.
    pub flips: usize,
}

/// Disjoint complete blocks of the given `(left, right)` sizes, laid out
/// consecutively, then every pair flipped with probability `q`.
pub fn gen_planted(blocks: &[(usize, usize)], q: f64, seed: u64) -> Result<Planted, GenError> {
    check_p(q)?;
    let mut owner = [Vec::new(), Vec::new()];
    for (b, &(nl, nr)) in blocks.iter().enumerate() {
        owner[0].extend(std::iter::repeat(b).take(nl));
        owner[1].extend(std::iter::repeat(b).take(nr));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut flips = 0;
    for (l, bl) in owner[0].iter().enumerate() {
        for (r, br) in owner[1].iter().enumerate() {
            let flip = rng.gen_bool(q);
            flips += usize::from(flip);
            if (bl == br) != flip {
                edges.push((l, r));
            }
        }
    }
    let graph = BipartiteGraph::from_edges(owner[0].len(), owner[1].len(), edges).expect("valid by construction");
    Ok(Planted { graph, flips })
}
