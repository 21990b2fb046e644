//! Independent solution checking. Uses only graph primitives.

use std::fmt;

use crate::graph::{BipartiteGraph, Side, VertexRef};
use crate::io::SolutionFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    BadEdit,
    CostMismatch,
    NotBicluster,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::BadEdit => "bad-edit",
            Category::CostMismatch => "cost-mismatch",
            Category::NotBicluster => "not-bicluster",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub category: Category,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.category, self.detail)
    }
}

fn v(category: Category, detail: String) -> Violation {
    Violation { category, detail }
}

/// Checks a YES solution against `g`: every edit is legal, the edit count
/// is at most the claimed cost (and the budget, if given), and the edited
/// graph is a bicluster graph. A NO solution has nothing to check.
pub fn verify(g: &BipartiteGraph, sol: &SolutionFile, budget: Option<usize>) -> Result<(), Vec<Violation>> {
    let Some(claimed) = sol.claimed else {
        return Ok(());
    };
    let mut out = Vec::new();
    let e = &sol.edits;
    let in_range = |l: usize, r: usize| g.is_alive(VertexRef::left(l)) && g.is_alive(VertexRef::right(r));
    for &(l, r) in &e.deletions {
        if !in_range(l, r) {
            out.push(v(Category::BadEdit, format!("deletion {} {} is out of range", l + 1, r + 1)));
        } else if !g.has_edge(l, r) {
            out.push(v(Category::BadEdit, format!("deletion {} {} is not an edge", l + 1, r + 1)));
        }
    }
    for &(l, r) in &e.insertions {
        if !in_range(l, r) {
            out.push(v(Category::BadEdit, format!("insertion {} {} is out of range", l + 1, r + 1)));
        } else if g.has_edge(l, r) {
            out.push(v(Category::BadEdit, format!("insertion {} {} is already an edge", l + 1, r + 1)));
        }
    }
    if e.cost() > claimed {
        out.push(v(Category::CostMismatch, format!("{} edits but cost {} claimed", e.cost(), claimed)));
    }
    if let Some(k) = budget {
        if e.cost() > k {
            out.push(v(Category::CostMismatch, format!("{} edits exceed budget {}", e.cost(), k)));
        }
    }
    if out.is_empty() {
        let h = g.apply_edits(e).expect("edits validated above");
        for c in h.bicluster_components().iter().filter(|c| !c.is_bicluster) {
            let missing = c.left.len() * c.right.len()
                - c.left.iter().map(|&l| h.degree(VertexRef { side: Side::Left, index: l })).sum::<usize>();
            let first = c.vertices().next().unwrap();
            out.push(v(
                Category::NotBicluster,
                format!("component of {} ({} vertices) misses {} edges", first, c.len(), missing),
            ));
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
