//! Text formats.
//!
//! Instances:
//!
//! ```text
//! c a P6
//! p bce 3 3 5
//! e 1 1
//! e 2 1
//! ...
//! ```
//!
//! Solutions start with `s YES <cost>` or `s NO`, followed by `- l r`
//! (deletion) and `+ l r` (insertion) lines, then optional `b <id> <vertices>`
//! cluster lines such as `b 1 l1 l2 r1`. Indices are 1-based in files and
//! 0-based in memory. Lines starting with `c` are comments everywhere.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{BipartiteGraph, EditSet, Side, VertexRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.first() {
            Some(t) if !t.starts_with('c') => Some((i + 1, toks)),
            _ => None,
        }
    })
}

fn number(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse().or_else(|_| err(line, format!("expected a non-negative integer, got {:?}", tok)))
}

fn index(line: usize, tok: &str, bound: usize, what: &str) -> Result<usize, ParseError> {
    let x = number(line, tok)?;
    if x == 0 || x > bound {
        return err(line, format!("{} index {} out of range 1..={}", what, x, bound));
    }
    Ok(x - 1)
}

/// Reads a graph in `p bce` format. The budget is not part of the file.
pub fn parse_instance(text: &str) -> Result<BipartiteGraph, ParseError> {
    let mut header: Option<(usize, usize, usize, usize)> = None;
    let mut g = BipartiteGraph::new(0, 0);
    let mut seen = 0;
    let mut last = 0;
    for (line, toks) in content_lines(text) {
        last = line;
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return err(line, "second header");
                }
                if toks.len() != 5 || toks[1] != "bce" {
                    return err(line, "header must be `p bce <n_left> <n_right> <m>`");
                }
                let (nl, nr, m) = (number(line, toks[2])?, number(line, toks[3])?, number(line, toks[4])?);
                header = Some((nl, nr, m, line));
                g = BipartiteGraph::new(nl, nr);
            }
            "e" => {
                let Some((nl, nr, _, _)) = header else {
                    return err(line, "edge before header");
                };
                if toks.len() != 3 {
                    return err(line, "edge line must be `e <left> <right>`");
                }
                let l = index(line, toks[1], nl, "left")?;
                let r = index(line, toks[2], nr, "right")?;
                if g.has_edge(l, r) {
                    return err(line, format!("duplicate edge {} {}", l + 1, r + 1));
                }
                g.set_edge(l, r, true);
                seen += 1;
            }
            other => return err(line, format!("unknown line type {:?}", other)),
        }
    }
    match header {
        None => err(last.max(1), "missing header"),
        Some((_, _, m, _)) if m != seen => err(last, format!("header announces {} edges, found {}", m, seen)),
        Some(_) => Ok(g),
    }
}

/// Writes every vertex slot, dead ones as isolated vertices.
pub fn write_instance(g: &BipartiteGraph) -> String {
    let mut s = format!(
        "p bce {} {} {}\n",
        g.side_len(Side::Left),
        g.side_len(Side::Right),
        g.edge_count()
    );
    for (l, r) in g.edges() {
        writeln!(s, "e {} {}", l + 1, r + 1).unwrap();
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolutionFile {
    /// `Some(cost)` for `s YES <cost>`, `None` for `s NO`.
    pub claimed: Option<usize>,
    pub edits: EditSet,
    pub clusters: Vec<Vec<VertexRef>>,
}

impl SolutionFile {
    pub fn is_yes(&self) -> bool {
        self.claimed.is_some()
    }
}

/// The clusters of a bicluster graph: its components, isolated vertices
/// included.
pub fn clusters_of(g: &BipartiteGraph) -> Vec<Vec<VertexRef>> {
    g.bicluster_components().iter().map(|c| c.vertices().collect()).collect()
}

/// `witness` must be valid for `g`; `None` writes `s NO`.
pub fn write_solution(g: &BipartiteGraph, witness: Option<&EditSet>) -> String {
    let Some(w) = witness else {
        return "s NO\n".to_string();
    };
    let mut s = format!("s YES {}\n", w.cost());
    for (l, r) in &w.deletions {
        writeln!(s, "- {} {}", l + 1, r + 1).unwrap();
    }
    for (l, r) in &w.insertions {
        writeln!(s, "+ {} {}", l + 1, r + 1).unwrap();
    }
    if let Ok(h) = g.apply_edits(w) {
        for (i, c) in clusters_of(&h).iter().enumerate() {
            write!(s, "b {}", i + 1).unwrap();
            for v in c {
                write!(s, " {}", v).unwrap();
            }
            s.push('\n');
        }
    }
    s
}

fn parse_vertex(line: usize, tok: &str) -> Result<VertexRef, ParseError> {
    let side = match tok.chars().next() {
        Some('l') => Side::Left,
        Some('r') => Side::Right,
        _ => return err(line, format!("expected a vertex like l1 or r2, got {:?}", tok)),
    };
    let i = number(line, &tok[1..])?;
    if i == 0 {
        return err(line, "vertex indices start at 1");
    }
    Ok(VertexRef { side, index: i - 1 })
}

/// Reads a solution. Indices are checked against an instance only by
/// [`crate::verify::verify`].
pub fn parse_solution(text: &str) -> Result<SolutionFile, ParseError> {
    let mut sol = SolutionFile::default();
    let mut status = false;
    let mut pairs = BTreeSet::new();
    for (line, toks) in content_lines(text) {
        match toks[0] {
            "s" => {
                if status {
                    return err(line, "second status line");
                }
                status = true;
                sol.claimed = match toks[1..] {
                    ["YES", c] => Some(number(line, c)?),
                    ["NO"] => None,
                    _ => return err(line, "status must be `s YES <cost>` or `s NO`"),
                };
            }
            t @ ("-" | "+") => {
                if !status {
                    return err(line, "edit before status line");
                }
                if toks.len() != 3 {
                    return err(line, "edit line must be `- l r` or `+ l r`");
                }
                let (l, r) = (number(line, toks[1])?, number(line, toks[2])?);
                if l == 0 || r == 0 {
                    return err(line, "indices start at 1");
                }
                if !pairs.insert((l - 1, r - 1)) {
                    return err(line, format!("pair {} {} edited twice", l, r));
                }
                let set = if t == "-" { &mut sol.edits.deletions } else { &mut sol.edits.insertions };
                set.insert((l - 1, r - 1));
            }
            "b" => {
                if toks.len() < 2 {
                    return err(line, "cluster line must be `b <id> <vertices>`");
                }
                number(line, toks[1])?;
                let vs = toks[2..].iter().map(|t| parse_vertex(line, t)).collect::<Result<_, _>>()?;
                sol.clusters.push(vs);
            }
            other => return err(line, format!("unknown line type {:?}", other)),
        }
    }
    if !status {
        return err(1, "missing status line");
    }
    Ok(sol)
}
