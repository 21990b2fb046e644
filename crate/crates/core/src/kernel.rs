//! Reduction rules and the kernelization fixpoint.
//!
//! * Rule 1 removes every connected component that is already a bicluster.
//! * Rule 2 removes a vertex from a twin class `R` with `|R| > |N(N(R)) \ R|`.
//! * Rule 3 takes a twin class `R` with sisters `T` (twin-free vertices `t`
//!   with `N(t) = N(R) ∪ {v}`), sets `W = N(N(R)) \ (R ∪ T)` and, when
//!   `|R| > |W|` and `T` is nonempty, deletes the edge from one sister to its
//!   extra neighbour at the price of one unit of budget.
//!
//! Ties are broken by index: Rule 2 drops the largest member of the first
//! eligible class, Rule 3 uses the smallest sister of the first eligible
//! class. Classes are visited left side first, ordered by smallest member.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::{BipartiteGraph, Side, VertexRef};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: BipartiteGraph,
    pub budget: usize,
}

impl Instance {
    pub fn new(graph: BipartiteGraph, budget: usize) -> Self {
        Instance { graph, budget }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleStep {
    Rule1(Vec<VertexRef>),
    Rule2(VertexRef),
    /// The deleted `(left, right)` edge.
    Rule3(usize, usize),
}

impl RuleStep {
    pub fn rule(&self) -> u8 {
        match self {
            RuleStep::Rule1(_) => 1,
            RuleStep::Rule2(_) => 2,
            RuleStep::Rule3(..) => 3,
        }
    }

    pub fn budget_delta(&self) -> usize {
        matches!(self, RuleStep::Rule3(..)) as usize
    }
}

impl fmt::Display for RuleStep {
    /// `R1 <vertices>`, `R2 <vertex>`, `R3 <left> <right>`, 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleStep::Rule1(vs) => {
                write!(f, "R1")?;
                for v in vs {
                    write!(f, " {}", v)?;
                }
                Ok(())
            }
            RuleStep::Rule2(v) => write!(f, "R2 {}", v),
            RuleStep::Rule3(l, r) => write!(f, "R3 {} {}", l + 1, r + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("malformed trace line {0:?}")]
    Malformed(String),
    #[error("step {0} does not apply: {1}")]
    Inapplicable(usize, String),
}

fn parse_vertex(tok: &str) -> Option<VertexRef> {
    let (side, rest) = match tok.as_bytes().first()? {
        b'l' => (Side::Left, &tok[1..]),
        b'r' => (Side::Right, &tok[1..]),
        _ => return None,
    };
    let i: usize = rest.parse().ok()?;
    (i >= 1).then(|| VertexRef { side, index: i - 1 })
}

impl FromStr for RuleStep {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || KernelError::Malformed(s.to_string());
        let mut it = s.split_whitespace();
        match it.next() {
            Some("R1") => {
                let vs = it.map(parse_vertex).collect::<Option<Vec<_>>>().ok_or_else(bad)?;
                if vs.is_empty() {
                    return Err(bad());
                }
                Ok(RuleStep::Rule1(vs))
            }
            Some("R2") => {
                let v = it.next().and_then(parse_vertex).ok_or_else(bad)?;
                if it.next().is_some() {
                    return Err(bad());
                }
                Ok(RuleStep::Rule2(v))
            }
            Some("R3") => {
                let mut num = || -> Option<usize> {
                    let x: usize = it.next()?.parse().ok()?;
                    x.checked_sub(1)
                };
                let (l, r) = (num().ok_or_else(bad)?, num().ok_or_else(bad)?);
                if it.next().is_some() {
                    return Err(bad());
                }
                Ok(RuleStep::Rule3(l, r))
            }
            _ => Err(bad()),
        }
    }
}

/// Ordered record of rule applications.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KernelTrace {
    pub steps: Vec<RuleStep>,
}

impl KernelTrace {
    pub fn budget_used(&self) -> usize {
        self.steps.iter().map(RuleStep::budget_delta).sum()
    }

    pub fn count(&self, rule: u8) -> usize {
        self.steps.iter().filter(|s| s.rule() == rule).count()
    }

    pub fn to_text(&self) -> String {
        self.steps.iter().map(|s| format!("{}\n", s)).collect()
    }

    pub fn parse(text: &str) -> Result<Self, KernelError> {
        let steps = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()?;
        Ok(KernelTrace { steps })
    }

    /// Re-applies the steps to `inst`, checking each one is legal.
    pub fn replay(&self, inst: &Instance) -> Result<Reduction, KernelError> {
        let mut g = inst.graph.clone();
        let mut budget = inst.budget;
        for (i, step) in self.steps.iter().enumerate() {
            let fail = |msg: &str| KernelError::Inapplicable(i + 1, msg.to_string());
            match step {
                RuleStep::Rule1(vs) => {
                    let comps = g.bicluster_components();
                    let hit = comps.iter().find(|c| c.is_bicluster && {
                        let mut mine: Vec<_> = c.vertices().collect();
                        let mut theirs = vs.clone();
                        mine.sort();
                        theirs.sort();
                        mine == theirs
                    });
                    if hit.is_none() {
                        return Err(fail("not a bicluster component"));
                    }
                    for &v in vs {
                        g.remove_vertex(v);
                    }
                }
                RuleStep::Rule2(v) => {
                    if !g.is_alive(*v) {
                        return Err(fail("vertex not present"));
                    }
                    g.remove_vertex(*v);
                }
                RuleStep::Rule3(l, r) => {
                    if *l >= g.side_len(Side::Left)
                        || *r >= g.side_len(Side::Right)
                        || !g.has_edge(*l, *r)
                    {
                        return Err(fail("edge not present"));
                    }
                    if budget == 0 {
                        return Ok(Reduction::Infeasible);
                    }
                    g.set_edge(*l, *r, false);
                    budget -= 1;
                }
            }
        }
        Ok(Reduction::Reduced(Instance::new(g, budget)))
    }
}

/// Result of a budget-consuming reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    Reduced(Instance),
    /// A rule needed budget that was not there: certified NO.
    Infeasible,
}

impl Reduction {
    pub fn instance(&self) -> Option<&Instance> {
        match self {
            Reduction::Reduced(i) => Some(i),
            Reduction::Infeasible => None,
        }
    }
}

/// Removes every bicluster component.
pub fn rule1(inst: &Instance) -> (Instance, Vec<RuleStep>) {
    let mut g = inst.graph.clone();
    let mut steps = Vec::new();
    for c in inst.graph.bicluster_components() {
        if c.is_bicluster {
            let vs: Vec<_> = c.vertices().collect();
            for &v in &vs {
                g.remove_vertex(v);
            }
            steps.push(RuleStep::Rule1(vs));
        }
    }
    (Instance::new(g, inst.budget), steps)
}

fn n2_minus(g: &BipartiteGraph, side: Side, class: &[usize]) -> FixedBitSet {
    let s = g.neighbors_of_set(side, class);
    let mut second = g.neighbors_of_set(side.other(), &s.ones().collect::<Vec<_>>());
    for &x in class {
        second.set(x, false);
    }
    second
}

/// One Rule-2 removal, if some class qualifies.
pub fn rule2_step(inst: &Instance) -> Option<(Instance, RuleStep)> {
    let g = &inst.graph;
    let twins = g.twin_classes();
    for side in Side::BOTH {
        for class in twins.classes(side) {
            if class.len() > n2_minus(g, side, class).count_ones(..) {
                let v = VertexRef { side, index: *class.last().unwrap() };
                let mut h = g.clone();
                h.remove_vertex(v);
                return Some((Instance::new(h, inst.budget), RuleStep::Rule2(v)));
            }
        }
    }
    None
}

/// Applies Rule 2 until no class qualifies.
pub fn rule2(inst: &Instance) -> (Instance, Vec<RuleStep>) {
    let mut cur = inst.clone();
    let mut steps = Vec::new();
    while let Some((next, step)) = rule2_step(&cur) {
        cur = next;
        steps.push(step);
    }
    (cur, steps)
}

/// The sister structure around a twin class `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SisterSet {
    pub side: Side,
    pub class: Vec<usize>,
    /// `S = N(R)`, on the other side.
    pub common: Vec<usize>,
    /// Sisters with their extra neighbour.
    pub sisters: Vec<(usize, usize)>,
    /// `N(S) \ (R ∪ T)`, on the side of `R`.
    pub rest: Vec<usize>,
}

/// `class` must be a full twin class of `g` on `side`.
pub fn sisters(g: &BipartiteGraph, side: Side, class: &[usize]) -> SisterSet {
    let s = g.neighbors_of_set(side, class);
    let twins = g.twin_classes();
    let mut sisters = Vec::new();
    let mut rest = Vec::new();
    for t in n2_minus(g, side, class).ones() {
        let tv = VertexRef { side, index: t };
        let nt = g.nbrs(tv);
        let twin_free = twins.class_of(tv).len() == 1;
        let mut extra = nt.clone();
        extra.difference_with(&s);
        if twin_free && s.is_subset(nt) && extra.count_ones(..) == 1 {
            sisters.push((t, extra.ones().next().unwrap()));
        } else {
            rest.push(t);
        }
    }
    SisterSet { side, class: class.to_vec(), common: s.ones().collect(), sisters, rest }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule3Outcome {
    NotApplicable,
    Applied(Instance, RuleStep),
    /// The rule fires with budget 0.
    Infeasible(RuleStep),
}

/// One Rule-3 deletion, if some class qualifies.
pub fn rule3(inst: &Instance) -> Rule3Outcome {
    let g = &inst.graph;
    let twins = g.twin_classes();
    for side in Side::BOTH {
        for class in twins.classes(side) {
            let ss = sisters(g, side, class);
            if ss.sisters.is_empty() || class.len() <= ss.rest.len() {
                continue;
            }
            let (t, v) = ss.sisters[0];
            let (l, r) = match side {
                Side::Left => (t, v),
                Side::Right => (v, t),
            };
            let step = RuleStep::Rule3(l, r);
            if inst.budget == 0 {
                return Rule3Outcome::Infeasible(step);
            }
            let mut h = g.clone();
            h.set_edge(l, r, false);
            return Rule3Outcome::Applied(Instance::new(h, inst.budget - 1), step);
        }
    }
    Rule3Outcome::NotApplicable
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    pub reduction: Reduction,
    pub trace: KernelTrace,
}

/// Runs Rules 1-3 to a fixpoint: each sweep applies Rule 1, Rule 2
/// exhaustively, then a single Rule-3 step.
pub fn kernelize(inst: &Instance) -> Kernel {
    let mut cur = inst.clone();
    let mut trace = KernelTrace::default();
    loop {
        let (next, s1) = rule1(&cur);
        let (next, s2) = rule2(&next);
        let mut changed = !s1.is_empty() || !s2.is_empty();
        trace.steps.extend(s1);
        trace.steps.extend(s2);
        cur = next;
        match rule3(&cur) {
            Rule3Outcome::NotApplicable => {}
            Rule3Outcome::Applied(next, step) => {
                trace.steps.push(step);
                cur = next;
                changed = true;
            }
            Rule3Outcome::Infeasible(step) => {
                trace.steps.push(step);
                return Kernel { reduction: Reduction::Infeasible, trace };
            }
        }
        if !changed {
            return Kernel { reduction: Reduction::Reduced(cur), trace };
        }
    }
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
    fn rule1_examples() {
        // K_{2,2} on l0,l1,r0,r1 plus a P6 on l2..l4, r2..r4
        let mut edges = vec![(0, 0), (0, 1), (1, 0), (1, 1)];
        edges.extend([(2, 2), (3, 2), (3, 3), (4, 3), (4, 4)]);
        let g = BipartiteGraph::from_edges(5, 5, edges).unwrap();
        let (out, steps) = rule1(&Instance::new(g, 3));
        assert_eq!(steps.len(), 1);
        assert_eq!(out.graph.vertex_count(), 6);
        assert_eq!(out.budget, 3);

        let k = BipartiteGraph::from_matrix(&[&[1, 1], &[1, 1], &[0, 0]]);
        let (out, steps) = rule1(&Instance::new(k, 0));
        assert!(out.graph.is_empty());
        assert_eq!(steps.len(), 2);

        let (out, steps) = rule1(&Instance::new(p6(), 1));
        assert!(steps.is_empty());
        assert_eq!(out.graph, p6());
    }

    #[test]
    fn rule2_examples() {
        // a, b -> {x, y}; w -> {y}
        let g = BipartiteGraph::from_matrix(&[&[1, 1], &[1, 1], &[0, 1]]);
        let (out, steps) = rule2(&Instance::new(g, 2));
        assert_eq!(steps, vec![RuleStep::Rule2(VertexRef::left(1))]);
        assert_eq!(out.graph.vertex_count(), 4);

        assert!(rule2_step(&Instance::new(p6(), 1)).is_none());
        assert!(rule2_step(&Instance::new(fig5(), 2)).is_none());
    }

    #[test]
    fn sister_examples() {
        let s = sisters(&p6(), Side::Left, &[0]);
        assert_eq!(s.common, vec![0]);
        assert_eq!(s.sisters, vec![(1, 1)]);
        assert!(s.rest.is_empty());

        // R = {l0} -> {r0, r1}; t = l1 -> {r0, r1, r2} (sister, extra r2);
        // l2, l3 twins -> {r1, r3} are in W, not sisters.
        let g = BipartiteGraph::from_matrix(&[
            &[1, 1, 0, 0],
            &[1, 1, 1, 0],
            &[0, 1, 0, 1],
            &[0, 1, 0, 1],
        ]);
        let s = sisters(&g, Side::Left, &[0]);
        assert_eq!(s.sisters, vec![(1, 2)]);
        assert_eq!(s.rest, vec![2, 3]);

        let k = BipartiteGraph::from_matrix(&[&[1, 1], &[1, 1]]);
        assert!(sisters(&k, Side::Left, &[0, 1]).sisters.is_empty());
    }

    #[test]
    fn rule3_examples() {
        match rule3(&Instance::new(p6(), 1)) {
            Rule3Outcome::Applied(out, step) => {
                assert_eq!(step, RuleStep::Rule3(1, 1));
                assert_eq!(out.budget, 0);
                let (out, _) = rule1(&out);
                assert!(out.graph.is_empty());
            }
            other => panic!("unexpected {:?}", other),
        }
        assert_eq!(rule3(&Instance::new(fig5(), 2)), Rule3Outcome::NotApplicable);
        assert_eq!(
            rule3(&Instance::new(p6(), 0)),
            Rule3Outcome::Infeasible(RuleStep::Rule3(1, 1))
        );
    }

    #[test]
    fn figure_one_configuration() {
        // R = {l0, l1} -> {r0, r1}; sister l2 -> {r0, r1, r2}; W = {l3, l4}
        // twins -> {r1, r3}; the sister's extra neighbour r2 has degree 1.
        let g = BipartiteGraph::from_matrix(&[
            &[1, 1, 0, 0],
            &[1, 1, 0, 0],
            &[1, 1, 1, 0],
            &[0, 1, 0, 1],
            &[0, 1, 0, 1],
        ]);
        let s = sisters(&g, Side::Left, &[0, 1]);
        assert_eq!(s.sisters, vec![(2, 2)]);
        assert_eq!(s.rest, vec![3, 4]);
        // |R| = |W| here, so add a third member to R.
        let g = BipartiteGraph::from_matrix(&[
            &[1, 1, 0, 0],
            &[1, 1, 0, 0],
            &[1, 1, 0, 0],
            &[1, 1, 1, 0],
            &[0, 1, 0, 1],
            &[0, 1, 0, 1],
        ]);
        match rule3(&Instance::new(g, 5)) {
            Rule3Outcome::Applied(_, step) => assert_eq!(step, RuleStep::Rule3(3, 2)),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn kernelize_examples() {
        let fig = Instance::new(fig5(), 2);
        let k = kernelize(&fig);
        assert_eq!(k.reduction, Reduction::Reduced(fig.clone()));
        assert!(k.trace.steps.is_empty());

        let bic = Instance::new(BipartiteGraph::from_matrix(&[&[1, 1], &[1, 1]]), 0);
        let k = kernelize(&bic);
        assert!(k.reduction.instance().unwrap().graph.is_empty());
    }

    #[test]
    fn trace_text_round_trip() {
        let t = KernelTrace {
            steps: vec![
                RuleStep::Rule1(vec![VertexRef::left(0), VertexRef::right(2)]),
                RuleStep::Rule2(VertexRef::right(4)),
                RuleStep::Rule3(1, 1),
            ],
        };
        let text = t.to_text();
        assert_eq!(text, "R1 l1 r3\nR2 r5\nR3 2 2\n");
        assert_eq!(KernelTrace::parse(&text), Ok(t));
        assert!(KernelTrace::parse("R3 0 1").is_err());
        assert!(KernelTrace::parse("R4 1").is_err());
    }
}
