mod common;

use bicluster_core::generate::{gen_p6, gen_planted, gen_tight};
use bicluster_core::kernel::*;
use bicluster_core::oracle::oracle_opt;
use bicluster_core::BipartiteGraph;
use common::{all_graphs, all_up_to, random_graphs};

fn opt(g: &BipartiteGraph) -> usize {
    oracle_opt(g).unwrap().0
}

fn nothing_applies(inst: &Instance) -> bool {
    rule1(inst).1.is_empty() && rule2_step(inst).is_none() && rule3(inst) == Rule3Outcome::NotApplicable
}

#[test]
fn kernelize_preserves_the_answer_exhaustive_4x4() {
    let mut universe: Vec<_> = all_graphs(4, 4).collect();
    universe.extend(all_up_to(3));
    for g in universe {
        let o = opt(&g);
        for k in 0..=6 {
            let inst = Instance::new(g.clone(), k);
            let kern = kernelize(&inst);
            let reduced_yes = match &kern.reduction {
                Reduction::Infeasible => false,
                Reduction::Reduced(r) => opt(&r.graph) <= r.budget,
            };
            assert_eq!(o <= k, reduced_yes, "{:?} k={}", g, k);
        }
    }
}

#[test]
fn kernel_output_is_a_replayable_fixpoint() {
    for g in random_graphs(800, 7, 21) {
        for k in [0, 2, 5] {
            let inst = Instance::new(g.clone(), k);
            let kern = kernelize(&inst);
            let text = kern.trace.to_text();
            let parsed = KernelTrace::parse(&text).unwrap();
            assert_eq!(parsed, kern.trace);
            assert_eq!(parsed.replay(&inst).unwrap(), kern.reduction);
            match &kern.reduction {
                Reduction::Reduced(r) => {
                    assert!(nothing_applies(r));
                    assert_eq!(k - r.budget, kern.trace.budget_used());
                    assert!(r.graph.vertex_count() <= g.vertex_count());
                }
                Reduction::Infeasible => assert_eq!(kern.trace.steps.last().unwrap().rule(), 3),
            }
        }
    }
}

#[test]
fn each_rule_step_is_monotone() {
    for g in random_graphs(400, 6, 22) {
        let inst = Instance::new(g.clone(), 4);
        if let Some((out, _)) = rule2_step(&inst) {
            assert_eq!(out.graph.vertex_count() + 1, g.vertex_count());
            assert_eq!(out.budget, 4);
        }
        if let Rule3Outcome::Applied(out, _) = rule3(&inst) {
            assert_eq!(out.budget, 3);
            assert_eq!(out.graph.edge_count() + 1, g.edge_count());
        }
    }
}

#[test]
fn kernel_size_bound_on_families_and_random_graphs() {
    let mut gs: Vec<BipartiteGraph> = (1..=3).map(|c| gen_p6(c).unwrap()).collect();
    gs.extend((1..=2).map(|c| gen_tight(c).unwrap()));
    for seed in 0..60 {
        gs.push(gen_planted(&[(2, 2), (2, 1), (1, 2)], 0.15, seed).unwrap().graph);
    }
    gs.extend(random_graphs(400, 5, 23));
    for g in gs {
        let k = opt(&g);
        if k == 0 {
            continue;
        }
        let kern = kernelize(&Instance::new(g.clone(), k));
        let r = kern.reduction.instance().expect("a YES instance stays feasible");
        assert!(2 * r.graph.vertex_count() <= 9 * k, "{:?}", g);
    }
}

#[test]
fn copies_of_p6_vanish() {
    for c in 1..=5 {
        let kern = kernelize(&Instance::new(gen_p6(c).unwrap(), c));
        let r = kern.reduction.instance().unwrap();
        assert!(r.graph.is_empty());
        assert_eq!(r.budget, 0);
        assert_eq!(kern.trace.count(3), c);
        assert_eq!(kern.trace.count(1), 2 * c);
        let short = kernelize(&Instance::new(gen_p6(c).unwrap(), c - 1));
        assert_eq!(short.reduction, Reduction::Infeasible);
    }
}

#[test]
fn tight_family_is_a_fixpoint() {
    for c in 1..=3 {
        let inst = Instance::new(gen_tight(c).unwrap(), 2 * c);
        assert!(nothing_applies(&inst));
        let kern = kernelize(&inst);
        assert!(kern.trace.steps.is_empty());
        assert_eq!(kern.reduction, Reduction::Reduced(inst));
    }
}

#[test]
fn replay_rejects_foreign_steps() {
    let inst = Instance::new(common::p6(), 1);
    let bogus = KernelTrace::parse("R3 1 3\n").unwrap();
    assert!(bogus.replay(&inst).is_err());
    let bogus = KernelTrace::parse("R1 l1 r1\n").unwrap();
    assert!(bogus.replay(&inst).is_err());
}
