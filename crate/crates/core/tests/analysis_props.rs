use std::collections::BTreeMap;

use bicluster_core::analysis::*;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn v(s: &str) -> BranchingVector {
    s.parse().unwrap()
}

/// Brute-force search for an injection `b -> b2` with `b_i >= b2_σ(i)`.
fn injection_exists(b: &[u32], b2: &[u32]) -> bool {
    fn go(i: usize, b: &[u32], b2: &[u32], used: &mut Vec<bool>) -> bool {
        if i == b.len() {
            return true;
        }
        for j in 0..b2.len() {
            if !used[j] && b[i] >= b2[j] {
                used[j] = true;
                if go(i + 1, b, b2, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(0, b, b2, &mut vec![false; b2.len()])
}

fn vector() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..7, 1..7)
}

proptest! {
    #[test]
    fn better_agrees_with_brute_force(a in vector(), b in vector()) {
        let (va, vb) = (BranchingVector::new(a.clone()).unwrap(), BranchingVector::new(b.clone()).unwrap());
        prop_assert_eq!(is_better(&va, &vb), injection_exists(&a, &b));
    }

    #[test]
    fn better_vectors_branch_no_faster(a in vector(), b in vector()) {
        let (va, vb) = (BranchingVector::new(a).unwrap(), BranchingVector::new(b).unwrap());
        if is_better(&va, &vb) {
            prop_assert!(branching_factor(&va, TOL).value <= branching_factor(&vb, TOL).value + TOL);
        }
    }

    #[test]
    fn root_is_certified(a in vector()) {
        let b = BranchingVector::new(a).unwrap();
        let r = branching_factor(&b, TOL);
        prop_assert!(r.tolerance <= TOL);
        if b.len() > 1 {
            prop_assert!(b.residual(r.value - 2.0 * TOL) < 0.0);
            prop_assert!(b.residual(r.value + 2.0 * TOL) > 0.0);
        } else {
            prop_assert!((r.value - 1.0).abs() <= TOL);
        }
    }

    #[test]
    fn lrr_equals_the_expanded_vector(c in 1u32..7, d in 1u32..7) {
        let expanded = BranchingVector::from_counts(&[(c, 1 << c), (d, 1 << d)]).unwrap();
        let a = lrr_cd(c, d, TOL).unwrap().value;
        prop_assert!((a - branching_factor(&expanded, TOL).value).abs() < 1e-7);
    }

    #[test]
    fn compose_shifts_entries(outer in vector(), sub in vector(), pos in 0usize..7) {
        let o = BranchingVector::new(outer.clone()).unwrap();
        let s = BranchingVector::new(sub.clone()).unwrap();
        let mut m = BTreeMap::new();
        m.insert(pos, s);
        match compose(&o, &m) {
            Ok(c) => {
                prop_assert!(pos < outer.len());
                prop_assert_eq!(c.len(), outer.len() - 1 + sub.len());
                let total: u32 = c.entries().iter().sum();
                prop_assert_eq!(total, outer.iter().sum::<u32>() - outer[pos] + sub.iter().map(|x| x + outer[pos]).sum::<u32>());
            }
            Err(e) => {
                prop_assert!(pos >= outer.len());
                prop_assert_eq!(e, AnalysisError::BadPosition(pos, outer.len()));
            }
        }
    }
}

#[test]
fn lrr_is_monotone() {
    for c in 1..=8 {
        for d in 1..=8 {
            let a = lrr_cd(c, d, 1e-9).unwrap().value;
            assert!(a >= lrr_cd(c + 1, d, 1e-9).unwrap().value - 1e-6);
            assert!(a >= lrr_cd(c, d + 1, 1e-9).unwrap().value - 1e-6);
        }
    }
}

#[test]
fn composite_case_two_vector() {
    // Four outer branches of cost 2, each refined by the twin-rule vector,
    // next to eight branches of cost 3.
    let outer = BranchingVector::from_counts(&[(2, 4), (3, 8)]).unwrap();
    let twin = v("1,2,2,3,3,4");
    let m: BTreeMap<_, _> = (0..4).map(|i| (i, twin.clone())).collect();
    let c = compose(&outer, &m).unwrap();
    assert_eq!(c.sorted(), BranchingVector::from_counts(&[(3, 12), (4, 8), (5, 8), (6, 4)]).unwrap().sorted());
    assert!(branching_factor(&c, 1e-9).value < 2.56);
}

#[test]
fn closed_forms_hold() {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((branching_factor(&v("1,2"), 1e-12).value - golden).abs() < 1e-9);
    assert!((lrr_cd(1, 2, 1e-12).unwrap().value - (1.0 + 5f64.sqrt())).abs() < 1e-9);
    assert!((lrr_cd(3, 3, 1e-12).unwrap().value - 16f64.cbrt()).abs() < 1e-9);
    let f: RootResult<f32> = lrr_cd(3, 3, 1e-6).unwrap();
    assert!((f.value - 16f32.cbrt()).abs() < 1e-5);
}
