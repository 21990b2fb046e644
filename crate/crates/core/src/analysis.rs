//! Branching vectors and their branching factors.
//!
//! The factor of a vector `(b_1, …, b_t)` is the largest real root of
//! `x^k - Σ x^(k - b_i)`. Dividing by `x^k` gives the function
//! `g(a) = 1 - Σ a^(-b_i)`, which is strictly increasing for `a > 0`; its
//! unique positive root is the factor. `g(1) = 1 - t ≤ 0` and
//! `g(t + 1) > 0`, so bisection on `[1, t + 1]` always converges.
//!
//! Root finding is generic over the float type.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Float;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("a branching vector needs at least one entry")]
    Empty,
    #[error("branching vector entries must be positive, got {0}")]
    NonPositive(i64),
    #[error("cannot parse branching vector entry {0:?}")]
    Parse(String),
    #[error("lrr({0}, {1}) exceeds the supported range (c, d <= 30)")]
    Overflow(u32, u32),
    #[error("replacement position {0} is out of range for a vector of length {1}")]
    BadPosition(usize, usize),
}

/// A nonempty multiset of positive budget decrements, kept in input order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BranchingVector(Vec<u32>);

impl BranchingVector {
    pub fn new(entries: Vec<u32>) -> Result<Self, AnalysisError> {
        if entries.is_empty() {
            return Err(AnalysisError::Empty);
        }
        if entries.contains(&0) {
            return Err(AnalysisError::NonPositive(0));
        }
        Ok(BranchingVector(entries))
    }

    /// `counts` as `(entry, multiplicity)` pairs.
    pub fn from_counts(counts: &[(u32, usize)]) -> Result<Self, AnalysisError> {
        let mut v = Vec::new();
        for &(b, m) in counts {
            v.extend(std::iter::repeat(b).take(m));
        }
        BranchingVector::new(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sorted(&self) -> Vec<u32> {
        let mut v = self.0.clone();
        v.sort_unstable();
        v
    }

    /// `g(a) = 1 - Σ a^(-b_i)`.
    pub fn residual<F: Float>(&self, a: F) -> F {
        let ln_a = a.ln();
        let sum = self.0.iter().fold(F::zero(), |s, &b| {
            s + (-(F::from(b).unwrap()) * ln_a).exp()
        });
        F::one() - sum
    }
}

impl fmt::Display for BranchingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for BranchingVector {
    type Err = AnalysisError;

    /// Comma-separated integers, e.g. `1,2,3,3,4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let x: i64 = tok.parse().map_err(|_| AnalysisError::Parse(tok.to_string()))?;
            if x <= 0 {
                return Err(AnalysisError::NonPositive(x));
            }
            let x = u32::try_from(x).map_err(|_| AnalysisError::Parse(tok.to_string()))?;
            v.push(x);
        }
        BranchingVector::new(v)
    }
}

/// A root together with the width of the final bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult<F> {
    pub value: F,
    pub tolerance: F,
}

/// Bisection for the increasing function `g` on `[lo, hi]` with
/// `g(lo) <= 0 < g(hi)`. Stops when the bracket is below `tol` or cannot be
/// split any further in `F`.
fn bisect<F: Float>(g: impl Fn(F) -> F, mut lo: F, mut hi: F, tol: F) -> RootResult<F> {
    let two = F::one() + F::one();
    if g(lo) >= F::zero() {
        return RootResult { value: lo, tolerance: F::zero() };
    }
    while hi - lo > tol {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RootResult { value: lo + (hi - lo) / two, tolerance: (hi - lo) / two }
}

/// Largest real root of the characteristic polynomial of `b`.
pub fn branching_factor<F: Float>(b: &BranchingVector, tol: F) -> RootResult<F> {
    assert!(tol > F::zero(), "tolerance must be positive");
    let hi = F::from(b.len() + 1).unwrap();
    bisect(|a| b.residual(a), F::one(), hi, tol)
}

/// `lrr(c, d)`: factor of `2^c` copies of `c` together with `2^d` copies of `d`.
pub fn lrr_cd<F: Float>(c: u32, d: u32, tol: F) -> Result<RootResult<F>, AnalysisError> {
    if c == 0 || d == 0 {
        return Err(AnalysisError::NonPositive(0));
    }
    if c > 30 || d > 30 {
        return Err(AnalysisError::Overflow(c, d));
    }
    assert!(tol > F::zero(), "tolerance must be positive");
    let two = F::one() + F::one();
    // Σ a^(-b_i) = (2/a)^c + (2/a)^d, evaluated in log space.
    let g = |a: F| {
        let l = (two / a).ln();
        F::one() - (F::from(c).unwrap() * l).exp() - (F::from(d).unwrap() * l).exp()
    };
    // At a = 4 the sum is 2^-c + 2^-d <= 1.
    Ok(bisect(g, F::one(), two * two + F::one(), tol))
}

/// `b` is better than `b2` when some injection maps each entry of `b` to an
/// entry of `b2` that is at most as large: fewer branches, each cutting the
/// budget at least as much. This is the direction under which a better
/// vector never has a larger branching factor.
pub fn is_better(b: &BranchingVector, b2: &BranchingVector) -> bool {
    if b.len() > b2.len() {
        return false;
    }
    // Pair the smallest entries of each side; if any pairing exists this one
    // works.
    let x = b.sorted();
    let y = b2.sorted();
    x.iter().zip(&y).all(|(a, c)| a >= c)
}

/// Replaces entry `e` at each listed position by `e + s` for every entry `s`
/// of its sub-vector. Output lists the expansions in position order.
pub fn compose(
    outer: &BranchingVector,
    replacements: &BTreeMap<usize, BranchingVector>,
) -> Result<BranchingVector, AnalysisError> {
    if let Some((&p, _)) = replacements.range(outer.len()..).next() {
        return Err(AnalysisError::BadPosition(p, outer.len()));
    }
    let mut out = Vec::new();
    for (i, &e) in outer.entries().iter().enumerate() {
        match replacements.get(&i) {
            Some(sub) => out.extend(sub.entries().iter().map(|s| e + s)),
            None => out.push(e),
        }
    }
    BranchingVector::new(out)
}
