//! Eigenvalues of `W_d` in nonincreasing order.
//!
//! The eigenvalues of the d-fold tensor power are the products
//! `λ_{d,j} = λ̃_{j_1} ⋯ λ̃_{j_d}` over all multi-indices. A product only
//! depends on the multiset of indices, so the stream walks canonical
//! (nondecreasing) index tuples and attaches the multinomial multiplicity
//! `d! / (m_1! ⋯ m_k!)` of the permutation class.
//!
//! # Enumeration scheme
//!
//! Best-first search from the root `(1, …, 1)`. Let `r` be the start of the
//! maximal run of equal values at the end of a tuple `t`. The successors of
//! `t` are, for each position `i` in `r..d`, the tuple obtained by
//! incrementing every coordinate in `i..d` by one. (For `i = d-1` this is
//! "increment the last coordinate".)
//!
//! Every non-root tuple has exactly one predecessor: decrement its maximal
//! final run. A successor built from position `i` has its final run starting
//! exactly at `i`, because `t_{i-1} ≤ t_i < t_i + 1`, so it can only be
//! reached from `t`. Successors never have a larger product than their
//! predecessor and compare lexicographically greater, so popping the frontier
//! in (product desc, tuple asc) order emits every canonical tuple once, in
//! that total order.
//!
//! Log-products are sums of `log(1/λ̃_j)` accumulated left to right over the
//! canonical tuple. [`brute_force_products`] accumulates the same way, so
//! equal products are bit-identical in both.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::eigenmodel::EigenSequence;

pub const DEFAULT_FRONTIER_CAP: usize = 10_000_000;
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("TrivialSequence: every eigenvalue is zero")]
    TrivialSequence,
    #[error("InvalidDimension: d must be at least 1")]
    InvalidDimension,
    #[error("MultiplicityOverflow: multiplicity exceeds 2^63-1")]
    MultiplicityOverflow,
    #[error("FrontierExhausted: frontier grew past {cap} entries")]
    FrontierExhausted { cap: usize },
    #[error("BoxTooLarge: {m}^{d} exceeds the brute-force limit")]
    BoxTooLarge { m: usize, d: usize },
}

/// One distinct canonical product with the size of its permutation class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductTerm {
    /// `log λ_{d,j}`; always finite, zero products are never emitted.
    pub log_lambda: f64,
    pub multiplicity: u64,
}

/// Sum of `log(1/λ̃_{j_ℓ})` accumulated in coordinate order.
pub(crate) fn log_inv_sum(seq: &EigenSequence, tuple: &[u32]) -> f64 {
    tuple
        .iter()
        .fold(0.0, |acc, &j| acc + seq.a(j as usize))
}

/// Exact `C(n, k)`, or `None` past `u128`.
pub(crate) fn binomial(n: u64, k: u64) -> Option<u128> {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(c)
}

/// `d! / ∏ m_i!` for the run lengths of a canonical tuple.
pub fn multiplicity(tuple: &[u32]) -> Result<u64, EnumError> {
    let mut remaining = tuple.len() as u64;
    let mut total: u128 = 1;
    let mut i = 0;
    while i < tuple.len() {
        let run = tuple[i..].iter().take_while(|&&j| j == tuple[i]).count();
        let c = binomial(remaining, run as u64).ok_or(EnumError::MultiplicityOverflow)?;
        total = total.checked_mul(c).ok_or(EnumError::MultiplicityOverflow)?;
        remaining -= run as u64;
        i += run;
    }
    u64::try_from(total)
        .ok()
        .filter(|&m| m <= i64::MAX as u64)
        .ok_or(EnumError::MultiplicityOverflow)
}

#[derive(Debug)]
struct Node {
    sum: f64,
    tuple: Box<[u32]>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // Max-heap priority: smaller log-inverse sum first, then the
    // lexicographically smaller tuple.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .sum
            .total_cmp(&self.sum)
            .then_with(|| other.tuple.cmp(&self.tuple))
    }
}

/// Lazy nonincreasing stream of the distinct canonical products of `W_d`.
///
/// Single-owner and stateful.
pub struct ProductEigenStream<'a> {
    seq: &'a EigenSequence,
    frontier: BinaryHeap<Node>,
    frontier_cap: usize,
    emission_log: Option<Vec<Box<[u32]>>>,
}

impl<'a> ProductEigenStream<'a> {
    pub fn open(seq: &'a EigenSequence, d: usize) -> Result<Self, EnumError> {
        if d == 0 {
            return Err(EnumError::InvalidDimension);
        }
        if seq.is_all_zero() {
            return Err(EnumError::TrivialSequence);
        }
        let root: Box<[u32]> = vec![1; d].into_boxed_slice();
        let mut frontier = BinaryHeap::new();
        frontier.push(Node {
            sum: log_inv_sum(seq, &root),
            tuple: root,
        });
        Ok(Self {
            seq,
            frontier,
            frontier_cap: DEFAULT_FRONTIER_CAP,
            emission_log: None,
        })
    }

    pub fn with_frontier_cap(mut self, cap: usize) -> Self {
        self.frontier_cap = cap.max(1);
        self
    }

    /// Records every emitted canonical tuple; see [`ProductEigenStream::emitted`].
    pub fn with_emission_log(mut self) -> Self {
        self.emission_log = Some(Vec::new());
        self
    }

    pub fn emitted(&self) -> Option<&[Box<[u32]>]> {
        self.emission_log.as_deref()
    }

    pub fn frontier_len(&self) -> usize {
        self.frontier.len()
    }

    /// Next product term; `Ok(None)` once every positive product has been
    /// emitted (only possible for finite lists).
    pub fn next_term(&mut self) -> Result<Option<ProductTerm>, EnumError> {
        let Some(node) = self.frontier.pop() else {
            return Ok(None);
        };
        let term = ProductTerm {
            log_lambda: -node.sum,
            multiplicity: multiplicity(&node.tuple)?,
        };
        self.push_successors(&node.tuple)?;
        if let Some(log) = self.emission_log.as_mut() {
            log.push(node.tuple);
        }
        Ok(Some(term))
    }

    fn push_successors(&mut self, tuple: &[u32]) -> Result<(), EnumError> {
        let d = tuple.len();
        let last = tuple[d - 1];
        let run_start = tuple.iter().rposition(|&j| j != last).map_or(0, |p| p + 1);
        for i in run_start..d {
            let mut child = tuple.to_vec().into_boxed_slice();
            for j in &mut child[i..] {
                *j += 1;
            }
            let sum = log_inv_sum(self.seq, &child);
            if sum == f64::INFINITY {
                // every descendant is a zero product as well
                continue;
            }
            if self.frontier.len() >= self.frontier_cap {
                return Err(EnumError::FrontierExhausted {
                    cap: self.frontier_cap,
                });
            }
            self.frontier.push(Node { sum, tuple: child });
        }
        Ok(())
    }
}

impl Iterator for ProductEigenStream<'_> {
    type Item = Result<ProductTerm, EnumError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_term().transpose()
    }
}

/// `log λ_{d,k}` counting multiplicity, or `-∞` when fewer than `k`
/// positive products exist.
pub fn kth_largest(seq: &EigenSequence, d: usize, k: u64) -> Result<f64, EnumError> {
    assert!(k >= 1, "k is 1-based");
    if seq.is_all_zero() {
        return Ok(f64::NEG_INFINITY);
    }
    let mut seen = 0u64;
    for term in ProductEigenStream::open(seq, d)? {
        let term = term?;
        seen = seen.saturating_add(term.multiplicity);
        if seen >= k {
            return Ok(term.log_lambda);
        }
    }
    Ok(f64::NEG_INFINITY)
}

/// Every positive product over the box `{1..m}^d`, grouped by exactly equal
/// log value and sorted nonincreasing. Test oracle.
pub fn brute_force_products(
    seq: &EigenSequence,
    d: usize,
    m: usize,
) -> Result<Vec<(f64, u64)>, EnumError> {
    if d == 0 {
        return Err(EnumError::InvalidDimension);
    }
    let too_large = || EnumError::BoxTooLarge { m, d };
    let total = (m as u64)
        .checked_pow(u32::try_from(d).map_err(|_| too_large())?)
        .filter(|&n| n <= BRUTE_FORCE_LIMIT)
        .ok_or_else(too_large)?;

    let mut sums = Vec::with_capacity(total as usize);
    let mut index = vec![1u32; d];
    let mut sorted = vec![0u32; d];
    for _ in 0..total {
        sorted.copy_from_slice(&index);
        sorted.sort_unstable();
        let sum = log_inv_sum(seq, &sorted);
        if sum.is_finite() {
            sums.push(sum);
        }
        // odometer
        for slot in index.iter_mut().rev() {
            if (*slot as usize) < m {
                *slot += 1;
                break;
            }
            *slot = 1;
        }
    }
    sums.sort_by(f64::total_cmp);

    let mut grouped: Vec<(f64, u64)> = Vec::new();
    for s in sums {
        match grouped.last_mut() {
            Some((v, n)) if *v == -s => *n += 1,
            _ => grouped.push((-s, 1)),
        }
    }
    Ok(grouped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn collect(seq: &EigenSequence, d: usize, n: usize) -> Vec<ProductTerm> {
        ProductEigenStream::open(seq, d)
            .unwrap()
            .take(n)
            .map(Result::unwrap)
            .collect()
    }

    fn expand(terms: &[ProductTerm]) -> Vec<f64> {
        terms
            .iter()
            .flat_map(|t| std::iter::repeat(t.log_lambda).take(t.multiplicity as usize))
            .collect()
    }

    #[test]
    fn single_value_stream() {
        let seq = EigenSequence::explicit(&[1.0]).unwrap();
        let mut s = ProductEigenStream::open(&seq, 3).unwrap();
        assert_eq!(
            s.next_term().unwrap(),
            Some(ProductTerm {
                log_lambda: 0.0,
                multiplicity: 1
            })
        );
        assert_eq!(s.next_term().unwrap(), None);
    }

    #[test]
    fn three_value_stream_d2() {
        let seq = EigenSequence::explicit(&[0.9, 0.5, 0.1]).unwrap();
        let terms = collect(&seq, 2, 10);
        // all 9 products: .81, .45 x2, .25, .09 x2, .05 x2, .01
        let want = [(0.81, 1), (0.45, 2), (0.25, 1), (0.09, 2), (0.05, 2), (0.01, 1)];
        assert_eq!(terms.len(), want.len());
        for (t, (v, m)) in terms.iter().zip(want) {
            assert!((t.log_lambda - f64::ln(v)).abs() < 1e-12, "{t:?} vs {v}");
            assert_eq!(t.multiplicity, m);
        }
    }

    #[test]
    fn powers_of_two_d2() {
        let vals: Vec<f64> = (1..=4).map(|j| 0.5f64.powi(j)).collect();
        let seq = EigenSequence::explicit(&vals).unwrap();
        let expanded = expand(&collect(&seq, 2, 100));
        // products 2^{-s}, s = j1 + j2, with s-1 ordered pairs for s <= 5
        let mut want = Vec::new();
        for s in 2..=8i32 {
            let count = (1..=4).filter(|&j| (1..=4).contains(&(s - j))).count();
            want.extend(std::iter::repeat(-(s as f64) * 2f64.ln()).take(count));
        }
        assert_eq!(expanded.len(), 16);
        for (g, w) in expanded.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
        // multiplicity per exponent: s-1 for s = 2..=5, then 3 at s = 6
        let counts: Vec<usize> = (2..=6)
            .map(|s| {
                let target = -(s as f64) * 2f64.ln();
                expanded.iter().filter(|g| (*g - target).abs() < 1e-12).count()
            })
            .collect();
        assert_eq!(counts, vec![1, 2, 3, 4, 3]);
    }

    #[test]
    fn fourth_call_example() {
        let seq = EigenSequence::explicit(&[0.9, 0.5, 0.1]).unwrap();
        let mut s = ProductEigenStream::open(&seq, 2).unwrap();
        for _ in 0..3 {
            s.next_term().unwrap();
        }
        let t = s.next_term().unwrap().unwrap();
        assert!((t.log_lambda - 0.09f64.ln()).abs() < 1e-12);
        assert_eq!(t.multiplicity, 2);
    }

    #[test]
    fn d1_reproduces_sequence() {
        let seq = EigenSequence::loglog(1.0, 1.0, 1.0).unwrap();
        let terms = collect(&seq, 1, 3);
        for (k, t) in terms.iter().enumerate() {
            assert_eq!(t.log_lambda, -((k + 2) as f64).ln());
            assert_eq!(t.multiplicity, 1);
        }
    }

    #[test]
    fn kth_largest_examples() {
        let seq = EigenSequence::explicit(&[1.0, 0.5]).unwrap();
        assert!((kth_largest(&seq, 2, 2).unwrap() - 0.5f64.ln()).abs() < 1e-15);
        assert_eq!(kth_largest(&seq, 2, 4).unwrap(), 2.0 * 0.5f64.ln());
        assert_eq!(kth_largest(&seq, 2, 5).unwrap(), f64::NEG_INFINITY);
        let one = EigenSequence::explicit(&[1.0]).unwrap();
        assert_eq!(kth_largest(&one, 5, 2).unwrap(), f64::NEG_INFINITY);
        let ll = EigenSequence::loglog(0.7, 1.3, 2.0).unwrap();
        for d in 1..6 {
            let a1 = ll.log_inv(1).unwrap().value();
            let want = -(0..d).fold(0.0, |acc, _| acc + a1);
            assert_eq!(kth_largest(&ll, d, 1).unwrap(), want);
        }
    }

    #[test]
    fn brute_force_examples() {
        let seq = EigenSequence::explicit(&[1.0]).unwrap();
        assert_eq!(brute_force_products(&seq, 2, 1).unwrap(), vec![(0.0, 1)]);
        let seq = EigenSequence::explicit(&[0.5, 0.5]).unwrap();
        let got = brute_force_products(&seq, 2, 2).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].1, 4);
        assert!((got[0].0 - 0.25f64.ln()).abs() < 1e-15);
        let seq = EigenSequence::explicit(&[0.9, 0.5, 0.1]).unwrap();
        let got = brute_force_products(&seq, 2, 3).unwrap();
        assert_eq!(got.iter().map(|g| g.1).sum::<u64>(), 9);
        assert_eq!(got.iter().map(|g| g.1).collect::<Vec<_>>(), vec![1, 2, 1, 2, 2, 1]);
        assert_eq!(
            brute_force_products(&seq, 8, 10),
            Err(EnumError::BoxTooLarge { m: 10, d: 8 })
        );
    }

    #[test]
    fn errors() {
        let zero = EigenSequence::explicit_allow_trivial(&[0.0]).unwrap();
        assert_eq!(
            ProductEigenStream::open(&zero, 2).err(),
            Some(EnumError::TrivialSequence)
        );
        let seq = EigenSequence::explicit(&[1.0]).unwrap();
        assert_eq!(
            ProductEigenStream::open(&seq, 0).err(),
            Some(EnumError::InvalidDimension)
        );
        let ll = EigenSequence::loglog(1.0, 1.0, 1.0).unwrap();
        let mut s = ProductEigenStream::open(&ll, 6).unwrap().with_frontier_cap(4);
        let err = (0..100).find_map(|_| s.next_term().err());
        assert_eq!(err, Some(EnumError::FrontierExhausted { cap: 4 }));
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity(&[1, 1, 1]).unwrap(), 1);
        assert_eq!(multiplicity(&[1, 1, 2]).unwrap(), 3);
        assert_eq!(multiplicity(&[1, 2, 3]).unwrap(), 6);
        assert_eq!(multiplicity(&[1, 1, 2, 2]).unwrap(), 6);
        let distinct: Vec<u32> = (1..=20).collect();
        assert_eq!(multiplicity(&distinct).unwrap(), 2_432_902_008_176_640_000);
        let distinct: Vec<u32> = (1..=21).collect();
        assert_eq!(multiplicity(&distinct), Err(EnumError::MultiplicityOverflow));
    }

    #[test]
    fn ties_break_lexicographically() {
        let seq = EigenSequence::explicit(&[1.0, 0.5, 0.5, 0.25]).unwrap();
        let mut s = ProductEigenStream::open(&seq, 2).unwrap().with_emission_log();
        while s.next_term().unwrap().is_some() {}
        let log = s.emitted().unwrap();
        // (1,4), (2,2), (2,3), (3,3) all equal 0.25; (1,4) is smallest
        let pos = |t: &[u32]| log.iter().position(|x| &x[..] == t).unwrap();
        assert!(pos(&[1, 4]) < pos(&[2, 2]));
        assert!(pos(&[2, 2]) < pos(&[2, 3]));
        assert!(pos(&[2, 3]) < pos(&[3, 3]));
    }

    fn sorted_seq() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(
            prop_oneof![3 => 0.01f64..1.5, 1 => Just(0.5), 1 => Just(0.0)],
            1..=10,
        )
        .prop_map(|mut v| {
            v.sort_by(|a, b| b.total_cmp(a));
            if v[0] == 0.0 {
                v[0] = 1.0;
            }
            v
        })
    }

    proptest! {
        #[test]
        fn stream_matches_oracle(vals in sorted_seq(), d in 1usize..=3) {
            let seq = EigenSequence::explicit(&vals).unwrap();
            let mut stream = ProductEigenStream::open(&seq, d).unwrap().with_emission_log();
            let mut got = Vec::new();
            while let Some(t) = stream.next_term().unwrap() {
                got.push(t);
            }
            let oracle: Vec<f64> = brute_force_products(&seq, d, vals.len())
                .unwrap()
                .into_iter()
                .flat_map(|(v, n)| std::iter::repeat(v).take(n as usize))
                .collect();
            let expanded = expand(&got);
            prop_assert_eq!(expanded.len(), oracle.len());
            for (g, o) in expanded.iter().zip(&oracle) {
                prop_assert!((g - o).abs() <= 1e-12);
            }
            let log = stream.emitted().unwrap();
            let mut unique: Vec<_> = log.to_vec();
            unique.sort();
            unique.dedup();
            prop_assert_eq!(unique.len(), log.len());
            prop_assert!(log.iter().all(|t| t.windows(2).all(|w| w[0] <= w[1])));
        }
    }
}
