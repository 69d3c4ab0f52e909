//! Information complexity `n_ABS(ε, S_d)` and `n_NOR(ε, S_d)`.
//!
//! For a linear tensor product problem with nonadaptive (or adaptive) linear
//! information, the minimal number of functionals for worst-case error `ε`
//! is the number of eigenvalues of `W_d` strictly above the threshold
//! `ε²·CRI_d`, where `CRI_d = 1` (absolute) or `λ_{d,1}` (normalized).
//!
//! In log space, a multi-index is counted iff `Σ_ℓ log(1/λ̃_{j_ℓ}) < T` with
//! `T = 2·log(1/ε) + log(1/CRI_d)`.

use std::fmt;
use std::str::FromStr;

use crate::eigenmodel::{EigenSequence, ModelError};
use crate::product_enum::{binomial, log_inv_sum, EnumError, ProductEigenStream};

pub const DEFAULT_CAP: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorCriterion {
    Abs,
    Nor,
}

impl ErrorCriterion {
    /// `log CRI_d`: `0` for ABS, `log λ_{d,1}` for NOR.
    pub fn log_cri(self, seq: &EigenSequence, d: usize) -> f64 {
        match self {
            ErrorCriterion::Abs => 0.0,
            ErrorCriterion::Nor => -log_inv_sum(seq, &vec![1; d]),
        }
    }
}

impl fmt::Display for ErrorCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorCriterion::Abs => "abs",
            ErrorCriterion::Nor => "nor",
        })
    }
}

impl FromStr for ErrorCriterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "abs" => Ok(ErrorCriterion::Abs),
            "nor" => Ok(ErrorCriterion::Nor),
            _ => Err(format!("unknown criterion '{s}' (expected abs or nor)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityResult {
    pub n: u64,
    /// The count passed `cap`; `n` then holds `cap`, not the true value.
    pub capped: bool,
}

/// Upper limit `T` on `Σ log(1/λ̃_{j_ℓ})` for a product to be counted.
pub fn log_inv_threshold(seq: &EigenSequence, d: usize, eps: f64, crit: ErrorCriterion) -> f64 {
    -2.0 * eps.ln() - crit.log_cri(seq, d)
}

/// `n(ε, S_d)` by pruned depth-first counting over canonical multi-indices.
///
/// Panics if `d == 0` or `eps` is not positive.
pub fn info_complexity(
    seq: &EigenSequence,
    d: usize,
    eps: f64,
    crit: ErrorCriterion,
    cap: u64,
) -> ComplexityResult {
    assert!(d >= 1, "d must be at least 1");
    assert!(eps > 0.0, "eps must be positive");
    count_below(seq, d, log_inv_threshold(seq, d, eps, crit), cap)
}

/// Number of multi-indices in `N^d` whose log-inverse sum is `< threshold`,
/// counted with multiplicity.
///
/// The recursion fixes coordinates left to right, smallest index first, and
/// places `k` copies of index `j` at once (weight `C(r, k)` for `r` open
/// slots). A branch at index `j` is cut when filling every open slot with
/// `j` already reaches the threshold: later coordinates are `≥ j` and
/// `log(1/λ̃)` is nondecreasing. The cut value is accumulated in the same
/// order as the leaf sums, and rounded addition is monotone, so the cut never
/// discards a tuple whose computed sum is below the threshold.
pub fn count_below(seq: &EigenSequence, d: usize, threshold: f64, cap: u64) -> ComplexityResult {
    let mut counter = DfsCounter {
        seq,
        threshold,
        cap: cap as u128,
        count: 0,
        capped: false,
    };
    counter.visit(1, d as u64, 0.0, 1);
    if counter.capped {
        ComplexityResult { n: cap, capped: true }
    } else {
        ComplexityResult {
            n: counter.count as u64,
            capped: false,
        }
    }
}

struct DfsCounter<'a> {
    seq: &'a EigenSequence,
    threshold: f64,
    cap: u128,
    count: u128,
    capped: bool,
}

impl DfsCounter<'_> {
    fn visit(&mut self, start: usize, open: u64, partial: f64, weight: u128) {
        for j in start.. {
            let a = self.seq.a(j);
            let mut smallest = partial;
            for _ in 0..open {
                smallest += a;
            }
            if !(smallest < self.threshold) {
                break;
            }
            let mut sum = partial;
            for k in 1..=open {
                sum += a;
                let w = weight.saturating_mul(binomial(open, k).unwrap_or(u128::MAX));
                if k == open {
                    // sum == smallest < threshold
                    self.count = self.count.saturating_add(w);
                    if self.count > self.cap {
                        self.capped = true;
                    }
                } else {
                    self.visit(j + 1, open - k, sum, w);
                }
                if self.capped {
                    return;
                }
            }
        }
    }
}

/// Same contract as [`info_complexity`], computed by walking the sorted
/// product stream.
pub fn info_complexity_via_stream(
    seq: &EigenSequence,
    d: usize,
    eps: f64,
    crit: ErrorCriterion,
    cap: u64,
) -> Result<ComplexityResult, EnumError> {
    assert!(eps > 0.0, "eps must be positive");
    if d == 0 {
        return Err(EnumError::InvalidDimension);
    }
    if seq.is_all_zero() {
        return Ok(ComplexityResult { n: 0, capped: false });
    }
    let floor = -log_inv_threshold(seq, d, eps, crit);
    let mut n: u64 = 0;
    for term in ProductEigenStream::open(seq, d)? {
        let term = term?;
        if !(term.log_lambda > floor) {
            break;
        }
        n = n.saturating_add(term.multiplicity);
        if n > cap {
            return Ok(ComplexityResult { n: cap, capped: true });
        }
    }
    Ok(ComplexityResult { n, capped: false })
}

/// `β_j = λ̃_j / λ̃_1`, computed as `log(1/β_j) = log(1/λ̃_j) - log(1/λ̃_1)`.
///
/// Explicit lists stay explicit; the parametric family keeps `A` and `p` and
/// takes `B' = B/λ̃_1 = exp(A·(log 2)^p)`.
pub fn rescale_to_normalized(seq: &EigenSequence) -> Result<EigenSequence, ModelError> {
    if seq.is_all_zero() {
        return Err(ModelError::AllZero);
    }
    if let Some(p) = seq.loglog_params() {
        // same expression as the j = 1 term, so a_1 becomes exactly 0
        let log_scale = p.amplitude * 2f64.ln().powf(p.exponent);
        return Ok(EigenSequence::loglog_with_log_scale(
            p.amplitude,
            p.exponent,
            log_scale,
        ));
    }
    let a1 = seq.a(1);
    let n = seq.positive_count().unwrap_or(0);
    let mut log_inv: Vec<f64> = (1..=n).map(|j| seq.a(j) - a1).collect();
    // keep the explicit zero tail so the list length is preserved
    let len = seq.explicit_values().map_or(n, |v| v.len());
    log_inv.resize(len, f64::INFINITY);
    Ok(EigenSequence::from_log_inv(log_inv))
}
