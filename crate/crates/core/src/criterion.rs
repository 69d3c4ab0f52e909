//! The criterion sum for exponential (s,t)-weak tractability,
//!
//! ```text
//! σ(d,s,t,c) = exp(-c d^t) Σ_j exp(-c [log(2e) + log max(1, CRI_d/λ_{d,j})]^s)
//! ```
//!
//! The problem is EXP-(s,t)-WT iff `sup_d σ(d,s,t,c) < ∞` for every `c > 0`.
//! The bracket is written both as `1 + log(2·max(…))` and as
//! `log(2e) + log(max(…))`; they are the same number and only the second
//! form is computed here.
//!
//! Partial sums are rigorous lower bounds (every term is positive). A
//! rigorous upper bound is available only through the product factorization
//! that holds for `s ≥ 1` with `λ̃_1 ≤ 1` (or after normalization).

use rayon::prelude::*;
use thiserror::Error;

use crate::complexity::{rescale_to_normalized, ErrorCriterion};
use crate::eigenmodel::EigenSequence;
use crate::product_enum::{EnumError, ProductEigenStream};

/// `log(2e)`.
pub const LOG_2E: f64 = std::f64::consts::LN_2 + 1.0;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_TERMS: u64 = 1_000_000;
pub const DEFAULT_FACTOR_TERMS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriterionError {
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WtParams {
    pub s: f64,
    pub t: f64,
    pub c: f64,
    pub crit: ErrorCriterion,
}

impl WtParams {
    pub fn new(s: f64, t: f64, c: f64, crit: ErrorCriterion) -> Result<Self, CriterionError> {
        for (name, v) in [("s", s), ("t", t), ("c", c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CriterionError::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self { s, t, c, crit })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaEstimate {
    /// Partial sum; always a lower bound.
    pub lower: f64,
    /// Rigorous upper bound from the factorized form, when it applies.
    pub upper: Option<f64>,
    /// Number of product terms (distinct canonical products) consumed.
    pub terms_used: u64,
    /// The last term fell below `tol` or the stream ran out. A stopping
    /// rule, not a certificate.
    pub converged: bool,
}

/// `d^t`, exactly `1` at `d = 1`.
pub fn pow_d(d: usize, t: f64) -> f64 {
    if d == 1 {
        1.0
    } else {
        (t * (d as f64).ln()).exp()
    }
}

/// Partial sum of the criterion along the sorted product stream.
///
/// The upper field is filled from [`sigma_upper_factorized`] with
/// [`DEFAULT_FACTOR_TERMS`] explicit terms.
pub fn sigma_ewt(
    seq: &EigenSequence,
    d: usize,
    p: &WtParams,
    tol: f64,
    max_terms: u64,
) -> Result<SigmaEstimate, EnumError> {
    let upper = sigma_upper_factorized(seq, d, p, DEFAULT_FACTOR_TERMS);
    if seq.is_all_zero() {
        return Ok(SigmaEstimate {
            lower: 0.0,
            upper,
            terms_used: 0,
            converged: true,
        });
    }
    let dt = pow_d(d, p.t);
    let log_cri = p.crit.log_cri(seq, d);

    let mut lower = 0.0;
    let mut terms_used = 0u64;
    let mut converged = true;
    let mut prev = f64::INFINITY;
    let mut stream = ProductEigenStream::open(seq, d)?;
    while let Some(term) = stream.next_term()? {
        let bracket = LOG_2E + (log_cri - term.log_lambda).max(0.0);
        let per_index = (-p.c * (dt + bracket.powf(p.s))).exp();
        debug_assert!(per_index <= prev, "criterion terms must not increase");
        prev = per_index;
        lower += term.multiplicity as f64 * per_index;
        terms_used += 1;
        if per_index < tol {
            converged = true;
            break;
        }
        if terms_used >= max_terms {
            converged = false;
            break;
        }
    }
    Ok(SigmaEstimate {
        lower,
        upper,
        terms_used,
        converged,
    })
}

/// `exp(-c d^t) · (Σ_j exp(-c [log(1/λ̃_j)]^s))^d`, an upper bound on the
/// criterion when `s ≥ 1` and all `λ̃_j ≤ 1`. NOR inputs are normalized
/// first, which always puts them in that regime.
///
/// Explicit lists are summed exactly. For the parametric family the first
/// `m_terms` terms are summed and the rest bounded by
/// `Σ_{j>m} (j+1)^{-α} ≤ (m+1)^{1-α}/(α-1)` with `α = c·g^s`, where `g`
/// lower-bounds `log(1/λ̃_j) / (log(j+1))^{1/s}` for all `j > m`. Returns
/// `None` outside the regime or when `α ≤ 1`.
pub fn sigma_upper_factorized(
    seq: &EigenSequence,
    d: usize,
    p: &WtParams,
    m_terms: usize,
) -> Option<f64> {
    if p.s < 1.0 || m_terms == 0 {
        return None;
    }
    if seq.is_all_zero() {
        return Some(0.0);
    }
    let normalized;
    let seq = match p.crit {
        ErrorCriterion::Abs => seq,
        ErrorCriterion::Nor => {
            normalized = rescale_to_normalized(seq).ok()?;
            &normalized
        }
    };
    if seq.a(1) < 0.0 {
        return None;
    }
    let term = |a: f64| (-p.c * a.powf(p.s)).exp();

    let factor = match seq.positive_count() {
        Some(n) => (1..=n).map(|j| term(seq.a(j))).sum::<f64>(),
        None => {
            let head: f64 = (1..=m_terms).map(|j| term(seq.a(j))).sum();
            head + loglog_tail(seq, p, m_terms)?
        }
    };
    Some((-p.c * pow_d(d, p.t) + d as f64 * factor.ln()).exp())
}

fn loglog_tail(seq: &EigenSequence, p: &WtParams, m: usize) -> Option<f64> {
    let ll = seq.loglog_params()?;
    let inv_s = 1.0 / p.s;
    if ll.exponent < inv_s {
        return None;
    }
    let ratio = |j: usize| seq.a(j) / ((j + 1) as f64).ln().powf(inv_s);
    let observed = (m / 2 + 1..=m).map(ratio).fold(f64::INFINITY, f64::min);
    // For j > m, with L = log(j+1) ≥ log(m+2) and p ≥ 1/s:
    // A·L^{p-1/s} is nondecreasing and -log B·L^{-1/s} ≥ min(0, -log B)·L_m^{-1/s}.
    let l_m = ((m + 2) as f64).ln();
    let shift = -ll.scale.ln();
    let analytic =
        ll.amplitude * l_m.powf(ll.exponent - inv_s) + shift.min(0.0) * l_m.powf(-inv_s);
    let g = observed.min(analytic);
    if !(g > 0.0) {
        return None;
    }
    let alpha = p.c * g.powf(p.s);
    if !(alpha > 1.0) {
        return None;
    }
    Some(((m + 1) as f64).powf(1.0 - alpha) / (alpha - 1.0))
}

/// Evaluates [`sigma_ewt`] at each `d` in `d_list`, in parallel, keeping
/// the input order. A diagnostic: boundedness over all `d` cannot be decided
/// from finitely many points.
pub fn sup_probe(
    seq: &EigenSequence,
    p: &WtParams,
    d_list: &[usize],
    tol: f64,
    max_terms: u64,
) -> Result<Vec<(usize, SigmaEstimate)>, EnumError> {
    d_list
        .par_iter()
        .map(|&d| sigma_ewt(seq, d, p, tol, max_terms).map(|est| (d, est)))
        .collect()
}
