//! Elementary inequalities used when bounding the criterion sum.
//!
//! Power sums: for nonnegative `a_1..a_n`,
//! `(Σa)^s / n^{s-1} ≤ Σ a_i^s ≤ (Σa)^s` when `s ≥ 1`, and
//! `(Σa)^s ≤ Σ a_i^s ≤ n^{1-s} (Σa)^s` when `s ≤ 1`.
//!
//! Binomials: for `1 ≤ k < n`,
//! `max{(n/k)^k, (n/(n-k))^{n-k}} ≤ C(n,k) ≤ min{(en/k)^k, (en/(n-k))^{n-k}}`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("NegativeInput: entry {index} is negative or not finite")]
    NegativeInput { index: usize },
    #[error("DomainError: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSumBounds {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialBounds {
    pub lower: f64,
    pub upper: f64,
    /// Logs of the two bounds; use these when `n` is large.
    pub log_lower: f64,
    pub log_upper: f64,
}

pub fn power_sum_bounds(a: &[f64], s: f64) -> Result<PowerSumBounds, BoundsError> {
    if !(s.is_finite() && s > 0.0) {
        return Err(BoundsError::Domain(format!("s must be positive, got {s}")));
    }
    if a.is_empty() {
        return Err(BoundsError::Domain("need at least one entry".into()));
    }
    if let Some(index) = a.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(BoundsError::NegativeInput { index });
    }
    let n = a.len() as f64;
    let total = a.iter().sum::<f64>().powf(s);
    Ok(if s >= 1.0 {
        PowerSumBounds {
            lower: total / n.powf(s - 1.0),
            upper: total,
        }
    } else {
        PowerSumBounds {
            lower: total,
            upper: n.powf(1.0 - s) * total,
        }
    })
}

pub fn binomial_bounds(n: u64, k: u64) -> Result<BinomialBounds, BoundsError> {
    if k < 1 || k >= n {
        return Err(BoundsError::Domain(format!("need 1 <= k < n, got n={n}, k={k}")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let rest = nf - kf;
    let log_lower = (kf * (nf / kf).ln()).max(rest * (nf / rest).ln());
    let log_upper = (kf * (1.0 + (nf / kf).ln())).min(rest * (1.0 + (nf / rest).ln()));
    Ok(BinomialBounds {
        lower: log_lower.exp(),
        upper: log_upper.exp(),
        log_lower,
        log_upper,
    })
}
