//! Decision table for EXP-(s,t)-weak tractability of linear tensor product
//! problems, plus the blanket negative answers for UWT, QPT, PT and SPT.
//!
//! With at least two positive `λ̃_j`, the absolute criterion holds iff one of
//!
//! | label | region                                   | rate exponent q |
//! |-------|------------------------------------------|-----------------|
//! | A1    | t > 1, s > 1, λ̃_1 > 1                    | 1/min(s,t)      |
//! | A2    | t > 1, s ≥ 1, λ̃_1 ≤ 1                    | 1/s             |
//! | A3    | t > 1, s < 1                             | 1/η             |
//! | A4    | t ≤ 1, s > 1, λ̃_1 ≤ 1, λ̃_2 < 1          | 1/s             |
//!
//! holds, and the normalized criterion iff one of
//!
//! | label | region                                   | rate exponent q |
//! |-------|------------------------------------------|-----------------|
//! | N1    | t > 1, s ≥ 1                             | 1/s             |
//! | N2    | t > 1, s < 1                             | 1/η             |
//! | N3    | t ≤ 1, s > 1, λ̃_1 > λ̃_2                  | 1/s             |
//!
//! holds, where the rate condition is `lim log λ̃_n⁻¹ / (log n)^q = ∞` and
//! `η = s(t-1)/(t-s)`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::complexity::{info_complexity, ErrorCriterion};
use crate::criterion::pow_d;
use crate::eigenmodel::{EigenSequence, RateLimit};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("DomainError: {0}")]
    Domain(String),
    #[error("Capped: information complexity exceeded the cap of {0}")]
    Capped(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    A1,
    A2,
    A3,
    A4,
    N1,
    N2,
    N3,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    /// At most one positive eigenvalue, so `n ≤ 1` for every `d` and `ε`.
    Trivial,
    ConditionMet,
    TheoremNegative,
    SmallST,
    LargeFirstEigenvalue,
    SecondEigenvalueNotBelowOne,
    EqualLeadingEigenvalues,
    NoConditionRegion,
    RateMinFails,
    RateSFails,
    RateEtaFails,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::Trivial => "trivial",
            Reason::ConditionMet => "condition-met",
            Reason::TheoremNegative => "theorem-negative",
            Reason::SmallST => "t<=1-and-s<=1",
            Reason::LargeFirstEigenvalue => "t<=1-and-lambda1>1",
            Reason::SecondEigenvalueNotBelowOne => "t<=1-and-lambda2>=1",
            Reason::EqualLeadingEigenvalues => "t<=1-and-lambda1=lambda2",
            Reason::NoConditionRegion => "no-condition-region",
            Reason::RateMinFails => "rate-1/min(s,t)-fails",
            Reason::RateSFails => "rate-1/s-fails",
            Reason::RateEtaFails => "rate-1/eta-fails",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// `Holds` carries a condition label, except for trivial problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub condition: Option<Condition>,
    pub reason: Reason,
}

impl Verdict {
    fn holds(condition: Condition) -> Self {
        Self {
            outcome: Outcome::Holds,
            condition: Some(condition),
            reason: Reason::ConditionMet,
        }
    }

    fn trivial() -> Self {
        Self {
            outcome: Outcome::Holds,
            condition: None,
            reason: Reason::Trivial,
        }
    }

    fn fails(reason: Reason) -> Self {
        Self {
            outcome: Outcome::Fails,
            condition: None,
            reason,
        }
    }

    pub fn is_holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.outcome {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
        };
        let cond = self.condition.map_or_else(|| "-".to_string(), |c| c.to_string());
        write!(f, "verdict={verdict} condition={cond} reason={}", self.reason)
    }
}

/// Tractability notions, all in the EXP setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NotionQuery {
    Spt,
    Pt,
    Qpt,
    Uwt,
    Wt { s: f64, t: f64, crit: ErrorCriterion },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZMode {
    Alg,
    Exp,
}

impl FromStr for ZMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "alg" => Ok(ZMode::Alg),
            "exp" => Ok(ZMode::Exp),
            _ => Err(format!("unknown z-mode '{s}' (expected alg or exp)")),
        }
    }
}

impl fmt::Display for ZMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZMode::Alg => "alg",
            ZMode::Exp => "exp",
        })
    }
}

/// `η = s(t-1)/(t-s)` for `0 < s < 1 < t`.
pub fn eta(s: f64, t: f64) -> Result<f64, ClassifyError> {
    if !(s > 0.0 && s < 1.0 && t > 1.0 && t.is_finite()) {
        return Err(ClassifyError::Domain(format!(
            "eta needs 0 < s < 1 < t, got s={s}, t={t}"
        )));
    }
    Ok(s * (t - 1.0) / (t - s))
}

fn rate_holds(seq: &EigenSequence, q: f64) -> bool {
    seq.rate_limit_class(q) == RateLimit::LimitInfinite
}

fn is_trivial(seq: &EigenSequence) -> bool {
    seq.positive_count().is_some_and(|n| n <= 1)
}

/// EXP-(s,t)-WT under the given error criterion.
pub fn classify_wt(seq: &EigenSequence, s: f64, t: f64, crit: ErrorCriterion) -> Verdict {
    if is_trivial(seq) {
        return Verdict::trivial();
    }
    // region membership on the stored log-inverse values
    let a1 = seq.a(1);
    let a2 = seq.a(2);
    let first_le_one = a1 >= 0.0;

    let rate_checked = |cond: Condition, q: f64, reason: Reason| {
        if rate_holds(seq, q) {
            Verdict::holds(cond)
        } else {
            Verdict::fails(reason)
        }
    };

    if t > 1.0 {
        if s < 1.0 {
            let q = 1.0 / eta(s, t).expect("0 < s < 1 < t");
            let label = match crit {
                ErrorCriterion::Abs => Condition::A3,
                ErrorCriterion::Nor => Condition::N2,
            };
            return rate_checked(label, q, Reason::RateEtaFails);
        }
        return match crit {
            ErrorCriterion::Nor => rate_checked(Condition::N1, 1.0 / s, Reason::RateSFails),
            ErrorCriterion::Abs if first_le_one => {
                rate_checked(Condition::A2, 1.0 / s, Reason::RateSFails)
            }
            ErrorCriterion::Abs if s > 1.0 => {
                rate_checked(Condition::A1, 1.0 / s.min(t), Reason::RateMinFails)
            }
            ErrorCriterion::Abs => Verdict::fails(Reason::NoConditionRegion),
        };
    }

    if s <= 1.0 {
        return Verdict::fails(Reason::SmallST);
    }
    match crit {
        ErrorCriterion::Abs if !first_le_one => Verdict::fails(Reason::LargeFirstEigenvalue),
        ErrorCriterion::Abs if !(a2 > 0.0) => Verdict::fails(Reason::SecondEigenvalueNotBelowOne),
        ErrorCriterion::Abs => rate_checked(Condition::A4, 1.0 / s, Reason::RateSFails),
        ErrorCriterion::Nor if !(a1 < a2) => Verdict::fails(Reason::EqualLeadingEigenvalues),
        ErrorCriterion::Nor => rate_checked(Condition::N3, 1.0 / s, Reason::RateSFails),
    }
}

/// SPT, PT, QPT and UWT never hold once two eigenvalues are positive, even
/// if all others vanish. WT delegates to [`classify_wt`].
pub fn classify_notion(seq: &EigenSequence, q: NotionQuery) -> Verdict {
    match q {
        NotionQuery::Wt { s, t, crit } => classify_wt(seq, s, t, crit),
        _ if is_trivial(seq) => Verdict::trivial(),
        _ => Verdict::fails(Reason::TheoremNegative),
    }
}

/// `log max(1, n(ε, S_d)) / (d^t + z^s)` with `z = max(1, 1/ε)` (ALG) or
/// `z = 1 + log max(1, 1/ε)` (EXP).
#[allow(clippy::too_many_arguments)]
pub fn wt_ratio(
    seq: &EigenSequence,
    d: usize,
    eps: f64,
    s: f64,
    t: f64,
    crit: ErrorCriterion,
    z_mode: ZMode,
    cap: u64,
) -> Result<f64, ClassifyError> {
    let n = info_complexity(seq, d, eps, crit, cap);
    if n.capped {
        return Err(ClassifyError::Capped(cap));
    }
    Ok(wt_ratio_from_count(n.n, d, eps, s, t, z_mode))
}

/// The ratio for an already computed complexity `n`.
pub fn wt_ratio_from_count(n: u64, d: usize, eps: f64, s: f64, t: f64, z_mode: ZMode) -> f64 {
    let z = match z_mode {
        ZMode::Alg => (1.0 / eps).max(1.0),
        ZMode::Exp => 1.0 + (1.0 / eps).max(1.0).ln(),
    };
    (n.max(1) as f64).ln() / (pow_d(d, t) + z.powf(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::rescale_to_normalized;
    use proptest::prelude::*;

    const ABS: ErrorCriterion = ErrorCriterion::Abs;
    const NOR: ErrorCriterion = ErrorCriterion::Nor;

    fn list(v: &[f64]) -> EigenSequence {
        EigenSequence::explicit(v).unwrap()
    }

    #[test]
    fn eta_examples() {
        assert!((eta(0.5, 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let e = eta(0.5, 1.001).unwrap();
        assert!((e - 0.5 * 0.001 / 0.501).abs() < 1e-15);
        assert!(e < 0.001);
        assert!(eta(1.0, 2.0).is_err());
        assert!(eta(0.5, 1.0).is_err());
        assert!(eta(0.0, 2.0).is_err());
    }

    #[test]
    fn verdict_examples() {
        let ll = EigenSequence::loglog(1.0, 2.0, 1.0).unwrap();
        assert_eq!(classify_wt(&ll, 2.0, 2.0, ABS), Verdict::holds(Condition::A2));
        let ll3 = EigenSequence::loglog(1.0, 3.0, 1.0).unwrap();
        assert_eq!(
            classify_wt(&ll3, 0.5, 2.0, ABS),
            Verdict::fails(Reason::RateEtaFails)
        );
        assert_eq!(
            classify_wt(&list(&[1.0, 0.5]), 1.0, 1.0, ABS),
            Verdict::fails(Reason::SmallST)
        );
        assert_eq!(
            classify_wt(&list(&[1.5, 1.2, 0.0]), 2.0, 0.5, ABS),
            Verdict::fails(Reason::LargeFirstEigenvalue)
        );
        assert_eq!(
            classify_wt(&list(&[1.0, 0.5]), 2.0, 0.5, ABS),
            Verdict::holds(Condition::A4)
        );
        assert_eq!(
            classify_wt(&list(&[0.5, 0.5]), 2.0, 0.5, NOR),
            Verdict::fails(Reason::EqualLeadingEigenvalues)
        );
        assert_eq!(
            classify_wt(&list(&[1.5, 1.2]), 1.0, 2.0, ABS),
            Verdict::fails(Reason::NoConditionRegion)
        );
        assert_eq!(classify_wt(&list(&[3.0]), 0.1, 0.1, ABS), Verdict::trivial());
    }

    #[test]
    fn notion_examples() {
        assert_eq!(
            classify_notion(&list(&[1.0, 0.5]), NotionQuery::Qpt),
            Verdict::fails(Reason::TheoremNegative)
        );
        assert_eq!(classify_notion(&list(&[1.0]), NotionQuery::Spt), Verdict::trivial());
        assert_eq!(
            classify_notion(&list(&[0.9, 0.8, 0.7]), NotionQuery::Uwt).outcome,
            Outcome::Fails
        );
        let zero = EigenSequence::explicit_allow_trivial(&[0.0]).unwrap();
        assert_eq!(classify_notion(&zero, NotionQuery::Pt), Verdict::trivial());
    }

    #[test]
    fn ratio_examples() {
        let seq = list(&[1.0, 0.5]);
        assert_eq!(wt_ratio(&seq, 3, 1.5, 2.0, 2.0, NOR, ZMode::Exp, 1000).unwrap(), 0.0);

        let v: Vec<f64> = (1..=10).map(|j| 0.5f64.powi(j)).collect();
        let seq = list(&v);
        let got = wt_ratio(&seq, 2, 0.3, 2.0, 2.0, ABS, ZMode::Exp, 1000).unwrap();
        let want = 3f64.ln() / (4.0 + (1.0 + (10.0f64 / 3.0).ln()).powi(2));
        assert!((got - want).abs() < 1e-15);
        let got = wt_ratio(&seq, 2, 0.3, 2.0, 2.0, ABS, ZMode::Alg, 1000).unwrap();
        let want = 3f64.ln() / (4.0 + (10.0f64 / 3.0).powi(2));
        assert!((got - want).abs() < 1e-15);
        assert_eq!(
            wt_ratio(&seq, 2, 0.3, 2.0, 2.0, ABS, ZMode::Alg, 2),
            Err(ClassifyError::Capped(2))
        );
    }

    fn map_label(c: Condition) -> Condition {
        match c {
            Condition::N1 => Condition::A2,
            Condition::N2 => Condition::A3,
            Condition::N3 => Condition::A4,
            other => other,
        }
    }

    fn any_seq() -> impl Strategy<Value = EigenSequence> {
        prop_oneof![
            prop::collection::vec(0.0f64..2.0, 1..6).prop_map(|mut v| {
                v.sort_by(|a, b| b.total_cmp(a));
                v[0] = v[0].max(0.1);
                EigenSequence::explicit(&v).unwrap()
            }),
            (0.1f64..3.0, 0.1f64..5.0, 0.1f64..3.0)
                .prop_map(|(a, p, b)| EigenSequence::loglog(a, p, b).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn eta_is_between_zero_and_s(s in 0.001f64..0.999, t in 1.001f64..50.0) {
            let e = eta(s, t).unwrap();
            prop_assert!(e > 0.0 && e < s);
        }

        #[test]
        fn normalized_bridge(seq in any_seq(), s in prop_oneof![Just(1.0), 0.1f64..3.0], t in prop_oneof![Just(1.0), 0.1f64..3.0]) {
            let beta = rescale_to_normalized(&seq).unwrap();
            let nor = classify_wt(&seq, s, t, NOR);
            let abs = classify_wt(&beta, s, t, ABS);
            prop_assert_eq!(nor.outcome, abs.outcome);
            prop_assert_eq!(nor.condition.map(map_label), abs.condition);
        }

        #[test]
        fn scale_invariance(a in 0.1f64..3.0, p in 0.1f64..5.0, b1 in 0.05f64..1.0, b2 in 0.05f64..1.0, s in 0.1f64..3.0, t in 0.1f64..3.0) {
            let s1 = EigenSequence::loglog(a, p, b1).unwrap();
            let s2 = EigenSequence::loglog(a, p, b2).unwrap();
            for crit in [ABS, NOR] {
                prop_assert_eq!(classify_wt(&s1, s, t, crit), classify_wt(&s2, s, t, crit));
            }
        }
    }
}
