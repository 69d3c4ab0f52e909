//! Univariate eigenvalue sequences `λ̃_1 ≥ λ̃_2 ≥ … ≥ 0` of `W_1 = S_1^* S_1`.
//!
//! Every sequence is held in log space as `a_j = log(1/λ̃_j)`, with `+∞`
//! standing for a zero eigenvalue. Products of eigenvalues are never formed
//! in linear space anywhere in the crate; they are sums of `a_j`.
//!
//! Two kinds are supported:
//!
//! * an explicit finite list, whose entries past the end are exactly zero
//!   (a finite-rank `W_1`);
//! * the parametric family `λ̃_j = B·exp(-A·(log(j+1))^p)`, for which the
//!   growth of `log λ̃_n⁻¹` against powers of `log n` is known in closed form.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("NotSorted: value at position {index} exceeds its predecessor")]
    NotSorted { index: usize },
    #[error("AllZero: every eigenvalue is zero")]
    AllZero,
    #[error("EmptyList: at least one eigenvalue is required")]
    EmptyList,
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("IndexZero: eigenvalue indices start at 1")]
    IndexZero,
    #[error("ParseError: {0}")]
    Parse(String),
}

/// `log(1/λ̃_j)`; `+∞` iff `λ̃_j = 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogInvEigen(pub f64);

impl LogInvEigen {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero_eigenvalue(self) -> bool {
        self.0 == f64::INFINITY
    }

    /// The eigenvalue itself, `exp(-a)`.
    pub fn eigenvalue(self) -> f64 {
        (-self.0).exp()
    }
}

/// Outcome of `lim_{n→∞} log λ̃_n⁻¹ / (log n)^q = ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateLimit {
    LimitInfinite,
    LimitFinite,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogParams {
    pub amplitude: f64,
    pub exponent: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    /// `log_inv[j-1] = a_j`; indices past the end are zero eigenvalues.
    Explicit { log_inv: Vec<f64> },
    /// `B` is held as `log B` so that normalization can make `a_1` exactly 0.
    LogLog {
        amplitude: f64,
        exponent: f64,
        log_scale: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSequence {
    repr: Repr,
}

impl EigenSequence {
    /// Validates a nonincreasing list of nonnegative eigenvalues.
    ///
    /// The all-zero list is rejected with [`ModelError::AllZero`]; use
    /// [`EigenSequence::explicit_allow_trivial`] to accept it.
    pub fn explicit(values: &[f64]) -> Result<Self, ModelError> {
        let seq = Self::explicit_allow_trivial(values)?;
        if seq.is_all_zero() {
            return Err(ModelError::AllZero);
        }
        Ok(seq)
    }

    /// Like [`EigenSequence::explicit`] but also accepts the zero operator.
    pub fn explicit_allow_trivial(values: &[f64]) -> Result<Self, ModelError> {
        if values.is_empty() {
            return Err(ModelError::EmptyList);
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(ModelError::InvalidParameter(format!(
                    "eigenvalue at position {} must be finite and nonnegative, got {v}",
                    i + 1
                )));
            }
        }
        if let Some(i) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(ModelError::NotSorted { index: i + 2 });
        }
        let log_inv = values.iter().map(|&v| -v.ln()).collect();
        Ok(Self {
            repr: Repr::Explicit { log_inv },
        })
    }

    /// `λ̃_j = B·exp(-A·(log(j+1))^p)`.
    pub fn loglog(amplitude: f64, exponent: f64, scale: f64) -> Result<Self, ModelError> {
        for (name, v) in [("A", amplitude), ("p", exponent), ("B", scale)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ModelError::InvalidParameter(format!(
                    "{name} must be a positive finite number, got {v}"
                )));
            }
        }
        Ok(Self::loglog_with_log_scale(amplitude, exponent, scale.ln()))
    }

    pub(crate) fn loglog_with_log_scale(amplitude: f64, exponent: f64, log_scale: f64) -> Self {
        Self {
            repr: Repr::LogLog {
                amplitude,
                exponent,
                log_scale,
            },
        }
    }

    /// Builds an explicit sequence straight from log-inverse values, which
    /// must already be nondecreasing.
    pub(crate) fn from_log_inv(log_inv: Vec<f64>) -> Self {
        debug_assert!(log_inv.windows(2).all(|w| w[0] <= w[1]));
        Self {
            repr: Repr::Explicit { log_inv },
        }
    }

    pub fn loglog_params(&self) -> Option<LogLogParams> {
        match self.repr {
            Repr::LogLog {
                amplitude,
                exponent,
                log_scale,
            } => Some(LogLogParams {
                amplitude,
                exponent,
                scale: log_scale.exp(),
            }),
            Repr::Explicit { .. } => None,
        }
    }

    /// Explicit entries as eigenvalues (not log space); `None` for the
    /// parametric family.
    pub fn explicit_values(&self) -> Option<Vec<f64>> {
        match &self.repr {
            Repr::Explicit { log_inv } => Some(log_inv.iter().map(|a| (-a).exp()).collect()),
            Repr::LogLog { .. } => None,
        }
    }

    /// `log(1/λ̃_j)` for a 1-based index.
    pub fn log_inv(&self, j: usize) -> Result<LogInvEigen, ModelError> {
        if j == 0 {
            return Err(ModelError::IndexZero);
        }
        Ok(LogInvEigen(self.a(j)))
    }

    /// Unchecked 1-based `log(1/λ̃_j)`. Callers guarantee `j ≥ 1`.
    #[inline]
    pub(crate) fn a(&self, j: usize) -> f64 {
        debug_assert!(j >= 1);
        match &self.repr {
            Repr::Explicit { log_inv } => log_inv.get(j - 1).copied().unwrap_or(f64::INFINITY),
            Repr::LogLog {
                amplitude,
                exponent,
                log_scale,
            } => amplitude * ((j + 1) as f64).ln().powf(*exponent) - log_scale,
        }
    }

    /// `λ̃_j`, with `0` past the end of an explicit list.
    pub fn value(&self, j: usize) -> Result<f64, ModelError> {
        self.log_inv(j).map(LogInvEigen::eigenvalue)
    }

    /// Number of positive eigenvalues; `None` when infinitely many.
    pub fn positive_count(&self) -> Option<usize> {
        match &self.repr {
            Repr::Explicit { log_inv } => Some(log_inv.iter().take_while(|a| a.is_finite()).count()),
            Repr::LogLog { .. } => None,
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.positive_count() == Some(0)
    }

    /// Whether `lim log λ̃_n⁻¹ / (log n)^q = ∞`.
    ///
    /// Finite lists always diverge because the numerator is eventually `+∞`.
    /// For the parametric family the ratio behaves like `A·(log n)^{p-q}`, so
    /// the limit is infinite iff `p > q`; at `p = q` it tends to `A`.
    pub fn rate_limit_class(&self, q: f64) -> RateLimit {
        if !(q.is_finite() && q > 0.0) {
            return RateLimit::Unknown;
        }
        match &self.repr {
            Repr::Explicit { .. } => RateLimit::LimitInfinite,
            Repr::LogLog { exponent, .. } if *exponent > q => RateLimit::LimitInfinite,
            Repr::LogLog { .. } => RateLimit::LimitFinite,
        }
    }
}

impl fmt::Display for EigenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Explicit { log_inv } => {
                f.write_str("list:")?;
                for (i, a) in log_inv.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", (-a).exp())?;
                }
                Ok(())
            }
            Repr::LogLog {
                amplitude,
                exponent,
                log_scale,
            } => write!(f, "loglog:A={amplitude},p={exponent},B={}", log_scale.exp()),
        }
    }
}

/// Parses `list:v1,v2,...` or `loglog:A=<f>,p=<f>[,B=<f>]`.
///
/// All-zero lists are accepted; the zero operator is a legal input.
impl FromStr for EigenSequence {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| ModelError::Parse(format!("missing ':' in model spec '{s}'")))?;
        match kind {
            "list" => {
                let values = body
                    .split(',')
                    .map(|tok| {
                        tok.trim()
                            .parse::<f64>()
                            .map_err(|_| ModelError::Parse(format!("bad number '{tok}'")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Self::explicit_allow_trivial(&values)
            }
            "loglog" => {
                let (mut a, mut p, mut b) = (None, None, None);
                for tok in body.split(',') {
                    let (key, val) = tok
                        .split_once('=')
                        .ok_or_else(|| ModelError::Parse(format!("expected key=value, got '{tok}'")))?;
                    let v = val
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| ModelError::Parse(format!("bad number '{tok}'")))?;
                    let slot = match key.trim() {
                        "A" => &mut a,
                        "p" => &mut p,
                        "B" => &mut b,
                        _ => return Err(ModelError::Parse(format!("unknown key '{tok}'"))),
                    };
                    if slot.replace(v).is_some() {
                        return Err(ModelError::Parse(format!("duplicate key '{tok}'")));
                    }
                }
                let a = a.ok_or_else(|| ModelError::Parse("missing 'A'".into()))?;
                let p = p.ok_or_else(|| ModelError::Parse("missing 'p'".into()))?;
                Self::loglog(a, p, b.unwrap_or(1.0))
            }
            other => Err(ModelError::Parse(format!("unknown model kind '{other}'"))),
        }
    }
}
