//! Information complexity and exponential weak tractability of linear tensor
//! product problems, computed from the univariate eigenvalues of `S_1^* S_1`.
//!
//! * [`eigenmodel`]: univariate spectra in log space.
//! * [`product_enum`]: the eigenvalues of the d-fold tensor power, streamed in
//!   nonincreasing order, plus a brute-force oracle.
//! * [`complexity`]: `n_ABS(ε, S_d)` and `n_NOR(ε, S_d)`.
//! * [`criterion`]: the criterion sum whose boundedness in `d` characterizes
//!   EXP-(s,t)-WT.
//! * [`classifier`]: the decision table for EXP-(s,t)-WT and the negative
//!   answers for UWT/QPT/PT/SPT.
//! * [`bounds`]: power-sum and binomial inequalities.
//! * [`verify`]: the self-verification suite behind `tractkit verify`.

pub mod bounds;
pub mod classifier;
pub mod cli;
pub mod complexity;
pub mod criterion;
pub mod eigenmodel;
pub mod product_enum;
pub mod verify;

pub use classifier::{classify_notion, classify_wt, Condition, NotionQuery, Outcome, Verdict, ZMode};
pub use complexity::{info_complexity, ComplexityResult, ErrorCriterion};
pub use criterion::{sigma_ewt, SigmaEstimate, WtParams};
pub use eigenmodel::{EigenSequence, ModelError, RateLimit};
pub use product_enum::{ProductEigenStream, ProductTerm};
