//! Self-verification suite: every fast path checked against brute force or
//! an independent second route, on a deterministic corpus.
//!
//! Output is a list of [`PropertyResult`]s in a fixed order; nothing in it
//! depends on timing or thread scheduling, so two runs print the same bytes.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{binomial_bounds, power_sum_bounds};
use crate::classifier::{classify_notion, classify_wt, eta, Condition, NotionQuery, Outcome};
use crate::complexity::{
    count_below, info_complexity, info_complexity_via_stream, log_inv_threshold,
    rescale_to_normalized, ErrorCriterion, DEFAULT_CAP,
};
use crate::criterion::{sigma_ewt, sigma_upper_factorized, WtParams, LOG_2E};
use crate::eigenmodel::EigenSequence;
use crate::product_enum::{binomial, brute_force_products, kth_largest, ProductEigenStream};

const SEED: u64 = 0x7472_6163_746b_6974;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Small,
    Full,
}

impl Suite {
    pub fn max_len(self) -> usize {
        match self {
            Suite::Small => 10,
            Suite::Full => 20,
        }
    }

    pub fn max_d(self) -> usize {
        match self {
            Suite::Small => 2,
            Suite::Full => 3,
        }
    }

    fn random_sequences(self) -> usize {
        match self {
            Suite::Small => 24,
            Suite::Full => 60,
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "small" => Ok(Suite::Small),
            "full" => Ok(Suite::Full),
            _ => Err(format!("unknown suite '{s}' (expected small or full)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub cases: u64,
    /// First violation, if any.
    pub failure: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS {} ({} cases)", self.name, self.cases),
            Some(msg) => write!(f, "FAIL {} ({} cases): {msg}", self.name, self.cases),
        }
    }
}

struct Check {
    name: &'static str,
    cases: u64,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failure: None,
        }
    }

    /// Records one case; keeps the first failure message.
    fn case(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(msg());
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            name: self.name,
            cases: self.cases,
            failure: self.failure,
        }
    }
}

/// Explicit test sequences: hand-picked edge cases (ties, zero tails,
/// eigenvalues above one) followed by seeded random lists of length
/// `2..=max_len`.
pub fn corpus(suite: Suite) -> Vec<Vec<f64>> {
    let max_len = suite.max_len();
    let mut out: Vec<Vec<f64>> = vec![
        vec![1.0, 0.5],
        vec![0.9, 0.5, 0.1],
        vec![0.5, 0.5],
        vec![1.0, 0.25],
        vec![1.0, 0.5, 0.5, 0.25],
        vec![1.1, 1.05],
        vec![3.0, 2.0, 0.1, 0.01],
        vec![1.5, 1.2, 0.0],
        vec![1.0, 1.0, 1.0, 0.0, 0.0],
        vec![2.0, 1.0, 0.5, 0.25, 0.125],
    ];
    out.push((1..=max_len as i32).map(|j| 0.5f64.powi(j)).collect());
    out.push((1..=max_len).map(|j| 1.0 / j as f64).collect());

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..suite.random_sequences() {
        let len = rng.gen_range(2..=max_len);
        let top: f64 = if rng.gen_bool(0.25) { rng.gen_range(1.0..3.0) } else { 1.0 };
        let mut v: Vec<f64> = (0..len)
            .map(|_| match rng.gen_range(0..10) {
                0 => 0.0,
                1 => 0.5,
                _ => top * rng.gen_range(0.001f64..1.0),
            })
            .collect();
        v.sort_by(|a, b| b.total_cmp(a));
        if v[0] == 0.0 {
            v[0] = top;
        }
        out.push(v);
    }
    out
}

fn explicit_corpus(suite: Suite) -> Vec<EigenSequence> {
    corpus(suite)
        .iter()
        .map(|v| EigenSequence::explicit(v).expect("corpus entries are valid"))
        .collect()
}

fn loglog_corpus() -> Vec<EigenSequence> {
    [
        (1.0, 2.0, 1.0),
        (2.0, 2.0, 1.0),
        (1.0, 1.0, 1.0),
        (0.5, 3.0, 0.3),
        (1.0, 1.5, 4.0),
    ]
    .iter()
    .map(|&(a, p, b)| EigenSequence::loglog(a, p, b).unwrap())
    .collect()
}

fn expanded_oracle(seq: &EigenSequence, d: usize, m: usize) -> Vec<f64> {
    brute_force_products(seq, d, m)
        .expect("box within limit")
        .into_iter()
        .flat_map(|(v, n)| std::iter::repeat(v).take(n as usize))
        .collect()
}

fn oracle_count_above(oracle: &[(f64, u64)], floor: f64) -> u64 {
    oracle.iter().filter(|(v, _)| *v > floor).map(|(_, n)| n).sum()
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn run_suite(suite: Suite) -> Vec<PropertyResult> {
    let seqs = explicit_corpus(suite);
    let counter = |seq: &EigenSequence, d: usize, eps: f64, crit: ErrorCriterion| {
        info_complexity(seq, d, eps, crit, DEFAULT_CAP).n
    };
    vec![
        eigen_monotone(&seqs),
        eigen_rate_scale_invariance(),
        eigen_unit_exponent(),
        stream_order(&seqs, suite.max_d()),
        stream_multiplicity(&seqs, suite.max_d()),
        stream_no_duplicates(&seqs, suite.max_d()),
        stream_first_and_d1(&seqs, suite.max_d()),
        check_complexity_oracle(suite, &counter),
        complexity_stream_route(&seqs, suite.max_d()),
        complexity_monotone(&seqs, suite.max_d()),
        complexity_normalization(&seqs, suite.max_d()),
        sigma_closed_form(),
        sigma_lower_monotone(),
        sigma_sandwich(&seqs, suite.max_d()),
        sigma_bridge(&seqs, suite.max_d()),
        classifier_table(),
        classifier_bridge(&seqs),
        classifier_scale_invariance(),
        classifier_eta_range(),
        lemma_power_sums(),
        lemma_binomials(),
    ]
}

fn eigen_monotone(seqs: &[EigenSequence]) -> PropertyResult {
    let mut c = Check::new("eigenmodel.log_inv_monotone");
    for seq in seqs.iter().chain(&loglog_corpus()) {
        for j in 1..=40 {
            let (x, y) = (seq.log_inv(j).unwrap(), seq.log_inv(j + 1).unwrap());
            c.case(y >= x, || format!("{seq}: a_{} < a_{j}", j + 1));
        }
    }
    c.finish()
}

fn eigen_rate_scale_invariance() -> PropertyResult {
    let mut c = Check::new("eigenmodel.rate_scale_invariance");
    for p in [0.5, 1.0, 2.0, 3.0] {
        for q in [0.25, 0.5, 1.0, 2.0, 3.0, 4.0] {
            let base = EigenSequence::loglog(1.0, p, 1.0).unwrap().rate_limit_class(q);
            for b in [0.01, 0.5, 7.0] {
                let other = EigenSequence::loglog(1.0, p, b).unwrap().rate_limit_class(q);
                c.case(base == other, || format!("p={p} q={q} B={b}"));
            }
        }
    }
    c.finish()
}

fn eigen_unit_exponent() -> PropertyResult {
    let mut c = Check::new("eigenmodel.unit_exponent_identity");
    let seq = EigenSequence::loglog(1.0, 1.0, 1.0).unwrap();
    for j in (1..100_000).step_by(97) {
        let want = ((j + 1) as f64).ln();
        let got = seq.log_inv(j).unwrap().value();
        c.case(rel_diff(got, want) <= 1e-12, || format!("j={j}: {got} vs {want}"));
    }
    c.finish()
}

fn stream_order(seqs: &[EigenSequence], max_d: usize) -> PropertyResult {
    let mut c = Check::new("product_enum.order_matches_oracle");
    for (i, seq) in seqs.iter().enumerate() {
        let m = corpus_len(seq);
        for d in 1..=max_d {
            let oracle = expanded_oracle(seq, d, m);
            let mut got = Vec::with_capacity(oracle.len());
            for term in ProductEigenStream::open(seq, d).unwrap() {
                let term = term.unwrap();
                got.extend(std::iter::repeat(term.log_lambda).take(term.multiplicity as usize));
            }
            let ok = got.len() == oracle.len()
                && got.iter().zip(&oracle).all(|(g, o)| (g - o).abs() <= 1e-12);
            c.case(ok, || {
                format!("corpus[{i}] d={d}: {} stream vs {} oracle entries", got.len(), oracle.len())
            });
        }
    }
    c.finish()
}

fn corpus_len(seq: &EigenSequence) -> usize {
    seq.explicit_values().map_or(0, |v| v.len())
}

fn stream_multiplicity(seqs: &[EigenSequence], max_d: usize) -> PropertyResult {
    let mut c = Check::new("product_enum.multiplicity_counts");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    for (i, seq) in seqs.iter().enumerate() {
        let m = corpus_len(seq);
        for d in 1..=max_d {
            let oracle = brute_force_products(seq, d, m).unwrap();
            let terms: Vec<_> = ProductEigenStream::open(seq, d)
                .unwrap()
                .map(Result::unwrap)
                .collect();
            let hi = oracle.first().map_or(0.0, |o| o.0) + 0.5;
            let lo = oracle.last().map_or(0.0, |o| o.0) - 0.5;
            for _ in 0..20 {
                let x = rng.gen_range(lo..=hi);
                let emitted: u64 = terms
                    .iter()
                    .filter(|t| t.log_lambda >= x)
                    .map(|t| t.multiplicity)
                    .sum();
                let want: u64 = oracle.iter().filter(|o| o.0 >= x).map(|o| o.1).sum();
                c.case(emitted == want, || {
                    format!("corpus[{i}] d={d} x={x}: {emitted} vs {want}")
                });
            }
        }
    }
    c.finish()
}

fn stream_no_duplicates(seqs: &[EigenSequence], max_d: usize) -> PropertyResult {
    let mut c = Check::new("product_enum.no_duplicate_indices");
    for (i, seq) in seqs.iter().enumerate() {
        for d in 1..=max_d {
            let mut stream = ProductEigenStream::open(seq, d).unwrap().with_emission_log();
            while stream.next_term().unwrap().is_some() {}
            let mut log = stream.emitted().unwrap().to_vec();
            let emitted = log.len();
            log.sort();
            log.dedup();
            let canonical = log.iter().all(|t| t.windows(2).all(|w| w[0] <= w[1]));
            c.case(log.len() == emitted && canonical, || {
                format!("corpus[{i}] d={d}: duplicate or non-canonical tuple")
            });
        }
    }
    // infinite sequences: a long prefix
    for seq in loglog_corpus() {
        let mut stream = ProductEigenStream::open(&seq, 3).unwrap().with_emission_log();
        for _ in 0..5000 {
            stream.next_term().unwrap();
        }
        let mut log = stream.emitted().unwrap().to_vec();
        log.sort();
        log.dedup();
        c.case(log.len() == 5000, || format!("{seq}: duplicate tuple in prefix"));
    }
    c.finish()
}

fn stream_first_and_d1(seqs: &[EigenSequence], max_d: usize) -> PropertyResult {
    let mut c = Check::new("product_enum.first_term_and_d1");
    for seq in seqs.iter().chain(&loglog_corpus()) {
        let a1 = seq.a(1);
        for d in 1..=max_d + 3 {
            let want = -(0..d).fold(0.0, |acc, _| acc + a1);
            let got = kth_largest(seq, d, 1).unwrap();
            c.case(got == want, || format!("{seq} d={d}: {got} vs {want}"));
        }
        let (n, limit) = seq.positive_count().map_or((200, 200), |n| (n, n + 1));
        let terms: Vec<_> = ProductEigenStream::open(seq, 1)
            .unwrap()
            .take(limit)
            .map(Result::unwrap)
            .collect();
        let ok = terms.len() == n
            && terms
                .iter()
                .enumerate()
                .all(|(k, t)| t.multiplicity == 1 && t.log_lambda == -seq.a(k + 1));
        c.case(ok, || format!("{seq}: d=1 stream differs from sequence"));
    }
    c.finish()
}

/// Checks a complexity implementation against the brute-force count on the
/// corpus: 50 seeded random `ε` per (sequence, d, criterion) cell, plus
/// thresholds placed exactly on known products.
pub fn check_complexity_oracle(
    suite: Suite,
    counter: &dyn Fn(&EigenSequence, usize, f64, ErrorCriterion) -> u64,
) -> PropertyResult {
    let mut c = Check::new("complexity.oracle_equivalence");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    for (i, seq) in explicit_corpus(suite).iter().enumerate() {
        let m = corpus_len(seq);
        for d in 1..=suite.max_d() {
            let oracle = brute_force_products(seq, d, m).unwrap();
            for crit in [ErrorCriterion::Abs, ErrorCriterion::Nor] {
                let log_cri = crit.log_cri(seq, d);
                // ε² spread around the products' range, relative to CRI_d
                let top = oracle[0].0 - log_cri;
                let bottom = oracle.last().unwrap().0 - log_cri;
                let mut eps_list: Vec<f64> = (0..50)
                    .map(|_| (0.5 * rng.gen_range(bottom - 1.0..=top + 1.0)).exp())
                    .collect();
                // ε with ε²·CRI_d landing on a product
                eps_list.extend(oracle.iter().take(5).map(|(v, _)| (0.5 * (v - log_cri)).exp()));
                for eps in eps_list {
                    let floor = -log_inv_threshold(seq, d, eps, crit);
                    let want = oracle_count_above(&oracle, floor);
                    let got = counter(seq, d, eps, crit);
                    c.case(got == want, || {
                        format!("corpus[{i}] d={d} {crit} eps={eps}: {got} vs oracle {want}")
                    });
                }
            }
            // thresholds exactly equal to a product: that product is excluded
            for &(v, _) in &oracle {
                let got = count_below(seq, d, -v, DEFAULT_CAP).n;
                let want = oracle_count_above(&oracle, v);
                c.case(got == want, || {
                    format!("corpus[{i}] d={d} tie at {v}: {got} vs oracle {want}")
                });
            }
        }
    }
    c.finish()
}

fn complexity_stream_route(seqs: &[EigenSequence], max_d: usize) -> PropertyResult {
    let mut c = Check::new("complexity.stream_route_agrees");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    for (i, seq) in seqs.iter().chain(&loglog_corpus()).enumerate() {
        for d in 1..=max_d {
            for crit in [ErrorCriterion::Abs, ErrorCriterion::Nor] {
                for _ in 0..20 {
                    let eps = rng.gen_range(0.02f64..1.5);
                    let a = info_complexity(seq, d, eps, crit, 100_000);
                    let b = info_complexity_via_stream(seq, d, eps, crit, 100_000).unwrap();
                    c.case(a == b, || format!("seq[{i}] d={d} {crit} eps={eps}: {a:?} vs {b:?}"));
                }
            }
        }
    }
    c.finish()
}

fn complexity_monotone(seqs: &[EigenSequence], max_d: usize) -> PropertyResult {
    let mut c = Check::new("complexity.monotone_in_eps");
    let grid: Vec<f64> = (1..=40).map(|k| 0.04 * k as f64).collect();
    for (i, seq) in seqs.iter().enumerate() {
        for d in 1..=max_d {
            for crit in [ErrorCriterion::Abs, ErrorCriterion::Nor] {
                let counts: Vec<u64> = grid
                    .iter()
                    .map(|&e| info_complexity(seq, d, e, crit, DEFAULT_CAP).n)
                    .collect();
                c.case(counts.windows(2).all(|w| w[0] >= w[1]), || {
                    format!("corpus[{i}] d={d} {crit}: {counts:?}")
                });
            }
        }
    }
    c.finish()
}

fn complexity_normalization(seqs: &[EigenSequence], max_d: usize) -> PropertyResult {
    let mut c = Check::new("complexity.normalization_identity");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    for (i, seq) in seqs.iter().chain(&loglog_corpus()).enumerate() {
        let beta = rescale_to_normalized(seq).unwrap();
        for d in 1..=max_d {
            for _ in 0..20 {
                let eps = rng.gen_range(0.02f64..1.2);
                let nor = info_complexity(seq, d, eps, ErrorCriterion::Nor, 100_000);
                let abs = info_complexity(&beta, d, eps, ErrorCriterion::Abs, 100_000);
                c.case(nor == abs, || format!("seq[{i}] d={d} eps={eps}: {nor:?} vs {abs:?}"));
            }
        }
    }
    c.finish()
}

/// 100-point (d, s, t, c) grid: 5 d × 5 s × 2 t × 2 c.
pub fn closed_form_grid() -> Vec<(usize, f64, f64, f64)> {
    let mut grid = Vec::with_capacity(100);
    for d in [1, 2, 3, 7, 20] {
        for s in [0.3, 0.5, 1.0, 2.0, 3.5] {
            for t in [0.5, 2.0] {
                for c in [0.01, 1.5] {
                    grid.push((d, s, t, c));
                }
            }
        }
    }
    grid
}

fn sigma_closed_form() -> PropertyResult {
    let mut c = Check::new("criterion.single_eigenvalue_closed_form");
    for value in [1.0, 0.3, 2.5] {
        let seq = EigenSequence::explicit(&[value, 0.0]).unwrap();
        for (d, s, t, cc) in closed_form_grid() {
            for crit in [ErrorCriterion::Abs, ErrorCriterion::Nor] {
                let p = WtParams::new(s, t, cc, crit).unwrap();
                let got = sigma_ewt(&seq, d, &p, 1e-12, 1_000_000).unwrap().lower;
                // the single product is λ̃^d; the max(1, ·) clip vanishes when it is ≥ CRI_d
                let excess = match crit {
                    ErrorCriterion::Abs => (-(d as f64) * value.ln()).max(0.0),
                    ErrorCriterion::Nor => 0.0,
                };
                let want = (-cc * ((d as f64).powf(t) + (LOG_2E + excess).powf(s))).exp();
                c.case(rel_diff(got, want) <= 1e-12, || {
                    format!("λ̃={value} d={d} s={s} t={t} c={cc} {crit}: {got} vs {want}")
                });
            }
        }
    }
    c.finish()
}

fn sigma_lower_monotone() -> PropertyResult {
    let mut c = Check::new("criterion.lower_monotone_in_terms");
    for seq in loglog_corpus() {
        let p = WtParams::new(1.5, 2.0, 0.5, ErrorCriterion::Abs).unwrap();
        let mut prev = 0.0;
        for m in [1, 3, 10, 30, 100, 300, 1000] {
            let lower = sigma_ewt(&seq, 2, &p, 0.0, m).unwrap().lower;
            c.case(lower >= prev, || format!("{seq} m={m}: {lower} < {prev}"));
            prev = lower;
        }
    }
    c.finish()
}

fn sigma_params() -> Vec<(f64, f64, f64)> {
    vec![
        (1.0, 2.0, 1.0),
        (2.0, 2.0, 0.5),
        (1.5, 0.5, 2.0),
        (3.0, 1.5, 0.1),
        (0.5, 2.0, 1.0),
    ]
}

fn sigma_sandwich(seqs: &[EigenSequence], max_d: usize) -> PropertyResult {
    let mut c = Check::new("criterion.factorized_sandwich");
    for seq in seqs.iter().chain(&loglog_corpus()) {
        for d in 1..=max_d + 1 {
            for (s, t, cc) in sigma_params().into_iter().chain([(2.0, 2.0, 4.0), (1.0, 2.0, 6.0)]) {
                for crit in [ErrorCriterion::Abs, ErrorCriterion::Nor] {
                    let p = WtParams::new(s, t, cc, crit).unwrap();
                    let Some(upper) = sigma_upper_factorized(seq, d, &p, 2000) else {
                        continue;
                    };
                    let lower = sigma_ewt(seq, d, &p, 1e-16, 200_000).unwrap().lower;
                    c.case(lower <= upper * (1.0 + 1e-12), || {
                        format!("{seq} d={d} s={s} t={t} c={cc} {crit}: {lower} > {upper}")
                    });
                }
            }
        }
    }
    c.finish()
}

fn sigma_bridge(seqs: &[EigenSequence], max_d: usize) -> PropertyResult {
    let mut c = Check::new("criterion.normalized_bridge");
    for (i, seq) in seqs.iter().enumerate() {
        let beta = rescale_to_normalized(seq).unwrap();
        for d in 1..=max_d {
            for (s, t, cc) in sigma_params() {
                let nor = WtParams::new(s, t, cc, ErrorCriterion::Nor).unwrap();
                let abs = WtParams::new(s, t, cc, ErrorCriterion::Abs).unwrap();
                let x = sigma_ewt(seq, d, &nor, 0.0, 1_000_000).unwrap().lower;
                let y = sigma_ewt(&beta, d, &abs, 0.0, 1_000_000).unwrap().lower;
                c.case(rel_diff(x, y) <= 1e-10, || {
                    format!("corpus[{i}] d={d} s={s} t={t} c={cc}: {x} vs {y}")
                });
            }
        }
    }
    c.finish()
}

/// One representative per region of the decision table.
pub struct TableCase {
    pub name: &'static str,
    pub model: &'static str,
    pub query: NotionQuery,
    pub outcome: Outcome,
    pub condition: Option<Condition>,
}

pub fn classifier_fixture() -> Vec<TableCase> {
    use ErrorCriterion::{Abs, Nor};
    let wt = |s, t, crit| NotionQuery::Wt { s, t, crit };
    let holds = |name, model, query, cond| TableCase {
        name,
        model,
        query,
        outcome: Outcome::Holds,
        condition: cond,
    };
    let fails = |name, model, query| TableCase {
        name,
        model,
        query,
        outcome: Outcome::Fails,
        condition: None,
    };
    vec![
        holds("A1", "loglog:A=1,p=2,B=5", wt(3.0, 2.0, Abs), Some(Condition::A1)),
        holds("A2", "loglog:A=1,p=2", wt(2.0, 2.0, Abs), Some(Condition::A2)),
        holds("A3", "loglog:A=1,p=4", wt(0.5, 2.0, Abs), Some(Condition::A3)),
        holds("A4", "list:1.0,0.5", wt(2.0, 0.5, Abs), Some(Condition::A4)),
        holds("N1", "loglog:A=1,p=2,B=5", wt(1.0, 2.0, Nor), Some(Condition::N1)),
        holds("N2", "loglog:A=1,p=4", wt(0.5, 2.0, Nor), Some(Condition::N2)),
        holds("N3", "list:2.0,0.5,0.5", wt(2.0, 1.0, Nor), Some(Condition::N3)),
        fails("t<=1 and s<=1", "list:1.0,0.5", wt(1.0, 1.0, Abs)),
        fails("t<=1 and lambda1>1 (ABS)", "list:1.5,1.2,0", wt(2.0, 0.5, Abs)),
        fails("t>1, s=1, lambda1>1 (ABS)", "list:1.5,1.2", wt(1.0, 2.0, Abs)),
        fails("rate boundary p=1/eta", "loglog:A=1,p=3", wt(0.5, 2.0, Abs)),
        fails("lambda1=lambda2 (NOR, t<=1)", "list:0.5,0.5", wt(2.0, 0.5, Nor)),
        fails("lambda2=1 (ABS, t<=1)", "list:1.0,1.0,0.5", wt(2.0, 0.5, Abs)),
        fails("QPT negative", "list:1.0,0.5", NotionQuery::Qpt),
        fails("PT negative", "list:1.0,0.5,0", NotionQuery::Pt),
        fails("SPT negative", "list:0.9,0.8,0.7", NotionQuery::Spt),
        fails("UWT negative", "loglog:A=1,p=2", NotionQuery::Uwt),
        holds("trivial sequence", "list:1.0", NotionQuery::Spt, None),
        holds("trivial WT", "list:5.0,0", wt(0.5, 0.5, Abs), None),
    ]
}

fn classifier_table() -> PropertyResult {
    let mut c = Check::new("classifier.decision_table");
    for case in classifier_fixture() {
        let seq: EigenSequence = case.model.parse().unwrap();
        let v = classify_notion(&seq, case.query);
        c.case(v.outcome == case.outcome && v.condition == case.condition, || {
            format!("{}: got {v}", case.name)
        });
    }
    c.finish()
}

fn classifier_bridge(seqs: &[EigenSequence]) -> PropertyResult {
    let mut c = Check::new("classifier.normalized_bridge");
    let map = |x: Condition| match x {
        Condition::N1 => Condition::A2,
        Condition::N2 => Condition::A3,
        Condition::N3 => Condition::A4,
        other => other,
    };
    let st = [0.5, 1.0, 1.5, 3.0];
    for seq in seqs.iter().chain(&loglog_corpus()) {
        let beta = rescale_to_normalized(seq).unwrap();
        for s in st {
            for t in st {
                let nor = classify_wt(seq, s, t, ErrorCriterion::Nor);
                let abs = classify_wt(&beta, s, t, ErrorCriterion::Abs);
                c.case(
                    nor.outcome == abs.outcome && nor.condition.map(map) == abs.condition,
                    || format!("{seq} s={s} t={t}: {nor} vs {abs}"),
                );
            }
        }
    }
    c.finish()
}

fn classifier_scale_invariance() -> PropertyResult {
    let mut c = Check::new("classifier.scale_invariance");
    let st = [0.5, 1.0, 1.5, 3.0];
    for p in [0.5, 1.0, 2.0, 3.0, 5.0] {
        for (b1, b2) in [(1.0, 0.2), (0.9, 0.01)] {
            let x = EigenSequence::loglog(1.0, p, b1).unwrap();
            let y = EigenSequence::loglog(1.0, p, b2).unwrap();
            for s in st {
                for t in st {
                    for crit in [ErrorCriterion::Abs, ErrorCriterion::Nor] {
                        let (vx, vy) = (classify_wt(&x, s, t, crit), classify_wt(&y, s, t, crit));
                        c.case(vx == vy, || format!("p={p} B={b1}/{b2} s={s} t={t}: {vx} vs {vy}"));
                    }
                }
            }
        }
    }
    c.finish()
}

fn classifier_eta_range() -> PropertyResult {
    let mut c = Check::new("classifier.eta_range");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    for _ in 0..1000 {
        let s = rng.gen_range(0.001f64..0.999);
        let t = rng.gen_range(1.001f64..100.0);
        let e = eta(s, t).unwrap();
        c.case(e > 0.0 && e < s, || format!("s={s} t={t}: eta={e}"));
    }
    c.finish()
}

fn lemma_power_sums() -> PropertyResult {
    let mut c = Check::new("bounds.power_sum_randomized");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=50);
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=100.0)).collect();
        let s = rng.gen_range(0.1..=5.0);
        let b = power_sum_bounds(&a, s).unwrap();
        let sum: f64 = a.iter().map(|x| x.powf(s)).sum();
        let slack = 1e-9 * sum.max(b.upper);
        c.case(b.lower <= sum + slack && sum <= b.upper + slack, || {
            format!("n={n} s={s}: {} <= {sum} <= {}", b.lower, b.upper)
        });
    }
    c.finish()
}

fn lemma_binomials() -> PropertyResult {
    let mut c = Check::new("bounds.binomial_exhaustive");
    for n in 2..=60u64 {
        for k in 1..n {
            let exact = binomial(n, k).unwrap() as f64;
            let slack = 1e-12 * exact;
            for kk in [k, n - k] {
                let b = binomial_bounds(n, kk).unwrap();
                c.case(b.lower <= exact + slack && exact <= b.upper + slack, || {
                    format!("n={n} k={kk}: {} <= {exact} <= {}", b.lower, b.upper)
                });
            }
        }
    }
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_valid() {
        let a = corpus(Suite::Small);
        assert_eq!(a, corpus(Suite::Small));
        for v in &a {
            assert!(v.len() >= 2 && v.len() <= 10);
            assert!(EigenSequence::explicit(v).is_ok());
        }
        assert!(corpus(Suite::Full).iter().any(|v| v.len() == 20));
    }

    #[test]
    fn off_by_one_counter_is_caught() {
        let mutant = |seq: &EigenSequence, d: usize, eps: f64, crit: ErrorCriterion| {
            info_complexity(seq, d, eps, crit, DEFAULT_CAP).n + 1
        };
        let r = check_complexity_oracle(Suite::Small, &mutant);
        assert!(!r.passed());
        assert!(r.to_string().starts_with("FAIL complexity.oracle_equivalence"));

        // off-by-one in the threshold comparison (≤ instead of <)
        let lenient = |seq: &EigenSequence, d: usize, eps: f64, crit: ErrorCriterion| {
            let t = log_inv_threshold(seq, d, eps, crit);
            count_below(seq, d, t.next_up(), DEFAULT_CAP).n
        };
        assert!(!check_complexity_oracle(Suite::Small, &lenient).passed());
    }

    #[test]
    fn small_suite_passes() {
        for r in run_suite(Suite::Small) {
            assert!(r.passed(), "{r}");
            assert!(r.cases > 0, "{r}");
        }
    }
}
