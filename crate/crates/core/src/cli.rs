//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage or parse error,
//! 3 complexity cap hit under `--strict`, 4 I/O error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::classifier::{classify_notion, wt_ratio_from_count, NotionQuery, ZMode};
use crate::complexity::{info_complexity, ErrorCriterion, DEFAULT_CAP};
use crate::criterion::{sigma_ewt, WtParams, DEFAULT_MAX_TERMS, DEFAULT_TOL};
use crate::eigenmodel::EigenSequence;
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP_STRICT: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Worker count override for parallel sweeps; `0` means automatic.
pub const THREADS_ENV: &str = "TRACTKIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "tractkit", version, about = "Information complexity and EXP-(s,t)-weak tractability of tensor product problems")]
pub struct Cli {
    /// Eigenvalue model: `list:v1,v2,...` or `loglog:A=<f>,p=<f>[,B=<f>]`.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Error criterion: abs or nor.
    #[arg(long, global = true)]
    pub criterion: Option<ErrorCriterion>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Information complexity n(eps, S_d).
    Complexity(ComplexityArgs),
    /// Partial sum and bounds of the EXP-WT criterion sum.
    Sigma(SigmaArgs),
    /// Decide EXP-(s,t)-WT, or one of SPT/PT/QPT/UWT.
    Classify(ClassifyArgs),
    /// Grid of complexities and WT ratios written as CSV.
    Sweep(SweepArgs),
    /// Run the self-verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    /// Exit with code 3 when the cap is hit.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct SigmaArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub c: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
    pub max_terms: u64,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// spt, pt, qpt, uwt or wt (default wt).
    #[arg(long, default_value = "wt")]
    pub notion: String,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Ascending dimensions, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub d_list: Vec<usize>,
    /// Descending accuracies, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps_list: Vec<f64>,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value = "exp")]
    pub z_mode: ZMode,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "small")]
    pub suite: Suite,
}

/// A failed command: exit code plus the message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(usage(format!("{name}: must be positive, got {v}")))
    }
}

fn dimension(d: usize) -> Result<usize, Failure> {
    if d >= 1 {
        Ok(d)
    } else {
        Err(usage("d: must be at least 1"))
    }
}

impl Cli {
    fn model(&self) -> Result<EigenSequence, Failure> {
        let spec = self.model.as_deref().ok_or_else(|| usage("model: --model is required"))?;
        spec.parse().map_err(|e| usage(format!("model: {e}")))
    }

    fn required_criterion(&self) -> Result<ErrorCriterion, Failure> {
        self.criterion
            .ok_or_else(|| usage("criterion: --criterion is required (abs or nor)"))
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_IO;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    match &cli.command {
        Command::Complexity(a) => cmd_complexity(cli, a),
        Command::Sigma(a) => cmd_sigma(cli, a),
        Command::Classify(a) => cmd_classify(cli, a),
        Command::Sweep(a) => cmd_sweep(cli, a),
        Command::Verify(a) => Ok(cmd_verify(a)),
    }
}

fn cmd_complexity(cli: &Cli, a: &ComplexityArgs) -> Result<(String, i32), Failure> {
    let seq = cli.model()?;
    let crit = cli.required_criterion()?;
    let d = dimension(a.d)?;
    let eps = positive("eps", a.eps)?;
    if a.cap == 0 {
        return Err(usage("cap: must be at least 1"));
    }
    let r = info_complexity(&seq, d, eps, crit, a.cap);
    let code = if r.capped && a.strict {
        EXIT_CAP_STRICT
    } else {
        EXIT_OK
    };
    Ok((format!("n={} capped={}\n", r.n, r.capped), code))
}

fn cmd_sigma(cli: &Cli, a: &SigmaArgs) -> Result<(String, i32), Failure> {
    let seq = cli.model()?;
    let crit = cli.required_criterion()?;
    let d = dimension(a.d)?;
    let p = WtParams::new(a.s, a.t, a.c, crit).map_err(|e| usage(e.to_string()))?;
    positive("tol", a.tol)?;
    if a.max_terms == 0 {
        return Err(usage("max-terms: must be at least 1"));
    }
    let est = sigma_ewt(&seq, d, &p, a.tol, a.max_terms).map_err(|e| usage(e.to_string()))?;
    let upper = est
        .upper
        .map_or_else(|| "none".to_string(), |u| format!("{u:.16e}"));
    Ok((
        format!(
            "lower={:.16e} upper={upper} terms={} converged={}\n",
            est.lower, est.terms_used, est.converged
        ),
        EXIT_OK,
    ))
}

fn cmd_classify(cli: &Cli, a: &ClassifyArgs) -> Result<(String, i32), Failure> {
    let seq = cli.model()?;
    let query = match a.notion.to_ascii_lowercase().as_str() {
        "spt" => NotionQuery::Spt,
        "pt" => NotionQuery::Pt,
        "qpt" => NotionQuery::Qpt,
        "uwt" => NotionQuery::Uwt,
        "wt" => {
            let s = positive("s", a.s.ok_or_else(|| usage("s: --s is required for wt"))?)?;
            let t = positive("t", a.t.ok_or_else(|| usage("t: --t is required for wt"))?)?;
            let crit = cli.criterion.unwrap_or(ErrorCriterion::Abs);
            NotionQuery::Wt { s, t, crit }
        }
        other => return Err(usage(format!("notion: unknown notion '{other}'"))),
    };
    Ok((format!("{}\n", classify_notion(&seq, query)), EXIT_OK))
}

fn worker_pool() -> Result<rayon::ThreadPool, Failure> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("{THREADS_ENV}: expected a nonnegative integer, got '{v}'")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| usage(format!("{THREADS_ENV}: {e}")))
}

/// CSV body for a sweep, rows in (d, eps) row-major order.
pub fn sweep_csv(
    seq: &EigenSequence,
    d_list: &[usize],
    eps_list: &[f64],
    s: f64,
    t: f64,
    crit: ErrorCriterion,
    z_mode: ZMode,
    cap: u64,
) -> String {
    let cells: Vec<(usize, f64)> = d_list
        .iter()
        .flat_map(|&d| eps_list.iter().map(move |&e| (d, e)))
        .collect();
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(d, eps)| info_complexity(seq, d, eps, crit, cap))
        .collect();

    let mut csv = String::from("d,eps,criterion,z_mode,n,capped,wt_ratio\n");
    for (&(d, eps), r) in cells.iter().zip(&results) {
        let ratio = if r.capped {
            String::new()
        } else {
            wt_ratio_from_count(r.n, d, eps, s, t, z_mode).to_string()
        };
        let _ = writeln!(
            csv,
            "{d},{eps},{crit},{z_mode},{},{},{ratio}",
            r.n, r.capped
        );
    }
    csv
}

fn cmd_sweep(cli: &Cli, a: &SweepArgs) -> Result<(String, i32), Failure> {
    let seq = cli.model()?;
    let crit = cli.required_criterion()?;
    if a.d_list.is_empty() || a.eps_list.is_empty() {
        return Err(usage("d-list/eps-list: must be nonempty"));
    }
    for &d in &a.d_list {
        dimension(d)?;
    }
    if a.d_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage("d-list: must be strictly ascending"));
    }
    for &e in &a.eps_list {
        positive("eps-list", e)?;
    }
    if a.eps_list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(usage("eps-list: must be strictly descending"));
    }
    let s = positive("s", a.s)?;
    let t = positive("t", a.t)?;
    if a.cap == 0 {
        return Err(usage("cap: must be at least 1"));
    }

    let pool = worker_pool()?;
    let csv = pool.install(|| sweep_csv(&seq, &a.d_list, &a.eps_list, s, t, crit, a.z_mode, a.cap));
    std::fs::write(&a.out, csv.as_bytes()).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("out: cannot write {}: {e}", a.out.display()),
    })?;
    let rows = a.d_list.len() * a.eps_list.len();
    Ok((format!("rows={rows} out={}\n", a.out.display()), EXIT_OK))
}

fn cmd_verify(a: &VerifyArgs) -> (String, i32) {
    let results = run_suite(a.suite);
    let mut text = String::new();
    for r in &results {
        let _ = writeln!(text, "{r}");
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    let _ = writeln!(text, "verify: {passed}/{} properties passed", results.len());
    let code = if passed == results.len() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    };
    (text, code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["tractkit"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn complexity_command() {
        let (code, out, _) = run_str(&[
            "complexity", "--model", "list:1.0,0.5", "--d", "2", "--eps", "0.6", "--criterion", "abs",
        ]);
        assert_eq!((code, out.as_str()), (0, "n=3 capped=false\n"));
        let (_, out, _) = run_str(&[
            "complexity", "--model", "list:1.0,0.5", "--d", "2", "--eps", "1.1", "--criterion", "abs",
        ]);
        assert_eq!(out, "n=0 capped=false\n");
        let (code, _, err) = run_str(&[
            "complexity", "--model", "list:0.5,1.0", "--d", "2", "--eps", "0.6", "--criterion", "abs",
        ]);
        assert_eq!(code, 2);
        assert!(err.starts_with("model: NotSorted"), "{err}");
        let (code, _, err) = run_str(&["complexity", "--model", "list:1.0", "--d", "2", "--eps", "0.6"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("criterion"), "{err}");
        let (code, _, _) = run_str(&["complexity", "--model", "list:1.0", "--d", "x", "--eps", "0.6"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn strict_cap() {
        let args = [
            "complexity", "--model", "loglog:A=1,p=1", "--d", "3", "--eps", "0.001", "--criterion",
            "abs", "--cap", "10",
        ];
        let (code, out, _) = run_str(&args);
        assert_eq!((code, out.as_str()), (0, "n=10 capped=true\n"));
        let mut strict = args.to_vec();
        strict.push("--strict");
        assert_eq!(run_str(&strict).0, 3);
    }

    #[test]
    fn sigma_command() {
        let (code, out, _) = run_str(&[
            "sigma", "--model", "list:1.0", "--d", "3", "--s", "2", "--t", "2", "--c", "1", "--criterion", "abs",
        ]);
        assert_eq!(code, 0);
        let lower: f64 = out
            .split_whitespace()
            .find_map(|f| f.strip_prefix("lower="))
            .unwrap()
            .parse()
            .unwrap();
        let want = (-(9.0 + crate::criterion::LOG_2E.powi(2))).exp();
        assert!((lower - want).abs() <= 1e-12 * want);
        assert!(out.contains("converged=true"));
        assert!(!out.contains("upper=none"));
        let (code, _, err) = run_str(&[
            "sigma", "--model", "list:1.0", "--d", "3", "--s", "2", "--t", "2", "--c", "0", "--criterion", "abs",
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("c must be positive"), "{err}");
    }

    #[test]
    fn classify_command() {
        let (_, out, _) = run_str(&[
            "classify", "--model", "loglog:A=1,p=2", "--s", "2", "--t", "2", "--criterion", "abs",
        ]);
        assert!(out.starts_with("verdict=holds condition=A2"), "{out}");
        let (_, out, _) = run_str(&["classify", "--notion", "qpt", "--model", "list:1.0,0.5"]);
        assert_eq!(out, "verdict=fails condition=- reason=theorem-negative\n");
        let (_, out, _) = run_str(&["classify", "--model", "list:1.0", "--notion", "spt"]);
        assert_eq!(out, "verdict=holds condition=- reason=trivial\n");
        let (code, _, _) = run_str(&["classify", "--model", "list:1.0,0.5", "--notion", "wt"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn sweep_csv_rows() {
        let seq: EigenSequence = "list:1.0,0.5".parse().unwrap();
        let csv = sweep_csv(&seq, &[1, 2], &[0.6, 0.3], 2.0, 2.0, ErrorCriterion::Abs, ZMode::Exp, 1000);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "d,eps,criterion,z_mode,n,capped,wt_ratio");
        assert_eq!(lines.len(), 5);
        let row = lines[3];
        assert!(row.starts_with("2,0.6,abs,exp,3,false,"), "{row}");
        let ratio: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        let want = 3f64.ln() / (4.0 + (1.0 + (1.0f64 / 0.6).ln()).powi(2));
        assert!((ratio - want).abs() < 1e-15);

        let capped = sweep_csv(&seq, &[3], &[0.01], 2.0, 2.0, ErrorCriterion::Abs, ZMode::Exp, 2);
        assert_eq!(capped.lines().nth(1).unwrap(), "3,0.01,abs,exp,2,true,");
    }
}
