//! Command-line front end: reads quantified interval matrix files, runs a
//! task and writes a text or JSON report.
//!
//! Exit codes: 0 for a conclusive answer, 2 when the answer is unknown or a
//! budget was exceeded, 1 for usage and parse errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use aereg::classes::{ae_h_matrix, ae_inverse_nonnegative_sufficient, ae_m_matrix, strong_inverse_nonnegative, weak_h_matrix, weak_m_matrix, InverseSearch};
use aereg::engine::{check_ae_regular, classical_regular, Certificate, EngineConfig, FalsifierConfig, Regularity, Status};
use aereg::rank::explore_conjecture2;
use aereg::report::{ExplorationReport, ExplorerConfig};
use aereg::singular::{explore_conjecture1, is_strongly_singular, radius_filter, StrongSingularity};
use aereg::{Error, QIMatrix, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub mod parse;
pub mod report;

use parse::parse_matrix_file;
use report::{matrix_json, matrix_text, rational_json, recognition_json, vector_text, Meta, Report};

pub const EXIT_CONCLUSIVE: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "aereg", version, about = "AE regularity of quantified interval matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide AE regularity (∀ entries adversarial, ∃ entries chosen afterwards)
    CheckAe(MatrixArgs),
    /// Decide whether every member of the interval matrix is singular
    StrongSingular(MatrixArgs),
    /// Run the M-matrix, H-matrix and inverse-nonnegativity recognizers
    Classify(MatrixArgs),
    /// Decide classical regularity (every member nonsingular)
    Regularity(MatrixArgs),
    /// Run a conjecture explorer on random instances
    ExploreConjecture(ExploreArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    /// Vertex enumeration budget: at most 2^BITS vertices per exact check
    #[arg(long, default_value_t = aereg::singular::DEFAULT_BUDGET_BITS)]
    budget: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit wall time and version from the report
    #[arg(long)]
    no_meta: bool,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Falsifier restarts
    #[arg(long, default_value_t = 32)]
    starts: usize,
    /// Coordinate-descent sweeps per start
    #[arg(long, default_value_t = 500)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance for passing a float candidate to exact verification
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

impl SearchArgs {
    fn falsifier(&self) -> FalsifierConfig {
        FalsifierConfig {
            starts: self.starts,
            iterations: self.iters,
            seed: self.seed,
            residual_tol: self.tol,
            ..FalsifierConfig::default()
        }
    }
}

#[derive(Args, Debug)]
struct MatrixArgs {
    /// Matrix file (`qim m n` header, then one row per line)
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args, Debug)]
struct ExploreArgs {
    /// Which conjecture: 1 (strong singularity) or 2 (block AE regularity)
    #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
    conjecture: u8,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 4)]
    max_n: usize,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    search: SearchArgs,
}

/// Runs the CLI with stdout/stderr and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Like [`run`], writing the report to `out` (unless `--out` is given) and
/// diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_CONCLUSIVE };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let started = Instant::now();
    let (common, result) = match &cli.command {
        Command::ExploreConjecture(a) => (&a.common, Ok(explore(a))),
        Command::CheckAe(a) => (&a.common, load(a).map(|q| check_ae(&q, a))),
        Command::StrongSingular(a) => (&a.common, load(a).map(|q| strong_singular(&q, a))),
        Command::Classify(a) => (&a.common, load(a).map(|q| classify(&q, a))),
        Command::Regularity(a) => (&a.common, load(a).map(|q| regularity(&q, a))),
    };
    let (output, code) = match result {
        Ok(Output::Single(mut report, code)) => {
            if !common.no_meta {
                report.meta = Some(Meta {
                    wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
                    version: env!("CARGO_PKG_VERSION").into(),
                });
            }
            let text = match common.format {
                Format::Text => report.to_text(),
                Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
            };
            (text, code)
        }
        Ok(Output::Exploration(report)) => (exploration_output(&report, common.format), EXIT_CONCLUSIVE),
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            return EXIT_USAGE;
        }
    };
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, output) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => {
            let _ = out.write_all(output.as_bytes());
        }
    }
    code
}

enum Output {
    Single(Report, i32),
    Exploration(ExplorationReport),
}

fn load(args: &MatrixArgs) -> Result<QIMatrix<Rational>, String> {
    let text = std::fs::read_to_string(&args.input).map_err(|e| format!("cannot read {}: {e}", args.input.display()))?;
    parse_matrix_file(&text).map_err(|e| format!("{}: {e}", args.input.display()))
}

fn error_report(task: &str, e: &Error) -> Output {
    let mut r = Report::new(task, "ERROR");
    r.summary.push(e.to_string());
    let code = if matches!(e, Error::BudgetExceeded { .. }) { EXIT_INCONCLUSIVE } else { EXIT_USAGE };
    Output::Single(r, code)
}

fn check_ae(q: &QIMatrix<Rational>, args: &MatrixArgs) -> Output {
    let config = EngineConfig { budget_bits: args.common.budget, falsifier: args.search.falsifier() };
    let v = match check_ae_regular(q, &config) {
        Ok(v) => v,
        Err(e) => return error_report("check-ae", &e),
    };
    let mut r = Report::new("check-ae", v.status.to_string());
    r.method = Some(v.method.tag().into());
    r.certificate = match &v.certificate {
        Certificate::ForallWitness(w) => {
            r.summary.push(format!("forall witness: {}", matrix_text(w)));
            json!({ "forall_witness": matrix_json(w) })
        }
        Certificate::NonsingularMember(m) => {
            r.summary.push(format!("nonsingular member: {}", matrix_text(m)));
            json!({ "nonsingular_member": matrix_json(m) })
        }
        Certificate::SignStableVertices { min_abs_determinant } => {
            r.summary.push(format!("all A_yz determinants share one sign, smallest |det| = {min_abs_determinant}"));
            json!({ "min_abs_determinant": rational_json(min_abs_determinant) })
        }
        Certificate::Class(rec) => {
            r.summary.push(format!("tested matrix: {}", matrix_text(&rec.tested)));
            if let Some(e) = &rec.exists_choice {
                r.summary.push(format!("exists choice: {}", matrix_text(e)));
            }
            recognition_json(rec)
        }
        Certificate::Structured(trace) => json!({ "trace": trace }),
        Certificate::None => serde_json::Value::Null,
    };
    r.summary.extend(v.diagnostics.steps.iter().map(|s| format!("step: {s}")));
    r.diagnostics = serde_json::to_value(&v.diagnostics).expect("serializable");
    let code = if v.status == Status::Unknown { EXIT_INCONCLUSIVE } else { EXIT_CONCLUSIVE };
    Output::Single(r, code)
}

fn strong_singular(q: &QIMatrix<Rational>, args: &MatrixArgs) -> Output {
    let m = q.base();
    let ss = match is_strongly_singular(m, args.common.budget) {
        Ok(s) => s,
        Err(e) => return error_report("strong-singular", &e),
    };
    let filter = radius_filter(m).ok().map(|f| format!("{f:?}"));
    let (mut r, code) = match ss {
        StrongSingularity::Yes => {
            let mut r = Report::new("strong-singular", "YES");
            r.summary.push(format!("all {} vertex matrices are singular", 1u64 << m.vertex_bit_count()));
            (r, EXIT_CONCLUSIVE)
        }
        StrongSingularity::No { vertex, member, determinant } => {
            let mut r = Report::new("strong-singular", "NO");
            r.summary.push(format!("witness vertex: {vertex}"));
            r.summary.push(format!("member: {}", matrix_text(&member)));
            r.summary.push(format!("determinant: {determinant}"));
            r.certificate = json!({
                "vertex": vertex.to_string(),
                "member": matrix_json(&member),
                "determinant": rational_json(&determinant),
            });
            (r, EXIT_CONCLUSIVE)
        }
        StrongSingularity::BudgetExceeded { needed, budget } => {
            let mut r = Report::new("strong-singular", "BUDGET_EXCEEDED");
            r.summary.push(format!("2^{needed} vertices needed, budget is 2^{budget}"));
            (r, EXIT_INCONCLUSIVE)
        }
    };
    r.diagnostics = json!({ "budget_bits": args.common.budget, "radius_filter": filter });
    Output::Single(r, code)
}

fn regularity(q: &QIMatrix<Rational>, args: &MatrixArgs) -> Output {
    let reg = match classical_regular(q.base(), args.common.budget) {
        Ok(r) => r,
        Err(e) => return error_report("regularity", &e),
    };
    let (mut r, code) = match reg {
        Regularity::Regular { min_abs_determinant } => {
            let mut r = Report::new("regularity", "REGULAR");
            r.summary.push(format!("all A_yz determinants share one sign, smallest |det| = {min_abs_determinant}"));
            r.certificate = json!({ "min_abs_determinant": rational_json(&min_abs_determinant) });
            (r, EXIT_CONCLUSIVE)
        }
        Regularity::Singular { member } => {
            let mut r = Report::new("regularity", "NOT_REGULAR");
            r.summary.push(format!("singular member: {}", matrix_text(&member)));
            r.certificate = json!({ "singular_member": matrix_json(&member) });
            (r, EXIT_CONCLUSIVE)
        }
        Regularity::BudgetExceeded { needed, budget } => {
            let mut r = Report::new("regularity", "BUDGET_EXCEEDED");
            r.summary.push(format!("2^{needed} sign pairs needed, budget is 2^{budget}"));
            (r, EXIT_INCONCLUSIVE)
        }
    };
    r.diagnostics = json!({ "budget_bits": args.common.budget });
    Output::Single(r, code)
}

fn classify(q: &QIMatrix<Rational>, args: &MatrixArgs) -> Output {
    let m = q.base();
    let run = || -> aereg::Result<(Report, i32)> {
        let wm = weak_m_matrix(m)?;
        let wh = weak_h_matrix(m)?;
        let inv = strong_inverse_nonnegative(m)?;
        let am = ae_m_matrix(q)?;
        let ah = ae_h_matrix(q)?;
        let search = ae_inverse_nonnegative_sufficient(q, InverseSearch::default(), args.common.budget);
        let mut r = Report::new("classify", "CLASSIFIED");
        let mut code = EXIT_CONCLUSIVE;
        r.summary.push(format!("M-matrix (some member): {}", wm.holds));
        r.summary.push(format!("H-matrix (some member): {}", wh.holds));
        r.summary.push(format!("inverse-nonnegative (every member): {inv}"));
        r.summary.push(format!("AE M-matrix: {}", am.holds));
        r.summary.push(format!("AE H-matrix: {}", ah.holds));
        let search_json = match &search {
            Ok(Some(choice)) => {
                r.summary.push(format!("AE inverse-nonnegative (sufficient search): true, exists choice {}", matrix_text(choice)));
                json!({ "holds": true, "exists_choice": matrix_json(choice) })
            }
            Ok(None) => {
                r.summary.push("AE inverse-nonnegative (sufficient search): not established".into());
                json!({ "holds": serde_json::Value::Null })
            }
            Err(e) => {
                code = EXIT_INCONCLUSIVE;
                r.summary.push(format!("AE inverse-nonnegative (sufficient search): {e}"));
                json!({ "error": e.to_string() })
            }
        };
        if let Some(x) = &wm.positive_vector {
            r.summary.push(format!("M-matrix certificate x: {}", vector_text(x)));
        }
        r.certificate = json!({
            "weak_m_matrix": recognition_json(&wm),
            "weak_h_matrix": recognition_json(&wh),
            "strong_inverse_nonnegative": inv,
            "ae_m_matrix": recognition_json(&am),
            "ae_h_matrix": recognition_json(&ah),
            "ae_inverse_nonnegative_sufficient": search_json,
        });
        r.diagnostics = json!({ "budget_bits": args.common.budget });
        Ok((r, code))
    };
    match run() {
        Ok((r, code)) => Output::Single(r, code),
        Err(e) => error_report("classify", &e),
    }
}

fn explore(args: &ExploreArgs) -> Output {
    let config = ExplorerConfig {
        trials: args.trials,
        max_n: args.max_n,
        seed: args.search.seed,
        budget_bits: args.common.budget,
    };
    Output::Exploration(match args.conjecture {
        1 => explore_conjecture1::<Rational>(&config),
        _ => explore_conjecture2::<Rational>(&config, &args.search.falsifier()),
    })
}

/// JSON: one record per line followed by a summary line. Text: the summary
/// and any counterexamples.
fn exploration_output(report: &ExplorationReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut out = String::new();
            for rec in &report.records {
                out += &serde_json::to_string(rec).expect("serializable");
                out.push('\n');
            }
            out += &serde_json::to_string(&json!({
                "conjecture": report.conjecture,
                "seed": report.seed,
                "summary": report.summary,
            }))
            .expect("serializable");
            out.push('\n');
            out
        }
        Format::Text => {
            let s = &report.summary;
            let mut out = format!(
                "conjecture {} (seed {}): {} trials, {} agree, {} unrefuted, {} counterexamples, {} inconclusive\n",
                report.conjecture, report.seed, s.trials, s.agree, s.unrefuted, s.counterexamples, s.inconclusive
            );
            for rec in report.counterexamples() {
                out += &format!(
                    "counterexample: trial {} hash {} certificate {}\n{}",
                    rec.trial,
                    rec.instance_hash,
                    rec.certificate.as_deref().unwrap_or("-"),
                    rec.instance
                );
            }
            out
        }
    }
}
