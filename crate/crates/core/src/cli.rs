//! The `schublci` command line: argument parsing, dispatch, and rendering
//! of command results as JSON or plain text.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{classify, classify_flags, is_slab};
use crate::cohomology::cohomology_presentation;
use crate::diagram::{Diagram, InclusionLevel};
use crate::error::{Error, Result};
use crate::ideal::{kl_ideal_generators, minimal_generators, restricted_generators, GeneratorSet};
use crate::localclass::{local_class_product, FolkloreOracle};
use crate::pattern::{
    contains_classical, contains_marked_mesh, embeddings_classical, interval_embeds,
    marked_mesh_embeddings, IntervalPattern, MarkedMeshPattern,
};
use crate::perm::{enumerate, Permutation};
use crate::schubert::Theory;
use crate::suites::{run_suite, Suite, SuiteOptions};

#[derive(Debug, Parser)]
#[command(
    name = "schublci",
    version,
    about = "Singularity classification of Schubert varieties"
)]
pub struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "ascii")]
    pub json: bool,
    /// Emit plain text instead of JSON.
    #[arg(long, global = true)]
    pub ascii: bool,
    /// Worker threads for suites and counts.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Seed for sampled suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a permutation: smooth, factorial, dbi, lci, matrix Schubert lci.
    Classify { perm: String },
    /// Diagram, ideal, local class or cohomology data for a permutation.
    Report(ReportArgs),
    /// Test a pattern (classical, marked mesh JSON, or interval JSON) against a host.
    Match(MatchArgs),
    /// Count permutations with each property, per size.
    Count {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Diagram,
    Ideal,
    Localclass,
    Cohomology,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoryArg {
    Cohomology,
    K,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub perm: String,
    pub what: ReportKind,
    /// Ideal: use I_{v,w} in the coordinates of the cell of `v`.
    #[arg(long)]
    pub v: Option<String>,
    /// Ideal: the minimal generating set (w must be lci).
    #[arg(long, conflicts_with_all = ["v", "restricted"])]
    pub minimal: bool,
    /// Ideal: the restricted per-box generating families.
    #[arg(long, conflicts_with = "v")]
    pub restricted: bool,
    /// Local class: compare with the specialized Schubert/Grothendieck polynomial.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, value_enum, default_value_t = TheoryArg::Cohomology)]
    pub theory: TheoryArg,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    /// A permutation, a marked mesh pattern `{"perm":[..],"constraints":[..]}`,
    /// or an interval `{"u":..,"v":..}`.
    pub pattern: String,
    pub host: String,
    /// List every occurrence (classical and mesh patterns).
    #[arg(long)]
    pub all: bool,
}

/// Largest size for the Schubert-polynomial oracle, per theory.
const ORACLE_MAX_N: [usize; 2] = [6, 5];
/// Largest size for `count`.
const COUNT_MAX_N: usize = 9;

#[derive(Debug, Serialize)]
pub struct CommandResult {
    pub status: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub elapsed_ms: u64,
}

/// Text for stdout and the process exit code.
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Payload plus whether a verification it reports failed.
struct Done {
    payload: Value,
    text: String,
    failed: bool,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let start = Instant::now();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    stdout: e.to_string(),
                    exit_code: EXIT_OK,
                };
            }
            let result = CommandResult {
                status: "error",
                command: "usage",
                payload: None,
                code: Some("E_USAGE"),
                message: Some(e.render().to_string().trim_end().to_string()),
                elapsed_ms: 0,
            };
            return Outcome {
                stdout: to_line(&result),
                exit_code: EXIT_USAGE,
            };
        }
    };
    let name = command_name(&cli.command);
    let outcome = dispatch(&cli);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    match outcome {
        Ok(done) => {
            let exit_code = if done.failed { EXIT_FAILED } else { EXIT_OK };
            let stdout = if cli.ascii {
                done.text
            } else {
                to_line(&CommandResult {
                    status: "ok",
                    command: name,
                    payload: Some(done.payload),
                    code: None,
                    message: None,
                    elapsed_ms,
                })
            };
            Outcome { stdout, exit_code }
        }
        Err(e) => {
            let exit_code = if matches!(e, Error::Budget(_)) {
                EXIT_BUDGET
            } else {
                EXIT_USAGE
            };
            let stdout = if cli.ascii {
                format!("error {}: {e}\n", e.code())
            } else {
                to_line(&CommandResult {
                    status: "error",
                    command: name,
                    payload: None,
                    code: Some(e.code()),
                    message: Some(e.to_string()),
                    elapsed_ms,
                })
            };
            Outcome { stdout, exit_code }
        }
    }
}

fn to_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable result");
    s.push('\n');
    s
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify { .. } => "classify",
        Command::Report(_) => "report",
        Command::Match(_) => "match",
        Command::Count { .. } => "count",
        Command::Verify { .. } => "verify",
    }
}

fn dispatch(cli: &Cli) -> Result<Done> {
    match &cli.command {
        Command::Classify { perm } => cmd_classify(&perm.parse()?),
        Command::Report(args) => cmd_report(args),
        Command::Match(args) => cmd_match(args),
        Command::Count { max_n } => cmd_count(*max_n, cli.jobs),
        Command::Verify { suite, max_n } => {
            let suite: Suite = suite.parse()?;
            cmd_verify(
                suite,
                SuiteOptions {
                    max_n: *max_n,
                    jobs: cli.jobs,
                    seed: cli.seed,
                },
            )
        }
    }
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable payload")
}

fn ok(payload: Value, text: String) -> Result<Done> {
    Ok(Done {
        payload,
        text,
        failed: false,
    })
}

fn cmd_classify(w: &Permutation) -> Result<Done> {
    let report = classify(w);
    let mut text = format!("perm {}\n", report.perm);
    for (name, flag) in [
        ("smooth", report.smooth),
        ("factorial", report.factorial),
        ("dbi", report.dbi),
        ("lci", report.lci),
        ("matrix_schubert_lci", report.matrix_schubert_lci),
    ] {
        let _ = writeln!(text, "{name:<20} {flag}");
    }
    if let Some(c) = &report.certificates.lci {
        let _ = writeln!(
            text,
            "lci pattern          {} at {:?}",
            c.pattern, c.positions
        );
    }
    if let Some(wit) = &report.nonlci_witness {
        let _ = writeln!(
            text,
            "witness              {} [{}, {}] at {:?}",
            wit.source, wit.interval.u, wit.interval.v, wit.embedding.indices
        );
    }
    ok(value(&report), text)
}

fn cmd_report(args: &ReportArgs) -> Result<Done> {
    let w: Permutation = args.perm.parse()?;
    match args.what {
        ReportKind::Diagram => report_diagram(&w),
        ReportKind::Ideal => {
            let gens = if args.minimal {
                minimal_generators(&w)?
            } else if args.restricted {
                restricted_generators(&w)?
            } else {
                let v = match &args.v {
                    Some(v) => v.parse()?,
                    None => Permutation::identity(w.n()),
                };
                kl_ideal_generators(&v, &w)?
            };
            report_ideal(&w, &gens)
        }
        ReportKind::Localclass => report_localclass(&w, args.theory, args.oracle),
        ReportKind::Cohomology => {
            let gens = cohomology_presentation(&w)?;
            let mut text = String::new();
            for g in &gens {
                let _ = writeln!(text, "{}    {}", g.poly, value(&g.origin));
            }
            ok(
                json!({ "perm": w, "count": gens.len(), "generators": gens }),
                text,
            )
        }
    }
}

fn report_diagram(w: &Permutation) -> Result<Done> {
    let d = Diagram::new(w);
    let level = d.inclusion_level();
    let essential = d.essential_set();
    let mut payload = json!({
        "n": w.n(),
        "perm": w,
        "diagram": d.cells(),
        "essential": essential,
        "inclusion_level": level,
    });
    if level != InclusionLevel::Neither {
        let v = crate::diagram::associated_dbi(w)?;
        payload["associated_dbi"] = value(&v);
        payload["regions"] = value(&Diagram::new(&v).region_partition()?);
    }
    let mut text = d.ascii();
    for e in &essential {
        let _ = writeln!(
            text,
            "({},{}) rank {} {} {}",
            e.cell.p,
            e.cell.q,
            e.rank,
            e.conditions.names().join(""),
            value(&e.stratum).as_str().unwrap_or_default()
        );
    }
    let _ = writeln!(text, "{}", value(&level).as_str().unwrap_or_default());
    payload["ascii"] = Value::String(d.ascii());
    ok(payload, text)
}

fn report_ideal(w: &Permutation, gens: &GeneratorSet) -> Result<Done> {
    let mut text = String::new();
    for g in &gens.generators {
        let _ = writeln!(text, "d{:?},{:?} = {}", g.spec.rows, g.spec.cols, g.poly);
    }
    let _ = writeln!(text, "{} generators", gens.generators.len());
    ok(
        json!({ "perm": w, "count": gens.generators.len(), "ideal": gens }),
        text,
    )
}

fn report_localclass(w: &Permutation, theory: TheoryArg, oracle: bool) -> Result<Done> {
    let theory = match theory {
        TheoryArg::Cohomology => Theory::Cohomology,
        TheoryArg::K => Theory::K,
    };
    let product = local_class_product(w, theory)?;
    let mut payload = json!({ "perm": w, "product": product });
    let mut text = format!("product {} / {}\n", product.numerator, product.denominator);
    let mut failed = false;
    if oracle {
        let cap = ORACLE_MAX_N[(theory == Theory::K) as usize];
        if w.n() > cap {
            return Err(Error::Budget(format!(
                "oracle supports n ≤ {cap} in this theory"
            )));
        }
        let other = FolkloreOracle::new(w.n(), theory).class(w)?;
        let equal = product.same_class(&other);
        failed = !equal;
        let verdict = if equal { "equal" } else { "different" };
        payload["oracle"] = value(&other);
        payload["verdict"] = json!(verdict);
        let _ = writeln!(
            text,
            "oracle  {} / {}\nverdict {verdict}",
            other.numerator, other.denominator
        );
    }
    Ok(Done {
        payload,
        text,
        failed,
    })
}

enum AnyPattern {
    Classical(Permutation),
    Mesh(MarkedMeshPattern),
    Interval(IntervalPattern),
}

fn parse_pattern(text: &str) -> Result<AnyPattern> {
    let trimmed = text.trim();
    if !trimmed.starts_with('{') {
        return Ok(AnyPattern::Classical(trimmed.parse()?));
    }
    let v: Value = serde_json::from_str(trimmed).map_err(|e| Error::Pattern(e.to_string()))?;
    if v.get("u").is_some() {
        let ip: IntervalPattern =
            serde_json::from_value(v).map_err(|e| Error::Pattern(e.to_string()))?;
        Ok(AnyPattern::Interval(ip))
    } else {
        Ok(AnyPattern::Mesh(MarkedMeshPattern::from_json(trimmed)?))
    }
}

fn cmd_match(args: &MatchArgs) -> Result<Done> {
    let host: Permutation = args.host.parse()?;
    let (kind, first, all) = match parse_pattern(&args.pattern)? {
        AnyPattern::Classical(p) => {
            let all = args.all.then(|| embeddings_classical(&host, &p));
            ("classical", contains_classical(&host, &p), all)
        }
        AnyPattern::Mesh(m) => {
            let all = args.all.then(|| marked_mesh_embeddings(&host, &m));
            ("marked_mesh", contains_marked_mesh(&host, &m), all)
        }
        AnyPattern::Interval(ip) => ("interval", interval_embeds(&host, &ip), None),
    };
    let mut payload = json!({
        "host": host,
        "kind": kind,
        "contains": first.is_some(),
        "positions": first.as_ref().map(|e| e.indices.clone()),
    });
    let mut text = match &first {
        Some(e) => format!("contains at {:?}\n", e.indices),
        None => "avoids\n".to_string(),
    };
    if let Some(all) = all {
        let _ = writeln!(text, "{} occurrences", all.len());
        payload["occurrences"] = value(&all.iter().map(|e| e.indices.clone()).collect::<Vec<_>>());
    }
    ok(payload, text)
}

fn cmd_count(max_n: usize, jobs: usize) -> Result<Done> {
    if max_n > COUNT_MAX_N {
        return Err(Error::Budget(format!(
            "count supports max_n ≤ {COUNT_MAX_N}"
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    const KEYS: [&str; 6] = [
        "smooth",
        "factorial",
        "dbi",
        "lci",
        "matrix_schubert_lci",
        "slab",
    ];
    let mut rows = Vec::new();
    let mut text = format!("{:>2} {:>8}", "n", "total");
    for k in KEYS {
        let _ = write!(text, " {k:>8}");
    }
    text.push('\n');
    for n in 1..=max_n {
        let perms: Vec<Permutation> = enumerate(n).collect();
        let flags: Vec<[bool; 6]> = pool.install(|| {
            perms
                .par_iter()
                .map(|w| {
                    let r = classify_flags(w);
                    [
                        r.smooth,
                        r.factorial,
                        r.dbi,
                        r.lci,
                        r.matrix_schubert_lci,
                        is_slab(w),
                    ]
                })
                .collect()
        });
        let mut counts = [0u64; 6];
        for f in &flags {
            for (c, b) in counts.iter_mut().zip(f) {
                *c += *b as u64;
            }
        }
        let mut row = json!({ "n": n, "total": perms.len() });
        let _ = write!(text, "{n:>2} {:>8}", perms.len());
        for (k, c) in KEYS.iter().zip(counts) {
            row[*k] = json!(c);
            let _ = write!(text, " {c:>8}");
        }
        text.push('\n');
        rows.push(row);
    }
    ok(json!({ "max_n": max_n, "counts": rows }), text)
}

fn cmd_verify(suite: Suite, opts: SuiteOptions) -> Result<Done> {
    let report = run_suite(suite, opts)?;
    let mut text = format!(
        "{} max_n={} total={} failures={}\n",
        report.suite,
        report.max_n,
        report.total,
        report.failures.len()
    );
    for f in &report.failures {
        let _ = writeln!(
            text,
            "  {} {}: {}",
            f.perm.as_deref().unwrap_or("-"),
            f.check,
            f.detail
        );
    }
    let failed = !report.passed();
    Ok(Done {
        payload: value(&report),
        text,
        failed,
    })
}
