//! `actiongraph`: analyze sequences, build and verify action graph families.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use action_graph::admissibility::{compute_z, lemma_prefilter, LemmaCheck};
use action_graph::builders::{build_generic, build_rule, Rule};
use action_graph::condensed::{build_generic_condensed, condense, CondensedGraph};
use action_graph::graph::{ActionGraph, VertexBudget};
use action_graph::sequences::{sequence_prefix, Family, Sequence};
use action_graph::verification::{verify_family, FamilySpec};
use action_graph::{Error, Failure, Verdict, ZResult};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "actiongraph", version, about = "Generalized action graphs from integer sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the root-adjacency counts z_n and report admissibility.
    Analyze {
        /// catalan, fuss:<k>, super:<m> or custom:<v0,v1,...>
        #[arg(long)]
        sequence: String,
        #[arg(long)]
        n: usize,
        /// Emit JSON, to stdout or to the given file.
        #[arg(long, num_args = 0..=1, value_name = "PATH")]
        json: Option<Option<PathBuf>>,
    },
    /// Build G_n and write it as JSON (and optionally DOT).
    Build {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Form::Full)]
        form: Form,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write DOT next to --out (or print DOT instead of JSON).
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Check the axioms for G_0..G_n. Exits 1 if any check fails.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
        #[arg(long, num_args = 0..=1, value_name = "PATH")]
        json: Option<Option<PathBuf>>,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Compare a rule-based family with the generic construction.
    Compare {
        /// catalan, fuss:<k> or super
        #[arg(long)]
        rule: String,
        #[arg(long)]
        n: usize,
        #[arg(long, num_args = 0..=1, value_name = "PATH")]
        json: Option<Option<PathBuf>>,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Convert a stored graph or condensed graph JSON file to DOT.
    Export {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// catalan, fuss:<k> or super
    #[arg(long)]
    rule: Option<String>,
    /// Sequence spec for the generic construction.
    #[arg(long)]
    sequence: Option<String>,
}

impl Source {
    fn spec(&self) -> Result<FamilySpec, CliError> {
        match (&self.rule, &self.sequence) {
            (Some(rule), _) => Ok(FamilySpec::Rule(rule.parse()?)),
            (None, Some(seq)) => Ok(FamilySpec::Sequence(seq.parse()?)),
            (None, None) => unreachable!("clap enforces one source"),
        }
    }
}

#[derive(Args)]
struct BudgetArg {
    /// Maximum number of full-form vertices.
    #[arg(long, default_value_t = VertexBudget::DEFAULT.0)]
    budget: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Full,
    Condensed,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
    /// A check ran and failed; the report has already been written.
    ChecksFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(Error::Json(e))
    }
}

impl CliError {
    /// Stable `(kind, exit code)` pairs.
    fn classify(&self) -> (&'static str, u8) {
        match self {
            CliError::ChecksFailed => ("check_failed", 1),
            CliError::Core(e) => match e {
                Error::UnknownFamily(_) | Error::InvalidParameter(_) => ("unknown_sequence", 3),
                Error::MalformedCustom(_) | Error::CustomTooShort { .. } | Error::EmptySequence => {
                    ("malformed_custom", 4)
                }
                Error::BudgetExceeded { .. } => ("budget_exceeded", 5),
                Error::IntegralityViolation { .. } => ("integrality_violation", 6),
                Error::Inadmissible { .. } => ("inadmissible", 7),
                Error::MalformedGraph(_) | Error::Json(_) => ("malformed_input", 9),
            },
            CliError::Io(..) => ("io", 8),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::ChecksFailed => "one or more checks failed".into(),
            CliError::Core(e) => e.to_string(),
            CliError::Io(path, e) => format!("{}: {e}", path.display()),
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(path.to_owned(), e))
}

/// JSON to the requested file, or to stdout.
fn emit_json(target: &Option<PathBuf>, value: &str) -> Result<(), CliError> {
    match target {
        Some(path) => write_file(path, &format!("{value}\n")),
        None => {
            println!("{value}");
            Ok(())
        }
    }
}

fn analyze(spec: &str, n: usize, json: Option<Option<PathBuf>>) -> Result<(), CliError> {
    let family: Family = spec.parse()?;
    let s = sequence_prefix(&family, n)?;
    let z = compute_z(&s)?;
    let lemmas = lemma_prefilter(&s);
    match json {
        Some(target) => {
            let report = json!({
                "sequence": s,
                "z": z.z.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "admissible_upto": z.admissible_upto,
                "verdict": z.verdict,
                "failure": z.failure,
                "lemma_checks": lemmas,
            });
            emit_json(&target, &serde_json::to_string_pretty(&report)?)
        }
        None => {
            print!("{}", analysis_table(&family, &s, &z, &lemmas));
            Ok(())
        }
    }
}

fn analysis_table(family: &Family, s: &Sequence, z: &ZResult, lemmas: &[LemmaCheck]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "sequence: {family}");
    let _ = writeln!(out, "{:>4}  {:>24}  {:>24}", "n", "s_n", "z_n");
    for (n, sn) in s.values().iter().enumerate() {
        let zn = z.get(n).map_or_else(|| "-".to_owned(), ToString::to_string);
        let _ = writeln!(out, "{n:>4}  {sn:>24}  {zn:>24}");
    }
    let _ = writeln!(out, "z: {}", join(&z.z));
    match (&z.verdict, &z.failure) {
        (Verdict::Admissible, _) => {
            let _ = writeln!(out, "verdict: admissible up to {}", s.last_index());
        }
        (Verdict::Rejected, Some(Failure { index, value, reason })) => {
            let _ = writeln!(
                out,
                "verdict: rejected at index {index} (value {value}, reason {reason:?})"
            );
        }
        (Verdict::Rejected, None) => {
            let _ = writeln!(out, "verdict: rejected");
        }
    }
    for lemma in lemmas {
        let status = if lemma.passed { "pass" } else { "fail" };
        let _ = writeln!(out, "lemma {}: {status} ({})", lemma.name, lemma.detail);
    }
    out
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

enum Built {
    Full(ActionGraph),
    Condensed(CondensedGraph),
}

fn build(
    source: &Source,
    n: usize,
    form: Form,
    out: Option<PathBuf>,
    dot: bool,
    budget: VertexBudget,
) -> Result<(), CliError> {
    let built = match (source.spec()?, form) {
        (FamilySpec::Rule(rule), form) => {
            let g = build_rule(rule, n, budget)?.graphs.pop().expect("G_0 is always built");
            match form {
                Form::Full => Built::Full(g),
                Form::Condensed => Built::Condensed(condense(&g)),
            }
        }
        (FamilySpec::Sequence(family), form) => {
            let z = compute_z(&sequence_prefix(&family, n)?)?;
            match form {
                Form::Full => Built::Full(build_generic(&z, n, budget)?.pop().expect("G_0 is always built")),
                Form::Condensed => Built::Condensed(build_generic_condensed(&z, n)?),
            }
        }
    };
    let (json, dot_text) = match &built {
        Built::Full(g) => (g.to_json()?, g.to_dot()),
        Built::Condensed(c) => (c.to_json()?, c.to_dot()),
    };
    match out {
        Some(path) => {
            write_file(&path, &format!("{json}\n"))?;
            if dot {
                write_file(&path.with_extension("dot"), &dot_text)?;
            }
        }
        None if dot => print!("{dot_text}"),
        None => println!("{json}"),
    }
    Ok(())
}

fn verify(
    source: &Source,
    n: usize,
    json: Option<Option<PathBuf>>,
    budget: VertexBudget,
) -> Result<(), CliError> {
    let report = verify_family(&source.spec()?, n, budget)?;
    match json {
        Some(target) => emit_json(&target, &serde_json::to_string_pretty(&report)?)?,
        None => {
            let mut out = String::new();
            let _ = writeln!(out, "{} up to n = {}", report.subject, report.upto);
            for c in &report.checks {
                let status = if c.passed() { "PASS" } else { "FAIL" };
                let _ = write!(out, "{status}  {:<28} n={:<3} expected {} got {}", c.name, c.index, c.expected, c.actual);
                if let Some(v) = c.vertex {
                    let _ = write!(out, " at vertex {v}");
                }
                out.push('\n');
            }
            let _ = writeln!(out, "overall: {}", if report.overall { "pass" } else { "fail" });
            print!("{out}");
        }
    }
    if report.overall {
        Ok(())
    } else {
        Err(CliError::ChecksFailed)
    }
}

fn compare(rule: &str, n: usize, json: Option<Option<PathBuf>>, budget: VertexBudget) -> Result<(), CliError> {
    let rule: Rule = rule.parse()?;
    let built = build_rule(rule, n, budget)?;
    let z = compute_z(&sequence_prefix(&rule.family(), n)?)?;
    let generic = build_generic(&z, n, budget)?;
    let rows: Vec<_> = built
        .graphs
        .iter()
        .zip(&generic)
        .enumerate()
        .map(|(i, (a, b))| (i, a.vertex_count(), b.vertex_count(), a.is_isomorphic(b, false)))
        .collect();
    let all = rows.iter().all(|r| r.3);
    match json {
        Some(target) => {
            let report = json!({
                "rule": rule.to_string(),
                "n": n,
                "results": rows.iter().map(|&(i, a, b, iso)| json!({
                    "n": i,
                    "rule_vertices": a,
                    "generic_vertices": b,
                    "isomorphic": iso,
                })).collect::<Vec<_>>(),
                "all_isomorphic": all,
            });
            emit_json(&target, &serde_json::to_string_pretty(&report)?)?;
        }
        None => {
            println!("rule {rule} vs generic construction");
            println!("{:>4}  {:>12}  {:>12}  isomorphic", "n", "rule", "generic");
            for (i, a, b, iso) in &rows {
                println!("{i:>4}  {a:>12}  {b:>12}  {}", if *iso { "yes" } else { "NO" });
            }
            println!("all isomorphic: {}", if all { "yes" } else { "no" });
        }
    }
    if all {
        Ok(())
    } else {
        Err(CliError::ChecksFailed)
    }
}

fn export(input: &Path, out: Option<PathBuf>) -> Result<(), CliError> {
    let text = fs::read_to_string(input).map_err(|e| CliError::Io(input.to_owned(), e))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let dot = if value.get("vertices").is_some() {
        ActionGraph::from_document(&serde_json::from_value(value)?)?.to_dot()
    } else {
        CondensedGraph::from_document(&serde_json::from_value(value)?)?.to_dot()
    };
    match out {
        Some(path) => write_file(&path, &dot),
        None => {
            print!("{dot}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { sequence, n, json } => analyze(&sequence, n, json),
        Command::Build {
            source,
            n,
            form,
            out,
            dot,
            budget,
        } => build(&source, n, form, out, dot, VertexBudget(budget.budget)),
        Command::Verify {
            source,
            n,
            json,
            budget,
        } => verify(&source, n, json, VertexBudget(budget.budget)),
        Command::Compare { rule, n, json, budget } => {
            compare(&rule, n, json, VertexBudget(budget.budget))
        }
        Command::Export { input, out } => export(&input, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, code) = e.classify();
            let message = e.message().replace('\n', " ");
            eprintln!("error: kind={kind} code={code}: {message}");
            ExitCode::from(code)
        }
    }
}
