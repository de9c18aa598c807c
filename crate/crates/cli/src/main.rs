//! `ginv`: compute, certify and search generalized inverses.
//!
//! Exit status is 0 on success, 2 when the answer is negative (no inverse,
//! invalid certificate, violated hypothesis, failed scenario) and 1 on usage
//! or I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ginv_core::corpus;
use ginv_core::engine::{self, EngineError, Form, InverseCertificate, InverseKind};
use ginv_core::oracle::FiniteOracle;
use ginv_core::ring::{Element, Limits, Ring, RingDescriptor};

#[derive(Parser)]
#[command(name = "ginv", version, about = "Generalized inverses in rings with involution")]
struct Cli {
    /// Worker threads for exhaustive scans (1 = sequential). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an inverse and its certificate.
    Compute {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        kind: InverseKind,
        #[command(flatten)]
        element: ElementArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check a candidate inverse against one characterization.
    Verify {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        kind: InverseKind,
        /// definitional, five_eq or three_eq; the default depends on the ring.
        #[arg(long)]
        form: Option<Form>,
        /// Subject element, inline.
        #[arg(long = "a", value_name = "ELEMENT", conflicts_with = "a_file", required_unless_present = "a_file")]
        a: Option<String>,
        #[arg(long, value_name = "PATH")]
        a_file: Option<PathBuf>,
        /// Candidate inverse, inline.
        #[arg(long = "x", value_name = "ELEMENT", conflicts_with = "x_file", required_unless_present = "x_file")]
        x: Option<String>,
        /// Candidate inverse file; a `compute` output is accepted.
        #[arg(long, value_name = "PATH")]
        x_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Classify every element of a finite ring.
    Classify {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// List every inverse of the given kind by exhaustive search.
    Search {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        kind: InverseKind,
        #[command(flatten)]
        element: ElementArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a corpus scenario.
    Demo {
        /// Scenario id; `--list` shows them.
        #[arg(required_unless_present = "list")]
        id: Option<String>,
        #[arg(long)]
        list: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Inverse of a + b through the additive formulas.
    Sum {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, value_enum)]
        mode: SumMode,
        /// Use the formula for summands that also satisfy ba = 0.
        #[arg(long)]
        commuting: bool,
        #[arg(long = "a", value_name = "ELEMENT", conflicts_with = "a_file", required_unless_present = "a_file")]
        a: Option<String>,
        #[arg(long, value_name = "PATH")]
        a_file: Option<PathBuf>,
        #[arg(long = "b", value_name = "ELEMENT", conflicts_with = "b_file", required_unless_present = "b_file")]
        b: Option<String>,
        #[arg(long, value_name = "PATH")]
        b_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
struct RingArg {
    /// Ring descriptor, e.g. zmod:8, mat:rat:2, mat:gf:2:2, mat:zmod:4:2[:inv=transpose].
    #[arg(long, conflicts_with = "ring_file", required_unless_present = "ring_file")]
    ring: Option<String>,
    /// JSON ring descriptor (needed for table rings).
    #[arg(long, value_name = "PATH")]
    ring_file: Option<PathBuf>,
}

#[derive(Args)]
struct ElementArg {
    /// Element in JSON: an integer for zmod, an array of rows for matrices.
    #[arg(long, conflicts_with = "element_file", required_unless_present = "element_file")]
    element: Option<String>,
    #[arg(long, value_name = "PATH")]
    element_file: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SumMode {
    Core,
    Dual,
    Group,
}

/// Successful run: what to print and whether the answer was negative.
struct Report {
    text: String,
    negative: bool,
}

impl Report {
    fn positive(text: String) -> Self {
        Report { text, negative: false }
    }

    fn negative(text: String) -> Self {
        Report { text, negative: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = configure_jobs(cli.jobs) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(cli.command) {
        Ok(report) => {
            print!("{}", report.text);
            if report.negative {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn configure_jobs(jobs: Option<usize>) -> Result<()> {
    let Some(jobs) = jobs else { return Ok(()) };
    if jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    if jobs == 1 {
        ginv_core::par::force_sequential(true);
        return Ok(());
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().context("configuring the thread pool")?;
    Ok(())
}

fn run(command: Command) -> Result<Report> {
    match command {
        Command::Compute { ring, kind, element, format } => {
            let ring = load_ring(&ring)?;
            let a = element_input(&ring, element.element.as_deref(), element.element_file.as_deref(), "element")?;
            compute(&ring, kind, &a, format)
        }
        Command::Verify { ring, kind, form, a, a_file, x, x_file, format } => {
            let ring = load_ring(&ring)?;
            let a = element_input(&ring, a.as_deref(), a_file.as_deref(), "element")?;
            let x = element_input(&ring, x.as_deref(), x_file.as_deref(), "result")?;
            let form = form.unwrap_or_else(|| default_form(&ring));
            verify(&ring, kind, &a, &x, form, format)
        }
        Command::Classify { ring, format } => {
            let ring = load_ring(&ring)?;
            let report = FiniteOracle::new(&ring)?.classify()?;
            Ok(Report::positive(match format {
                Format::Json => pretty(&report.to_json(&ring)),
                Format::Table => report.to_table(&ring),
            }))
        }
        Command::Search { ring, kind, element, format } => {
            let ring = load_ring(&ring)?;
            let a = element_input(&ring, element.element.as_deref(), element.element_file.as_deref(), "element")?;
            search(&ring, kind, &a, format)
        }
        Command::Demo { id, list, format } => {
            if list {
                return Ok(Report::positive(corpus::scenario_ids().iter().map(|id| format!("{id}\n")).collect()));
            }
            let report = corpus::run_scenario(id.as_deref().expect("required by clap"))?;
            let text = match format {
                Format::Json => pretty(&report.to_json()),
                Format::Table => report.to_text(),
            };
            Ok(if report.passed() { Report::positive(text) } else { Report::negative(text) })
        }
        Command::Sum { ring, mode, commuting, a, a_file, b, b_file, format } => {
            let ring = load_ring(&ring)?;
            let a = element_input(&ring, a.as_deref(), a_file.as_deref(), "element")?;
            let b = element_input(&ring, b.as_deref(), b_file.as_deref(), "element")?;
            sum(&ring, mode, commuting, &a, &b, format)
        }
    }
}

fn load_ring(arg: &RingArg) -> Result<Ring> {
    let desc: RingDescriptor = match (&arg.ring, &arg.ring_file) {
        (Some(s), _) => s.parse()?,
        (None, Some(path)) => serde_json::from_str(&read(path)?)
            .with_context(|| format!("{} is not a ring descriptor", path.display()))?,
        (None, None) => bail!("one of --ring or --ring-file is required"),
    };
    Ok(Ring::with_limits(desc, Limits::from_env())?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Reads an element inline or from a file. A file may hold the bare element
/// or an object carrying it under `key` (as `compute` output does).
fn element_input(ring: &Ring, inline: Option<&str>, file: Option<&Path>, key: &str) -> Result<Element> {
    if let Some(text) = inline {
        return ring.parse_element(text).with_context(|| format!("parsing element {text:?}"));
    }
    let path = file.ok_or_else(|| anyhow!("an element is required"))?;
    let v: Value =
        serde_json::from_str(&read(path)?).with_context(|| format!("{} is not valid JSON", path.display()))?;
    let v = match v.get(key) {
        Some(inner) if v.is_object() && v.get("idx").is_none() => inner.clone(),
        _ => v,
    };
    ring.from_json(&v).with_context(|| format!("reading element from {}", path.display()))
}

fn default_form(ring: &Ring) -> Form {
    if ring.is_finite() {
        Form::Definitional
    } else {
        Form::FiveEq
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// JSON body for a negative answer. Other engine errors are usage errors.
fn negative_answer(e: EngineError) -> Result<Value> {
    if !e.is_negative_answer() {
        return Err(e.into());
    }
    let mut v = json!({ "error": e.code() });
    match &e {
        EngineError::NotCoreInvertible { because } | EngineError::NotDualCoreInvertible { because } => {
            v["because"] = json!(because.error_name());
        }
        EngineError::NotGroupInvertible(why) => v["because"] = json!(format!("{why:?}")),
        EngineError::PreconditionViolated { failed } => v["failed"] = json!(failed),
        _ => {}
    }
    v["message"] = json!(e.to_string());
    Ok(v)
}

fn negative_text(v: &Value) -> String {
    let mut out = format!("error: {}\n", v["error"].as_str().unwrap_or_default());
    if let Some(b) = v.get("because").and_then(Value::as_str) {
        out.push_str(&format!("because: {b}\n"));
    }
    if let Some(failed) = v.get("failed").and_then(Value::as_array) {
        let labels: Vec<&str> = failed.iter().filter_map(Value::as_str).collect();
        out.push_str(&format!("failed: {}\n", labels.join(", ")));
    }
    out
}

fn certificate_text(ring: &Ring, c: &InverseCertificate) -> String {
    let mut out = format!(
        "certificate ({} {}): {}\n",
        c.kind,
        c.form,
        if c.is_valid() { "valid" } else { "INVALID" }
    );
    for e in &c.equations {
        let rhs = e.rhs.as_ref().map_or_else(|| "(no witness)".to_string(), |r| ring.render(r));
        let mark = if e.holds { "holds" } else { "fails" };
        out.push_str(&format!("  {:<9} {mark}  lhs {}  rhs {rhs}\n", e.label, ring.render(&e.lhs)));
    }
    out
}

fn compute(ring: &Ring, kind: InverseKind, a: &Element, format: Format) -> Result<Report> {
    let header = json!({ "ring": ring.descriptor().to_string(), "kind": kind.name(), "element": ring.to_json(a) });
    match engine::compute(ring, kind, a) {
        Ok(x) => {
            let cert = engine::verify(ring, kind, a, &x, default_form(ring))?;
            let text = match format {
                Format::Json => {
                    let mut v = header;
                    v["result"] = ring.to_json(&x);
                    v["certificate"] = cert.to_json(ring);
                    pretty(&v)
                }
                Format::Table => format!(
                    "ring {}\nkind {kind}\nelement {}\nresult {}\n{}",
                    ring.descriptor(),
                    ring.render(a),
                    ring.render(&x),
                    certificate_text(ring, &cert)
                ),
            };
            Ok(Report::positive(text))
        }
        Err(e) => {
            let err = negative_answer(e)?;
            Ok(Report::negative(match format {
                Format::Json => pretty(&err),
                Format::Table => negative_text(&err),
            }))
        }
    }
}

fn verify(ring: &Ring, kind: InverseKind, a: &Element, x: &Element, form: Form, format: Format) -> Result<Report> {
    let cert = engine::verify(ring, kind, a, x, form)?;
    let text = match format {
        Format::Json => pretty(&cert.to_json(ring)),
        Format::Table => certificate_text(ring, &cert),
    };
    Ok(if cert.is_valid() { Report::positive(text) } else { Report::negative(text) })
}

fn search(ring: &Ring, kind: InverseKind, a: &Element, format: Format) -> Result<Report> {
    let all = FiniteOracle::new(ring)?.find_all(kind, a)?;
    let text = match format {
        Format::Json => pretty(&json!({
            "ring": ring.descriptor().to_string(),
            "kind": kind.name(),
            "element": ring.to_json(a),
            "count": all.len(),
            "solutions": all.iter().map(|x| ring.to_json(x)).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let mut out = format!("{} {kind} inverse(s) of {}\n", all.len(), ring.render(a));
            for x in &all {
                out.push_str(&format!("  {}\n", ring.render(x)));
            }
            out
        }
    };
    Ok(if all.is_empty() { Report::negative(text) } else { Report::positive(text) })
}

fn sum(ring: &Ring, mode: SumMode, commuting: bool, a: &Element, b: &Element, format: Format) -> Result<Report> {
    let (name, res) = match (mode, commuting) {
        (SumMode::Group, _) => ("group", engine::group_sum(ring, a, b)),
        (SumMode::Core, false) => ("core", engine::core_sum(ring, a, b)),
        (SumMode::Core, true) => ("core", engine::core_sum_commuting(ring, a, b)),
        (SumMode::Dual, false) => ("dual_core", engine::dual_core_sum(ring, a, b)),
        (SumMode::Dual, true) => ("dual_core", engine::dual_core_sum_commuting(ring, a, b)),
    };
    match res {
        Ok(x) => Ok(Report::positive(match format {
            Format::Json => pretty(&json!({
                "ring": ring.descriptor().to_string(),
                "kind": name,
                "a": ring.to_json(a),
                "b": ring.to_json(b),
                "result": ring.to_json(&x),
            })),
            Format::Table => format!(
                "{name} inverse of a + b with a = {}, b = {}: {}\n",
                ring.render(a),
                ring.render(b),
                ring.render(&x)
            ),
        })),
        Err(e) => {
            let err = negative_answer(e)?;
            Ok(Report::negative(match format {
                Format::Json => pretty(&err),
                Format::Table => negative_text(&err),
            }))
        }
    }
}
