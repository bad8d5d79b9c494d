//! The qsetw command line: checking documents, running completions,
//! enumerating homs and singletons, verification suites, and the
//! counterexample search.
//!
//! Exit codes: 0 when everything checked out, 1 when a mathematical verdict
//! was violated (or a finding surfaced under --strict), 2 for malformed
//! input, exceeded guards, or missing preconditions.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use qset_core::gluing::{delta_quotient, gluing_completion, is_gluing_complete};
use qset_core::limits::Limits;
use qset_core::morphism::{enumerate_functional_homs, enumerate_relational_homs};
use qset_core::scott::{enumerate_singletons, representers, singletons_qset, ScottError};
use qset_core::{QSet, Quantale};

use crate::formats::{
    load_morphism, load_qset_against, load_quantale, qset_to_doc, write_json, FormatError,
    LoadedMorphism,
};
use crate::report::{Format, Report};
use crate::search::{Predicate, SearchConfig, SearchMode};
use crate::verify;

#[derive(Parser)]
#[command(
    name = "qsetw",
    about = "A workbench for finite commutative quantales and Q-sets",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = CliFormat::Text)]
    format: CliFormat,

    /// Worker threads for sweeps and search (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Treat findings (violations of unproven statements) as failures.
    #[arg(long, global = true)]
    strict: bool,

    /// Attempt singleton constructions on non-strong quantales.
    #[arg(long, global = true)]
    force_strength: bool,

    /// Carrier bound: relational hom enumeration (default 4) and search
    /// carrier cap (default 3).
    #[arg(long, global = true)]
    max_carrier: Option<usize>,

    /// Quantale bound: relational hom enumeration (default 6) and search
    /// quantale cap (default 4).
    #[arg(long, global = true)]
    max_quantale: Option<usize>,

    /// Candidate-space bound for functional hom and singleton enumeration.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    max_candidates: u64,

    /// Cap on double completions when re-verifying zig-zag identities.
    #[arg(long, global = true, default_value_t = 8)]
    double_cap: usize,

    /// Seed for random search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Print elapsed times to stderr.
    #[arg(long, global = true)]
    timings: bool,

    /// Print full equivalence classes in quotient reports.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CompletionKind {
    Gluing,
    Scott,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HomKind {
    Functional,
    Relational,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a quantale document and report its property flags.
    CheckQuantale { path: PathBuf },
    /// Validate a Q-set document and report extensionality, separability,
    /// gluing-completeness, and Scott-completeness with witnesses.
    CheckQset { quantale: PathBuf, qset: PathBuf },
    /// Validate a morphism document against its endpoints.
    CheckMorphism { path: PathBuf },
    /// Compute the δ-quotient of a Q-set.
    Quotient {
        quantale: PathBuf,
        qset: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compute the gluing or Scott completion of a Q-set.
    Complete {
        #[arg(value_enum)]
        kind: CompletionKind,
        quantale: PathBuf,
        qset: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the singletons of a Q-set with their representer sets.
    Singletons { quantale: PathBuf, qset: PathBuf },
    /// Enumerate a hom-set between two Q-sets.
    Hom {
        #[arg(value_enum)]
        kind: HomKind,
        quantale: PathBuf,
        dom: PathBuf,
        cod: PathBuf,
    },
    /// Run a verification suite (see `verify list`).
    Verify { suite: String },
    /// Search small quantales and Q-sets for a predicate. Caps come from
    /// --max-quantale and --max-carrier (defaults 4 and 3 here).
    Search {
        #[arg(long)]
        predicate: String,
        #[arg(long, value_enum, default_value_t = CliMode::Exhaustive)]
        mode: CliMode,
        /// Random tables drawn per quantale in random mode.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliMode {
    Exhaustive,
    Random,
}

enum Outcome {
    Pass(Report),
    Violation(Report),
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Guard(String),
}

fn exit_code_for(e: &CliError) -> i32 {
    match e {
        // axiom violations inside otherwise well-formed documents
        CliError::Format(FormatError::Invalid { .. }) => 1,
        _ => 2,
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .ok();
    }
    let format = match cli.format {
        CliFormat::Text => Format::Text,
        CliFormat::Json => Format::Json,
    };
    let strict = cli.strict;
    let timings = cli.timings;
    let started = Instant::now();
    let result = execute(cli);
    if timings {
        eprintln!("elapsed: {:?}", started.elapsed());
    }
    match result {
        Ok(Outcome::Pass(report)) => {
            print!("{}", report.render(format));
            0
        }
        Ok(Outcome::Violation(report)) => {
            print!("{}", report.render(format));
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            let _ = strict;
            exit_code_for(&e)
        }
    }
}

fn limits_of(cli: &Cli) -> Limits {
    Limits {
        max_carrier: cli.max_carrier.unwrap_or(4),
        max_quantale: cli.max_quantale.unwrap_or(6),
        max_candidates: cli.max_candidates,
        double_completion_cap: cli.double_cap,
    }
}

fn execute(cli: Cli) -> Result<Outcome, CliError> {
    let limits = limits_of(&cli);
    match &cli.command {
        Command::CheckQuantale { path } => check_quantale(path),
        Command::CheckQset { quantale, qset } => check_qset(quantale, qset, &limits),
        Command::CheckMorphism { path } => check_morphism(path),
        Command::Quotient {
            quantale,
            qset,
            out,
        } => quotient(quantale, qset, out.as_deref(), cli.verbose),
        Command::Complete {
            kind,
            quantale,
            qset,
            out,
        } => complete(
            *kind,
            quantale,
            qset,
            out.as_deref(),
            &limits,
            cli.force_strength,
        ),
        Command::Singletons { quantale, qset } => singletons(quantale, qset, &limits),
        Command::Hom {
            kind,
            quantale,
            dom,
            cod,
        } => hom(*kind, quantale, dom, cod, &limits),
        Command::Verify { suite } => run_verify(suite, &limits, cli.strict),
        Command::Search {
            predicate,
            mode,
            samples,
        } => search_cmd(
            predicate,
            *mode,
            *samples,
            cli.max_quantale.unwrap_or(4),
            cli.max_carrier.unwrap_or(3),
            cli.seed,
            &limits,
        ),
    }
}

fn load_pair(quantale: &Path, qset: &Path) -> Result<(Arc<Quantale>, Arc<QSet>), CliError> {
    let q = load_quantale(quantale)?;
    let x = load_qset_against(qset, &q)?;
    Ok((q, x))
}

fn prop_notes() -> [(&'static str, &'static str); 8] {
    [
        ("commutative", "a ⊗ b = b ⊗ a"),
        ("semicartesian", "a ⊗ b ≤ a ∧ b"),
        ("integral", "⊤ is the tensor unit"),
        ("unital", "the tensor has a unit"),
        ("idempotent", "a ⊗ a = a"),
        (
            "strong",
            "idempotents below a join are below the join of squares",
        ),
        ("divisible", "a ≤ b implies a = λ ⊗ b for some λ"),
        ("locale", "idempotent and semicartesian, so ⊗ = ∧"),
    ]
}

fn check_quantale(path: &Path) -> Result<Outcome, CliError> {
    let q = load_quantale(path)?;
    let mut report = Report::new();
    report.push("quantale", path.display().to_string());
    report.push("elements", q.len() as u64);
    report.push("bottom", q.name(q.bottom()));
    report.push("top", q.name(q.top()));
    let p = *q.props();
    let flags = [
        p.commutative,
        p.semicartesian,
        p.integral,
        p.unital,
        p.idempotent,
        p.strong,
        p.divisible,
        p.locale,
    ];
    for ((key, note), value) in prop_notes().into_iter().zip(flags) {
        report.push_noted(key, value, note);
    }
    report.push("idempotents", q.idempotents().len() as u64);
    report.push("result", "ok");
    Ok(Outcome::Pass(report))
}

fn check_qset(qpath: &Path, xpath: &Path, limits: &Limits) -> Result<Outcome, CliError> {
    let (q, x) = load_pair(qpath, xpath)?;
    let mut report = Report::new();
    report.push("quantale", qpath.display().to_string());
    report.push("qset", xpath.display().to_string());
    report.push("points", x.len() as u64);
    report.push_noted(
        "axioms",
        "ok",
        "symmetry, transitivity, and the extent law hold",
    );
    let extensional = x.is_extensional();
    report.push_noted("extensional", extensional, "δ-equivalent points are equal");
    if let Some((a, b)) = x.extensionality_witness() {
        report.push(
            "extensional_witness",
            vec![x.name(a).to_string(), x.name(b).to_string()],
        );
    }
    report.push_noted("separable", x.is_separable(), "x ↦ δ(−,x) is injective");
    let gluing = is_gluing_complete(&x).map_err(|e| CliError::Guard(e.to_string()))?;
    report.push_noted(
        "gluing_complete",
        gluing.complete,
        "every compatible family has exactly one gluing",
    );
    if let Some(mask) = gluing.witness {
        report.push("gluing_witness", qset_core::gluing::family_name(&x, mask));
    }
    match qset_core::scott::is_scott_complete(&x, limits) {
        Ok(scott) => {
            report.push_noted(
                "scott_complete",
                scott.scott_complete,
                "every singleton has exactly one representing element",
            );
            report.push("singleton_count", scott.singleton_count as u64);
            if let Some(w) = &scott.witness {
                let names: Vec<String> = w.iter().map(|&v| q.name(v).to_string()).collect();
                report.push("witness_singleton", names);
            }
        }
        Err(ScottError::TooLarge(m)) => {
            report.push("scott_complete", format!("skipped: {m}"));
        }
        Err(e) => return Err(CliError::Guard(e.to_string())),
    }
    report.push("result", "ok");
    Ok(Outcome::Pass(report))
}

fn check_morphism(path: &Path) -> Result<Outcome, CliError> {
    let loaded = load_morphism(path)?;
    let mut report = Report::new();
    report.push("morphism", path.display().to_string());
    match loaded {
        LoadedMorphism::Functional(f) => {
            report.push("kind", "functional");
            report.push("dom_points", f.dom().len() as u64);
            report.push("cod_points", f.cod().len() as u64);
        }
        LoadedMorphism::Relational(phi) => {
            report.push("kind", "relational");
            report.push("dom_points", phi.dom().len() as u64);
            report.push("cod_points", phi.cod().len() as u64);
        }
        LoadedMorphism::E(e) => {
            report.push("kind", "e");
            report.push("error", e.dom().quantale().name(e.error()));
        }
    }
    report.push("result", "ok");
    Ok(Outcome::Pass(report))
}

fn quotient(
    qpath: &Path,
    xpath: &Path,
    out: Option<&Path>,
    verbose: bool,
) -> Result<Outcome, CliError> {
    let (_, x) = load_pair(qpath, xpath)?;
    let quo = delta_quotient(&x);
    let mut report = Report::new();
    report.push("qset", xpath.display().to_string());
    report.push("points", x.len() as u64);
    report.push("classes", quo.qset.len() as u64);
    if verbose {
        for (i, block) in quo.partition.blocks.iter().enumerate() {
            let members: Vec<String> = block.iter().map(|&p| x.name(p).to_string()).collect();
            report.push(format!("class.{i}"), members);
        }
    }
    if let Some(path) = out {
        write_json(&qset_to_doc(&quo.qset), path)?;
        report.push("out", path.display().to_string());
    }
    report.push("result", "ok");
    Ok(Outcome::Pass(report))
}

fn complete(
    kind: CompletionKind,
    qpath: &Path,
    xpath: &Path,
    out: Option<&Path>,
    limits: &Limits,
    force: bool,
) -> Result<Outcome, CliError> {
    let (_, x) = load_pair(qpath, xpath)?;
    let mut report = Report::new();
    report.push("qset", xpath.display().to_string());
    report.push("points", x.len() as u64);
    let completed: Arc<QSet> = match kind {
        CompletionKind::Gluing => {
            let c = gluing_completion(&x).map_err(|e| CliError::Guard(e.to_string()))?;
            report.push("completion", "gluing");
            report.push(
                "gluing_complete",
                is_gluing_complete(c.qset())
                    .map_err(|e| CliError::Guard(e.to_string()))?
                    .complete,
            );
            c.qset().clone()
        }
        CompletionKind::Scott => {
            let sx = singletons_qset(&x, limits, force).map_err(|e| match e {
                ScottError::StrengthRequired => CliError::Usage(
                    "quantale is not strong; pass --force-strength to try anyway".into(),
                ),
                other => CliError::Guard(other.to_string()),
            })?;
            report.push("completion", "scott");
            for a in &sx.anomalies {
                report.push("anomaly", a.clone());
            }
            sx.qset.clone()
        }
    };
    report.push("completed_points", completed.len() as u64);
    if let Some(path) = out {
        write_json(&qset_to_doc(&completed), path)?;
        report.push("out", path.display().to_string());
    }
    report.push("result", "ok");
    Ok(Outcome::Pass(report))
}

fn singletons(qpath: &Path, xpath: &Path, limits: &Limits) -> Result<Outcome, CliError> {
    let (q, x) = load_pair(qpath, xpath)?;
    let singletons =
        enumerate_singletons(&x, limits).map_err(|e| CliError::Guard(e.to_string()))?;
    let mut report = Report::new();
    report.push("qset", xpath.display().to_string());
    report.push("count", singletons.len() as u64);
    let mut unrepresented = 0u64;
    for (i, s) in singletons.iter().enumerate() {
        let values: Vec<String> = s.iter().map(|&v| q.name(v).to_string()).collect();
        let reps: Vec<String> = representers(&x, s)
            .into_iter()
            .map(|p| x.name(p).to_string())
            .collect();
        if reps.is_empty() {
            unrepresented += 1;
        }
        report.push(
            format!("singleton.{i}"),
            format!("[{}] representers [{}]", values.join(","), reps.join(",")),
        );
    }
    report.push("unrepresented", unrepresented);
    report.push("result", "ok");
    Ok(Outcome::Pass(report))
}

fn hom(
    kind: HomKind,
    qpath: &Path,
    dpath: &Path,
    cpath: &Path,
    limits: &Limits,
) -> Result<Outcome, CliError> {
    let q = load_quantale(qpath)?;
    let dom = load_qset_against(dpath, &q)?;
    let cod = load_qset_against(cpath, &q)?;
    let mut report = Report::new();
    report.push("dom", dpath.display().to_string());
    report.push("cod", cpath.display().to_string());
    match kind {
        HomKind::Functional => {
            let homs = enumerate_functional_homs(&dom, &cod, limits)
                .map_err(|e| CliError::Guard(e.to_string()))?;
            report.push("kind", "functional");
            report.push("count", homs.len() as u64);
            for (i, f) in homs.iter().enumerate() {
                let map: Vec<String> = (0..dom.len())
                    .map(|x| format!("{}->{}", dom.name(x), cod.name(f.apply(x))))
                    .collect();
                report.push(format!("hom.{i}"), map.join(" "));
            }
        }
        HomKind::Relational => {
            let homs = enumerate_relational_homs(&dom, &cod, limits)
                .map_err(|e| CliError::Guard(e.to_string()))?;
            report.push("kind", "relational");
            report.push("count", homs.len() as u64);
            for (i, phi) in homs.iter().enumerate() {
                let mut cells = Vec::new();
                for x in 0..dom.len() {
                    for y in 0..cod.len() {
                        cells.push(format!(
                            "{},{}={}",
                            dom.name(x),
                            cod.name(y),
                            q.name(phi.at(x, y))
                        ));
                    }
                }
                report.push(format!("hom.{i}"), cells.join(" "));
            }
        }
    }
    report.push("result", "ok");
    Ok(Outcome::Pass(report))
}

fn run_verify(suite: &str, limits: &Limits, strict: bool) -> Result<Outcome, CliError> {
    let Some(suites) = verify::run_suite(suite, limits) else {
        return Err(CliError::Usage(format!(
            "unknown suite {suite:?}; expected one of {}",
            verify::SUITE_NAMES.join(", ")
        )));
    };
    let mut report = Report::new();
    let mut failures = 0usize;
    let mut findings = 0usize;
    for s in &suites {
        report.extend(s.to_report());
        failures += s.failures();
        findings += s.findings();
    }
    report.push("failures", failures as u64);
    report.push("findings", findings as u64);
    let failed = failures > 0 || (strict && findings > 0);
    report.push("result", if failed { "FAIL" } else { "pass" });
    Ok(if failed {
        Outcome::Violation(report)
    } else {
        Outcome::Pass(report)
    })
}

fn search_cmd(
    predicate: &str,
    mode: CliMode,
    samples: u64,
    quantale_size: usize,
    carrier_size: usize,
    seed: u64,
    limits: &Limits,
) -> Result<Outcome, CliError> {
    let Some(predicate) = Predicate::parse(predicate) else {
        return Err(CliError::Usage(format!("unknown predicate {predicate:?}")));
    };
    if quantale_size == 0 || quantale_size > 5 {
        return Err(CliError::Usage(
            "search supports quantale sizes 1 through 5".into(),
        ));
    }
    if carrier_size > 4 {
        return Err(CliError::Usage(
            "search supports carrier sizes up to 4".into(),
        ));
    }
    let config = SearchConfig {
        max_quantale: quantale_size,
        max_carrier: carrier_size,
        predicate,
        mode: match mode {
            CliMode::Exhaustive => SearchMode::Exhaustive,
            CliMode::Random => SearchMode::Random,
        },
        seed,
        samples,
    };
    let findings = crate::search::search(&config, limits);
    let mut report = Report::new();
    report.push("predicate", predicate.name());
    report.push(
        "mode",
        match config.mode {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::Random => "random",
        },
    );
    report.push("max_quantale", config.max_quantale as u64);
    report.push("max_carrier", config.max_carrier as u64);
    report.push("findings", findings.len() as u64);
    for (i, f) in findings.iter().enumerate() {
        report.push(format!("finding.{i}"), f.render());
    }
    report.push("result", "ok");
    Ok(Outcome::Pass(report))
}
