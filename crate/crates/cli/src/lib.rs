//! The `anafun` batch interface. [`run`] parses a command line, executes it
//! and returns the exit status: 0 when everything checked out, 1 for
//! validation or verification failures, 2 for unparseable input.

pub mod workspace;

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use anafun::classical::{catalog, count_table, count_unlabelled, free_symmetric, CatalogName, ClassicalSpecies, CountRow};
use anafun::fincat::FinCat;
use anafun::generic::{check_counterexample_with, compose_analytic, ProbeFamily};
use anafun::presheaf::Presheaf;
use anafun::species::{lan_eval, Species};
use anafun::suites::{self, SuiteConfig, SuiteReport};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use workspace::{LoadError, Workspace};

#[derive(Debug, Parser)]
#[command(name = "anafun", version, about = "Species, analytic functors and their verification suites")]
pub struct Cli {
    /// Workspace files to load first (repeatable).
    #[arg(long = "load", short = 'w', global = true)]
    pub load: Vec<PathBuf>,
    /// Truncation degree N.
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    /// Probe bound M: largest presheaf size used as a probe.
    #[arg(long = "probe-bound", global = true)]
    pub probe_bound: Option<usize>,
    /// Size cap for enumerated inputs.
    #[arg(long = "size-cap", global = true)]
    pub size_cap: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate workspace files.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Evaluate `⟨P⟩X` and print its classes with canonical representatives.
    Eval {
        species: String,
        /// A workspace presheaf, or a number k for a k-element set.
        presheaf: String,
        /// Only this object of the codomain.
        #[arg(long)]
        at: Option<String>,
    },
    /// Labelled and unlabelled counts of a classical species.
    Count {
        species: String,
        #[arg(long, default_value_t = 1)]
        labels: usize,
    },
    /// Run a named verification suite, or `all`.
    Suite { name: String },
    /// Compose two species as analytic functors, `⟨Q⟩ ∘ ⟨P⟩`.
    Compose {
        p: String,
        q: String,
        /// Defaults to the smallest exact degree.
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Load(#[from] LoadError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Load(e) => e.exit_code(),
            Failure::Usage(_) => 2,
            Failure::Failed(_) => 1,
        }
    }
}

/// Parses and runs one command, writing the report to `out` and problems
/// to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

fn config(cli: &Cli, ws: &Workspace) -> SuiteConfig {
    let d = SuiteConfig::default();
    SuiteConfig {
        truncation: cli.truncation.or(ws.config.truncation).unwrap_or(d.truncation),
        probe_bound: cli.probe_bound.or(ws.config.probe_bound).unwrap_or(d.probe_bound),
        size_cap: cli.size_cap.or(ws.config.size_cap).unwrap_or(d.size_cap),
        seed: cli.seed.or(ws.config.seed).unwrap_or(d.seed),
        ..d
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, format: Format, value: &T, text: &str) -> Result<(), Failure> {
    let s = match format {
        Format::Text => text.to_string(),
        Format::Json => serde_json::to_string_pretty(value).map_err(|e| Failure::Failed(e.to_string()))?,
    };
    writeln!(out, "{s}").map_err(|e| Failure::Failed(e.to_string()))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut ws = Workspace::default();
    for path in &cli.load {
        ws.load_path(path)?;
    }
    let cfg = config(cli, &ws);
    match &cli.command {
        Command::Validate { files } => validate(cli, &mut ws, files, out),
        Command::Eval { species, presheaf, at } => eval(cli, &ws, &cfg, species, presheaf, at.as_deref(), out),
        Command::Count { species, labels } => count(cli, &ws, &cfg, species, *labels, out),
        Command::Suite { name } => suite(cli, &ws, &cfg, name, out),
        Command::Compose { p, q, degree } => compose(cli, &ws, &cfg, p, q, *degree, out),
    }
}

#[derive(Serialize)]
struct EntryRow {
    name: String,
    kind: &'static str,
    detail: String,
}

fn validate(cli: &Cli, ws: &mut Workspace, files: &[PathBuf], out: &mut dyn Write) -> Result<i32, Failure> {
    for path in files {
        ws.load_path(path)?;
    }
    let rows: Vec<EntryRow> = ws
        .summary()
        .into_iter()
        .map(|(name, kind, detail)| EntryRow { name, kind, detail })
        .collect();
    let mut text = String::new();
    for r in &rows {
        text.push_str(&format!("ok {} {}: {}\n", r.kind, r.name, r.detail));
    }
    text.push_str(&format!("{} entries valid", rows.len()));
    emit(out, cli.format, &rows, &text)?;
    Ok(0)
}

/// A workspace species, a linear species (made free), or a catalog name.
fn lookup_species(ws: &Workspace, cfg: &SuiteConfig, name: &str) -> Result<Arc<Species>, Failure> {
    if let Some(s) = ws.species.get(name) {
        return Ok(s.clone());
    }
    if let Some(l) = ws.linear_species.get(name) {
        return Ok(Arc::new(free_symmetric(l).to_species()));
    }
    match name.parse::<CatalogName>() {
        Ok(c) => Ok(Arc::new(catalog(c, cfg.truncation).to_species())),
        Err(_) => Err(Failure::Failed(format!("unknown species {name:?}"))),
    }
}

fn lookup_classical(ws: &Workspace, cfg: &SuiteConfig, name: &str) -> Result<ClassicalSpecies, Failure> {
    if let Some(s) = ws.species.get(name) {
        return ClassicalSpecies::from_species(s).map_err(|e| Failure::Failed(e.to_string()));
    }
    if let Some(l) = ws.linear_species.get(name) {
        return Ok(free_symmetric(l));
    }
    match name.parse::<CatalogName>() {
        Ok(c) => Ok(catalog(c, cfg.truncation)),
        Err(_) => Err(Failure::Failed(format!("unknown species {name:?}"))),
    }
}

#[derive(Serialize)]
struct EvalObject {
    object: String,
    classes: Vec<String>,
}

#[derive(Serialize)]
struct EvalReport {
    species: String,
    presheaf: String,
    objects: Vec<EvalObject>,
}

fn eval(
    cli: &Cli,
    ws: &Workspace,
    cfg: &SuiteConfig,
    species: &str,
    presheaf: &str,
    at: Option<&str>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let p = lookup_species(ws, cfg, species)?;
    let x = match ws.presheaves.get(presheaf) {
        Some(x) => x.clone(),
        None => {
            let k: usize = presheaf
                .parse()
                .map_err(|_| Failure::Failed(format!("unknown presheaf {presheaf:?}")))?;
            if p.dom().num_objects() != 1 || p.dom().num_morphisms() != 1 {
                return Err(Failure::Failed(format!("a bare size needs a species over the terminal category, not {}", p.dom().name())));
            }
            Arc::new(Presheaf::from_action(p.dom().clone(), k, |_, e| e).map_err(|e| Failure::Failed(e.to_string()))?)
        }
    };
    let v = lan_eval(&p, &x).map_err(|e| Failure::Failed(e.to_string()))?;
    let cod = p.cod();
    let objects: Vec<usize> = match at {
        Some(name) => vec![cod
            .object_index(name)
            .ok_or_else(|| Failure::Failed(format!("{} has no object {name:?}", cod.name())))?],
        None => (0..cod.num_objects()).collect(),
    };
    let report = EvalReport {
        species: p.name().to_string(),
        presheaf: presheaf.to_string(),
        objects: objects
            .iter()
            .map(|&b| EvalObject {
                object: cod.object_name(b).to_string(),
                classes: (0..v.num_classes(b)).map(|k| v.display_element(b, k)).collect(),
            })
            .collect(),
    };
    let mut text = format!("⟨{}⟩({presheaf})", report.species);
    for o in &report.objects {
        text.push_str(&format!("\nat {}: {} classes", o.object, o.classes.len()));
        for (k, c) in o.classes.iter().enumerate() {
            text.push_str(&format!("\n  {k:>3}  {c}"));
        }
    }
    emit(out, cli.format, &report, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct CountReport {
    species: String,
    labels: usize,
    rows: Vec<CountRow>,
}

fn count(cli: &Cli, ws: &Workspace, cfg: &SuiteConfig, species: &str, labels: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = lookup_classical(ws, cfg, species)?;
    let report = CountReport {
        species: p.name().to_string(),
        labels,
        rows: count_table(&p, labels),
    };
    let head = format!("labelled@{labels}");
    let mut text = format!("{:<8}{:<14}{}", "degree", head, "unlabelled");
    for r in &report.rows {
        text.push_str(&format!("\n{:<8}{:<14}{}", r.degree, r.labelled, r.unlabelled));
    }
    emit(out, cli.format, &report, &text)?;
    Ok(0)
}

/// A loaded `phi` over a category with objects `bot` and `top` replaces the
/// built-in counterexample.
fn counterexample_from_workspace(ws: &Workspace, cfg: &SuiteConfig) -> Option<SuiteReport> {
    let phi = ws.transformations.get("phi")?;
    let base = phi.dom().dom();
    let (bot, top) = (base.object_index("bot")?, base.object_index("top")?);
    let mut checks = suites::counterexample_checks(check_counterexample_with(phi, bot, top, cfg.probe_bound.min(4)));
    checks.insert(
        0,
        suites::Check {
            name: "construction".into(),
            passed: true,
            detail: format!("φ: {} => {} from the workspace", phi.dom().name(), phi.cod().name()),
        },
    );
    Some(suites::report("counterexample", cfg, checks))
}

fn suite(cli: &Cli, ws: &Workspace, cfg: &SuiteConfig, name: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut reports = suites::run_suite(name, cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(fixture) = counterexample_from_workspace(ws, cfg) {
        for r in reports.iter_mut().filter(|r| r.suite == "counterexample") {
            *r = fixture.clone();
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    let text = reports.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
    emit(out, cli.format, &reports, &text)?;
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct ComposeReport {
    name: String,
    degree: usize,
    required_degree: usize,
    certified_probes: usize,
    /// `(word, sizes per object)` for every nonempty coefficient.
    coefficients: Vec<(String, Vec<usize>)>,
    unlabelled: Option<Vec<usize>>,
}

fn compose(
    cli: &Cli,
    ws: &Workspace,
    cfg: &SuiteConfig,
    p: &str,
    q: &str,
    degree: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let (p, q) = (lookup_species(ws, cfg, p)?, lookup_species(ws, cfg, q)?);
    let degree = degree.unwrap_or(p.effective_degree() * q.effective_degree());
    let probes = ProbeFamily::new(p.dom().clone(), cfg.probe_bound, 0);
    let r = compose_analytic(&p, &q, degree, &probes).map_err(|e| Failure::Failed(e.to_string()))?;
    let s = &r.species;
    let coefficients = (0..s.words().len())
        .filter(|&w| !s.coeff(w).is_empty())
        .map(|w| (s.words()[w].display(s.dom()).to_string(), s.coeff(w).sizes().to_vec()))
        .collect();
    let terminal = |c: &FinCat| c.num_objects() == 1 && c.num_morphisms() == 1;
    let unlabelled = (terminal(s.dom()) && terminal(s.cod()))
        .then(|| ClassicalSpecies::from_species(s).ok().map(|c| count_unlabelled(&c)))
        .flatten();
    let report = ComposeReport {
        name: s.name().to_string(),
        degree,
        required_degree: r.required_degree,
        certified_probes: r.certified,
        coefficients,
        unlabelled,
    };
    let mut text = format!(
        "{} at degree {} (exact from {}), certified on {} probes",
        report.name, report.degree, report.required_degree, report.certified_probes
    );
    for (w, sizes) in &report.coefficients {
        text.push_str(&format!("\n  {w}: {sizes:?}"));
    }
    if let Some(u) = &report.unlabelled {
        text.push_str(&format!("\nunlabelled {u:?}"));
    }
    emit(out, cli.format, &report, &text)?;
    Ok(0)
}
