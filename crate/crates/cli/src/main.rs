//! `odp-forge`: compile `.odp` projects into modular OWL files, lint them,
//! draw them, and reason over instance data.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use odp_forge::catalog::{builtin_patterns, pattern_source};
use odp_forge::diagnostic::has_errors;
use odp_forge::emit::{compile_outputs, diagram_outputs, Format};
use odp_forge::reasoner::{bindings_tsv, lint, materialize, parse_query, query, read_instance_store, Fact, DEFAULT_DEPTH};
use odp_forge::{compile, parse_project, resolve, Axiom, Diagnostic, Iri, Ontology, ResolvedProject, Severity};

#[derive(Parser)]
#[command(name = "odp-forge", version, about = "Compile schema diagrams and ontology design patterns into modular OWL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one OWL file per module plus the merged and bridge files.
    Compile {
        project: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Both)]
        format: FormatArg,
        /// Output directory.
        #[arg(short = 'o', long = "out", default_value = "out")]
        out: PathBuf,
        /// Treat warnings as errors.
        #[arg(long)]
        strict: bool,
    },
    /// Report modeling diagnostics (checklist, missing disjointness, ...).
    Lint {
        project: PathBuf,
        /// Treat warnings as errors.
        #[arg(long)]
        strict: bool,
    },
    /// Write a Graphviz DOT file per module plus the merged diagram.
    Diagram {
        project: PathBuf,
        #[arg(short = 'o', long = "out", default_value = "out")]
        out: PathBuf,
    },
    /// Saturate instance data (Turtle) under the compiled ontology and
    /// print the derived facts and any clashes.
    Materialize {
        project: PathBuf,
        data: PathBuf,
        #[command(flatten)]
        reasoning: Reasoning,
    },
    /// Evaluate a conjunctive pattern file over materialized data and print
    /// the bindings as TSV.
    Query {
        project: PathBuf,
        data: PathBuf,
        pattern: PathBuf,
        #[command(flatten)]
        reasoning: Reasoning,
    },
    /// List or show the built-in patterns.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(clap::Args)]
struct Reasoning {
    /// Bound on the nesting of invented existential fillers.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: usize,
    /// Also report facts about invented fillers.
    #[arg(long)]
    include_fresh: bool,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Print the names of the built-in patterns.
    List,
    /// Print the source of one built-in pattern.
    Show { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Manchester,
    Turtle,
    Both,
}

impl FormatArg {
    fn formats(self) -> Vec<Format> {
        match self {
            FormatArg::Manchester => vec![Format::Manchester],
            FormatArg::Turtle => vec![Format::Turtle],
            FormatArg::Both => vec![Format::Manchester, Format::Turtle],
        }
    }
}

/// Why a command stopped: bad input (exit 2) or error diagnostics (exit 1).
enum Failure {
    Usage(String),
    Diagnostics(String),
}

type Outcome = Result<(), Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

fn diagnostics(message: impl Into<String>) -> Failure {
    Failure::Diagnostics(message.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => usage(format!("{}: file not found", path.display())),
        _ => usage(format!("{}: {e}", path.display())),
    })
}

/// Project name used for merged output files: the file stem.
fn project_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| "ontology".into(), |s| s.to_string_lossy().into_owned())
}

fn load(path: &Path) -> Result<ResolvedProject, Failure> {
    let text = read(path)?;
    let project = parse_project(&text).map_err(|e| diagnostics(format!("{}:{e}", path.display())))?;
    let mut resolved = resolve(&project, &builtin_patterns()).map_err(|errors| {
        let lines: Vec<String> = errors.iter().map(|e| format!("{}: error: {e}", path.display())).collect();
        diagnostics(lines.join("\n"))
    })?;
    resolved.name = project_name(path);
    Ok(resolved)
}

fn compile_project(path: &Path, resolved: &ResolvedProject) -> Result<Ontology, Failure> {
    compile(resolved).map_err(|e| diagnostics(format!("{}: error: {e}", path.display())))
}

fn color() -> bool {
    std::env::var("ODP_FORGE_COLOR").is_ok_and(|v| v == "1")
}

fn render_diagnostic(d: &Diagnostic, color: bool) -> String {
    let text = d.to_string();
    if !color {
        return text;
    }
    let code = match d.severity {
        Severity::Error => "31",
        Severity::Warning => "33",
        Severity::Info => "36",
    };
    let label = d.severity.to_string();
    format!("\x1b[{code}m{label}\x1b[0m{}", &text[label.len()..])
}

/// True when the diagnostics stop the command.
fn failing(diagnostics: &[Diagnostic], strict: bool) -> bool {
    has_errors(diagnostics) || (strict && diagnostics.iter().any(|d| d.severity == Severity::Warning))
}

/// Writes every file into a staging directory beside `out` and moves them
/// into place only once all of them were written.
fn write_outputs(out: &Path, files: &[(String, String)]) -> Outcome {
    let fail = |e: io::Error| usage(format!("{}: {e}", out.display()));
    fs::create_dir_all(out).map_err(fail)?;
    let staging = tempfile::Builder::new().prefix(".odp-forge-").tempdir_in(out).map_err(fail)?;
    for (name, text) in files {
        fs::write(staging.path().join(name), text).map_err(fail)?;
    }
    for (name, _) in files {
        fs::rename(staging.path().join(name), out.join(name)).map_err(fail)?;
    }
    Ok(())
}

fn summary(ontology: &Ontology) -> String {
    let mut out = String::new();
    let (mut subclass, mut disjoint, mut equivalent) = (0, 0, 0);
    for m in &ontology.modules {
        let count = |f: fn(&Axiom<Iri>) -> bool| m.axioms.iter().filter(|a| f(a)).count();
        let s = count(|a| matches!(a, Axiom::SubClassOf(..)));
        let d = count(|a| matches!(a, Axiom::DisjointClasses(..)));
        let e = count(|a| matches!(a, Axiom::EquivalentClasses(..)));
        let _ = writeln!(out, "{:<24} {s:>3} subclass  {d:>2} disjoint  {e:>2} equivalent", m.name);
        (subclass, disjoint, equivalent) = (subclass + s, disjoint + d, equivalent + e);
    }
    let _ = writeln!(
        out,
        "total: {subclass} subclass-family axioms, {disjoint} disjointness axioms, {equivalent} equivalences"
    );
    out
}

/// Abbreviates module and vocabulary IRIs for display.
struct Shortener(Vec<(String, String)>);

impl Shortener {
    fn new(ontology: &Ontology) -> Self {
        let mut prefixes = ontology.prefixes();
        prefixes.push(("xsd".into(), odp_forge::emit::XSD.into()));
        // Longest namespace first so nested namespaces abbreviate correctly.
        prefixes.sort_by_key(|(_, ns)| std::cmp::Reverse(ns.len()));
        Shortener(prefixes)
    }

    fn name(&self, iri: &str) -> String {
        match self.0.iter().find(|(_, ns)| iri.starts_with(ns.as_str())) {
            Some((p, ns)) => format!("{p}:{}", &iri[ns.len()..]),
            None => format!("<{iri}>"),
        }
    }
}

fn run_compile(project: &Path, format: FormatArg, out: &Path, strict: bool) -> Outcome {
    let resolved = load(project)?;
    let color = color();
    // Notes are for `lint`; compile only surfaces what may stop it.
    for d in resolved.diagnostics.iter().filter(|d| d.severity != Severity::Info) {
        eprintln!("{}", render_diagnostic(d, color));
    }
    if failing(&resolved.diagnostics, strict) {
        return Err(diagnostics("compilation stopped by diagnostics"));
    }
    let ontology = compile_project(project, &resolved)?;
    write_outputs(out, &compile_outputs(&ontology, &resolved.name, &format.formats()))?;
    print!("{}", summary(&ontology));
    Ok(())
}

fn run_lint(project: &Path, strict: bool) -> Outcome {
    let resolved = load(project)?;
    let ontology = compile_project(project, &resolved)?;
    let mut all = resolved.diagnostics.clone();
    all.extend(lint(&ontology));
    all.sort();
    all.dedup();
    let color = color();
    for d in &all {
        println!("{}", render_diagnostic(d, color));
    }
    let count = |s: Severity| all.iter().filter(|d| d.severity == s).count();
    println!("{} error(s), {} warning(s), {} note(s)", count(Severity::Error), count(Severity::Warning), count(Severity::Info));
    if failing(&all, strict) {
        return Err(diagnostics(""));
    }
    Ok(())
}

fn run_diagram(project: &Path, out: &Path) -> Outcome {
    let resolved = load(project)?;
    let files = diagram_outputs(&resolved, &resolved.name).map_err(|e| diagnostics(format!("{}: error: {e}", project.display())))?;
    write_outputs(out, &files)?;
    for (name, _) in &files {
        println!("{}", out.join(name).display());
    }
    Ok(())
}

fn saturate(project: &Path, data: &Path, depth: usize) -> Result<(Ontology, odp_forge::reasoner::Saturation), Failure> {
    let resolved = load(project)?;
    let ontology = compile_project(project, &resolved)?;
    let text = read(data)?;
    let store = read_instance_store(&text).map_err(|e| usage(format!("{}:{e}", data.display())))?;
    let sat = materialize(&ontology, &store, depth);
    Ok((ontology, sat))
}

fn run_materialize(project: &Path, data: &Path, reasoning: &Reasoning) -> Outcome {
    let (ontology, sat) = saturate(project, data, reasoning.depth)?;
    let short = Shortener::new(&ontology);
    let mut out = String::new();
    for fact in sat.facts(reasoning.include_fresh) {
        let _ = match fact {
            Fact::Type(x, c) => writeln!(out, "{}\ta\t{}", short.name(x.as_str()), short.name(c.as_str())),
            Fact::Property(x, p, v) => {
                let v = match v.as_individual() {
                    Some(i) => short.name(i.as_str()),
                    None => v.to_string(),
                };
                writeln!(out, "{}\t{}\t{v}", short.name(x.as_str()), short.name(p.as_str()))
            }
            Fact::Same(x, y) => writeln!(out, "{}\tsameAs\t{}", short.name(x.as_str()), short.name(y.as_str())),
        };
    }
    for clash in &sat.clashes {
        let _ = writeln!(
            out,
            "clash: {} is both {} and {} (disjointness axiom {})",
            short.name(clash.individual.as_str()),
            short.name(clash.classes.0.as_str()),
            short.name(clash.classes.1.as_str()),
            clash.axiom
        );
    }
    let _ = writeln!(out, "# {} fresh filler(s), depth used {} of {}", sat.fresh.len(), sat.depth_used, reasoning.depth);
    io::stdout().write_all(out.as_bytes()).map_err(|e| usage(e.to_string()))?;
    if sat.clashes.is_empty() { Ok(()) } else { Err(diagnostics(format!("{} clash(es)", sat.clashes.len()))) }
}

fn run_query(project: &Path, data: &Path, pattern: &Path, reasoning: &Reasoning) -> Outcome {
    let text = read(pattern)?;
    let atoms = parse_query(&text).map_err(|e| usage(format!("{}: {e}", pattern.display())))?;
    let (ontology, sat) = saturate(project, data, reasoning.depth)?;
    let rows = query(&ontology, &sat, &atoms, reasoning.include_fresh).map_err(|e| usage(format!("{}: {e}", pattern.display())))?;
    print!("{}", bindings_tsv(&rows));
    Ok(())
}

fn run_catalog(action: &CatalogAction) -> Outcome {
    match action {
        CatalogAction::List => {
            for p in builtin_patterns() {
                println!("{}", p.name);
            }
            Ok(())
        }
        CatalogAction::Show { name } => match pattern_source(name) {
            Some(src) => {
                print!("{src}");
                Ok(())
            }
            None => Err(usage(format!("unknown pattern `{name}`; try `odp-forge catalog list`"))),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Compile { project, format, out, strict } => run_compile(project, *format, out, *strict),
        Command::Lint { project, strict } => run_lint(project, *strict),
        Command::Diagram { project, out } => run_diagram(project, out),
        Command::Materialize { project, data, reasoning } => run_materialize(project, data, reasoning),
        Command::Query { project, data, pattern, reasoning } => run_query(project, data, pattern, reasoning),
        Command::Catalog { action } => run_catalog(action),
    };
    let (message, code) = match outcome {
        Ok(()) => return ExitCode::SUCCESS,
        Err(Failure::Diagnostics(m)) => (m, 1),
        Err(Failure::Usage(m)) => (m, 2),
    };
    if !message.is_empty() {
        eprintln!("odp-forge: {message}");
    }
    ExitCode::from(code)
}
