use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::axiom::{generate_disjointness, Axiom};
use crate::diagnostic::{Code, Diagnostic};
use crate::schema::{
    instantiate_with_notes, join, validate_graph, Category, EdgeKind, Instantiation, PatternTemplate, SchemaError,
    SchemaGraph, THING,
};

use super::{is_datatype_prefix, split_qualified, ModuleDef, Project};

/// A module with its instantiation applied and local statements merged in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedModule {
    pub name: String,
    pub graph: SchemaGraph,
    pub extra_axioms: Vec<Axiom<String>>,
    pub disjoint_blocks: Vec<Vec<String>>,
    pub bridges: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedProject {
    /// Used for merged output file names.
    pub name: String,
    pub base_iri: String,
    pub modules: Vec<ResolvedModule>,
    /// Non-fatal findings: cascade deletions, cycles, missing bridges.
    pub diagnostics: Vec<Diagnostic>,
}

impl ResolvedProject {
    pub fn module(&self, name: &str) -> Option<&ResolvedModule> {
        self.modules.iter().find(|m| m.name == name)
    }

    /// All module graphs joined, same names unified: the complete diagram.
    pub fn merged_graph(&self) -> Result<SchemaGraph, SchemaError> {
        let graphs: Vec<SchemaGraph> = self.modules.iter().map(|m| m.graph.clone()).collect();
        join(&graphs, &[])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ResolveErrorKind {
    UnknownPattern(String),
    UnknownElement(String),
    NameCollision(String),
    CategoryMismatch(String),
    InvalidGraph(String),
    TooFewClasses(usize),
    NotAnInstantiation,
}

impl fmt::Display for ResolveErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResolveErrorKind::UnknownPattern(p) => write!(f, "unknown pattern `{p}`"),
            ResolveErrorKind::UnknownElement(e) => write!(f, "unknown element {e}"),
            ResolveErrorKind::NameCollision(e) => write!(f, "name collision on {e}"),
            ResolveErrorKind::CategoryMismatch(e) => write!(f, "category mismatch: {e}"),
            ResolveErrorKind::InvalidGraph(e) => write!(f, "{e}"),
            ResolveErrorKind::TooFewClasses(n) => write!(f, "disjointness block has {n} distinct class(es), needs 2"),
            ResolveErrorKind::NotAnInstantiation => f.write_str("`rename`/`delete` used without `instantiates`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Error)]
#[error("module `{module}`: {kind}")]
pub struct ResolveError {
    pub module: String,
    pub kind: ResolveErrorKind,
}

impl From<SchemaError> for ResolveErrorKind {
    fn from(e: SchemaError) -> Self {
        match e {
            SchemaError::UnknownElement(n) => ResolveErrorKind::UnknownElement(format!("`{n}`")),
            SchemaError::NameCollision(n) => ResolveErrorKind::NameCollision(format!("`{n}`")),
            SchemaError::ReservedName(n) => ResolveErrorKind::NameCollision(format!("reserved `{n}`")),
            SchemaError::CategoryMismatch(m) | SchemaError::DanglingIdentification(m) => {
                ResolveErrorKind::CategoryMismatch(m)
            }
        }
    }
}

/// Binds pattern references (project patterns shadow `catalog`), applies
/// instantiations and checks every cross-module reference. All errors are
/// collected and returned sorted.
pub fn resolve(project: &Project, catalog: &[PatternTemplate]) -> Result<ResolvedProject, Vec<ResolveError>> {
    let mut errors = Vec::new();
    let mut diagnostics = Vec::new();
    let mut patterns: BTreeMap<&str, &PatternTemplate> = catalog.iter().map(|p| (p.name.as_str(), p)).collect();
    for p in &project.patterns {
        patterns.insert(&p.name, p);
        for d in validate_graph(&p.graph).into_iter().filter(Diagnostic::is_error) {
            errors.push(ResolveError {
                module: format!("pattern {}", p.name),
                kind: ResolveErrorKind::InvalidGraph(d.to_string()),
            });
        }
    }

    let mut modules = Vec::new();
    for m in &project.modules {
        let err = |kind| ResolveError { module: m.name.clone(), kind };
        let graph = match module_graph(m, &patterns) {
            Ok((graph, notes)) => {
                diagnostics.extend(notes.into_iter().map(|d| in_module(&m.name, d)));
                graph
            }
            Err(kind) => {
                errors.push(err(kind));
                continue;
            }
        };
        let mut graph_ok = true;
        for d in validate_graph(&graph) {
            if d.is_error() {
                graph_ok = false;
                errors.push(err(ResolveErrorKind::InvalidGraph(d.to_string())));
            } else {
                diagnostics.push(in_module(&m.name, d));
            }
        }
        if graph_ok {
            modules.push(ResolvedModule {
                name: m.name.clone(),
                graph,
                extra_axioms: m.extra_axioms.clone(),
                disjoint_blocks: m.disjoint_blocks.clone(),
                bridges: m.bridges.clone(),
            });
        }
    }

    let graphs: BTreeMap<&str, &SchemaGraph> = modules.iter().map(|m| (m.name.as_str(), &m.graph)).collect();
    for m in &modules {
        check_references(m, &graphs, &mut errors);
    }
    diagnostics.extend(missing_bridges(&modules));

    if !errors.is_empty() {
        errors.sort();
        errors.dedup();
        return Err(errors);
    }
    diagnostics.sort();
    diagnostics.dedup();
    Ok(ResolvedProject { name: "ontology".into(), base_iri: project.base_iri(), modules, diagnostics })
}

fn in_module(module: &str, mut d: Diagnostic) -> Diagnostic {
    d.element = format!("{module}:{}", d.element);
    d
}

fn module_graph(
    m: &ModuleDef,
    patterns: &BTreeMap<&str, &PatternTemplate>,
) -> Result<(SchemaGraph, Vec<Diagnostic>), ResolveErrorKind> {
    let Some(template_name) = &m.instantiates else {
        if !m.renames.is_empty() || !m.deletions.is_empty() {
            return Err(ResolveErrorKind::NotAnInstantiation);
        }
        return Ok((m.local_graph.clone(), Vec::new()));
    };
    let template = patterns
        .get(template_name.as_str())
        .ok_or_else(|| ResolveErrorKind::UnknownPattern(template_name.clone()))?;
    let mut inst = Instantiation::of(template_name);
    for (from, to) in &m.renames {
        match template.graph.category_of(from) {
            Some(Category::Class) => inst.rename_classes.insert(from.clone(), to.clone()),
            Some(Category::Property(_)) => inst.rename_properties.insert(from.clone(), to.clone()),
            Some(_) => return Err(ResolveErrorKind::CategoryMismatch(format!("only classes and properties can be renamed, not `{from}`"))),
            None => return Err(ResolveErrorKind::UnknownElement(format!("`{from}` in pattern {template_name}"))),
        };
    }
    inst.deletions = m.deletions.iter().cloned().collect();
    inst.additions = m.local_graph.clone();
    instantiate_with_notes(template, &inst).map_err(ResolveErrorKind::from)
}

/// Looks `name` up from module `here`: plain names in its own graph,
/// `Module:Name` in the named module.
fn lookup(name: &str, here: &str, graphs: &BTreeMap<&str, &SchemaGraph>) -> Result<Category, ResolveErrorKind> {
    let (module, local) = match split_qualified(name) {
        Some((m, l)) => (m, l),
        None => (here, name),
    };
    let graph = graphs
        .get(module)
        .ok_or_else(|| ResolveErrorKind::UnknownElement(format!("`{name}` (no module `{module}`)")))?;
    graph
        .category_of(local)
        .ok_or_else(|| ResolveErrorKind::UnknownElement(format!("`{name}`")))
}

fn check_references(m: &ResolvedModule, graphs: &BTreeMap<&str, &SchemaGraph>, errors: &mut Vec<ResolveError>) {
    let mut push = |kind| errors.push(ResolveError { module: m.name.clone(), kind });
    let want_class = |name: &str| -> Result<(), ResolveErrorKind> {
        if name == THING {
            return Ok(());
        }
        match lookup(name, &m.name, graphs)? {
            Category::Class => Ok(()),
            _ => Err(ResolveErrorKind::CategoryMismatch(format!("`{name}` is not a class"))),
        }
    };

    for axiom in &m.extra_axioms {
        let mut names = Vec::new();
        axiom.visit_names(&mut |n, is_prop| names.push((n.clone(), is_prop)));
        for (name, is_prop) in names {
            if split_qualified(&name).is_some_and(|(p, _)| is_datatype_prefix(p)) {
                continue;
            }
            let result = if is_prop {
                match lookup(&name, &m.name, graphs) {
                    Ok(Category::Property(_)) => Ok(()),
                    Ok(_) => Err(ResolveErrorKind::CategoryMismatch(format!("`{name}` is not a property"))),
                    Err(e) => Err(e),
                }
            } else {
                want_class(&name)
            };
            if let Err(kind) = result {
                push(kind);
            }
        }
    }
    for block in &m.disjoint_blocks {
        if let Err(e) = generate_disjointness(block) {
            let crate::axiom::AxiomError::TooFewClasses(n) = e else { unreachable!() };
            push(ResolveErrorKind::TooFewClasses(n));
        }
        for name in block {
            if name == THING {
                push(ResolveErrorKind::CategoryMismatch("owl:Thing cannot be disjoint with anything".into()));
            } else if let Err(kind) = want_class(name) {
                push(kind);
            }
        }
    }
    for (local, other) in &m.bridges {
        if split_qualified(local).is_some() || local == THING {
            push(ResolveErrorKind::CategoryMismatch(format!("bridge source `{local}` must be a local class")));
            continue;
        }
        for name in [local, other] {
            if let Err(kind) = want_class(name) {
                push(kind);
            }
        }
        if split_qualified(other).is_some_and(|(module, _)| module == m.name) {
            push(ResolveErrorKind::CategoryMismatch(format!("bridge target `{other}` is in the same module")));
        }
    }
}

/// Warns when a class name is declared by several modules that are not
/// linked by equivalence bridges.
fn missing_bridges(modules: &[ResolvedModule]) -> Vec<Diagnostic> {
    let mut declared_in: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for m in modules {
        for c in m.graph.classes() {
            declared_in.entry(c).or_default().push(&m.name);
        }
    }
    let mut parent: BTreeMap<(String, String), (String, String)> = BTreeMap::new();
    fn root(parent: &mut BTreeMap<(String, String), (String, String)>, k: (String, String)) -> (String, String) {
        let mut cur = k.clone();
        while let Some(p) = parent.get(&cur) {
            if *p == cur {
                break;
            }
            cur = p.clone();
        }
        parent.insert(k, cur.clone());
        cur
    }
    for m in modules {
        for (local, other) in &m.bridges {
            if let Some((om, oc)) = split_qualified(other) {
                let a = root(&mut parent, (m.name.clone(), local.clone()));
                let b = root(&mut parent, (om.to_owned(), oc.to_owned()));
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent.insert(hi, lo);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (class, mods) in declared_in.into_iter().filter(|(_, m)| m.len() > 1) {
        let groups: BTreeSet<(String, String)> =
            mods.iter().map(|m| root(&mut parent, (m.to_string(), class.to_owned()))).collect();
        if groups.len() > 1 {
            out.push(Diagnostic::warning(
                Code::MissingBridge,
                class,
                format!(
                    "declared in modules {} without equivalence bridges; consider `bridge {class} = {}:{class}.`",
                    mods.join(", "),
                    mods[0]
                ),
            ));
        }
    }
    out
}

/// Edges of one kind, for callers that only care about names.
#[allow(dead_code)]
fn property_kinds(graph: &SchemaGraph) -> BTreeMap<&str, EdgeKind> {
    graph.properties()
}
