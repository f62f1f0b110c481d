//! Serializations: Manchester-style frames (`.omn`), Turtle (`.ttl`) and
//! Graphviz (`.dot`), plus a reader for the Turtle subset written here.
//!
//! All output is byte-deterministic: entities appear in declaration order,
//! prefixes in a fixed order, lines end in `\n` and nested content is
//! indented by two spaces.

mod dot;
mod manchester;
mod turtle;
mod turtle_read;

use std::collections::BTreeMap;

use crate::axiom::Ontology;
use crate::dsl::ResolvedProject;
use crate::expr::Iri;
use crate::schema::SchemaError;

pub use dot::emit_dot;
pub use manchester::emit_manchester;
pub use turtle::emit_turtle;
pub use turtle_read::{read_turtle_subset, ReadError};
pub(crate) use turtle_read::parse_triples;

pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

/// The fixed vocabulary prefixes, in output order.
pub(crate) const STANDARD_PREFIXES: [(&str, &str); 4] = [("owl", OWL), ("rdf", RDF), ("rdfs", RDFS), ("xsd", XSD)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Manchester,
    Turtle,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Manchester => "omn",
            Format::Turtle => "ttl",
        }
    }
}

/// Text of every module file, the merged file and the mapping file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerializedOntology {
    pub format: Format,
    /// `(module name, text)` in module order.
    pub per_module: Vec<(String, String)>,
    pub merged: String,
    /// Only the equivalence bridges, kept apart from the modules.
    pub bridges: String,
}

impl SerializedOntology {
    /// `(file name, text)` for every output file of `project`.
    pub fn files(&self, project: &str) -> Vec<(String, String)> {
        let ext = self.format.extension();
        let mut out: Vec<(String, String)> =
            self.per_module.iter().map(|(m, text)| (format!("{m}.{ext}"), text.clone())).collect();
        out.push((format!("{project}.merged.{ext}"), self.merged.clone()));
        out.push((format!("{project}.bridges.{ext}"), self.bridges.clone()));
        out
    }
}

/// Every file of a compile, as `(file name, text)`: for each format the
/// module files, then `<project>.merged.<ext>` and `<project>.bridges.<ext>`.
pub fn compile_outputs(ontology: &Ontology, project: &str, formats: &[Format]) -> Vec<(String, String)> {
    formats
        .iter()
        .flat_map(|f| match f {
            Format::Manchester => emit_manchester(ontology),
            Format::Turtle => emit_turtle(ontology),
        }
        .files(project))
        .collect()
}

/// One DOT file per module plus `<project>.merged.dot` for the union of
/// all module graphs.
pub fn diagram_outputs(project: &ResolvedProject, name: &str) -> Result<Vec<(String, String)>, SchemaError> {
    let mut out: Vec<(String, String)> = project.modules.iter().map(|m| (format!("{}.dot", m.name), emit_dot(&m.graph))).collect();
    out.push((format!("{name}.merged.dot"), emit_dot(&project.merged_graph()?)));
    Ok(out)
}

/// Abbreviates IRIs against the module namespaces of an ontology.
#[derive(Debug, Clone)]
pub(crate) struct Namer {
    /// namespace → prefix
    prefixes: BTreeMap<String, String>,
    default_ns: Option<String>,
}

impl Namer {
    pub fn new(ontology: &Ontology, default_ns: Option<&str>) -> Self {
        let mut prefixes: BTreeMap<String, String> =
            ontology.prefixes().into_iter().map(|(p, ns)| (ns, p)).collect();
        for (p, ns) in STANDARD_PREFIXES {
            prefixes.insert(ns.to_owned(), p.to_owned());
        }
        Namer { prefixes, default_ns: default_ns.map(str::to_owned) }
    }

    /// Prefix lines as `(prefix without colon, namespace)`, default first,
    /// then the standard vocabularies, then module namespaces.
    pub fn declarations(&self, ontology: &Ontology) -> Vec<(String, String)> {
        let mut out = Vec::new();
        if let Some(ns) = &self.default_ns {
            out.push((String::new(), ns.clone()));
        }
        out.extend(STANDARD_PREFIXES.iter().map(|(p, ns)| (p.to_string(), ns.to_string())));
        out.extend(ontology.prefixes());
        out
    }

    /// `(prefix, local)` when the IRI can be abbreviated; `""` is the
    /// default prefix.
    pub fn split<'a>(&self, iri: &'a str) -> Option<(&str, &'a str)> {
        let local_start = iri.rfind(['/', '#']).map(|i| i + 1)?;
        let (ns, local) = iri.split_at(local_start);
        if !is_pn_local(local) {
            return None;
        }
        if self.default_ns.as_deref() == Some(ns) {
            return Some(("", local));
        }
        self.prefixes.get(ns).map(|p| (p.as_str(), local))
    }

    /// Turtle form: `:Local`, `prefix:Local` or `<iri>`.
    pub fn turtle(&self, iri: &Iri) -> String {
        match self.split(iri.as_str()) {
            Some((p, local)) => format!("{p}:{local}"),
            None => format!("<{}>", iri.as_str()),
        }
    }

    /// Manchester form: default-namespace names are written bare.
    pub fn manchester(&self, iri: &Iri) -> String {
        match self.split(iri.as_str()) {
            Some(("", local)) => local.to_owned(),
            Some((p, local)) => format!("{p}:{local}"),
            None => format!("<{}>", iri.as_str()),
        }
    }
}

/// Conservative check for a local name that needs no escaping.
fn is_pn_local(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphanumeric() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        && !s.ends_with('-')
}

/// `xsd:string` for the full XSD string IRI, and so on.
pub(crate) fn compact_standard(iri: &str) -> Option<String> {
    STANDARD_PREFIXES
        .iter()
        .find_map(|(p, ns)| iri.strip_prefix(ns).map(|local| format!("{p}:{local}")))
}
