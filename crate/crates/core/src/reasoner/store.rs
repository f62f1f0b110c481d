use std::collections::BTreeSet;
use std::fmt;

use oxrdf::{NamedOrBlankNode, Term};

use crate::emit::{parse_triples, ReadError};
use crate::expr::Iri;

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub lexical: String,
    /// Full datatype IRI.
    pub datatype: String,
}

impl Literal {
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal { lexical: lexical.into(), datatype: XSD_STRING.to_owned() }
    }
}

/// Object of a property assertion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Individual(Iri),
    Literal(Literal),
}

impl Value {
    pub fn individual(iri: impl Into<String>) -> Self {
        Value::Individual(Iri::new(iri))
    }

    pub fn as_individual(&self) -> Option<&Iri> {
        match self {
            Value::Individual(i) => Some(i),
            Value::Literal(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Individual(i) => write!(f, "{i}"),
            Value::Literal(l) if l.datatype == XSD_STRING => write!(f, "\"{}\"", l.lexical),
            Value::Literal(l) => write!(f, "\"{}\"^^<{}>", l.lexical, l.datatype),
        }
    }
}

/// An ABox: individuals with class and property assertions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceStore {
    pub individuals: BTreeSet<Iri>,
    pub class_assertions: BTreeSet<(Iri, Iri)>,
    pub property_assertions: BTreeSet<(Iri, Iri, Value)>,
}

impl InstanceStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_type(&mut self, individual: &str, class: &str) -> &mut Self {
        self.individuals.insert(Iri::new(individual));
        self.class_assertions.insert((Iri::new(individual), Iri::new(class)));
        self
    }

    pub fn add_property(&mut self, subject: &str, property: &str, object: Value) -> &mut Self {
        self.individuals.insert(Iri::new(subject));
        if let Value::Individual(o) = &object {
            self.individuals.insert(o.clone());
        }
        self.property_assertions.insert((Iri::new(subject), Iri::new(property), object));
        self
    }

    pub fn len(&self) -> usize {
        self.class_assertions.len() + self.property_assertions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0 && self.individuals.is_empty()
    }
}

/// Reads instance data: `s a C` for class assertions, `s p o` for
/// property assertions, objects being IRIs or literals.
pub fn read_instance_store(text: &str) -> Result<InstanceStore, ReadError> {
    let mut store = InstanceStore::new();
    for t in parse_triples(text)? {
        let NamedOrBlankNode::NamedNode(s) = &t.subject else {
            return Err(ReadError::UnsupportedConstruct("blank node in instance data".into()));
        };
        match (&t.object, t.predicate.as_str()) {
            (Term::NamedNode(c), RDF_TYPE) => {
                store.add_type(s.as_str(), c.as_str());
            }
            (Term::NamedNode(o), p) => {
                store.add_property(s.as_str(), p, Value::individual(o.as_str()));
            }
            (Term::Literal(l), p) => {
                let lit = Literal { lexical: l.value().to_owned(), datatype: l.datatype().as_str().to_owned() };
                store.add_property(s.as_str(), p, Value::Literal(lit));
            }
            _ => return Err(ReadError::UnsupportedConstruct("blank node in instance data".into())),
        }
    }
    Ok(store)
}

/// Writes a store as Turtle, one triple per line, abbreviating IRIs in
/// `default_ns` as `:local` and the given `(prefix, namespace)` pairs.
pub fn emit_instance_turtle(store: &InstanceStore, default_ns: Option<&str>, prefixes: &[(String, String)]) -> String {
    let mut all: Vec<(String, String)> = Vec::new();
    if let Some(ns) = default_ns {
        all.push((String::new(), ns.to_owned()));
    }
    all.extend(prefixes.iter().cloned());
    let name = |iri: &Iri| {
        let s = iri.as_str();
        let local = iri.local_name();
        let simple = !local.is_empty() && local.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        all.iter()
            .find(|(_, ns)| simple && s.len() == ns.len() + local.len() && s.starts_with(ns.as_str()))
            .map(|(p, _)| format!("{p}:{local}"))
            .unwrap_or_else(|| format!("<{s}>"))
    };
    let mut out = String::new();
    for (p, ns) in &all {
        out.push_str(&format!("@prefix {p}: <{ns}> .\n"));
    }
    if !all.is_empty() {
        out.push('\n');
    }
    for (i, c) in &store.class_assertions {
        out.push_str(&format!("{} a {} .\n", name(i), name(c)));
    }
    for (s, p, o) in &store.property_assertions {
        let object = match o {
            Value::Individual(i) => name(i),
            Value::Literal(l) if l.datatype == XSD_STRING => format!("\"{}\"", escape(&l.lexical)),
            Value::Literal(l) => format!("\"{}\"^^<{}>", escape(&l.lexical), l.datatype),
        };
        out.push_str(&format!("{} {} {object} .\n", name(s), name(p)));
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}
