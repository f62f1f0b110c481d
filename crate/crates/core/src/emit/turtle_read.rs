use std::collections::BTreeMap;

use oxrdf::{NamedNode, NamedOrBlankNode, Term, Triple};
use oxttl::TurtleParser;
use thiserror::Error;

use crate::axiom::{Annotation, Axiom, EntityCategory, Ontology, OntologyModule};
use crate::expr::{ClassExpr, Iri, PropertyExpr};

use super::{compact_standard, OWL, RDF, RDFS, XSD};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReadError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: u64, column: u64, message: String },
    #[error("unsupported construct: {0}")]
    UnsupportedConstruct(String),
}

/// Parses Turtle text into triples, in document order.
pub(crate) fn parse_triples(text: &str) -> Result<Vec<Triple>, ReadError> {
    TurtleParser::new()
        .for_slice(text)
        .map(|t| {
            t.map_err(|e| {
                let at = e.location().start;
                ReadError::Syntax { line: at.line + 1, column: at.column + 1, message: e.message().to_owned() }
            })
        })
        .collect()
}

fn owl(local: &str) -> String {
    format!("{OWL}{local}")
}

fn rdf(local: &str) -> String {
    format!("{RDF}{local}")
}

fn rdfs(local: &str) -> String {
    format!("{RDFS}{local}")
}

/// Predicates that only ever occur inside blank-node descriptions.
const DESCRIPTION_PREDICATES: [&str; 9] = [
    "onProperty",
    "someValuesFrom",
    "allValuesFrom",
    "maxCardinality",
    "maxQualifiedCardinality",
    "onClass",
    "onDataRange",
    "intersectionOf",
    "inverseOf",
];

type Description = Vec<(String, Term)>;

struct Reader {
    blank: BTreeMap<String, Description>,
}

/// Reads back what [`super::emit_turtle`] writes: per-module blocks opened
/// by `<ns> a owl:Ontology`, declarations, `rdfs:isDefinedBy`
/// annotations, subclass/equivalence/disjointness axioms over restrictions
/// and intersections, and class assertions. Anything else is rejected.
pub fn read_turtle_subset(text: &str) -> Result<Ontology, ReadError> {
    let triples = parse_triples(text)?;
    let mut reader = Reader { blank: BTreeMap::new() };
    for t in &triples {
        if let NamedOrBlankNode::BlankNode(b) = &t.subject {
            reader.blank.entry(b.as_str().to_owned()).or_default().push((t.predicate.as_str().to_owned(), t.object.clone()));
        }
    }
    let labels: BTreeMap<&str, String> = triples
        .iter()
        .filter(|t| t.predicate.as_str() == rdfs("label"))
        .filter_map(|t| match (&t.subject, &t.object) {
            (NamedOrBlankNode::NamedNode(s), Term::Literal(l)) => Some((s.as_str(), l.value().to_owned())),
            _ => None,
        })
        .collect();

    let mut modules: Vec<OntologyModule> = Vec::new();
    for t in &triples {
        let p = t.predicate.as_str();
        if p == rdf("type") && matches!(&t.object, Term::NamedNode(o) if o.as_str() == owl("Ontology")) {
            let NamedOrBlankNode::NamedNode(ns) = &t.subject else {
                return Err(ReadError::UnsupportedConstruct("anonymous ontology".into()));
            };
            let name = labels
                .get(ns.as_str())
                .cloned()
                .unwrap_or_else(|| Iri::new(ns.as_str().trim_end_matches(['/', '#'])).local_name().to_owned());
            modules.push(OntologyModule {
                name,
                namespace: ns.as_str().to_owned(),
                axioms: Vec::new(),
                annotations: Vec::new(),
                edges: Vec::new(),
            });
            continue;
        }
        if p == rdfs("label") && matches!(&t.subject, NamedOrBlankNode::NamedNode(s) if modules.iter().any(|m| m.namespace == s.as_str())) {
            continue;
        }
        if let Some(axiom) = reader.trigger(t)? {
            let module = modules
                .last_mut()
                .ok_or_else(|| ReadError::UnsupportedConstruct("statement before any `owl:Ontology` header".into()))?;
            match axiom {
                Item::Axiom(a) => module.axioms.push(a),
                Item::Annotation(a) => module.annotations.push(a),
            }
        }
    }

    let base = modules
        .first()
        .map(|m| m.namespace.strip_suffix(&format!("{}/", m.name)).unwrap_or(&m.namespace).to_owned())
        .unwrap_or_default();
    let mut ontology = Ontology::empty("ontology", &base);
    ontology.modules = modules;
    Ok(ontology)
}

enum Item {
    Axiom(Axiom<Iri>),
    Annotation(Annotation),
}

impl Reader {
    /// The axiom a top-level triple stands for; `None` for triples that are
    /// part of a blank-node description.
    fn trigger(&self, t: &Triple) -> Result<Option<Item>, ReadError> {
        let p = t.predicate.as_str();
        let subject = match &t.subject {
            NamedOrBlankNode::NamedNode(n) => Some(n),
            NamedOrBlankNode::BlankNode(_) => None,
        };
        if p == rdf("type") {
            let Term::NamedNode(o) = &t.object else { return Err(unsupported(t)) };
            let o = o.as_str();
            let category = match o.strip_prefix(OWL) {
                Some("Class") => Some(EntityCategory::Class),
                Some("ObjectProperty") => Some(EntityCategory::ObjectProperty),
                Some("DatatypeProperty") => Some(EntityCategory::DataProperty),
                Some("NamedIndividual") => Some(EntityCategory::Individual),
                _ => None,
            };
            return match (subject, category) {
                (Some(s), Some(cat)) => Ok(Some(Item::Axiom(Axiom::Declaration(iri(s), cat)))),
                (None, Some(EntityCategory::Class)) => Ok(None),
                (None, _) if o == owl("Restriction") => Ok(None),
                (None, _) if o == owl("AllDisjointClasses") => {
                    let members = self.list(self.get(&t.subject, &owl("members")).ok_or_else(|| unsupported(t))?)?;
                    let names = members.iter().map(|m| self.named(m)).collect::<Result<Vec<_>, _>>()?;
                    Ok(Some(Item::Axiom(Axiom::DisjointClasses(names))))
                }
                (Some(s), None) if !is_vocabulary(o) => {
                    Ok(Some(Item::Axiom(Axiom::ClassAssertion(iri(s), Iri::new(o)))))
                }
                _ => Err(unsupported(t)),
            };
        }
        if p == rdfs("isDefinedBy") {
            let (Some(s), Term::NamedNode(o)) = (subject, &t.object) else { return Err(unsupported(t)) };
            return Ok(Some(Item::Annotation(Annotation { subject: iri(s), property: Iri::new(p), value: iri(o) })));
        }
        if p == rdfs("subClassOf") || p == owl("equivalentClass") {
            let sub = self.expr(&subject_term(t))?;
            let sup = self.expr(&t.object)?;
            let a = if p == rdfs("subClassOf") { Axiom::SubClassOf(sub, sup) } else { Axiom::EquivalentClasses(sub, sup) };
            return Ok(Some(Item::Axiom(a)));
        }
        if p == owl("disjointWith") {
            let a = self.named(&subject_term(t))?;
            let b = self.named(&t.object)?;
            return Ok(Some(Item::Axiom(Axiom::DisjointClasses(vec![a, b]))));
        }
        let in_description = subject.is_none()
            && (p == rdf("first") || p == rdf("rest") || p == owl("members")
                || DESCRIPTION_PREDICATES.iter().any(|d| p == owl(d)));
        if in_description {
            return Ok(None);
        }
        Err(unsupported(t))
    }

    fn get<'a>(&'a self, node: &NamedOrBlankNode, predicate: &str) -> Option<&'a Term> {
        let NamedOrBlankNode::BlankNode(b) = node else { return None };
        self.blank.get(b.as_str())?.iter().find(|(p, _)| p == predicate).map(|(_, o)| o)
    }

    fn description(&self, term: &Term) -> Option<&Description> {
        match term {
            Term::BlankNode(b) => self.blank.get(b.as_str()),
            _ => None,
        }
    }

    fn list(&self, head: &Term) -> Result<Vec<Term>, ReadError> {
        let mut out = Vec::new();
        let mut cur = head.clone();
        loop {
            if matches!(&cur, Term::NamedNode(n) if n.as_str() == rdf("nil")) {
                return Ok(out);
            }
            let d = self.description(&cur).ok_or_else(|| ReadError::UnsupportedConstruct("malformed RDF list".into()))?;
            let field = |k: &str| d.iter().find(|(p, _)| *p == rdf(k)).map(|(_, o)| o.clone());
            let (Some(first), Some(rest)) = (field("first"), field("rest")) else {
                return Err(ReadError::UnsupportedConstruct("malformed RDF list".into()));
            };
            out.push(first);
            cur = rest;
        }
    }

    fn named(&self, term: &Term) -> Result<Iri, ReadError> {
        match self.expr(term)? {
            ClassExpr::Class(c) => Ok(c),
            other => Err(ReadError::UnsupportedConstruct(format!("expected a named class, found {other}"))),
        }
    }

    fn expr(&self, term: &Term) -> Result<ClassExpr<Iri>, ReadError> {
        match term {
            Term::NamedNode(n) => Ok(named_expr(n)),
            Term::Literal(l) => Err(ReadError::UnsupportedConstruct(format!("literal {l} as a class"))),
            Term::BlankNode(_) => {
                let d = self.description(term).ok_or_else(|| ReadError::UnsupportedConstruct("undescribed blank node".into()))?;
                let field = |k: &str| d.iter().find(|(p, _)| *p == owl(k)).map(|(_, o)| o);
                for (p, _) in d {
                    let known = p == &rdf("type")
                        || p == &rdfs("subClassOf")
                        || p == &owl("equivalentClass")
                        || DESCRIPTION_PREDICATES.iter().any(|k| *p == owl(k));
                    if !known {
                        return Err(ReadError::UnsupportedConstruct(compact(p)));
                    }
                }
                if let Some(list) = field("intersectionOf") {
                    let parts = self.list(list)?.iter().map(|e| self.expr(e)).collect::<Result<Vec<_>, _>>()?;
                    return Ok(ClassExpr::And(parts));
                }
                let property = self.property(field("onProperty").ok_or_else(|| {
                    ReadError::UnsupportedConstruct("blank node that is neither a restriction nor an intersection".into())
                })?)?;
                if let Some(f) = field("someValuesFrom") {
                    return Ok(ClassExpr::some(property, self.expr(f)?));
                }
                if let Some(f) = field("allValuesFrom") {
                    return Ok(ClassExpr::only(property, self.expr(f)?));
                }
                if let Some(n) = field("maxCardinality") {
                    return Ok(ClassExpr::max(cardinality(n)?, property, ClassExpr::Thing));
                }
                if let Some(n) = field("maxQualifiedCardinality") {
                    let filler = field("onClass")
                        .or_else(|| field("onDataRange"))
                        .ok_or_else(|| ReadError::UnsupportedConstruct("qualified cardinality without a filler".into()))?;
                    return Ok(ClassExpr::max(cardinality(n)?, property, self.expr(filler)?));
                }
                Err(ReadError::UnsupportedConstruct("restriction kind".into()))
            }
            #[allow(unreachable_patterns)]
            _ => Err(ReadError::UnsupportedConstruct("quoted triple".into())),
        }
    }

    fn property(&self, term: &Term) -> Result<PropertyExpr<Iri>, ReadError> {
        match term {
            Term::NamedNode(n) => Ok(PropertyExpr::named(iri(n))),
            Term::BlankNode(_) => match self.description(term).map(|d| d.as_slice()) {
                Some([(p, Term::NamedNode(n))]) if *p == owl("inverseOf") => Ok(PropertyExpr::inverse(iri(n))),
                _ => Err(ReadError::UnsupportedConstruct("property expression".into())),
            },
            _ => Err(ReadError::UnsupportedConstruct("literal as a property".into())),
        }
    }
}

fn iri(n: &NamedNode) -> Iri {
    Iri::new(n.as_str())
}

fn subject_term(t: &Triple) -> Term {
    match &t.subject {
        NamedOrBlankNode::NamedNode(n) => Term::NamedNode(n.clone()),
        NamedOrBlankNode::BlankNode(b) => Term::BlankNode(b.clone()),
    }
}

fn named_expr(n: &NamedNode) -> ClassExpr<Iri> {
    let s = n.as_str();
    if s == owl("Thing") {
        ClassExpr::Thing
    } else if s.starts_with(XSD) || s.starts_with(RDFS) || s.starts_with(RDF) {
        ClassExpr::Datatype(compact(s))
    } else {
        ClassExpr::Class(iri(n))
    }
}

fn is_vocabulary(iri: &str) -> bool {
    [OWL, RDF, RDFS, XSD].iter().any(|ns| iri.starts_with(ns))
}

fn compact(iri: &str) -> String {
    compact_standard(iri).unwrap_or_else(|| format!("<{iri}>"))
}

fn cardinality(term: &Term) -> Result<u32, ReadError> {
    match term {
        Term::Literal(l) => l.value().parse().map_err(|_| ReadError::UnsupportedConstruct(format!("cardinality {l}"))),
        _ => Err(ReadError::UnsupportedConstruct("non-literal cardinality".into())),
    }
}

fn unsupported(t: &Triple) -> ReadError {
    ReadError::UnsupportedConstruct(format!("triple with predicate {}", compact(t.predicate.as_str())))
}
