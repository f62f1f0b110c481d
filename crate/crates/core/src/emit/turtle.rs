use crate::axiom::{Axiom, EntityCategory, Ontology, OntologyModule};
use crate::expr::{ClassExpr, Iri, PropertyExpr};

use super::{Format, Namer, SerializedOntology};

/// Standard OWL-to-RDF mapping. Class expressions in object position are
/// inline `[ ... ]` nodes; in subject position, and for
/// `owl:AllDisjointClasses`, they get `_:bN` labels numbered in emission
/// order (one counter per file).
pub fn emit_turtle(ontology: &Ontology) -> SerializedOntology {
    let per_module = ontology
        .modules
        .iter()
        .map(|m| {
            let namer = Namer::new(ontology, Some(&m.namespace));
            let mut w = Writer { namer: &namer, blank: 0 };
            let mut out = header(ontology, &namer);
            out.push_str(&w.module(m));
            (m.name.clone(), out)
        })
        .collect();

    let namer = Namer::new(ontology, None);
    let mut w = Writer { namer: &namer, blank: 0 };
    let mut merged = header(ontology, &namer);
    for m in &ontology.modules {
        merged.push_str(&w.module(m));
    }

    let mut w = Writer { namer: &namer, blank: 0 };
    let mut bridges = header(ontology, &namer);
    let lines: Vec<String> = ontology.bridge_axioms().iter().map(|a| w.axiom(a)).collect();
    if !lines.is_empty() {
        bridges.push('\n');
        for l in lines {
            bridges.push_str(&l);
            bridges.push('\n');
        }
    }
    SerializedOntology { format: Format::Turtle, per_module, merged, bridges }
}

fn header(ontology: &Ontology, namer: &Namer) -> String {
    let mut out = String::new();
    for (p, ns) in namer.declarations(ontology) {
        out.push_str(&format!("@prefix {p}: <{ns}> .\n"));
    }
    out
}

struct Writer<'a> {
    namer: &'a Namer,
    blank: usize,
}

impl Writer<'_> {
    fn module(&mut self, m: &OntologyModule) -> String {
        let mut out = format!("\n<{}> a owl:Ontology ;\n  rdfs:label \"{}\" .\n", m.namespace, escape(&m.name));
        let (decls, logical): (Vec<_>, Vec<_>) = m.axioms.iter().partition(|a| !a.is_logical());
        let mut section = |lines: Vec<String>| {
            if !lines.is_empty() {
                out.push('\n');
                for l in lines {
                    out.push_str(&l);
                    out.push('\n');
                }
            }
        };
        section(decls.iter().map(|a| self.axiom(a)).collect());
        section(
            m.annotations
                .iter()
                .map(|a| {
                    let property = super::compact_standard(a.property.as_str())
                        .unwrap_or_else(|| self.namer.turtle(&a.property));
                    format!("{} {property} <{}> .", self.namer.turtle(&a.subject), a.value)
                })
                .collect(),
        );
        section(logical.iter().map(|a| self.axiom(a)).collect());
        out
    }

    fn axiom(&mut self, a: &Axiom<Iri>) -> String {
        match a {
            Axiom::Declaration(iri, cat) => {
                let class = match cat {
                    EntityCategory::Class => "owl:Class",
                    EntityCategory::ObjectProperty => "owl:ObjectProperty",
                    EntityCategory::DataProperty => "owl:DatatypeProperty",
                    EntityCategory::Individual => "owl:NamedIndividual",
                };
                format!("{} a {class} .", self.namer.turtle(iri))
            }
            Axiom::SubClassOf(x, y) => self.statement(x, "rdfs:subClassOf", y),
            Axiom::EquivalentClasses(x, y) => self.statement(x, "owl:equivalentClass", y),
            Axiom::DisjointClasses(cs) if cs.len() == 2 => {
                format!("{} owl:disjointWith {} .", self.namer.turtle(&cs[0]), self.namer.turtle(&cs[1]))
            }
            Axiom::DisjointClasses(cs) => {
                let label = self.next_blank();
                let members: Vec<String> = cs.iter().map(|c| self.namer.turtle(c)).collect();
                format!("{label} a owl:AllDisjointClasses ;\n  owl:members ( {} ) .", members.join(" "))
            }
            Axiom::ClassAssertion(i, c) => format!("{} a {} .", self.namer.turtle(i), self.namer.turtle(c)),
        }
    }

    fn next_blank(&mut self) -> String {
        let label = format!("_:b{}", self.blank);
        self.blank += 1;
        label
    }

    fn statement(&mut self, subject: &ClassExpr<Iri>, predicate: &str, object: &ClassExpr<Iri>) -> String {
        match self.description(subject) {
            None => format!("{} {predicate} {} .", self.term(subject), self.term(object)),
            Some(pairs) => {
                let label = self.next_blank();
                let object = self.term(object);
                format!("{label} {} ;\n  {predicate} {object} .", pairs.join(" ;\n  "))
            }
        }
    }

    /// Name of a named class or datatype, else an inline `[ ... ]` node.
    fn term(&self, e: &ClassExpr<Iri>) -> String {
        match self.description(e) {
            None => match e {
                ClassExpr::Thing => "owl:Thing".to_owned(),
                ClassExpr::Class(c) => self.namer.turtle(c),
                ClassExpr::Datatype(d) => d.clone(),
                _ => unreachable!("complex expressions have a description"),
            },
            Some(pairs) => format!("[ {} ]", pairs.join(" ; ")),
        }
    }

    /// Predicate-object pairs describing a complex expression.
    fn description(&self, e: &ClassExpr<Iri>) -> Option<Vec<String>> {
        let restriction = |p: &PropertyExpr<Iri>| vec!["a owl:Restriction".to_owned(), format!("owl:onProperty {}", self.property(p))];
        Some(match e {
            ClassExpr::Thing | ClassExpr::Class(_) | ClassExpr::Datatype(_) => return None,
            ClassExpr::Some(p, f) => {
                let mut v = restriction(p);
                v.push(format!("owl:someValuesFrom {}", self.term(f)));
                v
            }
            ClassExpr::Only(p, f) => {
                let mut v = restriction(p);
                v.push(format!("owl:allValuesFrom {}", self.term(f)));
                v
            }
            ClassExpr::Max(n, p, f) => {
                let mut v = restriction(p);
                if matches!(**f, ClassExpr::Thing) {
                    v.push(format!("owl:maxCardinality \"{n}\"^^xsd:nonNegativeInteger"));
                } else {
                    v.push(format!("owl:maxQualifiedCardinality \"{n}\"^^xsd:nonNegativeInteger"));
                    let on = if matches!(**f, ClassExpr::Datatype(_)) { "owl:onDataRange" } else { "owl:onClass" };
                    v.push(format!("{on} {}", self.term(f)));
                }
                v
            }
            ClassExpr::And(es) => {
                let members: Vec<String> = es.iter().map(|x| self.term(x)).collect();
                vec!["a owl:Class".to_owned(), format!("owl:intersectionOf ( {} )", members.join(" "))]
            }
        })
    }

    fn property(&self, p: &PropertyExpr<Iri>) -> String {
        let name = self.namer.turtle(&p.name);
        if p.inverse {
            format!("[ owl:inverseOf {name} ]")
        } else {
            name
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
