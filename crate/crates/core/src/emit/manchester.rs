use std::collections::BTreeMap;

use crate::axiom::{Axiom, EntityCategory, Ontology, OntologyModule};
use crate::expr::{ClassExpr, Iri};

use super::{Format, Namer, SerializedOntology};

/// One frame per declared entity. Each logical axiom is printed once, as
/// the sentence of the axiom catalog (`Recipe SubClassOf requires only
/// Situation`), inside the frame of its named subclass, else its named
/// superclass, else its first property. Disjointness over three or more
/// classes goes into a trailing `DisjointClasses:` frame.
pub fn emit_manchester(ontology: &Ontology) -> SerializedOntology {
    let per_module = ontology
        .modules
        .iter()
        .map(|m| {
            let namer = Namer::new(ontology, Some(&m.namespace));
            let mut out = header(ontology, &namer);
            out.push_str(&body(m, &namer));
            (m.name.clone(), out)
        })
        .collect();

    let namer = Namer::new(ontology, None);
    let mut merged = header(ontology, &namer);
    for m in &ontology.modules {
        merged.push_str(&body(m, &namer));
    }

    let mut bridges = header(ontology, &namer);
    for a in ontology.bridge_axioms() {
        if let Axiom::EquivalentClasses(x, y) = a {
            let name = |i: &Iri| namer.manchester(i);
            bridges.push_str(&format!("\nEquivalentClasses: {}, {}\n", x.render(name), y.render(name)));
        }
    }
    SerializedOntology { format: Format::Manchester, per_module, merged, bridges }
}

fn header(ontology: &Ontology, namer: &Namer) -> String {
    let mut out = String::new();
    for (p, ns) in namer.declarations(ontology) {
        out.push_str(&format!("Prefix: {p}: <{ns}>\n"));
    }
    out
}

fn body(module: &OntologyModule, namer: &Namer) -> String {
    let name = |i: &Iri| namer.manchester(i);
    let mut frames: Vec<(&Iri, EntityCategory, Vec<String>)> = Vec::new();
    let mut index: BTreeMap<&Iri, usize> = BTreeMap::new();
    for a in &module.axioms {
        if let Axiom::Declaration(iri, cat) = a {
            index.insert(iri, frames.len());
            frames.push((iri, *cat, Vec::new()));
        }
    }
    for ann in &module.annotations {
        if let Some(&i) = index.get(&ann.subject) {
            let property = super::compact_standard(ann.property.as_str()).unwrap_or_else(|| name(&ann.property));
            frames[i].2.push(format!("Annotations: {property} <{}>", ann.value));
        }
    }

    let mut misc = Vec::new();
    for a in module.axioms.iter().filter(|a| a.is_logical()) {
        let (anchor, line) = match a {
            Axiom::SubClassOf(x, y) | Axiom::EquivalentClasses(x, y) => (expression_anchor(x, y, &index), a.render(name)),
            Axiom::DisjointClasses(cs) if cs.len() == 2 => {
                (cs.iter().find(|c| index.contains_key(c)), a.render(name))
            }
            Axiom::DisjointClasses(_) => (None, a.render(name)),
            Axiom::ClassAssertion(i, c) if index.contains_key(i) => (Some(i), format!("Types: {}", name(c))),
            Axiom::ClassAssertion(..) | Axiom::Declaration(..) => (None, a.render(name)),
        };
        match anchor.and_then(|iri| index.get(iri)) {
            Some(&i) => frames[i].2.push(line),
            None => misc.push(line),
        }
    }

    let mut out = String::new();
    for (iri, cat, lines) in frames {
        out.push_str(&format!("\n{}: {}\n", cat.manchester_keyword(), name(iri)));
        for line in lines {
            out.push_str(&format!("  {line}\n"));
        }
    }
    for line in misc {
        out.push_str(&format!("\n{line}\n"));
    }
    out
}

fn expression_anchor<'a>(
    sub: &'a ClassExpr<Iri>,
    sup: &'a ClassExpr<Iri>,
    index: &BTreeMap<&Iri, usize>,
) -> Option<&'a Iri> {
    let local = |e: &'a ClassExpr<Iri>| e.as_class().filter(|c| index.contains_key(c));
    local(sub).or_else(|| local(sup)).or_else(|| {
        let mut first = None;
        for e in [sub, sup] {
            e.visit_names(&mut |n, is_prop| {
                if is_prop && first.is_none() && index.contains_key(n) {
                    first = Some(n);
                }
            });
        }
        first
    })
}
