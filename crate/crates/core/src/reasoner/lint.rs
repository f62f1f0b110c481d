use std::collections::{BTreeMap, BTreeSet};

use crate::axiom::{Axiom, AxiomKind, EntityCategory, Ontology};
use crate::diagnostic::{Code, Diagnostic};
use crate::expr::{ClassExpr, Iri};
use crate::schema::EdgeKind;

/// Modelling review of a compiled ontology. Never reports errors.
///
/// - one informational checklist per edge: selected and unselected kinds
/// - a warning per class outside every disjointness axiom (classes bridged
///   to a disjoint class count as covered)
/// - a warning per property with neither a domain-shaped axiom
///   (`R some X SubClassOf C`) nor a range-shaped one (`... SubClassOf R
///   only X`, `inverse R some X SubClassOf C`); a note when only one side
///   is present
/// - a note per pair of same-named classes in different modules without a
///   bridge
pub fn lint(ontology: &Ontology) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let display = |iri: &Iri| display_name(ontology, iri);

    for m in &ontology.modules {
        for e in &m.edges {
            let kinds: Vec<AxiomKind> = AxiomKind::ALL
                .into_iter()
                .filter(|k| e.kind == EdgeKind::Object || !k.object_only())
                .collect();
            let list = |sel: bool| {
                let names: Vec<&str> = kinds.iter().filter(|k| e.selection.contains(**k) == sel).map(|k| k.name()).collect();
                if names.is_empty() { "none".to_owned() } else { names.join(", ") }
            };
            let edge = format!(
                "{} -{}-> {}",
                e.source.render(display),
                display(&e.property),
                e.target.render(display)
            );
            out.push(Diagnostic::info(
                Code::Checklist,
                display(&e.property),
                format!("{edge}: selected {}; unselected {}", list(true), list(false)),
            ));
        }
    }

    let axioms = ontology.merged_axioms();
    let mut classes = BTreeSet::new();
    let mut properties = BTreeSet::new();
    for a in &axioms {
        if let Axiom::Declaration(iri, cat) = a {
            match cat {
                EntityCategory::Class => classes.insert(iri.clone()),
                EntityCategory::ObjectProperty | EntityCategory::DataProperty => properties.insert(iri.clone()),
                EntityCategory::Individual => false,
            };
        }
    }

    let mut covered: BTreeSet<Iri> = BTreeSet::new();
    let mut bridges: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    for a in &axioms {
        match a {
            Axiom::DisjointClasses(cs) => covered.extend(cs.iter().cloned()),
            Axiom::EquivalentClasses(ClassExpr::Class(x), ClassExpr::Class(y)) => {
                bridges.entry(x.clone()).or_default().insert(y.clone());
                bridges.entry(y.clone()).or_default().insert(x.clone());
            }
            _ => {}
        }
    }
    // Close coverage over bridges.
    let mut stack: Vec<Iri> = covered.iter().cloned().collect();
    while let Some(c) = stack.pop() {
        for d in bridges.get(&c).into_iter().flatten() {
            if covered.insert(d.clone()) {
                stack.push(d.clone());
            }
        }
    }
    for c in &classes {
        if !covered.contains(c) {
            out.push(Diagnostic::warning(Code::NoDisjointness, display(c), "class appears in no disjointness axiom"));
        }
    }

    for p in &properties {
        let (mut domain, mut range) = (false, false);
        for a in &axioms {
            if let Axiom::SubClassOf(sub, sup) = a {
                match (sub, sup) {
                    (ClassExpr::Some(q, _), ClassExpr::Class(_)) if q.name == *p => {
                        if q.inverse {
                            range = true;
                        } else {
                            domain = true;
                        }
                    }
                    (_, ClassExpr::Only(q, _)) if q.name == *p && !q.inverse => range = true,
                    _ => {}
                }
            }
        }
        match (domain, range) {
            (false, false) => out.push(Diagnostic::warning(
                Code::NoDomainOrRange,
                display(p),
                "property has neither domain-family nor range-family axioms",
            )),
            (true, false) => out.push(Diagnostic::info(Code::DomainOnly, display(p), "domain-family axioms only")),
            (false, true) => out.push(Diagnostic::info(Code::RangeOnly, display(p), "range-family axioms only")),
            (true, true) => {}
        }
    }

    // Bridged classes, transitively: the component's smallest member.
    let mut component: BTreeMap<&Iri, &Iri> = BTreeMap::new();
    for start in bridges.keys() {
        if component.contains_key(start) {
            continue;
        }
        let mut members = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for d in bridges.get(c).into_iter().flatten() {
                if members.insert(d) {
                    stack.push(d);
                }
            }
        }
        let root = *members.first().expect("non-empty");
        for m in members {
            component.insert(m, root);
        }
    }
    let bridged = |a: &Iri, b: &Iri| component.get(a).is_some_and(|ra| component.get(b) == Some(ra));

    let mut by_local: BTreeMap<&str, Vec<&Iri>> = BTreeMap::new();
    for c in &classes {
        by_local.entry(c.local_name()).or_default().push(c);
    }
    for group in by_local.values() {
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                if !bridged(a, b) {
                    out.push(Diagnostic::info(
                        Code::MissingBridge,
                        display(a),
                        format!("{} and {} share a name but no equivalence bridge", display(a), display(b)),
                    ));
                }
            }
        }
    }
    out
}

/// `Module:Local` for module entities, the IRI otherwise.
fn display_name(ontology: &Ontology, iri: &Iri) -> String {
    ontology
        .modules
        .iter()
        .find(|m| m.namespace == iri.namespace())
        .map(|m| format!("{}:{}", m.name, iri.local_name()))
        .unwrap_or_else(|| iri.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiom::{AxiomSelection, EdgeSummary, OntologyModule};
    use crate::diagnostic::Severity;
    use crate::expr::PropertyExpr;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://ex.org/M/{s}"))
    }

    fn module(axioms: Vec<Axiom<Iri>>, edges: Vec<EdgeSummary>) -> Ontology {
        let mut o = Ontology::empty("t", "http://ex.org/");
        o.modules.push(OntologyModule { name: "M".into(), namespace: "http://ex.org/M/".into(), axioms, annotations: vec![], edges });
        o
    }

    #[test]
    fn fully_axiomatized_edge_has_no_warnings() {
        let (a, b, r) = (iri("A"), iri("B"), iri("R"));
        let mut sel = AxiomSelection::new();
        for k in AxiomKind::ALL {
            sel.insert(k);
        }
        let edge = EdgeSummary {
            property: r.clone(),
            source: ClassExpr::Class(a.clone()),
            target: ClassExpr::Class(b.clone()),
            kind: EdgeKind::Object,
            selection: sel.clone(),
        };
        let mut axioms = vec![
            Axiom::Declaration(a.clone(), EntityCategory::Class),
            Axiom::Declaration(b.clone(), EntityCategory::Class),
            Axiom::Declaration(r.clone(), EntityCategory::ObjectProperty),
        ];
        for k in AxiomKind::ALL {
            axioms.push(k.instantiate(&ClassExpr::Class(a.clone()), &r, &ClassExpr::Class(b.clone()), &ClassExpr::Thing));
        }
        let diags = lint(&module(axioms, vec![edge]));
        assert!(diags.iter().all(|d| d.severity == Severity::Info), "{diags:?}");
        assert_eq!(diags.iter().filter(|d| d.code == Code::Checklist).count(), 1);
        assert!(diags[0].message.ends_with("unselected none"));
    }

    #[test]
    fn class_outside_disjointness_warns_once() {
        let o = module(vec![Axiom::Declaration(iri("A"), EntityCategory::Class)], vec![]);
        let diags = lint(&o);
        assert_eq!(diags, [Diagnostic::warning(Code::NoDisjointness, "M:A", "class appears in no disjointness axiom")]);
    }

    #[test]
    fn range_only_property() {
        let o = module(
            vec![
                Axiom::Declaration(iri("p"), EntityCategory::ObjectProperty),
                Axiom::SubClassOf(ClassExpr::Class(iri("A")), ClassExpr::only(PropertyExpr::named(iri("p")), ClassExpr::Class(iri("B")))),
            ],
            vec![],
        );
        let diags = lint(&o);
        assert_eq!(diags, [Diagnostic::info(Code::RangeOnly, "M:p", "range-family axioms only")]);
    }
}
