//! Shared test support: a naive reference materializer and random
//! ontology/store generators.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use odp_forge::axiom::{generate_edge_axioms, Axiom, AxiomKind, AxiomSelection, OntologyModule};
use odp_forge::expr::{ClassExpr, Iri, PropertyExpr};
use odp_forge::reasoner::{Fact, InstanceStore, Literal, Value};
use odp_forge::schema::Edge;
use odp_forge::Ontology;
use proptest::prelude::*;

pub const NS: &str = "http://ex.org/M/";
const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

pub fn iri(local: &str) -> Iri {
    Iri::new(format!("{NS}{local}"))
}

pub fn single_module(axioms: Vec<Axiom<Iri>>) -> Ontology {
    let mut o = Ontology::empty("t", "http://ex.org/");
    o.modules.push(OntologyModule { name: "M".into(), namespace: NS.into(), axioms, annotations: vec![], edges: vec![] });
    o
}

// ---------------------------------------------------------------------------
// Reference materializer
//
// Facts are kept per name (not per equality class) and copied between equal
// names after every round; equality classes are relabelled by hand. Every
// rule is retried on every name until nothing changes, then missing
// existential fillers are added, and the whole thing repeats.

#[derive(Default)]
struct Naive {
    names: BTreeSet<String>,
    class_of: BTreeMap<String, usize>,
    depth: BTreeMap<String, usize>,
    fresh_names: BTreeSet<String>,
    fresh_literals: BTreeSet<(String, String)>,
    types: BTreeSet<(String, String)>,
    props: BTreeSet<(String, String, Obj)>,
    memberships: BTreeSet<(String, String, ClassExpr<Iri>)>,
    created: BTreeSet<(String, String)>,
    counter: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Obj {
    Ind(String),
    Lit(String, String),
}

struct Want {
    who: String,
    key: String,
    prop: PropertyExpr<Iri>,
    filler: ClassExpr<Iri>,
}

pub struct Reference {
    pub facts: BTreeSet<Fact>,
    pub clash: bool,
}

pub fn reference_materialize(ontology: &Ontology, store: &InstanceStore, bound: usize) -> Reference {
    let axioms = ontology.merged_axioms();
    let mut rules: Vec<(String, ClassExpr<Iri>, ClassExpr<Iri>)> = Vec::new();
    let mut blocks: Vec<Vec<Iri>> = Vec::new();
    let mut n = Naive::default();
    for (i, a) in axioms.iter().enumerate() {
        match a {
            Axiom::SubClassOf(l, r) => rules.push((format!("{i}"), l.clone(), r.clone())),
            Axiom::EquivalentClasses(l, r) => {
                rules.push((format!("{i}>"), l.clone(), r.clone()));
                rules.push((format!("{i}<"), r.clone(), l.clone()));
            }
            Axiom::DisjointClasses(cs) => blocks.push(cs.clone()),
            Axiom::ClassAssertion(x, c) => {
                n.add_name(x.as_str(), 0);
                n.types.insert((x.to_string(), c.to_string()));
            }
            Axiom::Declaration(..) => {}
        }
    }
    for x in &store.individuals {
        n.add_name(x.as_str(), 0);
    }
    for (x, c) in &store.class_assertions {
        n.add_name(x.as_str(), 0);
        n.types.insert((x.to_string(), c.to_string()));
    }
    for (s, p, o) in &store.property_assertions {
        n.add_name(s.as_str(), 0);
        let o = match o {
            Value::Individual(y) => {
                n.add_name(y.as_str(), 0);
                Obj::Ind(y.to_string())
            }
            Value::Literal(l) => Obj::Lit(l.lexical.clone(), l.datatype.clone()),
        };
        n.props.insert((s.to_string(), p.to_string(), o));
    }

    loop {
        // Deterministic rules to a fixpoint.
        let wants = loop {
            let mut new_types = Vec::new();
            let mut merges = Vec::new();
            let mut wants = Vec::new();
            for (key, lhs, rhs) in &rules {
                for x in n.names.clone() {
                    if n.holds(&Obj::Ind(x.clone()), lhs) {
                        n.fire(&x, rhs, key, &mut new_types, &mut merges, &mut wants);
                    }
                }
            }
            for (y, key, e) in n.memberships.clone() {
                n.fire(&y, &e, &key, &mut new_types, &mut merges, &mut wants);
            }
            let mut changed = false;
            for t in new_types {
                changed |= n.types.insert(t);
            }
            for (a, b) in merges {
                changed |= n.merge(&a, &b);
            }
            changed |= n.congruence();
            if !changed {
                break wants;
            }
        };

        // Existential fillers, judged against one state.
        let mut todo: BTreeMap<(String, usize), Want> = BTreeMap::new();
        for w in wants {
            let satisfied = n.along(&w.who, &w.prop).iter().any(|o| n.holds(o, &w.filler));
            let class = n.class_of[&w.who];
            let done = n.names.iter().any(|m| n.class_of[m] == class && n.created.contains(&(w.key.clone(), m.clone())));
            let depth = n.names.iter().filter(|m| n.class_of[*m] == class).map(|m| n.depth[m]).min().unwrap();
            if !satisfied && !done && depth < bound {
                todo.entry((w.key.clone(), class)).or_insert(w);
            }
        }
        if todo.is_empty() {
            break;
        }
        for (_, w) in todo {
            n.created.insert((w.key.clone(), w.who.clone()));
            n.counter += 1;
            let fresh = format!("urn:fresh:{}", n.counter);
            if let ClassExpr::Datatype(d) = &w.filler {
                let dt = d.strip_prefix("xsd:").map(|l| format!("{XSD}{l}")).unwrap_or_else(|| d.clone());
                n.fresh_literals.insert((fresh.clone(), dt.clone()));
                n.props.insert((w.who.clone(), w.prop.name.to_string(), Obj::Lit(fresh, dt)));
                continue;
            }
            let class = n.class_of[&w.who];
            let depth = n.names.iter().filter(|m| n.class_of[*m] == class).map(|m| n.depth[m]).min().unwrap();
            n.add_name(&fresh, depth + 1);
            n.fresh_names.insert(fresh.clone());
            if w.prop.inverse {
                n.props.insert((fresh.clone(), w.prop.name.to_string(), Obj::Ind(w.who.clone())));
            } else {
                n.props.insert((w.who.clone(), w.prop.name.to_string(), Obj::Ind(fresh.clone())));
            }
            n.memberships.insert((fresh, format!("{}/f", w.key), w.filler.clone()));
        }
        n.congruence();
    }

    let clash = n.names.iter().any(|x| {
        blocks.iter().any(|b| b.iter().filter(|c| n.types.contains(&(x.clone(), c.to_string()))).count() >= 2)
    });
    Reference { facts: n.visible_facts(), clash }
}

impl Naive {
    fn add_name(&mut self, x: &str, depth: usize) {
        if self.names.insert(x.to_owned()) {
            let id = self.class_of.len() + 1_000_000;
            self.class_of.insert(x.to_owned(), id);
            self.depth.insert(x.to_owned(), depth);
        }
    }

    fn fillers(&self, x: &str, p: &PropertyExpr<Iri>) -> Vec<Obj> {
        let p = p.name.as_str();
        self.props.iter().filter(|(s, q, _)| q == p && s == x).map(|(_, _, o)| o.clone()).collect()
    }

    fn inverse_fillers(&self, x: &str, p: &str) -> Vec<Obj> {
        self.props
            .iter()
            .filter(|(_, q, o)| q == p && *o == Obj::Ind(x.to_owned()))
            .map(|(s, _, _)| Obj::Ind(s.clone()))
            .collect()
    }

    fn along(&self, x: &str, p: &PropertyExpr<Iri>) -> Vec<Obj> {
        if p.inverse {
            self.inverse_fillers(x, p.name.as_str())
        } else {
            self.fillers(x, p)
        }
    }

    fn holds(&self, o: &Obj, e: &ClassExpr<Iri>) -> bool {
        match (o, e) {
            (Obj::Lit(_, dt), ClassExpr::Datatype(d)) => {
                d == "rdfs:Literal" || d.strip_prefix("xsd:").is_some_and(|l| *dt == format!("{XSD}{l}"))
            }
            (Obj::Lit(..), _) => false,
            (Obj::Ind(_), ClassExpr::Thing) => true,
            (Obj::Ind(x), ClassExpr::Class(c)) => self.types.contains(&(x.clone(), c.to_string())),
            (Obj::Ind(x), ClassExpr::Some(p, f)) => self.along(x, p).iter().any(|y| self.holds(y, f)),
            (Obj::Ind(_), ClassExpr::And(es)) => es.iter().all(|e| self.holds(o, e)),
            (Obj::Ind(_), _) => false,
        }
    }

    fn fire(
        &self,
        x: &str,
        e: &ClassExpr<Iri>,
        key: &str,
        types: &mut Vec<(String, String)>,
        merges: &mut Vec<(String, String)>,
        wants: &mut Vec<Want>,
    ) {
        match e {
            ClassExpr::Thing | ClassExpr::Datatype(_) => {}
            ClassExpr::Class(c) => types.push((x.to_owned(), c.to_string())),
            ClassExpr::And(es) => {
                for (i, e) in es.iter().enumerate() {
                    self.fire(x, e, &format!("{key}/a{i}"), types, merges, wants);
                }
            }
            ClassExpr::Only(p, f) => {
                for y in self.along(x, p) {
                    if let Obj::Ind(y) = y {
                        self.fire(&y, f, &format!("{key}/o"), types, merges, wants);
                    }
                }
            }
            ClassExpr::Max(1, p, f) => {
                let ys: Vec<String> = self
                    .along(x, p)
                    .into_iter()
                    .filter(|y| self.holds(y, f))
                    .filter_map(|y| match y {
                        Obj::Ind(y) => Some(y),
                        Obj::Lit(..) => None,
                    })
                    .collect();
                for a in &ys {
                    for b in &ys {
                        merges.push((a.clone(), b.clone()));
                    }
                }
            }
            ClassExpr::Max(..) => {}
            ClassExpr::Some(p, f) => wants.push(Want { who: x.to_owned(), key: format!("{key}/s"), prop: p.clone(), filler: (**f).clone() }),
        }
    }

    fn merge(&mut self, a: &str, b: &str) -> bool {
        let (ca, cb) = (self.class_of[a], self.class_of[b]);
        if ca == cb {
            return false;
        }
        for v in self.class_of.values_mut() {
            if *v == cb {
                *v = ca;
            }
        }
        true
    }

    /// Copies every fact to every equal name.
    fn congruence(&mut self) -> bool {
        let mut members: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (x, c) in &self.class_of {
            members.entry(*c).or_default().push(x.clone());
        }
        let same = |x: &str| members[&self.class_of[x]].clone();
        let mut changed = false;
        for (x, c) in self.types.clone() {
            for y in same(&x) {
                changed |= self.types.insert((y, c.clone()));
            }
        }
        for (s, p, o) in self.props.clone() {
            let objects = match &o {
                Obj::Ind(y) => same(y).into_iter().map(Obj::Ind).collect(),
                lit => vec![lit.clone()],
            };
            for s2 in same(&s) {
                for o2 in &objects {
                    changed |= self.props.insert((s2.clone(), p.clone(), o2.clone()));
                }
            }
        }
        changed
    }

    fn visible_facts(&self) -> BTreeSet<Fact> {
        let named = |x: &String| !self.fresh_names.contains(x);
        let mut out = BTreeSet::new();
        for (x, c) in &self.types {
            if named(x) {
                out.insert(Fact::Type(Iri::new(x.clone()), Iri::new(c.clone())));
            }
        }
        for (s, p, o) in &self.props {
            if !named(s) {
                continue;
            }
            let v = match o {
                Obj::Ind(y) if named(y) => Value::Individual(Iri::new(y.clone())),
                Obj::Lit(l, dt) if !self.fresh_literals.contains(&(l.clone(), dt.clone())) => {
                    Value::Literal(Literal { lexical: l.clone(), datatype: dt.clone() })
                }
                _ => continue,
            };
            out.insert(Fact::Property(Iri::new(s.clone()), Iri::new(p.clone()), v));
        }
        for a in self.names.iter().filter(|x| named(x)) {
            for b in self.names.iter().filter(|x| named(x)) {
                if a < b && self.class_of[a] == self.class_of[b] {
                    out.insert(Fact::Same(Iri::new(a.clone()), Iri::new(b.clone())));
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Generators

pub const CLASSES: [&str; 4] = ["A", "B", "C", "D"];
pub const OBJECT_PROPERTIES: [&str; 2] = ["R", "S"];
pub const DATA_PROPERTY: &str = "d";

/// One catalog axiom on a random edge over a small vocabulary, or `None`
/// when the combination is invalid (e.g. a functionality kind on a data
/// edge).
pub fn catalog_axiom(kind: usize, source: usize, property: usize, target: usize) -> Option<Axiom<Iri>> {
    let kind = AxiomKind::ALL[kind % 15];
    let endpoint = |i: usize| if i % 5 == 4 { "Thing".to_owned() } else { CLASSES[i % 5].to_owned() };
    let edge = if property % 3 == 2 {
        Edge::data(DATA_PROPERTY, &endpoint(source), "xsd:string", [])
    } else {
        Edge::object(OBJECT_PROPERTIES[property % 3], &endpoint(source), &endpoint(target), [])
    };
    let mut sel = AxiomSelection::new();
    sel.insert(kind);
    let axioms = generate_edge_axioms(&edge, &sel).ok()?;
    let a = axioms.into_iter().next()?;
    Some(a.map_names(&mut |n, _| iri(n)))
}

pub fn arb_ontology(max_axioms: usize) -> impl Strategy<Value = Ontology> {
    prop::collection::vec((0..15usize, 0..5usize, 0..3usize, 0..5usize), 0..=max_axioms)
        .prop_map(|specs| single_module(specs.into_iter().filter_map(|(k, s, p, t)| catalog_axiom(k, s, p, t)).collect()))
}

pub fn individual(i: usize) -> Iri {
    Iri::new(format!("http://ex.org/data/i{i}"))
}

/// Stores over at most `max_individuals` individuals.
pub fn arb_store(max_individuals: usize) -> impl Strategy<Value = InstanceStore> {
    (1..=max_individuals).prop_flat_map(|n| {
        (
            prop::collection::vec((0..n, 0..CLASSES.len()), 0..=n + 2),
            prop::collection::vec((0..n, 0..OBJECT_PROPERTIES.len(), 0..n), 0..=n + 2),
            prop::collection::vec((0..n, 0..2usize), 0..=2),
        )
            .prop_map(move |(types, props, data)| {
                let mut s = InstanceStore::new();
                for i in 0..n {
                    s.individuals.insert(individual(i));
                }
                for (i, c) in types {
                    s.add_type(individual(i).as_str(), iri(CLASSES[c]).as_str());
                }
                for (a, p, b) in props {
                    s.add_property(individual(a).as_str(), iri(OBJECT_PROPERTIES[p]).as_str(), Value::Individual(individual(b)));
                }
                for (a, v) in data {
                    s.add_property(individual(a).as_str(), iri(DATA_PROPERTY).as_str(), Value::Literal(Literal::string(format!("v{v}"))));
                }
                s
            })
    })
}

pub fn union_store(a: &InstanceStore, b: &InstanceStore) -> InstanceStore {
    let mut out = a.clone();
    out.individuals.extend(b.individuals.iter().cloned());
    out.class_assertions.extend(b.class_assertions.iter().cloned());
    out.property_assertions.extend(b.property_assertions.iter().cloned());
    out
}

/// `.odp` source for a random project of one to three modules over a small
/// vocabulary, with edges, individuals, extras, disjointness and bridges.
pub fn arb_project_source() -> impl Strategy<Value = String> {
    let edge = (0..6usize, 0..3usize, 0..5usize, any::<u16>());
    let module = (
        1u8..32,
        prop::collection::vec(edge, 0..5),
        prop::collection::vec(0..5usize, 0..3),
        any::<bool>(),
        0u8..32,
        prop::option::of(0..5usize),
    );
    prop::collection::vec(module, 1..=3).prop_map(|modules| {
        let count = modules.len();
        let mut src = String::from("base <http://ex.org/p/>.\n");
        for (m, (class_mask, edges, individuals, extra, disjoint_mask, bridge)) in modules.into_iter().enumerate() {
            let classes: Vec<&str> = (0..5).filter(|i| (class_mask | 1) & (1 << i) != 0).map(|i| ["A", "B", "C", "D", "E"][i]).collect();
            let class = |i: usize| classes[i % classes.len()];
            src.push_str(&format!("module M{m} {{\n  class {}.\n", classes.join(", ")));
            for (s, p, t, mask) in edges {
                let source = if s == 5 { "Thing" } else { class(s) };
                let data = p == 2;
                let kinds: Vec<&str> = AxiomKind::ALL[1..]
                    .iter()
                    .enumerate()
                    .filter(|(i, k)| mask & (1 << i) != 0 && !(data && k.object_only()))
                    .map(|(_, k)| k.keyword())
                    .collect();
                let sel = if kinds.is_empty() { String::new() } else { format!(" [{}]", kinds.join(", ")) };
                if data {
                    src.push_str(&format!("  data {source} -d-> xsd:string{sel}.\n"));
                } else {
                    src.push_str(&format!("  object {source} -{}-> {}{sel}.\n", ["R", "S"][p], class(t)));
                }
            }
            for (k, c) in individuals.into_iter().enumerate() {
                src.push_str(&format!("  individual i{m}x{k} : {}.\n", class(c)));
            }
            if extra {
                src.push_str(&format!("  object {0} -R-> {0}.\n  object {0} -S-> {0}.\n", class(0)));
                src.push_str(&format!("  extra {{ {} SubClassOf R some ({} and S only Thing). }}\n", class(0), class(1)));
            }
            let block: Vec<&str> = classes.iter().enumerate().filter(|(i, _)| disjoint_mask & (1 << i) != 0).map(|(_, c)| *c).collect();
            if block.len() >= 2 {
                src.push_str(&format!("  disjoint {{ {} }}\n", block.join(", ")));
            }
            // Every module has class A, so bridges always land.
            if let (Some(b), true) = (bridge, count > 1) {
                src.push_str(&format!("  bridge {} = M{}:A.\n", class(b), (m + 1) % count));
            }
            src.push_str("}\n");
        }
        src
    })
}

/// A random schema graph whose edges carry random (valid) selections.
pub fn arb_graph() -> impl Strategy<Value = odp_forge::SchemaGraph> {
    (1u8..32, prop::collection::vec((0..6usize, 0..3usize, 0..6usize, any::<u16>()), 0..6)).prop_map(|(mask, edges)| {
        let classes: Vec<String> = (0..5).filter(|i| (mask | 1) & (1 << i) != 0).map(|i| format!("C{i}")).collect();
        let endpoint = |i: usize| if i == 5 { "Thing".to_owned() } else { classes[i % classes.len()].clone() };
        let mut g = odp_forge::SchemaGraph::new();
        for c in &classes {
            g.add_class(c.clone());
        }
        for (s, p, t, bits) in edges {
            let (source, target) = (endpoint(s), endpoint(t));
            let data = p == 2;
            let mut sel = AxiomSelection::new();
            for (i, k) in AxiomKind::ALL.into_iter().enumerate() {
                let degenerate = k == AxiomKind::Disjointness && (data || source == target || source == "Thing" || target == "Thing");
                if bits & (1 << i) != 0 && !(data && k.object_only()) && !degenerate {
                    sel.insert(k);
                }
            }
            if data {
                g.add_edge(Edge::data("d", &source, "xsd:string", sel));
            } else {
                g.add_edge(Edge::object(["P0", "P1"][p], &source, &target, sel));
            }
        }
        g
    })
}

/// An injective renaming of the classes and properties of [`arb_graph`]:
/// a rotation of the names plus a random suffix.
pub fn arb_renaming() -> impl Strategy<Value = (BTreeMap<String, String>, BTreeMap<String, String>)> {
    (0..5usize, 0..3usize, any::<u16>()).prop_map(|(shift_c, shift_p, tag)| {
        let classes = (0..5).map(|i| (format!("C{i}"), format!("K{}_{tag}", (i + shift_c) % 5))).collect();
        let properties = ["P0", "P1", "d"]
            .into_iter()
            .enumerate()
            .map(|(i, p)| (p.to_owned(), format!("q{}_{tag}", (i + shift_p) % 3)))
            .collect();
        (classes, properties)
    })
}
