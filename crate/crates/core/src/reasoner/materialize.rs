use std::collections::{BTreeMap, BTreeSet};

use crate::axiom::{Axiom, Ontology};
use crate::emit::{RDFS, XSD};
use crate::expr::{ClassExpr, Iri, PropertyExpr};

use super::store::{InstanceStore, Literal, Value};

pub const DEFAULT_DEPTH: usize = 3;

/// Two disjoint classes found on one (possibly merged) individual.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Clash {
    /// Index into [`Ontology::merged_axioms`] of the disjointness axiom.
    pub axiom: usize,
    pub individual: Iri,
    pub classes: (Iri, Iri),
}

/// A derived fact, phrased over original (not representative) names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fact {
    Type(Iri, Iri),
    Property(Iri, Iri, Value),
    Same(Iri, Iri),
}

/// Class and property facts over representative individuals, indexed both
/// ways.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Graph {
    pub types: BTreeSet<(Iri, Iri)>,
    pub out: BTreeMap<Iri, BTreeSet<(Iri, Value)>>,
    pub inc: BTreeMap<Iri, BTreeSet<(Iri, Iri)>>,
}

impl Graph {
    fn insert_type(&mut self, x: Iri, c: Iri) -> bool {
        self.types.insert((x, c))
    }

    fn insert_property(&mut self, s: Iri, p: Iri, o: Value) -> bool {
        if let Value::Individual(oi) = &o {
            self.inc.entry(oi.clone()).or_default().insert((p.clone(), s.clone()));
        }
        self.out.entry(s).or_default().insert((p, o))
    }

    pub fn has_type(&self, x: &Iri, c: &Iri) -> bool {
        self.types.contains(&(x.clone(), c.clone()))
    }

    /// Fillers of `x` along `p` (following `inverse` backwards).
    pub fn fillers(&self, x: &Iri, p: &PropertyExpr<Iri>) -> Vec<Value> {
        if p.inverse {
            self.inc
                .get(x)
                .map(|s| s.iter().filter(|(q, _)| *q == p.name).map(|(_, y)| Value::Individual(y.clone())).collect())
                .unwrap_or_default()
        } else {
            self.out
                .get(x)
                .map(|s| s.iter().filter(|(q, _)| *q == p.name).map(|(_, y)| y.clone()).collect())
                .unwrap_or_default()
        }
    }

    /// Membership test for the left-hand-side fragment: names, `owl:Thing`,
    /// `some` and `and`. `only` and `max` never match (open world).
    pub fn matches(&self, v: &Value, e: &ClassExpr<Iri>) -> bool {
        match (v, e) {
            (Value::Literal(l), ClassExpr::Datatype(d)) => datatype_accepts(d, l),
            (Value::Literal(_), _) => false,
            (Value::Individual(_), ClassExpr::Thing) => true,
            (Value::Individual(x), ClassExpr::Class(c)) => self.has_type(x, c),
            (Value::Individual(x), ClassExpr::Some(p, f)) => self.fillers(x, p).iter().any(|y| self.matches(y, f)),
            (Value::Individual(_), ClassExpr::And(es)) => es.iter().all(|e| self.matches(v, e)),
            (Value::Individual(_), ClassExpr::Datatype(_) | ClassExpr::Only(..) | ClassExpr::Max(..)) => false,
        }
    }
}

fn datatype_accepts(d: &str, l: &Literal) -> bool {
    d == "rdfs:Literal" || expand(d) == l.datatype
}

fn expand(d: &str) -> String {
    match d.split_once(':') {
        Some(("xsd", local)) => format!("{XSD}{local}"),
        Some(("rdfs", local)) => format!("{RDFS}{local}"),
        _ => d.to_owned(),
    }
}

/// Nesting depth of a fresh-filler name (`_ex:<axiom>:<parent>`); 0 for
/// ordinary names.
fn fresh_depth(name: &str) -> usize {
    let mut depth = 0;
    let mut rest = name;
    while let Some(tail) = rest.strip_prefix("_ex:") {
        match tail.split_once(':') {
            Some((_, parent)) => {
                depth += 1;
                rest = parent;
            }
            None => break,
        }
    }
    depth
}

/// Right-hand sides with every `some` numbered, so that fresh fillers get
/// stable names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Inert,
    Class(Iri),
    Some { id: usize, prop: PropertyExpr<Iri>, filler: ClassExpr<Iri>, node: Box<Node> },
    Only(PropertyExpr<Iri>, Box<Node>),
    Max(u32, PropertyExpr<Iri>, ClassExpr<Iri>),
    And(Vec<Node>),
}

impl Node {
    fn build(e: &ClassExpr<Iri>, next_id: &mut usize) -> Node {
        match e {
            ClassExpr::Thing | ClassExpr::Datatype(_) => Node::Inert,
            ClassExpr::Class(c) => Node::Class(c.clone()),
            ClassExpr::Some(p, f) => {
                let id = *next_id;
                *next_id += 1;
                Node::Some { id, prop: p.clone(), filler: (**f).clone(), node: Box::new(Node::build(f, next_id)) }
            }
            ClassExpr::Only(p, f) => Node::Only(p.clone(), Box::new(Node::build(f, next_id))),
            ClassExpr::Max(n, p, f) => Node::Max(*n, p.clone(), (**f).clone()),
            ClassExpr::And(es) => Node::And(es.iter().map(|e| Node::build(e, next_id)).collect()),
        }
    }
}

struct Rule {
    axiom: usize,
    lhs: ClassExpr<Iri>,
    rhs: Node,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Obligation {
    individual: Iri,
    axiom: usize,
    id: usize,
    prop: PropertyExpr<Iri>,
    filler: ClassExpr<Iri>,
    node: Node,
}

#[derive(Default)]
struct Effects {
    types: Vec<(Iri, Iri)>,
    merges: Vec<Vec<Iri>>,
    obligations: Vec<Obligation>,
}

/// The result of [`materialize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Saturation {
    /// Facts over representative individuals, fresh ones included.
    pub store: InstanceStore,
    /// Every individual name mapped to its representative.
    pub equality: BTreeMap<Iri, Iri>,
    pub clashes: Vec<Clash>,
    /// Fresh existential fillers (individuals and placeholder literals).
    pub fresh: BTreeSet<Value>,
    /// Deepest fresh individual created.
    pub depth_used: usize,
    pub(crate) graph: Graph,
}

impl Saturation {
    pub fn representative(&self, x: &Iri) -> Iri {
        self.equality.get(x).cloned().unwrap_or_else(|| x.clone())
    }

    pub fn same(&self, a: &Iri, b: &Iri) -> bool {
        self.representative(a) == self.representative(b)
    }

    pub fn is_fresh(&self, v: &Value) -> bool {
        self.fresh.contains(v)
    }

    /// Whether the (representative of the) value is an instance of `e`.
    pub fn holds(&self, v: &Value, e: &ClassExpr<Iri>) -> bool {
        let v = match v {
            Value::Individual(x) => Value::Individual(self.representative(x)),
            lit => lit.clone(),
        };
        self.graph.matches(&v, e)
    }

    pub fn fillers(&self, x: &Iri, p: &PropertyExpr<Iri>) -> Vec<Value> {
        self.graph.fillers(&self.representative(x), p)
    }

    /// All names in the equality class of `x`.
    pub fn members(&self, x: &Iri) -> Vec<Iri> {
        let rep = self.representative(x);
        self.equality.iter().filter(|(_, r)| **r == rep).map(|(n, _)| n.clone()).collect()
    }

    /// Derived facts stated over original names, so the choice of
    /// representatives does not show. Fresh individuals and literals are
    /// left out unless `include_fresh`.
    pub fn facts(&self, include_fresh: bool) -> BTreeSet<Fact> {
        let visible = |v: &Value| include_fresh || !self.is_fresh(v);
        let mut members: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
        for (name, rep) in &self.equality {
            if visible(&Value::Individual(name.clone())) {
                members.entry(rep).or_default().push(name);
            }
        }
        let mut out = BTreeSet::new();
        for (rep, names) in &members {
            for a in names {
                for b in names {
                    if a < b {
                        out.insert(Fact::Same((*a).clone(), (*b).clone()));
                    }
                }
                for (x, c) in self.graph.types.range(((*rep).clone(), Iri::new(""))..) {
                    if x != *rep {
                        break;
                    }
                    out.insert(Fact::Type((*a).clone(), c.clone()));
                }
                for (p, o) in self.graph.out.get(*rep).into_iter().flatten() {
                    match o {
                        Value::Individual(o) => {
                            for b in members.get(o).into_iter().flatten() {
                                out.insert(Fact::Property((*a).clone(), p.clone(), Value::Individual((*b).clone())));
                            }
                        }
                        lit if visible(lit) => {
                            out.insert(Fact::Property((*a).clone(), p.clone(), lit.clone()));
                        }
                        _ => {}
                    }
                }
            }
        }
        out
    }
}

struct Engine {
    rules: Vec<Rule>,
    disjoint: Vec<(usize, Vec<Iri>)>,
    equivalent_classes: Vec<(Iri, Iri)>,
    parent: BTreeMap<Iri, Iri>,
    depth: BTreeMap<Iri, usize>,
    graph: Graph,
    fresh: BTreeSet<Value>,
    created: BTreeSet<(usize, usize, Iri)>,
    memberships: BTreeSet<(Iri, usize, Node)>,
    depth_used: usize,
}

/// Forward-chains the ontology's axioms over `store`.
///
/// Deterministic rules (class membership, `only` propagation, `max 1`
/// merging) run to a fixpoint; then every `some` obligation still unmet
/// gets one fresh filler, named `_ex:<axiom>:<parent>` (`_ex:<axiom>.<k>:`
/// for the k-th `some` of an axiom), provided the parent's depth is below
/// `depth`. The two phases alternate until nothing new is created.
pub fn materialize(ontology: &Ontology, store: &InstanceStore, depth: usize) -> Saturation {
    let mut engine = Engine::new(ontology, store);
    loop {
        let obligations = engine.saturate();
        if !engine.create_fillers(obligations, depth) {
            break;
        }
    }
    engine.finish()
}

impl Engine {
    fn new(ontology: &Ontology, store: &InstanceStore) -> Self {
        let mut e = Engine {
            rules: Vec::new(),
            disjoint: Vec::new(),
            equivalent_classes: Vec::new(),
            parent: BTreeMap::new(),
            depth: BTreeMap::new(),
            graph: Graph::default(),
            fresh: BTreeSet::new(),
            created: BTreeSet::new(),
            memberships: BTreeSet::new(),
            depth_used: 0,
        };
        for (axiom, a) in ontology.merged_axioms().into_iter().enumerate() {
            let mut next_id = 0;
            match a {
                Axiom::SubClassOf(lhs, rhs) => e.rules.push(Rule { axiom, lhs, rhs: Node::build(&rhs, &mut next_id) }),
                Axiom::EquivalentClasses(x, y) => {
                    if let (ClassExpr::Class(cx), ClassExpr::Class(cy)) = (&x, &y) {
                        e.equivalent_classes.push((cx.clone(), cy.clone()));
                    }
                    e.rules.push(Rule { axiom, lhs: x.clone(), rhs: Node::build(&y, &mut next_id) });
                    e.rules.push(Rule { axiom, lhs: y, rhs: Node::build(&x, &mut next_id) });
                }
                Axiom::DisjointClasses(cs) => e.disjoint.push((axiom, cs)),
                Axiom::ClassAssertion(i, c) => {
                    e.add_input_individual(&i);
                    e.graph.insert_type(i, c);
                }
                Axiom::Declaration(..) => {}
            }
        }
        for i in &store.individuals {
            e.add_input_individual(i);
        }
        for (i, c) in &store.class_assertions {
            e.add_input_individual(i);
            e.graph.insert_type(i.clone(), c.clone());
        }
        for (s, p, o) in &store.property_assertions {
            e.add_input_individual(s);
            match o {
                Value::Individual(oi) => e.add_input_individual(oi),
                Value::Literal(l) if fresh_depth(&l.lexical) > 0 => {
                    e.fresh.insert(o.clone());
                }
                Value::Literal(_) => {}
            }
            e.graph.insert_property(s.clone(), p.clone(), o.clone());
        }
        e
    }

    fn add_individual(&mut self, i: &Iri, depth: usize) {
        self.parent.entry(i.clone()).or_insert_with(|| i.clone());
        self.depth.entry(i.clone()).or_insert(depth);
    }

    /// Input individuals named like fresh fillers come from an earlier run:
    /// they keep their fresh status and depth, so saturating a saturated
    /// store changes nothing.
    fn add_input_individual(&mut self, i: &Iri) {
        let d = fresh_depth(i.as_str());
        if d > 0 && !self.parent.contains_key(i) {
            self.fresh.insert(Value::Individual(i.clone()));
            self.depth_used = self.depth_used.max(d);
        }
        self.add_individual(i, d);
    }

    fn find(&self, x: &Iri) -> Iri {
        let mut cur = x;
        while let Some(p) = self.parent.get(cur) {
            if p == cur {
                break;
            }
            cur = p;
        }
        cur.clone()
    }

    fn representatives(&self) -> Vec<Iri> {
        self.parent.iter().filter(|(k, v)| k == v).map(|(k, _)| k.clone()).collect()
    }

    /// Runs the deterministic rules to a fixpoint; returns the `some`
    /// obligations of the final state.
    fn saturate(&mut self) -> Vec<Obligation> {
        loop {
            let mut fx = Effects::default();
            let reps = self.representatives();
            for rule in &self.rules {
                for x in &reps {
                    if self.graph.matches(&Value::Individual(x.clone()), &rule.lhs) {
                        self.apply(x, &rule.rhs, rule.axiom, &mut fx);
                    }
                }
            }
            for (y, axiom, node) in &self.memberships {
                self.apply(&self.find(y), node, *axiom, &mut fx);
            }
            let mut changed = false;
            for (x, c) in fx.types.drain(..) {
                changed |= self.graph.insert_type(x, c);
            }
            if !fx.merges.is_empty() {
                for group in &fx.merges {
                    for other in &group[1..] {
                        changed |= self.union(&group[0], other);
                    }
                }
                self.rebuild();
            }
            if !changed {
                let mut obligations = fx.obligations;
                obligations.sort();
                obligations.dedup();
                return obligations;
            }
        }
    }

    fn apply(&self, x: &Iri, node: &Node, axiom: usize, fx: &mut Effects) {
        match node {
            Node::Inert => {}
            Node::Class(c) => {
                if !self.graph.has_type(x, c) {
                    fx.types.push((x.clone(), c.clone()));
                }
            }
            Node::And(parts) => parts.iter().for_each(|n| self.apply(x, n, axiom, fx)),
            Node::Only(p, f) => {
                for y in self.graph.fillers(x, p) {
                    if let Value::Individual(y) = y {
                        self.apply(&y, f, axiom, fx);
                    }
                }
            }
            Node::Max(1, p, f) => {
                let mut group: Vec<Iri> = self
                    .graph
                    .fillers(x, p)
                    .into_iter()
                    .filter(|y| self.graph.matches(y, f))
                    .filter_map(|y| y.as_individual().cloned())
                    .collect();
                group.sort();
                group.dedup();
                if group.len() > 1 {
                    fx.merges.push(group);
                }
            }
            // Other cardinalities are outside the generated fragment.
            Node::Max(..) => {}
            Node::Some { id, prop, filler, node } => fx.obligations.push(Obligation {
                individual: x.clone(),
                axiom,
                id: *id,
                prop: prop.clone(),
                filler: filler.clone(),
                node: (**node).clone(),
            }),
        }
    }

    /// Representatives prefer named individuals, then shallower fresh
    /// ones, then the smaller IRI.
    fn union(&mut self, a: &Iri, b: &Iri) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let key = |x: &Iri| (self.fresh.contains(&Value::Individual(x.clone())), self.depth[x]);
        let (winner, loser) = if (key(&ra), &ra) <= (key(&rb), &rb) { (ra, rb) } else { (rb, ra) };
        let d = self.depth[&winner].min(self.depth[&loser]);
        self.depth.insert(winner.clone(), d);
        self.parent.insert(loser, winner);
        true
    }

    /// Rewrites all facts onto current representatives.
    fn rebuild(&mut self) {
        let old = std::mem::take(&mut self.graph);
        for (x, c) in old.types {
            self.graph.insert_type(self.find(&x), c);
        }
        for (s, edges) in old.out {
            let s = self.find(&s);
            for (p, o) in edges {
                let o = match o {
                    Value::Individual(o) => Value::Individual(self.find(&o)),
                    lit => lit,
                };
                self.graph.insert_property(s.clone(), p, o);
            }
        }
        let memberships = std::mem::take(&mut self.memberships);
        self.memberships = memberships.into_iter().map(|(y, a, n)| (self.find(&y), a, n)).collect();
    }

    /// Creates fresh fillers for the unmet obligations, all judged against
    /// the same saturated state. Returns whether anything was created.
    fn create_fillers(&mut self, obligations: Vec<Obligation>, bound: usize) -> bool {
        let unmet: Vec<Obligation> = obligations
            .into_iter()
            .filter(|o| {
                let x = self.find(&o.individual);
                !self.graph.fillers(&x, &o.prop).iter().any(|y| self.graph.matches(y, &o.filler))
                    && !self.created.contains(&(o.axiom, o.id, x.clone()))
                    && self.depth[&x] < bound
            })
            .collect();
        let mut created = false;
        for o in unmet {
            let x = self.find(&o.individual);
            if !self.created.insert((o.axiom, o.id, x.clone())) {
                continue;
            }
            created = true;
            let name = if o.id == 0 {
                format!("_ex:{}:{}", o.axiom, x)
            } else {
                format!("_ex:{}.{}:{}", o.axiom, o.id, x)
            };
            if let ClassExpr::Datatype(d) = &o.filler {
                let lit = Value::Literal(Literal { lexical: name, datatype: expand(d) });
                self.fresh.insert(lit.clone());
                self.graph.insert_property(x, o.prop.name.clone(), lit);
                continue;
            }
            let y = Iri::new(name);
            let d = self.depth[&x] + 1;
            self.depth_used = self.depth_used.max(d);
            self.add_individual(&y, d);
            self.fresh.insert(Value::Individual(y.clone()));
            if o.prop.inverse {
                self.graph.insert_property(y.clone(), o.prop.name.clone(), Value::Individual(x));
            } else {
                self.graph.insert_property(x, o.prop.name.clone(), Value::Individual(y.clone()));
            }
            self.memberships.insert((y, o.axiom, o.node));
        }
        created
    }

    fn finish(self) -> Saturation {
        let equality: BTreeMap<Iri, Iri> = self.parent.keys().map(|k| (k.clone(), self.find(k))).collect();
        let reps = self.representatives();

        // Class equivalence from named bridges, so the same conflict seen
        // through several modules is reported once.
        let mut canon: BTreeMap<Iri, Iri> = BTreeMap::new();
        fn root(canon: &BTreeMap<Iri, Iri>, c: &Iri) -> Iri {
            let mut cur = c.clone();
            while let Some(p) = canon.get(&cur) {
                if *p == cur {
                    break;
                }
                cur = p.clone();
            }
            cur
        }
        for (a, b) in &self.equivalent_classes {
            let (ra, rb) = (root(&canon, a), root(&canon, b));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                canon.insert(lo.clone(), lo.clone());
                canon.insert(hi, lo);
            }
        }
        let mut seen = BTreeSet::new();
        let mut clashes = Vec::new();
        for (axiom, classes) in &self.disjoint {
            for x in &reps {
                let held: Vec<&Iri> = classes.iter().filter(|c| self.graph.has_type(x, c)).collect();
                for (i, c) in held.iter().enumerate() {
                    for d in &held[i + 1..] {
                        let (cc, cd) = (root(&canon, c), root(&canon, d));
                        let key = (x.clone(), cc.clone().min(cd.clone()), cc.max(cd));
                        if seen.insert(key) {
                            clashes.push(Clash { axiom: *axiom, individual: x.clone(), classes: ((*c).clone(), (*d).clone()) });
                        }
                    }
                }
            }
        }
        clashes.sort();

        let mut store = InstanceStore::new();
        store.individuals = reps.into_iter().collect();
        store.class_assertions = self.graph.types.clone();
        for (s, edges) in &self.graph.out {
            for (p, o) in edges {
                store.property_assertions.insert((s.clone(), p.clone(), o.clone()));
            }
        }
        Saturation { store, equality, clashes, fresh: self.fresh, depth_used: self.depth_used, graph: self.graph }
    }
}
