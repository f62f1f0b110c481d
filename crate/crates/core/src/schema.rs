//! Schema diagrams and the instantiate/join algebra over them.
//!
//! A [`SchemaGraph`] is the node-edge-node picture a pattern or module is
//! drawn as. Names are plain identifiers; they only acquire IRIs when a
//! module is compiled. The reserved class name [`THING`] stands for
//! `owl:Thing`: it may be used as an edge endpoint but is never declared.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::axiom::{AxiomKind, AxiomSelection};
use crate::diagnostic::{Code, Diagnostic};

pub const THING: &str = "Thing";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Object,
    Data,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub property: String,
    pub source: String,
    /// A class name for object edges, a datatype tag for data edges.
    pub target: String,
    pub kind: EdgeKind,
    pub selection: AxiomSelection,
}

impl Edge {
    pub fn object(property: &str, source: &str, target: &str, selection: impl Into<AxiomSelection>) -> Self {
        Edge {
            property: property.to_owned(),
            source: source.to_owned(),
            target: target.to_owned(),
            kind: EdgeKind::Object,
            selection: selection.into(),
        }
    }

    pub fn data(property: &str, source: &str, datatype: &str, selection: impl Into<AxiomSelection>) -> Self {
        Edge {
            property: property.to_owned(),
            source: source.to_owned(),
            target: datatype.to_owned(),
            kind: EdgeKind::Data,
            selection: selection.into(),
        }
    }

    fn key(&self) -> EdgeKey {
        (self.property.clone(), self.source.clone(), self.target.clone())
    }
}

type EdgeKey = (String, String, String);

/// What a name denotes inside one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Class,
    Property(EdgeKind),
    Datatype,
    Individual,
}

impl Category {
    fn describe(self) -> &'static str {
        match self {
            Category::Class => "class",
            Category::Property(EdgeKind::Object) => "object property",
            Category::Property(EdgeKind::Data) => "data property",
            Category::Datatype => "datatype",
            Category::Individual => "individual",
        }
    }

    fn same_kind(self, other: Category) -> bool {
        matches!(
            (self, other),
            (Category::Class, Category::Class) | (Category::Property(_), Category::Property(_))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("name collision on `{0}`")]
    NameCollision(String),
    #[error("category mismatch: {0}")]
    CategoryMismatch(String),
    #[error("dangling identification: {0}")]
    DanglingIdentification(String),
    #[error("`{0}` is reserved and cannot be renamed, declared or deleted")]
    ReservedName(String),
}

/// Classes, datatype nodes, typed edges and individuals of one diagram.
///
/// At most one edge exists per `(property, source, target)`; adding the same
/// triple again merges the selections.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SchemaGraph {
    classes: BTreeSet<String>,
    datatypes: BTreeSet<String>,
    edges: BTreeMap<EdgeKey, Edge>,
    individuals: BTreeMap<String, String>,
}

impl SchemaGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_class(&mut self, name: impl Into<String>) -> &mut Self {
        self.classes.insert(name.into());
        self
    }

    pub fn add_datatype(&mut self, tag: impl Into<String>) -> &mut Self {
        self.datatypes.insert(tag.into());
        self
    }

    /// Adds an edge, merging selections with an existing edge on the same
    /// triple. Data edges declare their target datatype node.
    pub fn add_edge(&mut self, edge: Edge) -> &mut Self {
        if edge.kind == EdgeKind::Data {
            self.datatypes.insert(edge.target.clone());
        }
        match self.edges.get_mut(&edge.key()) {
            Some(existing) if existing.kind == edge.kind => existing.selection.union_with(&edge.selection),
            // a kind conflict on the same triple is kept visible for validation
            Some(existing) => existing.kind = edge.kind,
            None => {
                self.edges.insert(edge.key(), edge);
            }
        }
        self
    }

    pub fn add_individual(&mut self, name: impl Into<String>, class: impl Into<String>) -> &mut Self {
        self.individuals.insert(name.into(), class.into());
        self
    }

    pub fn classes(&self) -> &BTreeSet<String> {
        &self.classes
    }

    pub fn datatypes(&self) -> &BTreeSet<String> {
        &self.datatypes
    }

    /// All edges sorted by `(property, source, target)`.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn object_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges().filter(|e| e.kind == EdgeKind::Object)
    }

    pub fn data_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges().filter(|e| e.kind == EdgeKind::Data)
    }

    pub fn edge(&self, property: &str, source: &str, target: &str) -> Option<&Edge> {
        self.edges.get(&(property.to_owned(), source.to_owned(), target.to_owned()))
    }

    pub fn individuals(&self) -> &BTreeMap<String, String> {
        &self.individuals
    }

    pub fn properties(&self) -> BTreeMap<&str, EdgeKind> {
        self.edges().map(|e| (e.property.as_str(), e.kind)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.datatypes.is_empty() && self.edges.is_empty() && self.individuals.is_empty()
    }

    /// Number of named elements: classes, datatype nodes, properties,
    /// edges and individuals.
    pub fn element_count(&self) -> usize {
        self.classes.len() + self.datatypes.len() + self.properties().len() + self.edges.len() + self.individuals.len()
    }

    /// The category of `name`, preferring class over the others when the
    /// graph is ill-formed.
    pub fn category_of(&self, name: &str) -> Option<Category> {
        if self.classes.contains(name) {
            Some(Category::Class)
        } else if let Some(kind) = self.edges().find(|e| e.property == name).map(|e| e.kind) {
            Some(Category::Property(kind))
        } else if self.datatypes.contains(name) {
            Some(Category::Datatype)
        } else if self.individuals.contains_key(name) {
            Some(Category::Individual)
        } else {
            None
        }
    }

    fn uses_thing(&self) -> bool {
        self.edges().any(|e| e.source == THING || (e.kind == EdgeKind::Object && e.target == THING))
    }

    /// Applies class and property renamings. Names absent from the maps are
    /// kept. No validity checks are made.
    pub fn renamed(&self, classes: &BTreeMap<String, String>, properties: &BTreeMap<String, String>) -> SchemaGraph {
        let class = |n: &String| classes.get(n).unwrap_or(n).clone();
        let mut out = SchemaGraph::new();
        for c in &self.classes {
            out.add_class(class(c));
        }
        for d in &self.datatypes {
            out.add_datatype(d.clone());
        }
        for e in self.edges() {
            out.add_edge(Edge {
                property: properties.get(&e.property).unwrap_or(&e.property).clone(),
                source: class(&e.source),
                target: match e.kind {
                    EdgeKind::Object => class(&e.target),
                    EdgeKind::Data => e.target.clone(),
                },
                kind: e.kind,
                selection: e.selection.clone(),
            });
        }
        for (ind, c) in &self.individuals {
            out.add_individual(ind.clone(), class(c));
        }
        out
    }

    /// Adds everything from `other`. Shared names must denote the same kind
    /// of element; shared edges merge their selections.
    pub fn union_with(&mut self, other: &SchemaGraph) -> Result<(), SchemaError> {
        for c in &other.classes {
            self.check_category(c, Category::Class)?;
        }
        for d in &other.datatypes {
            self.check_category(d, Category::Datatype)?;
        }
        for (name, kind) in other.properties() {
            self.check_category(name, Category::Property(kind))?;
        }
        for (ind, class) in &other.individuals {
            self.check_category(ind, Category::Individual)?;
            if let Some(existing) = self.individuals.get(ind) {
                if existing != class {
                    return Err(SchemaError::NameCollision(format!(
                        "{ind} (typed `{existing}` and `{class}`)"
                    )));
                }
            }
        }
        self.classes.extend(other.classes.iter().cloned());
        self.datatypes.extend(other.datatypes.iter().cloned());
        for e in other.edges() {
            self.add_edge(e.clone());
        }
        self.individuals.extend(other.individuals.iter().map(|(a, b)| (a.clone(), b.clone())));
        Ok(())
    }

    fn check_category(&self, name: &str, wanted: Category) -> Result<(), SchemaError> {
        match self.category_of(name) {
            Some(found) if found != wanted => Err(SchemaError::CategoryMismatch(format!(
                "`{name}` is a {} here and a {} elsewhere",
                found.describe(),
                wanted.describe()
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternTemplate {
    pub name: String,
    pub graph: SchemaGraph,
    pub documentation: String,
}

/// Transform from a pattern template to a module graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Instantiation {
    pub template: String,
    pub rename_classes: BTreeMap<String, String>,
    pub rename_properties: BTreeMap<String, String>,
    /// Classes, properties, datatype nodes or individuals to drop.
    pub deletions: BTreeSet<String>,
    pub additions: SchemaGraph,
}

impl Instantiation {
    pub fn of(template: &str) -> Self {
        Instantiation { template: template.to_owned(), ..Default::default() }
    }

    pub fn rename_class(mut self, from: &str, to: &str) -> Self {
        self.rename_classes.insert(from.to_owned(), to.to_owned());
        self
    }

    pub fn rename_property(mut self, from: &str, to: &str) -> Self {
        self.rename_properties.insert(from.to_owned(), to.to_owned());
        self
    }

    pub fn delete(mut self, name: &str) -> Self {
        self.deletions.insert(name.to_owned());
        self
    }

    pub fn with_additions(mut self, additions: SchemaGraph) -> Self {
        self.additions = additions;
        self
    }
}

pub fn instantiate(template: &PatternTemplate, inst: &Instantiation) -> Result<SchemaGraph, SchemaError> {
    instantiate_with_notes(template, inst).map(|(graph, _)| graph)
}

/// Like [`instantiate`], also returning info diagnostics for edges dropped
/// because an endpoint was deleted.
pub fn instantiate_with_notes(
    template: &PatternTemplate,
    inst: &Instantiation,
) -> Result<(SchemaGraph, Vec<Diagnostic>), SchemaError> {
    if inst.template != template.name {
        return Err(SchemaError::UnknownElement(format!(
            "instantiation targets pattern `{}`, got `{}`",
            inst.template, template.name
        )));
    }
    let graph = &template.graph;

    for (renames, wanted) in [(&inst.rename_classes, true), (&inst.rename_properties, false)] {
        for (from, to) in renames {
            if from == THING || to == THING {
                return Err(SchemaError::ReservedName(THING.to_owned()));
            }
            match graph.category_of(from) {
                None => return Err(SchemaError::UnknownElement(from.clone())),
                Some(Category::Class) if wanted => {}
                Some(Category::Property(_)) if !wanted => {}
                Some(found) => {
                    return Err(SchemaError::CategoryMismatch(format!(
                        "`{from}` is a {}, not a {}",
                        found.describe(),
                        if wanted { "class" } else { "property" }
                    )))
                }
            }
            if inst.deletions.contains(from) {
                return Err(SchemaError::UnknownElement(format!("`{from}` is both renamed and deleted")));
            }
        }
    }
    for name in &inst.deletions {
        if name == THING {
            return Err(SchemaError::ReservedName(THING.to_owned()));
        }
        if graph.category_of(name).is_none() {
            return Err(SchemaError::UnknownElement(name.clone()));
        }
    }

    // Rename targets must be distinct and must not land on a name that
    // survives unrenamed.
    let mut targets = BTreeSet::new();
    for to in inst.rename_classes.values().chain(inst.rename_properties.values()) {
        if !targets.insert(to) {
            return Err(SchemaError::NameCollision(to.clone()));
        }
    }
    for to in &targets {
        let renamed_away = inst.rename_classes.contains_key(*to) || inst.rename_properties.contains_key(*to);
        if graph.category_of(to).is_some() && !renamed_away && !inst.deletions.contains(*to) {
            return Err(SchemaError::NameCollision((*to).clone()));
        }
    }

    let mut notes = Vec::new();
    let mut pruned = SchemaGraph::new();
    let deleted = |n: &String| inst.deletions.contains(n);
    for c in graph.classes.iter().filter(|c| !deleted(c)) {
        pruned.add_class(c.clone());
    }
    for e in graph.edges() {
        if deleted(&e.property) {
            continue;
        }
        let dropped_endpoint = [&e.source, &e.target].into_iter().find(|n| deleted(n));
        if let Some(endpoint) = dropped_endpoint {
            notes.push(Diagnostic::info(
                Code::CascadeDelete,
                &e.property,
                format!("edge {} -{}-> {} removed with `{endpoint}`", e.source, e.property, e.target),
            ));
            continue;
        }
        pruned.add_edge(e.clone());
    }
    // datatype nodes survive only while something points at them
    pruned.datatypes = graph
        .datatypes
        .iter()
        .filter(|d| !deleted(d) && pruned.data_edges().any(|e| &e.target == *d))
        .cloned()
        .collect();
    for (ind, class) in &graph.individuals {
        if deleted(ind) {
            continue;
        }
        if deleted(class) {
            notes.push(Diagnostic::info(Code::CascadeDelete, ind, format!("individual removed with `{class}`")));
            continue;
        }
        pruned.add_individual(ind.clone(), class.clone());
    }

    let mut result = pruned.renamed(&inst.rename_classes, &inst.rename_properties);
    result.union_with(&inst.additions)?;
    if let Some(problem) = validate_graph(&result).into_iter().find(Diagnostic::is_error) {
        return Err(diagnostic_to_error(problem));
    }
    Ok((result, notes))
}

fn diagnostic_to_error(d: Diagnostic) -> SchemaError {
    match d.code {
        Code::NameCollision => SchemaError::NameCollision(d.element),
        Code::CategoryMismatch | Code::InvalidKindForDatatypeEdge => {
            SchemaError::CategoryMismatch(format!("{}: {}", d.element, d.message))
        }
        _ => SchemaError::UnknownElement(d.element),
    }
}

/// An element of the `graph`-th input of [`join`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementRef {
    pub graph: usize,
    pub name: String,
}

impl ElementRef {
    pub fn new(graph: usize, name: &str) -> Self {
        ElementRef { graph, name: name.to_owned() }
    }
}

/// Pairs of elements unified by [`join`]. Pairs are unordered.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Identification {
    pub pairs: Vec<(ElementRef, ElementRef)>,
}

impl Identification {
    pub fn pair(a: ElementRef, b: ElementRef) -> Self {
        Identification { pairs: vec![(a, b)] }
    }
}

/// Unions `graphs`, first unifying identified elements.
///
/// Equal names in different graphs denote the same element. An identified
/// group is named by its smallest non-`Thing` name, so identifying `Thing`
/// in one graph with `Agent` in another puts `Agent` in place of that
/// graph's `Thing`.
pub fn join(graphs: &[SchemaGraph], idents: &[Identification]) -> Result<SchemaGraph, SchemaError> {
    let mut group_of: BTreeMap<ElementRef, usize> = BTreeMap::new();
    let mut parent: Vec<usize> = Vec::new();
    let mut category: Vec<Category> = Vec::new();

    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }

    let mut slot = |r: &ElementRef, parent: &mut Vec<usize>, category: &mut Vec<Category>| -> Result<usize, SchemaError> {
        if let Some(&i) = group_of.get(r) {
            return Ok(i);
        }
        let graph = graphs.get(r.graph).ok_or_else(|| {
            SchemaError::DanglingIdentification(format!("no graph #{} for `{}`", r.graph, r.name))
        })?;
        let cat = if r.name == THING && graph.uses_thing() {
            Category::Class
        } else {
            graph.category_of(&r.name).ok_or_else(|| {
                SchemaError::DanglingIdentification(format!("`{}` not in graph #{}", r.name, r.graph))
            })?
        };
        let i = parent.len();
        parent.push(i);
        category.push(cat);
        group_of.insert(r.clone(), i);
        Ok(i)
    };

    for ident in idents {
        for (a, b) in &ident.pairs {
            let ia = slot(a, &mut parent, &mut category)?;
            let ib = slot(b, &mut parent, &mut category)?;
            if !category[ia].same_kind(category[ib]) {
                return Err(SchemaError::CategoryMismatch(format!(
                    "cannot identify {} `{}` with {} `{}`",
                    category[ia].describe(),
                    a.name,
                    category[ib].describe(),
                    b.name
                )));
            }
            let (ra, rb) = (find(&mut parent, ia), find(&mut parent, ib));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }

    let mut canonical: BTreeMap<usize, String> = BTreeMap::new();
    let members: Vec<(ElementRef, usize)> = group_of.iter().map(|(r, &i)| (r.clone(), i)).collect();
    for (r, i) in &members {
        let root = find(&mut parent, *i);
        let entry = canonical.entry(root).or_insert_with(|| r.name.clone());
        if *entry == THING || (r.name != THING && r.name < *entry) {
            *entry = r.name.clone();
        }
    }

    let mut out = SchemaGraph::new();
    for (gi, graph) in graphs.iter().enumerate() {
        let mut classes = BTreeMap::new();
        let mut properties = BTreeMap::new();
        for (r, i) in members.iter().filter(|(r, _)| r.graph == gi) {
            let root = find(&mut parent, *i);
            let name = canonical[&root].clone();
            if name == r.name {
                continue;
            }
            match category[*i] {
                Category::Class => classes.insert(r.name.clone(), name),
                _ => properties.insert(r.name.clone(), name),
            };
        }
        let mut renamed = graph.renamed(&classes, &properties);
        if let Some(name) = classes.get(THING) {
            renamed.add_class(name.clone());
        }
        out.union_with(&renamed)?;
    }
    Ok(out)
}

/// Checks the graph invariants. Errors for violations; an info notice for
/// every edge that closes a cycle in the undirected class graph.
pub fn validate_graph(graph: &SchemaGraph) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    if graph.classes.contains(THING) {
        out.push(Diagnostic::error(Code::NameCollision, THING, "`Thing` is reserved for owl:Thing"));
    }

    let mut seen: BTreeMap<&str, Category> = BTreeMap::new();
    let mut categorised: Vec<(&str, Category)> = Vec::new();
    categorised.extend(graph.classes.iter().map(|c| (c.as_str(), Category::Class)));
    categorised.extend(graph.datatypes.iter().map(|d| (d.as_str(), Category::Datatype)));
    categorised.extend(graph.individuals.keys().map(|i| (i.as_str(), Category::Individual)));
    let mut property_kinds: BTreeMap<&str, BTreeSet<EdgeKind>> = BTreeMap::new();
    for e in graph.edges() {
        property_kinds.entry(&e.property).or_default().insert(e.kind);
    }
    for (p, kinds) in &property_kinds {
        if kinds.len() > 1 {
            out.push(Diagnostic::error(
                Code::CategoryMismatch,
                *p,
                "used as both an object and a data property",
            ));
        }
        let kind = *kinds.iter().next().expect("non-empty");
        categorised.push((p, Category::Property(kind)));
    }
    for (name, cat) in categorised {
        if let Some(prev) = seen.insert(name, cat) {
            out.push(Diagnostic::error(
                Code::NameCollision,
                name,
                format!("declared as both {} and {}", prev.describe(), cat.describe()),
            ));
        }
    }

    let is_class = |n: &str| n == THING || graph.classes.contains(n);
    let endpoint = |out: &mut Vec<Diagnostic>, e: &Edge, n: &str, role: &str| {
        let msg = match graph.category_of(n) {
            Some(cat) => (Code::CategoryMismatch, format!("{role} of `{}` is a {}, expected a class", e.property, cat.describe())),
            None => (Code::UnknownElement, format!("{role} of `{}` is not declared", e.property)),
        };
        out.push(Diagnostic::error(msg.0, n, msg.1));
    };
    for e in graph.edges() {
        if !is_class(&e.source) {
            endpoint(&mut out, e, &e.source, "source");
        }
        match e.kind {
            EdgeKind::Object if !is_class(&e.target) => endpoint(&mut out, e, &e.target, "target"),
            EdgeKind::Data if !graph.datatypes.contains(&e.target) => out.push(Diagnostic::error(
                Code::UnknownElement,
                &e.target,
                format!("target of data property `{}` is not a datatype node", e.property),
            )),
            _ => {}
        }
        if e.kind == EdgeKind::Data {
            for kind in e.selection.iter().filter(|k| k.object_only()) {
                out.push(Diagnostic::error(
                    Code::InvalidKindForDatatypeEdge,
                    &e.property,
                    format!("{kind} does not apply to a data property"),
                ));
            }
        }
        if e.selection.contains(AxiomKind::Disjointness) && (e.source == e.target || e.source == THING || e.target == THING) {
            out.push(Diagnostic::error(
                Code::CategoryMismatch,
                &e.property,
                "disjointness needs two distinct named classes",
            ));
        }
    }
    for (ind, class) in &graph.individuals {
        if !graph.classes.contains(class) {
            out.push(Diagnostic::error(Code::UnknownElement, class, format!("type of individual `{ind}` is not declared")));
        }
    }

    out.extend(cycle_notices(graph));
    out.sort();
    out.dedup();
    out
}

/// One notice per edge closing a cycle among named classes. Datatype
/// nodes and `Thing` are leaves and never close a cycle.
fn cycle_notices(graph: &SchemaGraph) -> Vec<Diagnostic> {
    let mut parent: BTreeMap<&str, &str> = BTreeMap::new();
    fn root<'a>(parent: &mut BTreeMap<&'a str, &'a str>, n: &'a str) -> &'a str {
        let mut cur = n;
        while let Some(&p) = parent.get(cur) {
            if p == cur {
                break;
            }
            cur = p;
        }
        parent.insert(n, cur);
        cur
    }
    let mut out = Vec::new();
    for e in graph.object_edges() {
        if e.source == THING || e.target == THING {
            continue;
        }
        parent.entry(&e.source).or_insert(&e.source);
        parent.entry(&e.target).or_insert(&e.target);
        let (a, b) = (root(&mut parent, &e.source), root(&mut parent, &e.target));
        if a == b {
            out.push(Diagnostic::info(
                Code::Cycle,
                &e.property,
                format!("edge {} -{}-> {} closes a cycle; consider axioms spanning it", e.source, e.property, e.target),
            ));
        } else {
            parent.insert(a.max(b), a.min(b));
        }
    }
    out
}
