//! Axiom generation from schema edges, and compilation of resolved projects
//! into namespaced ontologies.

mod compile;
mod kind;

use std::fmt;

use thiserror::Error;

use crate::expr::ClassExpr;
use crate::schema::{Edge, EdgeKind, THING};

pub use compile::{compile, Annotation, CompileError, EdgeSummary, Ontology, OntologyModule, IS_DEFINED_BY};
pub use kind::{axiom_kind_catalog, AxiomKind, AxiomSelection, CatalogEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityCategory {
    Class,
    ObjectProperty,
    DataProperty,
    Individual,
}

impl EntityCategory {
    pub fn manchester_keyword(self) -> &'static str {
        match self {
            EntityCategory::Class => "Class",
            EntityCategory::ObjectProperty => "ObjectProperty",
            EntityCategory::DataProperty => "DataProperty",
            EntityCategory::Individual => "Individual",
        }
    }
}

/// A generated OWL axiom. Variant order is the category order used when
/// sorting axiom lists.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom<N> {
    Declaration(N, EntityCategory),
    SubClassOf(ClassExpr<N>, ClassExpr<N>),
    EquivalentClasses(ClassExpr<N>, ClassExpr<N>),
    /// Pairwise disjoint named classes; at least two, no duplicates.
    DisjointClasses(Vec<N>),
    ClassAssertion(N, N),
}

impl<N> Axiom<N> {
    pub fn category_rank(&self) -> u8 {
        match self {
            Axiom::Declaration(..) => 0,
            Axiom::SubClassOf(..) => 1,
            Axiom::EquivalentClasses(..) => 2,
            Axiom::DisjointClasses(..) => 3,
            Axiom::ClassAssertion(..) => 4,
        }
    }

    /// True for everything except declarations.
    pub fn is_logical(&self) -> bool {
        !matches!(self, Axiom::Declaration(..))
    }

    pub fn map_names<M>(&self, f: &mut impl FnMut(&N, bool) -> M) -> Axiom<M> {
        match self {
            Axiom::Declaration(n, c) => {
                let is_prop = matches!(c, EntityCategory::ObjectProperty | EntityCategory::DataProperty);
                Axiom::Declaration(f(n, is_prop), *c)
            }
            Axiom::SubClassOf(a, b) => Axiom::SubClassOf(a.map_names(f), b.map_names(f)),
            Axiom::EquivalentClasses(a, b) => Axiom::EquivalentClasses(a.map_names(f), b.map_names(f)),
            Axiom::DisjointClasses(cs) => Axiom::DisjointClasses(cs.iter().map(|c| f(c, false)).collect()),
            Axiom::ClassAssertion(i, c) => Axiom::ClassAssertion(f(i, false), f(c, false)),
        }
    }

    pub fn visit_names<'a>(&'a self, f: &mut impl FnMut(&'a N, bool)) {
        match self {
            Axiom::Declaration(n, c) => f(n, matches!(c, EntityCategory::ObjectProperty | EntityCategory::DataProperty)),
            Axiom::SubClassOf(a, b) | Axiom::EquivalentClasses(a, b) => {
                a.visit_names(f);
                b.visit_names(f);
            }
            Axiom::DisjointClasses(cs) => cs.iter().for_each(|c| f(c, false)),
            Axiom::ClassAssertion(i, c) => {
                f(i, false);
                f(c, false);
            }
        }
    }

    /// Manchester-style sentence, e.g. `Recipe SubClassOf requires only Situation`.
    pub fn render(&self, name: impl Fn(&N) -> String) -> String {
        match self {
            Axiom::Declaration(n, c) => format!("{}: {}", c.manchester_keyword(), name(n)),
            Axiom::SubClassOf(a, b) => format!("{} SubClassOf {}", a.render(&name), b.render(&name)),
            Axiom::EquivalentClasses(a, b) => format!("{} EquivalentTo {}", a.render(&name), b.render(&name)),
            Axiom::DisjointClasses(cs) if cs.len() == 2 => format!("{} DisjointWith {}", name(&cs[0]), name(&cs[1])),
            Axiom::DisjointClasses(cs) => {
                format!("DisjointClasses: {}", cs.iter().map(&name).collect::<Vec<_>>().join(", "))
            }
            Axiom::ClassAssertion(i, c) => format!("{} Type {}", name(i), name(c)),
        }
    }
}

impl<N: fmt::Display> fmt::Display for Axiom<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|n| n.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("{kind} cannot be selected on data property `{property}`")]
    InvalidKindForDatatypeEdge { property: String, kind: AxiomKind },
    #[error("disjointness on `{property}` needs two distinct named classes")]
    DegenerateDisjointness { property: String },
    #[error("a disjointness block needs at least two classes, got {0}")]
    TooFewClasses(usize),
}

fn endpoint(name: &str) -> ClassExpr<String> {
    if name == THING {
        ClassExpr::Thing
    } else {
        ClassExpr::Class(name.to_owned())
    }
}

/// One axiom per selected kind for `edge.source -edge.property-> edge.target`,
/// in catalog order.
pub fn generate_edge_axioms(edge: &Edge, selection: &AxiomSelection) -> Result<Vec<Axiom<String>>, AxiomError> {
    let source = endpoint(&edge.source);
    let (target, top) = match edge.kind {
        EdgeKind::Object => (endpoint(&edge.target), ClassExpr::Thing),
        EdgeKind::Data => (ClassExpr::Datatype(edge.target.clone()), ClassExpr::Datatype("rdfs:Literal".into())),
    };
    let mut out = Vec::with_capacity(selection.len());
    for kind in selection.iter() {
        if edge.kind == EdgeKind::Data && kind.object_only() {
            return Err(AxiomError::InvalidKindForDatatypeEdge { property: edge.property.clone(), kind });
        }
        if kind == AxiomKind::Disjointness && (edge.source == edge.target || edge.source == THING || edge.target == THING) {
            return Err(AxiomError::DegenerateDisjointness { property: edge.property.clone() });
        }
        out.push(kind.instantiate(&source, &edge.property, &target, &top));
    }
    Ok(out)
}

/// A single n-ary disjointness axiom over `classes` (sorted, deduplicated).
pub fn generate_disjointness<N: Ord + Clone>(classes: &[N]) -> Result<Axiom<N>, AxiomError> {
    let mut set: Vec<N> = classes.to_vec();
    set.sort();
    set.dedup();
    if set.len() < 2 {
        return Err(AxiomError::TooFewClasses(set.len()));
    }
    Ok(Axiom::DisjointClasses(set))
}

/// The pairwise expansion of a disjointness axiom.
pub fn disjoint_pairs<N: Clone>(classes: &[N]) -> Vec<(N, N)> {
    let mut out = Vec::new();
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            out.push((a.clone(), b.clone()));
        }
    }
    out
}
