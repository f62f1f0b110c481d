use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::dsl::{split_qualified, ResolvedModule, ResolvedProject};
use crate::expr::{ClassExpr, Iri};
use crate::schema::{EdgeKind, THING};

use super::{generate_disjointness, generate_edge_axioms, Axiom, AxiomError, AxiomSelection, EntityCategory};

/// `rdfs:isDefinedBy`, the module-provenance annotation property.
pub const IS_DEFINED_BY: &str = "http://www.w3.org/2000/01/rdf-schema#isDefinedBy";

/// `subject rdfs:isDefinedBy module-namespace`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Annotation {
    pub subject: Iri,
    pub property: Iri,
    pub value: Iri,
}

/// One diagram edge after name resolution, kept for lint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeSummary {
    pub property: Iri,
    pub source: ClassExpr<Iri>,
    pub target: ClassExpr<Iri>,
    pub kind: EdgeKind,
    pub selection: AxiomSelection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyModule {
    pub name: String,
    pub namespace: String,
    /// Declarations, then generated and extra subclass axioms in generation
    /// order, then bridges, disjointness and class assertions.
    pub axioms: Vec<Axiom<Iri>>,
    pub annotations: Vec<Annotation>,
    pub edges: Vec<EdgeSummary>,
}

impl OntologyModule {
    /// Prefix used for this module's namespace in serializations.
    pub fn prefix(&self) -> String {
        module_prefix(&self.name)
    }
}

pub(crate) fn module_prefix(module: &str) -> String {
    module.to_lowercase()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ontology {
    pub name: String,
    pub base_iri: String,
    pub modules: Vec<OntologyModule>,
}

impl Ontology {
    pub fn empty(name: &str, base_iri: &str) -> Self {
        Ontology { name: name.to_owned(), base_iri: base_iri.to_owned(), modules: Vec::new() }
    }

    pub fn module(&self, name: &str) -> Option<&OntologyModule> {
        self.modules.iter().find(|m| m.name == name)
    }

    /// The module axioms concatenated in module order.
    pub fn merged_axioms(&self) -> Vec<Axiom<Iri>> {
        self.modules.iter().flat_map(|m| m.axioms.iter().cloned()).collect()
    }

    /// Every `EquivalentClasses` axiom: the content of the mapping file.
    pub fn bridge_axioms(&self) -> Vec<Axiom<Iri>> {
        self.merged_axioms().into_iter().filter(|a| matches!(a, Axiom::EquivalentClasses(..))).collect()
    }

    pub fn axiom_multiset(&self) -> BTreeMap<Axiom<Iri>, usize> {
        let mut out = BTreeMap::new();
        for a in self.merged_axioms() {
            *out.entry(a).or_insert(0) += 1;
        }
        out
    }

    /// IRI → category, from the declarations.
    pub fn entity_index(&self) -> BTreeMap<Iri, EntityCategory> {
        let mut out = BTreeMap::new();
        for m in &self.modules {
            for a in &m.axioms {
                if let Axiom::Declaration(iri, cat) = a {
                    out.insert(iri.clone(), *cat);
                }
            }
        }
        out
    }

    /// `(prefix, namespace)` for every module, in module order.
    pub fn prefixes(&self) -> Vec<(String, String)> {
        self.modules.iter().map(|m| (m.prefix(), m.namespace.clone())).collect()
    }

    pub fn subclass_axiom_count(&self) -> usize {
        self.merged_axioms().iter().filter(|a| matches!(a, Axiom::SubClassOf(..))).count()
    }

    pub fn logical_axiom_count(&self) -> usize {
        self.merged_axioms().iter().filter(|a| a.is_logical()).count()
    }

    /// Names used by some axiom without a declaration anywhere.
    pub fn undeclared_references(&self) -> BTreeSet<Iri> {
        let index = self.entity_index();
        let mut out = BTreeSet::new();
        for a in self.merged_axioms() {
            a.visit_names(&mut |n, _| {
                if !index.contains_key(n) {
                    out.insert(n.clone());
                }
            });
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("module `{module}`: {source}")]
    Axiom {
        module: String,
        #[source]
        source: AxiomError,
    },
    #[error("module `{module}`: unknown entity `{name}`")]
    UnknownEntity { module: String, name: String },
}

struct Names<'a> {
    base: &'a str,
    module: &'a ResolvedModule,
    namespace: String,
}

impl Names<'_> {
    fn iri(&self, name: &str) -> Result<Iri, CompileError> {
        match split_qualified(name) {
            Some((m, local)) => Ok(Iri::new(format!("{}{m}/{local}", self.base))),
            None if self.module.graph.category_of(name).is_some() => Ok(Iri::new(format!("{}{name}", self.namespace))),
            None => Err(CompileError::UnknownEntity { module: self.module.name.clone(), name: name.to_owned() }),
        }
    }

    fn expr(&self, name: &str) -> Result<ClassExpr<Iri>, CompileError> {
        if name == THING {
            return Ok(ClassExpr::Thing);
        }
        if self.module.graph.datatypes().contains(name) {
            return Ok(ClassExpr::Datatype(name.to_owned()));
        }
        self.iri(name).map(ClassExpr::Class)
    }

    fn axiom(&self, axiom: &Axiom<String>) -> Result<Axiom<Iri>, CompileError> {
        let mut err = None;
        let out = axiom.map_names(&mut |n, _| {
            self.iri(n).unwrap_or_else(|e| {
                err.get_or_insert(e);
                Iri::new(n.clone())
            })
        });
        err.map_or(Ok(out), Err)
    }
}

/// Compiles every module of a resolved project into its own namespace.
/// Fails as a whole: no partially compiled ontology is ever returned.
pub fn compile(resolved: &ResolvedProject) -> Result<Ontology, CompileError> {
    let mut ontology = Ontology::empty(&resolved.name, &resolved.base_iri);
    for module in &resolved.modules {
        ontology.modules.push(compile_module(&resolved.base_iri, module)?);
    }
    Ok(ontology)
}

fn compile_module(base: &str, module: &ResolvedModule) -> Result<OntologyModule, CompileError> {
    let namespace = format!("{base}{}/", module.name);
    let names = Names { base, module, namespace: namespace.clone() };
    let graph = &module.graph;
    let axiom_err = |source| CompileError::Axiom { module: module.name.clone(), source };

    let mut declarations = Vec::new();
    for c in graph.classes() {
        declarations.push(Axiom::Declaration(names.iri(c)?, EntityCategory::Class));
    }
    for (p, kind) in graph.properties() {
        let cat = match kind {
            EdgeKind::Object => EntityCategory::ObjectProperty,
            EdgeKind::Data => EntityCategory::DataProperty,
        };
        declarations.push(Axiom::Declaration(names.iri(p)?, cat));
    }
    for i in graph.individuals().keys() {
        declarations.push(Axiom::Declaration(names.iri(i)?, EntityCategory::Individual));
    }
    declarations.sort_by(|a, b| match (a, b) {
        (Axiom::Declaration(x, cx), Axiom::Declaration(y, cy)) => (cx, x).cmp(&(cy, y)),
        _ => a.cmp(b),
    });

    let mut logical = Vec::new();
    let mut edges = Vec::new();
    for edge in graph.edges() {
        for a in generate_edge_axioms(edge, &edge.selection).map_err(axiom_err)? {
            logical.push(names.axiom(&a)?);
        }
        edges.push(EdgeSummary {
            property: names.iri(&edge.property)?,
            source: names.expr(&edge.source)?,
            target: match edge.kind {
                EdgeKind::Object => names.expr(&edge.target)?,
                EdgeKind::Data => ClassExpr::Datatype(edge.target.clone()),
            },
            kind: edge.kind,
            selection: edge.selection.clone(),
        });
    }
    for a in &module.extra_axioms {
        let a = names.axiom(a)?;
        // Extra disjointness is kept in canonical (sorted) member order.
        logical.push(match a {
            Axiom::DisjointClasses(cs) => generate_disjointness(&cs).map_err(axiom_err)?,
            other => other,
        });
    }
    for (local, other) in &module.bridges {
        logical.push(Axiom::EquivalentClasses(names.expr(local)?, names.expr(other)?));
    }
    for block in &module.disjoint_blocks {
        let iris = block.iter().map(|c| names.iri(c)).collect::<Result<Vec<_>, _>>()?;
        logical.push(generate_disjointness(&iris).map_err(axiom_err)?);
    }
    let mut assertions = Vec::new();
    for (i, c) in graph.individuals() {
        assertions.push(Axiom::ClassAssertion(names.iri(i)?, names.iri(c)?));
    }
    assertions.sort();
    logical.extend(assertions);
    // Stable: generation order is kept within each category.
    logical.sort_by_key(Axiom::category_rank);

    let annotations = declarations
        .iter()
        .filter_map(|d| match d {
            Axiom::Declaration(iri, _) => Some(Annotation {
                subject: iri.clone(),
                property: Iri::new(IS_DEFINED_BY),
                value: Iri::new(namespace.clone()),
            }),
            _ => None,
        })
        .collect();

    let mut axioms = declarations;
    axioms.extend(logical);
    Ok(OntologyModule { name: module.name.clone(), namespace, axioms, annotations, edges })
}
