//! Compile schema diagrams and ontology design pattern instantiations into
//! modular OWL ontologies.
//!
//! The pipeline mirrors the modular modeling workflow: pattern templates are
//! instantiated and joined into module [`schema::SchemaGraph`]s, each edge of
//! a module carries a selection from the fifteen single-edge axiom kinds
//! ([`axiom::AxiomKind`]), and [`axiom::compile`] turns the resolved project
//! into an [`axiom::Ontology`] with one namespace per module.
//!
//! - [`dsl`]: the `.odp` project language (parse, print, resolve)
//! - [`schema`]: schema graphs and the instantiate/join algebra
//! - [`axiom`]: axiom generation and compilation
//! - [`emit`]: Manchester, Turtle and DOT output, plus a Turtle read-back
//! - [`reasoner`]: bounded materialization, queries and lint
//! - [`catalog`]: built-in patterns and example projects

pub mod axiom;
pub mod catalog;
pub mod diagnostic;
pub mod dsl;
pub mod emit;
pub mod expr;
pub mod reasoner;
pub mod schema;

pub use axiom::{compile, Axiom, AxiomKind, AxiomSelection, Ontology};
pub use diagnostic::{Diagnostic, Severity};
pub use dsl::{parse_class_expression, parse_project, resolve, Project, ResolvedProject};
pub use expr::{ClassExpr, Iri, PropertyExpr};
pub use schema::SchemaGraph;
