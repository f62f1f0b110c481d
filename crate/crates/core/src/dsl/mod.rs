//! The `.odp` project language.
//!
//! ```text
//! base <https://example.org/recipe/>.
//!
//! pattern Plan {
//!   doc "A plan leads from an initial to a goal situation.".
//!   class Plan, Situation.
//!   object Plan -requires-> Situation.
//! }
//!
//! module RecipeAsPlan instantiates Plan {
//!   rename Plan -> Recipe.
//!   object Recipe -requires-> Situation [scoped-range, existential].
//!   data Recipe -hasName-> xsd:string [scoped-range].
//!   individual Fat : NutritionalContentType.
//!   extra { Recipe SubClassOf requires some (hasConstituent some QuantityOfFood). }
//!   disjoint { Recipe, Situation }
//!   bridge Recipe = Merge:Recipe.
//! }
//! ```
//!
//! `Module:Name` refers to an entity of another module; `xsd:`/`rdfs:`
//! names are datatypes; `Thing` and `owl:Thing` are `owl:Thing`.
//! Comments run from `#` to the end of the line.

mod parser;
mod print;
mod resolve;

use crate::axiom::Axiom;
use crate::schema::{PatternTemplate, SchemaGraph};

pub use parser::{parse_class_expression, parse_project, DslError};
pub use resolve::{resolve, ResolveError, ResolveErrorKind, ResolvedModule, ResolvedProject};

pub const DEFAULT_BASE_IRI: &str = "https://example.org/odp/";

/// A parsed project file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Project {
    pub base_iri: Option<String>,
    pub patterns: Vec<PatternTemplate>,
    pub modules: Vec<ModuleDef>,
}

impl Project {
    pub fn base_iri(&self) -> String {
        let base = self.base_iri.as_deref().unwrap_or(DEFAULT_BASE_IRI);
        if base.ends_with('/') || base.ends_with('#') {
            base.to_owned()
        } else {
            format!("{base}/")
        }
    }

    pub fn module(&self, name: &str) -> Option<&ModuleDef> {
        self.modules.iter().find(|m| m.name == name)
    }

    /// Pretty-prints the project back to `.odp` source.
    pub fn to_source(&self) -> String {
        print::print_project(self)
    }
}

/// One `module` block.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModuleDef {
    pub name: String,
    pub instantiates: Option<String>,
    /// `rename a -> b` statements; whether `a` is a class or a property is
    /// decided against the template during resolution.
    pub renames: Vec<(String, String)>,
    pub deletions: Vec<String>,
    pub local_graph: SchemaGraph,
    pub extra_axioms: Vec<Axiom<String>>,
    pub disjoint_blocks: Vec<Vec<String>>,
    /// `(local class, Module:Class)` equivalences.
    pub bridges: Vec<(String, String)>,
}

/// Splits `Module:Name` into its parts.
pub fn split_qualified(name: &str) -> Option<(&str, &str)> {
    name.split_once(':')
}

pub(crate) fn is_datatype_prefix(prefix: &str) -> bool {
    matches!(prefix, "xsd" | "rdfs" | "rdf")
}
