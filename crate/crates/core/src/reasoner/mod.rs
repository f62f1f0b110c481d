//! A bounded forward-chaining materializer for the generated axiom
//! fragment, with entailment checks, conjunctive queries and lint.
//!
//! Axioms are read as rules over an instance store: `only` types the
//! fillers it reaches (a productive reading, not a constraint), `max 1`
//! merges fillers into one equality class, `some` creates a fresh filler
//! when none is known, and disjointness records clashes. There is no
//! unique-name assumption.

mod lint;
mod materialize;
mod query;
mod store;

use thiserror::Error;

use crate::axiom::Ontology;
use crate::expr::{ClassExpr, Iri};

pub use lint::lint;
pub use materialize::{materialize, Clash, Fact, Saturation, DEFAULT_DEPTH};
pub use query::{bindings_tsv, parse_query, query, Atom, Binding, QueryError, QueryTerm};
pub use store::{emit_instance_turtle, read_instance_store, InstanceStore, Literal, Value};

/// Something that may follow from an ontology and a store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assertion {
    Instance(Iri, ClassExpr<Iri>),
    Property(Iri, Iri, Value),
    Same(Iri, Iri),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonError {
    #[error("unknown entity `{0}`")]
    UnknownEntity(Iri),
}

/// Whether `assertion` holds, modulo equality, in the saturation of
/// `store` at `depth`. Class and property names must be declared by the
/// ontology or used in the store; an ontology without declarations accepts
/// any name.
pub fn entails(ontology: &Ontology, store: &InstanceStore, assertion: &Assertion, depth: usize) -> Result<bool, ReasonError> {
    let declared = ontology.entity_index();
    if !declared.is_empty() {
        let known = |n: &Iri| {
            declared.contains_key(n)
                || store.individuals.contains(n)
                || store.class_assertions.iter().any(|(_, c)| c == n)
                || store.property_assertions.iter().any(|(_, p, _)| p == n)
        };
        let mut names = Vec::new();
        match assertion {
            Assertion::Instance(_, e) => e.visit_names(&mut |n, _| names.push(n.clone())),
            Assertion::Property(_, p, _) => names.push(p.clone()),
            Assertion::Same(..) => {}
        }
        if let Some(n) = names.into_iter().find(|n| !known(n)) {
            return Err(ReasonError::UnknownEntity(n));
        }
    }
    let sat = materialize(ontology, store, depth);
    Ok(match assertion {
        Assertion::Instance(x, e) => sat.holds(&Value::Individual(x.clone()), e),
        Assertion::Property(s, p, o) => {
            let o = match o {
                Value::Individual(i) => Value::Individual(sat.representative(i)),
                lit => lit.clone(),
            };
            sat.fillers(s, &crate::expr::PropertyExpr::named(p.clone())).contains(&o)
        }
        Assertion::Same(a, b) => sat.same(a, b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_ontology_entails_nothing() {
        let o = Ontology::empty("t", "http://ex.org/");
        let a = Assertion::Instance(Iri::new("http://ex.org/r"), ClassExpr::Class(Iri::new("http://ex.org/Recipe")));
        assert_eq!(entails(&o, &InstanceStore::new(), &a, DEFAULT_DEPTH), Ok(false));
    }
}
