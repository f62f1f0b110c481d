//! Class expression trees shared by the DSL, the axiom engine and the
//! reasoner. Expressions are generic over the entity name type: plain
//! identifiers inside a module, [`Iri`]s once compiled.

use std::fmt;

/// Absolute IRI of a compiled entity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(iri: impl Into<String>) -> Self {
        Iri(iri.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part after the last `/` or `#`.
    pub fn local_name(&self) -> &str {
        match self.0.rfind(['/', '#']) {
            Some(i) => &self.0[i + 1..],
            None => &self.0,
        }
    }

    pub fn namespace(&self) -> &str {
        &self.0[..self.0.len() - self.local_name().len()]
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropertyExpr<N> {
    pub name: N,
    pub inverse: bool,
}

impl<N> PropertyExpr<N> {
    pub fn named(name: N) -> Self {
        PropertyExpr { name, inverse: false }
    }

    pub fn inverse(name: N) -> Self {
        PropertyExpr { name, inverse: true }
    }

    pub fn map<M>(&self, f: &mut impl FnMut(&N) -> M) -> PropertyExpr<M> {
        PropertyExpr { name: f(&self.name), inverse: self.inverse }
    }
}

/// `Thing | C | datatype | R some E | R only E | R max n E | E and ... and E`.
///
/// Unqualified cardinalities are `Max(n, R, Thing)`; datatypes keep their
/// prefixed form (`xsd:string`, `rdfs:Literal`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassExpr<N> {
    Thing,
    Class(N),
    Datatype(String),
    Some(PropertyExpr<N>, Box<ClassExpr<N>>),
    Only(PropertyExpr<N>, Box<ClassExpr<N>>),
    Max(u32, PropertyExpr<N>, Box<ClassExpr<N>>),
    And(Vec<ClassExpr<N>>),
}

impl<N> ClassExpr<N> {
    pub fn class(name: N) -> Self {
        ClassExpr::Class(name)
    }

    pub fn some(prop: PropertyExpr<N>, filler: ClassExpr<N>) -> Self {
        ClassExpr::Some(prop, Box::new(filler))
    }

    pub fn only(prop: PropertyExpr<N>, filler: ClassExpr<N>) -> Self {
        ClassExpr::Only(prop, Box::new(filler))
    }

    pub fn max(n: u32, prop: PropertyExpr<N>, filler: ClassExpr<N>) -> Self {
        ClassExpr::Max(n, prop, Box::new(filler))
    }

    pub fn is_named(&self) -> bool {
        matches!(self, ClassExpr::Class(_))
    }

    pub fn as_class(&self) -> Option<&N> {
        match self {
            ClassExpr::Class(n) => Some(n),
            _ => None,
        }
    }

    /// Rebuilds the tree with every entity name passed through `f`.
    /// `f` receives the name and whether it is a property.
    pub fn map_names<M>(&self, f: &mut impl FnMut(&N, bool) -> M) -> ClassExpr<M> {
        match self {
            ClassExpr::Thing => ClassExpr::Thing,
            ClassExpr::Class(n) => ClassExpr::Class(f(n, false)),
            ClassExpr::Datatype(d) => ClassExpr::Datatype(d.clone()),
            ClassExpr::Some(p, e) => ClassExpr::Some(p.map(&mut |n| f(n, true)), Box::new(e.map_names(f))),
            ClassExpr::Only(p, e) => ClassExpr::Only(p.map(&mut |n| f(n, true)), Box::new(e.map_names(f))),
            ClassExpr::Max(k, p, e) => ClassExpr::Max(*k, p.map(&mut |n| f(n, true)), Box::new(e.map_names(f))),
            ClassExpr::And(es) => ClassExpr::And(es.iter().map(|e| e.map_names(f)).collect()),
        }
    }

    /// Visits every entity name in the tree, flagging properties.
    pub fn visit_names<'a>(&'a self, f: &mut impl FnMut(&'a N, bool)) {
        match self {
            ClassExpr::Thing | ClassExpr::Datatype(_) => {}
            ClassExpr::Class(n) => f(n, false),
            ClassExpr::Some(p, e) | ClassExpr::Only(p, e) | ClassExpr::Max(_, p, e) => {
                f(&p.name, true);
                e.visit_names(f);
            }
            ClassExpr::And(es) => es.iter().for_each(|e| e.visit_names(f)),
        }
    }

    /// Writes the expression in Manchester syntax, naming entities with `name`.
    pub fn write_with(&self, out: &mut String, name: &impl Fn(&N) -> String) {
        match self {
            ClassExpr::Thing => out.push_str("owl:Thing"),
            ClassExpr::Class(n) => out.push_str(&name(n)),
            ClassExpr::Datatype(d) => out.push_str(d),
            ClassExpr::Some(p, e) | ClassExpr::Only(p, e) => {
                write_property(out, p, name);
                out.push_str(if matches!(self, ClassExpr::Some(..)) { " some " } else { " only " });
                e.write_filler(out, name);
            }
            ClassExpr::Max(k, p, e) => {
                write_property(out, p, name);
                out.push_str(&format!(" max {k}"));
                if !matches!(**e, ClassExpr::Thing) {
                    out.push(' ');
                    e.write_filler(out, name);
                }
            }
            ClassExpr::And(es) => {
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" and ");
                    }
                    e.write_filler(out, name);
                }
            }
        }
    }

    fn write_filler(&self, out: &mut String, name: &impl Fn(&N) -> String) {
        match self {
            ClassExpr::Thing | ClassExpr::Class(_) | ClassExpr::Datatype(_) => self.write_with(out, name),
            _ => {
                out.push('(');
                self.write_with(out, name);
                out.push(')');
            }
        }
    }

    pub fn render(&self, name: impl Fn(&N) -> String) -> String {
        let mut out = String::new();
        self.write_with(&mut out, &name);
        out
    }
}

fn write_property<N>(out: &mut String, p: &PropertyExpr<N>, name: &impl Fn(&N) -> String) {
    if p.inverse {
        out.push_str("inverse ");
    }
    out.push_str(&name(&p.name));
}

impl<N: fmt::Display> fmt::Display for ClassExpr<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|n| n.to_string()))
    }
}
