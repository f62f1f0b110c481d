//! The fifteen axiom kinds a single `A -R-> B` schema edge can give rise to.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::expr::{ClassExpr, PropertyExpr};

use super::Axiom;

/// One entry of the single-edge axiom catalog, in catalog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomKind {
    Disjointness,
    Domain,
    ScopedDomain,
    Range,
    ScopedRange,
    Existential,
    InverseExistential,
    Functionality,
    QualifiedFunctionality,
    ScopedFunctionality,
    QualifiedScopedFunctionality,
    InverseFunctionality,
    InverseQualifiedFunctionality,
    InverseScopedFunctionality,
    InverseQualifiedScopedFunctionality,
}

use AxiomKind::*;

impl AxiomKind {
    pub const ALL: [AxiomKind; 15] = [
        Disjointness,
        Domain,
        ScopedDomain,
        Range,
        ScopedRange,
        Existential,
        InverseExistential,
        Functionality,
        QualifiedFunctionality,
        ScopedFunctionality,
        QualifiedScopedFunctionality,
        InverseFunctionality,
        InverseQualifiedFunctionality,
        InverseScopedFunctionality,
        InverseQualifiedScopedFunctionality,
    ];

    /// 1-based position in the catalog.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn from_number(n: usize) -> Option<AxiomKind> {
        Self::ALL.get(n.checked_sub(1)?).copied()
    }

    /// Human-readable catalog name, e.g. "qualified scoped functionality".
    pub fn name(self) -> &'static str {
        match self {
            Disjointness => "disjointness",
            Domain => "domain",
            ScopedDomain => "scoped domain",
            Range => "range",
            ScopedRange => "scoped range",
            Existential => "existential",
            InverseExistential => "inverse existential",
            Functionality => "functionality",
            QualifiedFunctionality => "qualified functionality",
            ScopedFunctionality => "scoped functionality",
            QualifiedScopedFunctionality => "qualified scoped functionality",
            InverseFunctionality => "inverse functionality",
            InverseQualifiedFunctionality => "inverse qualified functionality",
            InverseScopedFunctionality => "inverse scoped functionality",
            InverseQualifiedScopedFunctionality => "inverse qualified scoped functionality",
        }
    }

    /// DSL keyword used in edge selections.
    pub fn keyword(self) -> &'static str {
        match self {
            Disjointness => "disjointness",
            Domain => "domain",
            ScopedDomain => "scoped-domain",
            Range => "range",
            ScopedRange => "scoped-range",
            Existential => "existential",
            InverseExistential => "inv-existential",
            Functionality => "functional",
            QualifiedFunctionality => "qual-functional",
            ScopedFunctionality => "scoped-functional",
            QualifiedScopedFunctionality => "qual-scoped-functional",
            InverseFunctionality => "inv-functional",
            InverseQualifiedFunctionality => "inv-qual-functional",
            InverseScopedFunctionality => "inv-scoped-functional",
            InverseQualifiedScopedFunctionality => "inv-qual-scoped-functional",
        }
    }

    pub fn from_keyword(keyword: &str) -> Option<AxiomKind> {
        // "scoped qualified functionality" is used interchangeably with the
        // catalog's "qualified scoped functionality".
        match keyword {
            "scoped-qual-functional" => Some(QualifiedScopedFunctionality),
            "inv-scoped-qual-functional" => Some(InverseQualifiedScopedFunctionality),
            _ => Self::ALL.into_iter().find(|k| k.keyword() == keyword),
        }
    }

    pub fn dl_template(self) -> &'static str {
        match self {
            Disjointness => "A ⊓ B ⊑ ⊥",
            Domain => "∃R.⊤ ⊑ A",
            ScopedDomain => "∃R.B ⊑ A",
            Range => "⊤ ⊑ ∀R.B",
            ScopedRange => "A ⊑ ∀R.B",
            Existential => "A ⊑ ∃R.B",
            InverseExistential => "B ⊑ ∃R⁻.A",
            Functionality => "⊤ ⊑ ≤1R.⊤",
            QualifiedFunctionality => "⊤ ⊑ ≤1R.B",
            ScopedFunctionality => "A ⊑ ≤1R.⊤",
            QualifiedScopedFunctionality => "A ⊑ ≤1R.B",
            InverseFunctionality => "⊤ ⊑ ≤1R⁻.⊤",
            InverseQualifiedFunctionality => "⊤ ⊑ ≤1R⁻.A",
            InverseScopedFunctionality => "B ⊑ ≤1R⁻.⊤",
            InverseQualifiedScopedFunctionality => "B ⊑ ≤1R⁻.A",
        }
    }

    pub fn manchester_template(self) -> &'static str {
        match self {
            Disjointness => "A DisjointWith B",
            Domain => "R some owl:Thing SubClassOf A",
            ScopedDomain => "R some B SubClassOf A",
            Range => "owl:Thing SubClassOf R only B",
            ScopedRange => "A SubClassOf R only B",
            Existential => "A SubClassOf R some B",
            InverseExistential => "B SubClassOf inverse R some A",
            Functionality => "owl:Thing SubClassOf R max 1 owl:Thing",
            QualifiedFunctionality => "owl:Thing SubClassOf R max 1 B",
            ScopedFunctionality => "A SubClassOf R max 1 owl:Thing",
            QualifiedScopedFunctionality => "A SubClassOf R max 1 B",
            InverseFunctionality => "owl:Thing SubClassOf inverse R max 1 owl:Thing",
            InverseQualifiedFunctionality => "owl:Thing SubClassOf inverse R max 1 A",
            InverseScopedFunctionality => "B SubClassOf inverse R max 1 owl:Thing",
            InverseQualifiedScopedFunctionality => "B SubClassOf inverse R max 1 A",
        }
    }

    pub fn uses_inverse(self) -> bool {
        matches!(
            self,
            InverseExistential
                | InverseFunctionality
                | InverseQualifiedFunctionality
                | InverseScopedFunctionality
                | InverseQualifiedScopedFunctionality
        )
    }

    /// Kinds that only make sense for object properties.
    pub fn object_only(self) -> bool {
        self == Disjointness || self.uses_inverse()
    }

    pub fn is_domain_family(self) -> bool {
        matches!(self, Domain | ScopedDomain)
    }

    pub fn is_range_family(self) -> bool {
        matches!(self, Range | ScopedRange)
    }

    /// Instantiates the template for `source -property-> target`.
    ///
    /// `target` is a class or datatype expression; `literal_top` stands in
    /// for `owl:Thing` as an existential filler (`rdfs:Literal` on datatype
    /// edges).
    pub fn instantiate<N: Clone>(
        self,
        source: &ClassExpr<N>,
        property: &N,
        target: &ClassExpr<N>,
        literal_top: &ClassExpr<N>,
    ) -> Axiom<N> {
        let a = source.clone();
        let b = target.clone();
        let r = || PropertyExpr::named(property.clone());
        let r_inv = || PropertyExpr::inverse(property.clone());
        let sub = |sub, sup| Axiom::SubClassOf(sub, sup);
        match self {
            Disjointness => {
                let classes = [source, target].into_iter().filter_map(|c| c.as_class().cloned()).collect();
                Axiom::DisjointClasses(classes)
            }
            Domain => sub(ClassExpr::some(r(), literal_top.clone()), a),
            ScopedDomain => sub(ClassExpr::some(r(), b), a),
            Range => sub(ClassExpr::Thing, ClassExpr::only(r(), b)),
            ScopedRange => sub(a, ClassExpr::only(r(), b)),
            Existential => sub(a, ClassExpr::some(r(), b)),
            InverseExistential => sub(b, ClassExpr::some(r_inv(), a)),
            Functionality => sub(ClassExpr::Thing, ClassExpr::max(1, r(), ClassExpr::Thing)),
            QualifiedFunctionality => sub(ClassExpr::Thing, ClassExpr::max(1, r(), b)),
            ScopedFunctionality => sub(a, ClassExpr::max(1, r(), ClassExpr::Thing)),
            QualifiedScopedFunctionality => sub(a, ClassExpr::max(1, r(), b)),
            InverseFunctionality => sub(ClassExpr::Thing, ClassExpr::max(1, r_inv(), ClassExpr::Thing)),
            InverseQualifiedFunctionality => sub(ClassExpr::Thing, ClassExpr::max(1, r_inv(), a)),
            InverseScopedFunctionality => sub(b, ClassExpr::max(1, r_inv(), ClassExpr::Thing)),
            InverseQualifiedScopedFunctionality => sub(b, ClassExpr::max(1, r_inv(), a)),
        }
    }
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomKind::from_keyword(s).ok_or_else(|| format!("unknown axiom kind `{s}`"))
    }
}

/// The subset of catalog kinds chosen for one edge.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AxiomSelection(BTreeSet<AxiomKind>);

impl AxiomSelection {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, kind: AxiomKind) -> bool {
        self.0.insert(kind)
    }

    pub fn contains(&self, kind: AxiomKind) -> bool {
        self.0.contains(&kind)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Kinds in catalog order.
    pub fn iter(&self) -> impl Iterator<Item = AxiomKind> + '_ {
        self.0.iter().copied()
    }

    pub fn union_with(&mut self, other: &AxiomSelection) {
        self.0.extend(other.iter());
    }
}

impl FromIterator<AxiomKind> for AxiomSelection {
    fn from_iter<T: IntoIterator<Item = AxiomKind>>(iter: T) -> Self {
        AxiomSelection(iter.into_iter().collect())
    }
}

impl<const K: usize> From<[AxiomKind; K]> for AxiomSelection {
    fn from(kinds: [AxiomKind; K]) -> Self {
        kinds.into_iter().collect()
    }
}

/// One row of [`axiom_kind_catalog`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub kind: AxiomKind,
    pub dl: &'static str,
    pub manchester: &'static str,
}

pub fn axiom_kind_catalog() -> Vec<CatalogEntry> {
    AxiomKind::ALL
        .into_iter()
        .map(|kind| CatalogEntry { kind, dl: kind.dl_template(), manchester: kind.manchester_template() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keywords_round_trip() {
        for kind in AxiomKind::ALL {
            assert_eq!(AxiomKind::from_keyword(kind.keyword()), Some(kind));
            assert_eq!(AxiomKind::from_number(kind.number()), Some(kind));
        }
        assert_eq!(AxiomKind::from_keyword("scoped-qual-functional"), Some(QualifiedScopedFunctionality));
        assert_eq!(AxiomKind::from_keyword("nope"), None);
        assert_eq!(AxiomKind::from_number(0), None);
        assert_eq!(AxiomKind::from_number(16), None);
    }

    #[test]
    fn catalog_entries_line_up() {
        let catalog = axiom_kind_catalog();
        assert_eq!(catalog.len(), 15);
        assert_eq!(catalog[2].kind, ScopedDomain);
        assert_eq!(catalog[2].dl, "∃R.B ⊑ A");
        assert_eq!(catalog[2].manchester, "R some B SubClassOf A");
        assert_eq!(catalog[0].manchester, "A DisjointWith B");
    }

    /// Instantiating with A, R, B and printing must reproduce the textual
    /// template, so the two representations cannot drift apart.
    #[test]
    fn instantiated_templates_print_as_catalog_text() {
        let a = ClassExpr::class("A");
        let b = ClassExpr::class("B");
        for kind in AxiomKind::ALL.into_iter().skip(1) {
            let axiom = kind.instantiate(&a, &"R", &b, &ClassExpr::Thing);
            let Axiom::SubClassOf(sub, sup) = axiom else { panic!("{kind:?}") };
            let printed = format!("{} SubClassOf {}", sub, sup);
            // the template spells out the unqualified filler
            let template = kind.manchester_template().replace(" max 1 owl:Thing", " max 1");
            assert_eq!(printed, template, "{kind:?}");
        }
    }
}
