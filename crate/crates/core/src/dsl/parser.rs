use std::collections::BTreeSet;

use thiserror::Error;

use crate::axiom::{generate_disjointness, Axiom, AxiomKind, AxiomSelection};
use crate::expr::{ClassExpr, PropertyExpr};
use crate::schema::{Edge, PatternTemplate, SchemaGraph, THING};

use super::{is_datatype_prefix, ModuleDef, Project};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Syntax { line: usize, col: usize, expected: String, found: String },
    #[error("{line}:{col}: duplicate name `{name}`")]
    DuplicateName { line: usize, col: usize, name: String },
}

impl DslError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            DslError::Syntax { line, col, .. } | DslError::DuplicateName { line, col, .. } => (*line, *col),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    /// `prefix:local`, written without whitespace.
    Qualified(String),
    Int(u32),
    Str(String),
    IriRef(String),
    Arrow,
    Dash,
    Punct(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Qualified(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::IriRef(i) => format!("<{i}>"),
            Tok::Arrow => "`->`".into(),
            Tok::Dash => "`-`".into(),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

fn lex(text: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, expected: &str, found: String| DslError::Syntax { line, col, expected: expected.into(), found };

    // Identifiers may contain `-` but never end with one, and stop before `->`.
    let ident_end = |start: usize| {
        let mut j = start;
        while j < chars.len() && is_ident_char(chars[j]) {
            if chars[j] == '-' && (j + 1 >= chars.len() || chars[j + 1] == '>' || !is_ident_char(chars[j + 1])) {
                break;
            }
            j += 1;
        }
        j
    };

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let start = i;
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 2;
                Tok::Arrow
            }
            '-' => {
                i += 1;
                Tok::Dash
            }
            '{' | '}' | '[' | ']' | '(' | ')' | ',' | '.' | ':' | '=' => {
                i += 1;
                Tok::Punct(c)
            }
            '<' => {
                let close = chars[i..].iter().position(|&c| c == '>' || c == '\n');
                match close {
                    Some(k) if chars[i + k] == '>' => {
                        let iri: String = chars[i + 1..i + k].iter().collect();
                        i += k + 1;
                        Tok::IriRef(iri)
                    }
                    _ => return Err(err(tl, tc, "`>` closing the IRI", "end of line".into())),
                }
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None | Some('\n') => return Err(err(tl, tc, "closing `\"`", "end of line".into())),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            match chars.get(i + 1) {
                                Some('n') => s.push('\n'),
                                Some(&e @ ('"' | '\\')) => s.push(e),
                                _ => return Err(err(line, col + (i - start), "escape `\\\"`, `\\\\` or `\\n`", "`\\`".into())),
                            }
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits.parse().map_err(|_| err(tl, tc, "a small integer", format!("`{digits}`")))?;
                Tok::Int(n)
            }
            c if is_ident_start(c) => {
                i = ident_end(i);
                let prefix: String = chars[start..i].iter().collect();
                if chars.get(i) == Some(&':') && chars.get(i + 1).is_some_and(|&c| is_ident_start(c) || c.is_ascii_digit()) {
                    let local_start = i + 1;
                    i = ident_end(local_start);
                    let local: String = chars[local_start..i].iter().collect();
                    Tok::Qualified(format!("{prefix}:{local}"))
                } else {
                    Tok::Ident(prefix)
                }
            }
            other => return Err(err(tl, tc, "a token", format!("`{other}`"))),
        };
        col += i - start;
        out.push(Token { tok, line: tl, col: tc });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

const EXPR_KEYWORDS: [&str; 7] = ["some", "only", "max", "and", "inverse", "SubClassOf", "EquivalentTo"];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, DslError>;

impl Parser {
    fn new(text: &str) -> PResult<Self> {
        Ok(Parser { tokens: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn here(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> PResult<T> {
        let t = self.here();
        Err(DslError::Syntax { line: t.line, col: t.col, expected: expected.into(), found: t.tok.describe() })
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            self.fail(&format!("`{kw}`"))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> PResult<()> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            self.fail(&format!("`{c}`"))
        }
    }

    fn expect_arrow(&mut self) -> PResult<()> {
        if self.peek() == &Tok::Arrow {
            self.bump();
            Ok(())
        } else {
            self.fail("`->`")
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(what),
        }
    }

    /// A plain or `Module:`-qualified name.
    fn name(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Qualified(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(what),
        }
    }

    fn project(&mut self) -> PResult<Project> {
        let mut project = Project::default();
        let mut names = BTreeSet::new();
        loop {
            let start = self.here().clone();
            match self.peek() {
                Tok::Eof => break,
                Tok::Ident(kw) if kw == "base" => {
                    self.bump();
                    let Tok::IriRef(iri) = self.peek().clone() else { return self.fail("an IRI in `<...>`") };
                    self.bump();
                    self.expect_punct('.')?;
                    project.base_iri = Some(iri);
                }
                Tok::Ident(kw) if kw == "pattern" => {
                    self.bump();
                    let pattern = self.pattern()?;
                    if !names.insert(("pattern", pattern.name.clone())) {
                        return Err(duplicate(&start, &pattern.name));
                    }
                    project.patterns.push(pattern);
                }
                Tok::Ident(kw) if kw == "module" => {
                    self.bump();
                    let module = self.module()?;
                    if !names.insert(("module", module.name.clone())) {
                        return Err(duplicate(&start, &module.name));
                    }
                    project.modules.push(module);
                }
                _ => return self.fail("`base`, `pattern` or `module`"),
            }
        }
        Ok(project)
    }

    fn pattern(&mut self) -> PResult<PatternTemplate> {
        let name = self.ident("a pattern name")?;
        self.expect_punct('{')?;
        let mut graph = SchemaGraph::new();
        let mut documentation = String::new();
        while !self.eat_punct('}') {
            if self.eat_keyword("doc") {
                let Tok::Str(s) = self.peek().clone() else { return self.fail("a string literal") };
                self.bump();
                self.expect_punct('.')?;
                documentation = s;
            } else if !self.graph_statement(&mut graph)? {
                return self.fail("`doc`, `class`, `object`, `data`, `individual` or `}`");
            }
        }
        Ok(PatternTemplate { name, graph, documentation })
    }

    fn module(&mut self) -> PResult<ModuleDef> {
        let mut m = ModuleDef { name: self.ident("a module name")?, ..Default::default() };
        if self.eat_keyword("instantiates") {
            m.instantiates = Some(self.ident("a pattern name")?);
        }
        self.expect_punct('{')?;
        while !self.eat_punct('}') {
            if self.graph_statement(&mut m.local_graph)? {
                continue;
            }
            if self.eat_keyword("rename") {
                let from = self.ident("the name to rename")?;
                self.expect_arrow()?;
                let to = self.ident("the new name")?;
                self.expect_punct('.')?;
                m.renames.push((from, to));
            } else if self.eat_keyword("delete") {
                m.deletions.push(self.ident("the element to delete")?);
                while self.eat_punct(',') {
                    m.deletions.push(self.ident("the element to delete")?);
                }
                self.expect_punct('.')?;
            } else if self.eat_keyword("extra") {
                self.expect_punct('{')?;
                while !self.eat_punct('}') {
                    m.extra_axioms.push(self.axiom()?);
                    self.expect_punct('.')?;
                }
                self.eat_punct('.');
            } else if self.eat_keyword("disjoint") {
                let block_start = self.here().clone();
                self.expect_punct('{')?;
                let mut block = vec![self.name("a class name")?];
                while self.eat_punct(',') {
                    block.push(self.name("a class name")?);
                }
                self.expect_punct('}')?;
                self.eat_punct('.');
                if let Some(dup) = block.iter().enumerate().find(|(i, c)| block[..*i].contains(c)).map(|(_, c)| c) {
                    return Err(duplicate(&block_start, dup));
                }
                m.disjoint_blocks.push(block);
            } else if self.eat_keyword("bridge") {
                let local = self.ident("a local class name")?;
                self.expect_punct('=')?;
                let Tok::Qualified(other) = self.peek().clone() else { return self.fail("a `Module:Class` name") };
                self.bump();
                self.expect_punct('.')?;
                m.bridges.push((local, other));
            } else {
                return self.fail("a module statement or `}`");
            }
        }
        Ok(m)
    }

    /// `class`, `object`, `data` or `individual`; false if none applies.
    fn graph_statement(&mut self, graph: &mut SchemaGraph) -> PResult<bool> {
        if self.eat_keyword("class") {
            graph.add_class(self.ident("a class name")?);
            while self.eat_punct(',') {
                graph.add_class(self.ident("a class name")?);
            }
        } else if self.is_keyword("object") || self.is_keyword("data") {
            let is_data = self.eat_keyword("data");
            if !is_data {
                self.bump();
            }
            let source = self.ident("the source class")?;
            if self.peek() != &Tok::Dash {
                return self.fail("`-` starting the edge");
            }
            self.bump();
            let property = self.ident("a property name")?;
            self.expect_arrow()?;
            let edge = if is_data {
                match self.peek().clone() {
                    Tok::Qualified(dt) if is_datatype_prefix(dt.split(':').next().unwrap_or_default()) => {
                        self.bump();
                        let selection = self.selection()?;
                        Edge::data(&property, &source, &dt, selection)
                    }
                    _ => return self.fail("a datatype such as `xsd:string`"),
                }
            } else {
                let target = self.ident("the target class")?;
                let selection = self.selection()?;
                Edge::object(&property, &source, &target, selection)
            };
            graph.add_edge(edge);
        } else if self.eat_keyword("individual") {
            let name = self.ident("an individual name")?;
            self.expect_punct(':')?;
            let class = self.ident("a class name")?;
            graph.add_individual(name, class);
        } else {
            return Ok(false);
        }
        self.expect_punct('.')?;
        Ok(true)
    }

    fn selection(&mut self) -> PResult<AxiomSelection> {
        let mut selection = AxiomSelection::new();
        if !self.eat_punct('[') {
            return Ok(selection);
        }
        if self.eat_punct(']') {
            return Ok(selection);
        }
        loop {
            let t = self.here().clone();
            let word = self.ident("an axiom kind")?;
            match AxiomKind::from_keyword(&word) {
                Some(AxiomKind::Disjointness) => {
                    self.pos -= 1;
                    return self.fail("an axiom kind (disjointness belongs in a `disjoint { ... }` block)");
                }
                Some(kind) => {
                    selection.insert(kind);
                }
                None => {
                    return Err(DslError::Syntax {
                        line: t.line,
                        col: t.col,
                        expected: "an axiom kind".into(),
                        found: format!("`{word}`"),
                    })
                }
            }
            if self.eat_punct(']') {
                return Ok(selection);
            }
            self.expect_punct(',')?;
        }
    }

    fn axiom(&mut self) -> PResult<Axiom<String>> {
        let lhs = self.class_expr()?;
        if self.eat_keyword("SubClassOf") {
            Ok(Axiom::SubClassOf(lhs, self.class_expr()?))
        } else if self.eat_keyword("EquivalentTo") {
            Ok(Axiom::EquivalentClasses(lhs, self.class_expr()?))
        } else if self.is_keyword("DisjointWith") {
            let t = self.here().clone();
            self.bump();
            let rhs = self.class_expr()?;
            match (lhs, rhs) {
                (ClassExpr::Class(a), ClassExpr::Class(b)) => generate_disjointness(&[a, b]).map_err(|_| DslError::Syntax {
                    line: t.line,
                    col: t.col,
                    expected: "two different classes".into(),
                    found: "the same class twice".into(),
                }),
                _ => Err(DslError::Syntax {
                    line: t.line,
                    col: t.col,
                    expected: "named classes around `DisjointWith`".into(),
                    found: "a complex class expression".into(),
                }),
            }
        } else {
            self.fail("`SubClassOf`, `EquivalentTo` or `DisjointWith`")
        }
    }

    fn class_expr(&mut self) -> PResult<ClassExpr<String>> {
        let first = self.unary()?;
        if !self.is_keyword("and") {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.eat_keyword("and") {
            parts.push(self.unary()?);
        }
        Ok(ClassExpr::And(parts))
    }

    fn unary(&mut self) -> PResult<ClassExpr<String>> {
        let starts_restriction = self.is_keyword("inverse")
            || (matches!(self.peek(), Tok::Ident(_) | Tok::Qualified(_))
                && matches!(self.peek_at(1), Tok::Ident(k) if k == "some" || k == "only" || k == "max"));
        if starts_restriction {
            let inverse = self.eat_keyword("inverse");
            let name = self.entity_name("a property name")?;
            let prop = PropertyExpr { name, inverse };
            if self.eat_keyword("some") {
                return Ok(ClassExpr::some(prop, self.primary()?));
            }
            if self.eat_keyword("only") {
                return Ok(ClassExpr::only(prop, self.primary()?));
            }
            self.expect_keyword("max")?;
            let Tok::Int(n) = self.peek().clone() else { return self.fail("a cardinality") };
            self.bump();
            let filler = if self.starts_primary() { self.primary()? } else { ClassExpr::Thing };
            return Ok(ClassExpr::max(n, prop, filler));
        }
        self.primary()
    }

    fn starts_primary(&self) -> bool {
        match self.peek() {
            Tok::Punct('(') | Tok::Qualified(_) => true,
            Tok::Ident(s) => !EXPR_KEYWORDS.contains(&s.as_str()) && s != "DisjointWith",
            _ => false,
        }
    }

    fn primary(&mut self) -> PResult<ClassExpr<String>> {
        if self.eat_punct('(') {
            let e = self.class_expr()?;
            self.expect_punct(')')?;
            return Ok(e);
        }
        match self.peek().clone() {
            Tok::Ident(s) if s == THING => {
                self.bump();
                Ok(ClassExpr::Thing)
            }
            Tok::Qualified(s) if s == "owl:Thing" => {
                self.bump();
                Ok(ClassExpr::Thing)
            }
            Tok::Qualified(s) if is_datatype_prefix(s.split(':').next().unwrap_or_default()) => {
                self.bump();
                Ok(ClassExpr::Datatype(s))
            }
            _ => Ok(ClassExpr::Class(self.entity_name("a class name, `Thing` or `(`")?)),
        }
    }

    fn entity_name(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if EXPR_KEYWORDS.contains(&s.as_str()) || s == "DisjointWith" => self.fail(what),
            Tok::Ident(s) | Tok::Qualified(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(what),
        }
    }
}

fn duplicate(at: &Token, name: &str) -> DslError {
    DslError::DuplicateName { line: at.line, col: at.col, name: name.to_owned() }
}

pub fn parse_project(text: &str) -> Result<Project, DslError> {
    Parser::new(text)?.project()
}

/// Parses a Manchester-style class expression: `some`, `only`,
/// `max n`, `inverse`, `and` and parentheses. Restriction fillers are
/// atomic unless parenthesized.
pub fn parse_class_expression(text: &str) -> Result<ClassExpr<String>, DslError> {
    let mut p = Parser::new(text)?;
    let e = p.class_expr()?;
    if p.peek() != &Tok::Eof {
        return p.fail("end of expression");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiom::AxiomKind::*;

    fn n(s: &str) -> String {
        s.to_owned()
    }

    #[test]
    fn nested_existential() {
        let e = parse_class_expression("requires some (hasConstituent some QuantityOfFood)").unwrap();
        assert_eq!(
            e,
            ClassExpr::some(
                PropertyExpr::named(n("requires")),
                ClassExpr::some(PropertyExpr::named(n("hasConstituent")), ClassExpr::class(n("QuantityOfFood")))
            )
        );
    }

    #[test]
    fn thing_and_inverse_max() {
        assert_eq!(parse_class_expression("Thing").unwrap(), ClassExpr::Thing);
        assert_eq!(parse_class_expression("owl:Thing").unwrap(), ClassExpr::Thing);
        assert_eq!(
            parse_class_expression("inverse hasCookingInstructions max 1 Recipe").unwrap(),
            ClassExpr::max(1, PropertyExpr::inverse(n("hasCookingInstructions")), ClassExpr::class(n("Recipe")))
        );
        assert_eq!(
            parse_class_expression("R max 1").unwrap(),
            ClassExpr::max(1, PropertyExpr::named(n("R")), ClassExpr::Thing)
        );
    }

    #[test]
    fn conjunction_and_datatypes() {
        let e = parse_class_expression("A and R only xsd:string and (S some B)").unwrap();
        let ClassExpr::And(parts) = e else { panic!() };
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[1], ClassExpr::only(PropertyExpr::named(n("R")), ClassExpr::Datatype(n("xsd:string"))));
    }

    #[test]
    fn fillers_do_not_nest_without_parentheses() {
        let err = parse_class_expression("R some S some B").unwrap_err();
        assert!(matches!(err, DslError::Syntax { line: 1, col: 10, .. }), "{err}");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_project("module M {\n  class A\n}").unwrap_err();
        assert_eq!(err.position(), (3, 1));
        let err = parse_project("module M {\n  object A -R-> B [bogus].\n}").unwrap_err();
        assert_eq!(err.position(), (2, 20));
    }

    #[test]
    fn empty_file_has_no_modules() {
        assert_eq!(parse_project("").unwrap(), Project::default());
        assert_eq!(parse_project("  # only a comment\n").unwrap(), Project::default());
    }

    #[test]
    fn duplicate_modules_are_rejected() {
        let err = parse_project("module A {}\nmodule A {}").unwrap_err();
        assert_eq!(err, DslError::DuplicateName { line: 2, col: 1, name: n("A") });
    }

    #[test]
    fn hyphenated_names_and_edges() {
        let p = parse_project(
            "module N {\n  class US-2014-Nutrition-Label, Quantity.\n  object US-2014-Nutrition-Label -refersToServingSize-> Quantity [scoped-range, existential, functional].\n}",
        )
        .unwrap();
        let g = &p.modules[0].local_graph;
        let e = g.edge("refersToServingSize", "US-2014-Nutrition-Label", "Quantity").unwrap();
        assert_eq!(e.selection, AxiomSelection::from([ScopedRange, Existential, Functionality]));
    }

    #[test]
    fn module_statements() {
        let src = r#"
            base <https://example.org/r/>.
            module RecipeAsPlan instantiates Plan {
              rename Plan -> Recipe.
              delete Description, satisfies.
              data Recipe -hasName-> xsd:string [scoped-range].
              individual Fat : NutritionalContentType.
              extra {
                Recipe SubClassOf requires some (hasConstituent some QuantityOfFood).
                A DisjointWith B.
              }
              disjoint { Recipe, Situation, Other:Thing2 }
              bridge Recipe = Merge:Recipe.
            }"#;
        let p = parse_project(src).unwrap();
        assert_eq!(p.base_iri.as_deref(), Some("https://example.org/r/"));
        let m = &p.modules[0];
        assert_eq!(m.instantiates.as_deref(), Some("Plan"));
        assert_eq!(m.renames, [(n("Plan"), n("Recipe"))]);
        assert_eq!(m.deletions, [n("Description"), n("satisfies")]);
        assert_eq!(m.extra_axioms.len(), 2);
        assert_eq!(m.disjoint_blocks, [[n("Recipe"), n("Situation"), n("Other:Thing2")]]);
        assert_eq!(m.bridges, [(n("Recipe"), n("Merge:Recipe"))]);
        assert_eq!(m.local_graph.individuals().get("Fat").map(String::as_str), Some("NutritionalContentType"));
    }

    #[test]
    fn per_edge_disjointness_is_rejected() {
        assert!(parse_project("module M { object A -R-> B [disjointness]. }").is_err());
    }
}
