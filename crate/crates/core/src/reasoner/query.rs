use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::axiom::Ontology;
use crate::expr::{Iri, PropertyExpr};

use super::materialize::Saturation;
use super::store::Value;

/// An argument of a query atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum QueryTerm {
    Var(String),
    /// `Name` or `Module:Name`.
    Name(String),
    /// Matched against the lexical form of literals.
    Literal(String),
}

/// `Class(t)` or `property(t, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<QueryTerm>,
    /// 1-based line in the pattern file.
    pub line: usize,
}

pub type Binding = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown entity `{name}`")]
    UnknownEntity { line: usize, name: String },
}

/// One atom per line; blank lines and `#` comments are skipped.
pub fn parse_query(text: &str) -> Result<Vec<Atom>, QueryError> {
    let mut atoms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let err = |message: &str| QueryError::Syntax { line, message: message.to_owned() };
        let open = s.find('(').ok_or_else(|| err("expected `(`"))?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(|| err("expected `)` at end of line"))?;
        let predicate = s[..open].trim();
        if !is_name(predicate) {
            return Err(err("expected a class or property name before `(`"));
        }
        let args = split_args(inner).ok_or_else(|| err("unterminated string literal"))?;
        let args: Vec<QueryTerm> = args
            .into_iter()
            .map(|a| parse_term(&a).ok_or_else(|| err(&format!("bad argument `{a}`"))))
            .collect::<Result<_, _>>()?;
        if !(1..=2).contains(&args.len()) {
            return Err(err("atoms take one or two arguments"));
        }
        if matches!(args[0], QueryTerm::Literal(_)) {
            return Err(err("a literal cannot be a subject"));
        }
        atoms.push(Atom { predicate: predicate.to_owned(), args, line });
    }
    Ok(atoms)
}

fn is_name(s: &str) -> bool {
    let ident = |p: &str| {
        p.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    };
    match s.split_once(':') {
        Some((m, n)) => ident(m) && ident(n),
        None => ident(s),
    }
}

fn split_args(s: &str) -> Option<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut in_string = false;
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' if in_string => {
                cur.push(c);
                cur.push(chars.next()?);
            }
            '"' => {
                in_string = !in_string;
                cur.push(c);
            }
            ',' if !in_string => out.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    if in_string {
        return None;
    }
    out.push(cur);
    Some(out.into_iter().map(|a| a.trim().to_owned()).collect())
}

fn parse_term(s: &str) -> Option<QueryTerm> {
    if let Some(v) = s.strip_prefix('?') {
        return is_name(v).then(|| QueryTerm::Var(v.to_owned()));
    }
    if let Some(body) = s.strip_prefix('"').and_then(|r| r.strip_suffix('"')) {
        return Some(QueryTerm::Literal(body.replace("\\\"", "\"").replace("\\\\", "\\")));
    }
    is_name(s).then(|| QueryTerm::Name(s.to_owned()))
}

/// Every IRI a query name may denote: entities declared by the ontology
/// and everything mentioned in the saturated store.
struct Vocabulary<'a> {
    ontology: &'a Ontology,
    iris: BTreeSet<Iri>,
}

impl<'a> Vocabulary<'a> {
    fn new(ontology: &'a Ontology, sat: &Saturation) -> Self {
        let mut iris: BTreeSet<Iri> = ontology.entity_index().into_keys().collect();
        for a in ontology.merged_axioms() {
            a.visit_names(&mut |n, _| {
                iris.insert(n.clone());
            });
        }
        iris.extend(sat.equality.keys().cloned());
        iris.extend(sat.store.class_assertions.iter().map(|(_, c)| c.clone()));
        iris.extend(sat.store.property_assertions.iter().map(|(_, p, _)| p.clone()));
        Vocabulary { ontology, iris }
    }

    /// `Module:Name` picks the module namespace (module names compare
    /// case-insensitively); a bare name matches every IRI with that local
    /// name.
    fn resolve(&self, name: &str, line: usize) -> Result<Vec<Iri>, QueryError> {
        let found: Vec<Iri> = match name.split_once(':') {
            Some((module, local)) => self
                .ontology
                .modules
                .iter()
                .filter(|m| m.name.eq_ignore_ascii_case(module))
                .map(|m| Iri::new(format!("{}{local}", m.namespace)))
                .filter(|iri| self.iris.contains(iri))
                .collect(),
            None => self.iris.iter().filter(|i| i.local_name() == name).cloned().collect(),
        };
        if found.is_empty() {
            return Err(QueryError::UnknownEntity { line, name: name.to_owned() });
        }
        Ok(found)
    }
}

enum Resolved {
    Var(String),
    Individuals(Vec<Iri>),
    Literal(String),
}

struct Plan {
    predicates: Vec<Iri>,
    args: Vec<Resolved>,
}

/// All homomorphisms of `pattern` into the saturation, over equality
/// classes. Individuals are reported by representative; bindings that use
/// a fresh value are dropped unless `include_fresh`. Sorted and
/// duplicate-free; the empty pattern has one empty binding.
pub fn query(ontology: &Ontology, sat: &Saturation, pattern: &[Atom], include_fresh: bool) -> Result<Vec<Binding>, QueryError> {
    let vocab = Vocabulary::new(ontology, sat);
    let mut plans = Vec::with_capacity(pattern.len());
    for atom in pattern {
        let predicates = vocab.resolve(&atom.predicate, atom.line)?;
        let args = atom
            .args
            .iter()
            .map(|t| match t {
                QueryTerm::Var(v) => Ok(Resolved::Var(v.clone())),
                QueryTerm::Literal(l) => Ok(Resolved::Literal(l.clone())),
                QueryTerm::Name(n) => {
                    let individuals = vocab.resolve(n, atom.line)?;
                    Ok(Resolved::Individuals(individuals.iter().map(|i| sat.representative(i)).collect()))
                }
            })
            .collect::<Result<Vec<_>, QueryError>>()?;
        plans.push(Plan { predicates, args });
    }
    let mut results = BTreeSet::new();
    extend(sat, &plans, Binding::new(), include_fresh, &mut results);
    Ok(results.into_iter().collect())
}

fn extend(sat: &Saturation, plans: &[Plan], binding: Binding, include_fresh: bool, out: &mut BTreeSet<Binding>) {
    let Some((plan, rest)) = plans.split_first() else {
        out.insert(binding);
        return;
    };
    let candidates = |arg: &Resolved, binding: &Binding| -> Option<Vec<Value>> {
        match arg {
            Resolved::Var(v) => binding.get(v).map(|x| vec![x.clone()]),
            Resolved::Individuals(is) => Some(is.iter().cloned().map(Value::Individual).collect()),
            Resolved::Literal(_) => None,
        }
    };
    let accept = |arg: &Resolved, value: &Value, binding: &Binding| -> Option<Binding> {
        if !include_fresh && sat.is_fresh(value) {
            return None;
        }
        match arg {
            Resolved::Var(v) => match binding.get(v) {
                Some(bound) => (bound == value).then(|| binding.clone()),
                None => {
                    let mut b = binding.clone();
                    b.insert(v.clone(), value.clone());
                    Some(b)
                }
            },
            Resolved::Individuals(is) => matches!(value, Value::Individual(x) if is.contains(x)).then(|| binding.clone()),
            Resolved::Literal(l) => matches!(value, Value::Literal(lit) if lit.lexical == *l).then(|| binding.clone()),
        }
    };
    let subjects: Vec<Iri> = match candidates(&plan.args[0], &binding) {
        Some(vs) => vs.into_iter().filter_map(|v| v.as_individual().cloned()).collect(),
        None => sat.store.individuals.iter().cloned().collect(),
    };
    for s in subjects {
        let subject = Value::Individual(s.clone());
        let Some(b1) = accept(&plan.args[0], &subject, &binding) else { continue };
        match plan.args.get(1) {
            None => {
                if plan.predicates.iter().any(|c| sat.graph.has_type(&s, c)) {
                    extend(sat, rest, b1, include_fresh, out);
                }
            }
            Some(object_arg) => {
                for p in &plan.predicates {
                    for o in sat.graph.fillers(&s, &PropertyExpr::named(p.clone())) {
                        if let Some(b2) = accept(object_arg, &o, &b1) {
                            extend(sat, rest, b2, include_fresh, out);
                        }
                    }
                }
            }
        }
    }
}

/// Bindings as tab-separated values with a header row of variable names.
pub fn bindings_tsv(bindings: &[Binding]) -> String {
    let vars: BTreeSet<&String> = bindings.iter().flat_map(|b| b.keys()).collect();
    let mut out = vars.iter().map(|v| format!("?{v}")).collect::<Vec<_>>().join("\t");
    out.push('\n');
    for b in bindings {
        let row: Vec<String> = vars.iter().map(|v| b.get(*v).map(|x| x.to_string()).unwrap_or_default()).collect();
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}
