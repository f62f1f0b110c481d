use std::fmt::Write;

use crate::axiom::Axiom;
use crate::schema::{EdgeKind, SchemaGraph};

use super::{ModuleDef, Project};

pub(super) fn print_project(project: &Project) -> String {
    let mut out = String::new();
    if let Some(base) = &project.base_iri {
        let _ = writeln!(out, "base <{base}>.");
    }
    for p in &project.patterns {
        sep(&mut out);
        let _ = writeln!(out, "pattern {} {{", p.name);
        if !p.documentation.is_empty() {
            let _ = writeln!(out, "  doc \"{}\".", escape(&p.documentation));
        }
        print_graph(&mut out, &p.graph);
        out.push_str("}\n");
    }
    for m in &project.modules {
        sep(&mut out);
        print_module(&mut out, m);
    }
    out
}

fn sep(out: &mut String) {
    if !out.is_empty() {
        out.push('\n');
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

fn print_module(out: &mut String, m: &ModuleDef) {
    match &m.instantiates {
        Some(t) => {
            let _ = writeln!(out, "module {} instantiates {t} {{", m.name);
        }
        None => {
            let _ = writeln!(out, "module {} {{", m.name);
        }
    }
    for (from, to) in &m.renames {
        let _ = writeln!(out, "  rename {from} -> {to}.");
    }
    for d in &m.deletions {
        let _ = writeln!(out, "  delete {d}.");
    }
    print_graph(out, &m.local_graph);
    if !m.extra_axioms.is_empty() {
        out.push_str("  extra {\n");
        for a in &m.extra_axioms {
            let _ = writeln!(out, "    {}.", print_axiom(a));
        }
        out.push_str("  }\n");
    }
    for block in &m.disjoint_blocks {
        let _ = writeln!(out, "  disjoint {{ {} }}", block.join(", "));
    }
    for (local, other) in &m.bridges {
        let _ = writeln!(out, "  bridge {local} = {other}.");
    }
    out.push_str("}\n");
}

fn print_axiom(a: &Axiom<String>) -> String {
    match a {
        Axiom::DisjointClasses(cs) if cs.len() > 2 => {
            // only reachable programmatically; spell out as pairwise sentences
            crate::axiom::disjoint_pairs(cs)
                .into_iter()
                .map(|(x, y)| format!("{x} DisjointWith {y}"))
                .collect::<Vec<_>>()
                .join(".\n    ")
        }
        other => other.to_string(),
    }
}

fn print_graph(out: &mut String, g: &SchemaGraph) {
    for c in g.classes() {
        let _ = writeln!(out, "  class {c}.");
    }
    for e in g.edges() {
        let keyword = match e.kind {
            EdgeKind::Object => "object",
            EdgeKind::Data => "data",
        };
        let _ = write!(out, "  {keyword} {} -{}-> {}", e.source, e.property, e.target);
        if !e.selection.is_empty() {
            let kinds: Vec<_> = e.selection.iter().map(|k| k.keyword()).collect();
            let _ = write!(out, " [{}]", kinds.join(", "));
        }
        out.push_str(".\n");
    }
    for (ind, class) in g.individuals() {
        let _ = writeln!(out, "  individual {ind} : {class}.");
    }
}
