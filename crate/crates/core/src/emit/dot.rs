use crate::schema::{SchemaGraph, THING};

/// Graphviz rendering of a schema diagram: classes as boxes, datatypes as
/// rounded boxes, one labelled arrow per edge.
pub fn emit_dot(graph: &SchemaGraph) -> String {
    let mut out = String::from("digraph G {\n");
    if graph.edges().any(|e| e.source == THING || e.target == THING) {
        out.push_str(&format!("  {} [shape=box, style=dashed];\n", id("owl:Thing")));
    }
    for c in graph.classes() {
        out.push_str(&format!("  {} [shape=box];\n", id(c)));
    }
    for d in graph.datatypes() {
        out.push_str(&format!("  {} [shape=box, style=rounded];\n", id(d)));
    }
    for e in graph.edges() {
        let node = |n: &str| if n == THING { id("owl:Thing") } else { id(n) };
        out.push_str(&format!("  {} -> {} [label={}];\n", node(&e.source), node(&e.target), quote(&e.property)));
    }
    for (individual, class) in graph.individuals() {
        out.push_str(&format!("  {} [shape=ellipse];\n", id(individual)));
        out.push_str(&format!("  {} -> {} [label=\"a\", style=dotted];\n", id(individual), id(class)));
    }
    out.push_str("}\n");
    out
}

fn id(name: &str) -> String {
    let plain = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if plain {
        name.to_owned()
    } else {
        quote(name)
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
