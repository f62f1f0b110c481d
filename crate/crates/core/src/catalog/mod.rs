//! Built-in pattern templates and example projects.
//!
//! Patterns are shipped as `.odp` source and loaded through the parser, so
//! the catalog doubles as a parser test.

use crate::dsl::parse_project;
use crate::schema::{instantiate, join, ElementRef, Identification, Instantiation, PatternTemplate, SchemaError, SchemaGraph};

const PATTERN_SOURCES: [(&str, &str); 7] = [
    ("AgentRole", include_str!("../../resources/patterns/agent_role.odp")),
    ("NameStub", include_str!("../../resources/patterns/name_stub.odp")),
    ("Stub", include_str!("../../resources/patterns/stub.odp")),
    ("Plan", include_str!("../../resources/patterns/plan.odp")),
    ("QuantityOfStuff", include_str!("../../resources/patterns/quantity_of_stuff.odp")),
    ("Quantity", include_str!("../../resources/patterns/quantity.odp")),
    ("Provenance", include_str!("../../resources/patterns/provenance.odp")),
];

pub const RECIPE_PROJECT: &str = include_str!("../../resources/projects/recipe.odp");
pub const MOVIE_PROJECT: &str = include_str!("../../resources/projects/movie.odp");
/// Three recipes; exactly one is a simple pork-shoulder-and-spring-onion dish.
pub const RECIPE_SAMPLE_DATA: &str = include_str!("../../resources/projects/recipe-data.ttl");
/// "A simple recipe with pork shoulder and spring onions."
pub const RECIPE_QUERY_7: &str = include_str!("../../resources/projects/query7.rq");
pub const MOVIE_SAMPLE_DATA: &str = include_str!("../../resources/projects/movie-data.ttl");

/// All seven built-in templates, in a stable order.
pub fn builtin_patterns() -> Vec<PatternTemplate> {
    PATTERN_SOURCES
        .iter()
        .map(|(name, src)| {
            let mut project = parse_project(src).unwrap_or_else(|e| panic!("builtin pattern {name}: {e}"));
            assert_eq!(project.patterns.len(), 1, "one pattern per builtin file");
            project.patterns.remove(0)
        })
        .collect()
}

pub fn builtin_pattern(name: &str) -> Option<PatternTemplate> {
    builtin_patterns().into_iter().find(|p| p.name == name)
}

/// The `.odp` source of a built-in pattern.
pub fn pattern_source(name: &str) -> Option<&'static str> {
    PATTERN_SOURCES.iter().find(|(n, _)| *n == name).map(|(_, src)| *src)
}

pub fn recipe_example_project() -> &'static str {
    RECIPE_PROJECT
}

pub fn movie_example_project() -> &'static str {
    MOVIE_PROJECT
}

/// AgentRole without TimeInstant, joined with NameStub so that the named
/// thing is the agent, then renamed for movies. Only instantiation, join
/// and renaming are used.
pub fn movie_snippet() -> Result<SchemaGraph, SchemaError> {
    let agent_role = builtin_pattern("AgentRole").expect("builtin");
    let name_stub = builtin_pattern("NameStub").expect("builtin");
    let without_time = instantiate(&agent_role, &Instantiation::of("AgentRole").delete("TimeInstant"))?;
    let name_stub = instantiate(&name_stub, &Instantiation::of("NameStub"))?;
    let joined = join(
        &[without_time, name_stub],
        &[Identification::pair(ElementRef::new(1, "Thing"), ElementRef::new(0, "Agent"))],
    )?;
    let template = PatternTemplate { name: "AgentRoleWithName".into(), graph: joined, documentation: String::new() };
    instantiate(
        &template,
        &Instantiation::of("AgentRoleWithName")
            .rename_class("AgentRole", "ActorRole")
            .rename_class("Agent", "Person")
            .rename_property("providesAgentRole", "hasActor"),
    )
}

/// The graph of the movie snippet as drawn: written out edge by edge.
pub fn expected_movie_snippet() -> SchemaGraph {
    use crate::schema::Edge;
    let mut g = SchemaGraph::new();
    g.add_class("ActorRole").add_class("Person").add_class("Name");
    g.add_edge(Edge::object("hasActor", "Thing", "ActorRole", []));
    g.add_edge(Edge::object("assumedBy", "ActorRole", "Person", []));
    g.add_edge(Edge::object("hasName", "Person", "Name", []));
    g.add_edge(Edge::data("hasNameAsString", "Name", "xsd:string", []));
    g
}
