//! Acceptance suite: one PASS/FAIL line per criterion, with the tolerances
//! and time limits pinned below. Run with `--nocapture` to see the report.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use common::*;
use odp_forge::axiom::{axiom_kind_catalog, generate_edge_axioms, Axiom, AxiomKind};
use odp_forge::catalog::{builtin_patterns, movie_snippet, RECIPE_PROJECT, RECIPE_QUERY_7, RECIPE_SAMPLE_DATA};
use odp_forge::emit::{compile_outputs, emit_turtle, read_turtle_subset, Format};
use odp_forge::expr::{ClassExpr, Iri, PropertyExpr};
use odp_forge::reasoner::{materialize, parse_query, query, read_instance_store, InstanceStore, Value, DEFAULT_DEPTH};
use odp_forge::schema::Edge;
use odp_forge::{compile, parse_project, resolve, Ontology, SchemaGraph};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

// Pinned tolerances. Every criterion is exact; these are the time limits.
const LIMIT_GOLDEN: Duration = Duration::from_secs(1);
const LIMIT_CATALOG: Duration = Duration::from_secs(1);
const LIMIT_MOVIE: Duration = Duration::from_secs(1);
const LIMIT_ROUND_TRIP: Duration = Duration::from_secs(30);
const LIMIT_RENAMING: Duration = Duration::from_secs(10);
const LIMIT_ORACLE: Duration = Duration::from_secs(60);
const LIMIT_CLASH: Duration = Duration::from_secs(1);
const LIMIT_QUERY: Duration = Duration::from_secs(1);
const LIMIT_DETERMINISM: Duration = Duration::from_secs(10);

const ROUND_TRIP_PROJECTS: u32 = 200;
const RENAMING_CASES: u32 = 200;
const ORACLE_ONTOLOGIES: u32 = 100;
const ORACLE_MAX_AXIOMS: usize = 10;
const ORACLE_MAX_INDIVIDUALS: usize = 6;
const ORACLE_STORES_PER_ONTOLOGY: usize = 5;
const ORACLE_DEPTH: usize = 2;

type Outcome = Result<String, String>;
type Criterion = (u8, &'static str, Duration, fn() -> Outcome);

fn recipe() -> Ontology {
    let resolved = resolve(&parse_project(RECIPE_PROJECT).unwrap(), &builtin_patterns()).unwrap();
    compile(&resolved).unwrap()
}

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok { Ok(()) } else { Err(what.into()) }
}

/// Runs `cases` generated cases with a fixed seed.
fn run_cases<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn golden_recipe_compile() -> Outcome {
    let o = recipe();
    let expected_subclass =
        [("RecipeAsPlan", 12), ("QuantityOfFood", 20), ("Stubs", 11), ("NutritionalInformation", 18), ("Provenance", 3), ("Merge", 1)];
    let count = |m: &str, f: fn(&Axiom<Iri>) -> bool| o.module(m).map(|m| m.axioms.iter().filter(|a| f(a)).count());
    for (m, n) in expected_subclass {
        let got = count(m, |a| matches!(a, Axiom::SubClassOf(..)));
        check(got == Some(n), format!("{m}: {got:?} subclass axioms, expected {n}"))?;
    }
    check(o.modules.len() == 6, format!("{} modules", o.modules.len()))?;
    check(o.subclass_axiom_count() == 65, format!("{} subclass axioms in total", o.subclass_axiom_count()))?;

    let local = |m: &str, names: &[&str]| -> BTreeSet<Iri> {
        names
            .iter()
            .map(|n| match n.split_once(':') {
                Some((other, n)) => Iri::new(format!("https://example.org/recipe/{other}/{n}")),
                None => Iri::new(format!("https://example.org/recipe/{m}/{n}")),
            })
            .collect()
    };
    let expected_blocks: Vec<(&str, BTreeSet<Iri>)> = vec![
        ("RecipeAsPlan", local("RecipeAsPlan", &["Recipe", "QuantityOfFood", "Situation", "RecipeInstructions", "TimeInterval"])),
        ("QuantityOfFood", local("QuantityOfFood", &["QuantityOfFood", "FoodType", "QuantityKind", "Quantity", "QuantityValue", "Unit"])),
        ("Stubs", local("Stubs", &["Recipe", "CookingEquipment", "DifficultyLevel", "RecipeClassification"])),
        (
            "NutritionalInformation",
            local("NutritionalInformation", &["US-2014-Nutrition-Label", "NutritionalContent", "Recipe", "Quantity", "NutritionalContentType"]),
        ),
        ("Provenance", local("Provenance", &["Recipe", "Document"])),
        (
            "Merge",
            local(
                "Merge",
                &[
                    "Recipe",
                    "RecipeAsPlan:Situation",
                    "RecipeAsPlan:QuantityOfFood",
                    "RecipeAsPlan:RecipeInstructions",
                    "RecipeAsPlan:TimeInterval",
                    "QuantityOfFood:FoodType",
                    "QuantityOfFood:Quantity",
                    "QuantityOfFood:QuantityKind",
                    "QuantityOfFood:QuantityValue",
                    "QuantityOfFood:Unit",
                    "Stubs:CookingEquipment",
                    "Stubs:DifficultyLevel",
                    "Stubs:RecipeClassification",
                    "NutritionalInformation:US-2014-Nutrition-Label",
                    "NutritionalInformation:NutritionalContent",
                    "NutritionalInformation:NutritionalContentType",
                    "Provenance:Document",
                ],
            ),
        ),
    ];
    let mut total = 0;
    for (m, expected) in &expected_blocks {
        let blocks: Vec<BTreeSet<Iri>> = o
            .module(m)
            .unwrap()
            .axioms
            .iter()
            .filter_map(|a| match a {
                Axiom::DisjointClasses(cs) => Some(cs.iter().cloned().collect()),
                _ => None,
            })
            .collect();
        check(blocks.len() == 1 && blocks[0] == *expected, format!("{m}: disjointness {blocks:?}"))?;
        total += blocks.len();
    }
    check(total == 6, format!("{total} disjointness axioms"))?;
    check(o.undeclared_references().is_empty(), format!("undeclared: {:?}", o.undeclared_references()))?;
    Ok("65 subclass axioms (12/20/11/18/3/1) and 6 disjointness axioms".into())
}

fn catalog_fidelity() -> Outcome {
    let expected = [
        "A DisjointWith B",
        "R some owl:Thing SubClassOf A",
        "R some B SubClassOf A",
        "owl:Thing SubClassOf R only B",
        "A SubClassOf R only B",
        "A SubClassOf R some B",
        "B SubClassOf inverse R some A",
        "owl:Thing SubClassOf R max 1 owl:Thing",
        "owl:Thing SubClassOf R max 1 B",
        "A SubClassOf R max 1 owl:Thing",
        "A SubClassOf R max 1 B",
        "owl:Thing SubClassOf inverse R max 1 owl:Thing",
        "owl:Thing SubClassOf inverse R max 1 A",
        "B SubClassOf inverse R max 1 owl:Thing",
        "B SubClassOf inverse R max 1 A",
    ];
    let squash = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ");
    // An unqualified cardinality restriction may omit its owl:Thing filler.
    let unqualified = |s: &str| squash(s).replace("max 1 owl:Thing", "max 1");
    let catalog = axiom_kind_catalog();
    check(catalog.len() == 15, format!("{} entries", catalog.len()))?;
    for (i, (entry, want)) in catalog.iter().zip(expected).enumerate() {
        check(squash(entry.manchester) == squash(want), format!("item {}: {:?}", i + 1, entry.manchester))?;
        check(entry.kind.number() == i + 1, format!("item {} numbered {}", i + 1, entry.kind.number()))?;
        // The generator must produce what the template says.
        let edge = Edge::object("R", "A", "B", [entry.kind]);
        let generated = generate_edge_axioms(&edge, &edge.selection).map_err(|e| e.to_string())?;
        let rendered = generated[0].render(|n| n.clone()).replace("Thing", "owl:Thing").replace("owl:owl:", "owl:");
        check(unqualified(&rendered) == unqualified(want), format!("item {} generates {rendered:?}", i + 1))?;
    }
    Ok("15 entries match items 1-15".into())
}

fn movie_reproduction() -> Outcome {
    let mut expected = SchemaGraph::new();
    expected.add_class("ActorRole").add_class("Person").add_class("Name");
    expected.add_edge(Edge::object("hasActor", "Thing", "ActorRole", []));
    expected.add_edge(Edge::object("assumedBy", "ActorRole", "Person", []));
    expected.add_edge(Edge::object("hasName", "Person", "Name", []));
    expected.add_edge(Edge::data("hasNameAsString", "Name", "xsd:string", []));
    let got = movie_snippet().map_err(|e| e.to_string())?;
    check(got.classes() == expected.classes(), format!("classes {:?}", got.classes()))?;
    let edges = |g: &SchemaGraph| g.edges().map(|e| (e.property.clone(), e.source.clone(), e.target.clone(), e.kind)).collect::<BTreeSet<_>>();
    check(edges(&got) == edges(&expected), format!("edges {:?}", edges(&got)))?;
    check(got.datatypes() == expected.datatypes(), format!("datatypes {:?}", got.datatypes()))?;
    Ok("3 classes, 4 edges, 1 datatype".into())
}

fn turtle_round_trip() -> Outcome {
    let o = recipe();
    let back = read_turtle_subset(&emit_turtle(&o).merged).map_err(|e| e.to_string())?;
    check(back.axiom_multiset() == o.axiom_multiset(), "recipe ontology differs after round trip")?;
    run_cases(ROUND_TRIP_PROJECTS, arb_project_source(), |src| {
        let resolved = resolve(&parse_project(&src).unwrap(), &[]).map_err(|e| TestCaseError::fail(format!("{e:?}")))?;
        let o = compile(&resolved).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let back = read_turtle_subset(&emit_turtle(&o).merged).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(back.axiom_multiset(), o.axiom_multiset());
        Ok(())
    })?;
    Ok(format!("recipe + {ROUND_TRIP_PROJECTS} random projects"))
}

fn renaming_commutation() -> Outcome {
    fn axioms(g: &SchemaGraph) -> Vec<Axiom<String>> {
        let mut out: Vec<_> = g.edges().flat_map(|e| generate_edge_axioms(e, &e.selection).unwrap()).collect();
        out.sort();
        out
    }
    run_cases(RENAMING_CASES, (arb_graph(), arb_renaming()), |(g, (classes, properties))| {
        let mut renamed_after: Vec<Axiom<String>> = axioms(&g)
            .iter()
            .map(|a| a.map_names(&mut |n, p| (if p { &properties } else { &classes }).get(n).unwrap_or(n).clone()))
            .collect();
        renamed_after.sort();
        prop_assert_eq!(axioms(&g.renamed(&classes, &properties)), renamed_after);
        Ok(())
    })?;
    Ok(format!("{RENAMING_CASES} graph/selection/renaming triples"))
}

fn materializer_oracle() -> Outcome {
    let stores = prop::collection::vec(arb_store(ORACLE_MAX_INDIVIDUALS), ORACLE_STORES_PER_ONTOLOGY);
    run_cases(ORACLE_ONTOLOGIES, (arb_ontology(ORACLE_MAX_AXIOMS), stores), |(o, stores)| {
        for s in &stores {
            let sat = materialize(&o, s, ORACLE_DEPTH);
            let reference = reference_materialize(&o, s, ORACLE_DEPTH);
            prop_assert_eq!(sat.facts(false), reference.facts);
            prop_assert_eq!(!sat.clashes.is_empty(), reference.clash);
            for (scoped, plain) in [(AxiomKind::ScopedRange, AxiomKind::Range), (AxiomKind::ScopedDomain, AxiomKind::Domain)] {
                let with = |k: AxiomKind| {
                    let mut axioms = o.merged_axioms();
                    axioms.push(catalog_axiom(k.number() - 1, 0, 0, 1).unwrap());
                    materialize(&single_module(axioms), s, ORACLE_DEPTH).facts(false)
                };
                prop_assert!(with(scoped).is_subset(&with(plain)));
            }
        }
        Ok(())
    })?;
    Ok(format!(
        "{ORACLE_ONTOLOGIES} ontologies x {ORACLE_STORES_PER_ONTOLOGY} stores (<= {ORACLE_MAX_AXIOMS} axioms, <= {ORACLE_MAX_INDIVIDUALS} individuals)"
    ))
}

fn clash_detection() -> Outcome {
    let o = recipe();
    let plan = |n: &str| format!("https://example.org/recipe/RecipeAsPlan/{n}");
    let data = |n: &str| format!("https://example.org/data/{n}");

    let mut store = InstanceStore::new();
    store.add_type(&data("x"), &plan("Recipe")).add_type(&data("x"), &plan("Situation"));
    let sat = materialize(&o, &store, DEFAULT_DEPTH);
    check(sat.clashes.len() == 1, format!("{} clashes: {:?}", sat.clashes.len(), sat.clashes))?;

    let mut store = InstanceStore::new();
    store.add_type(&data("r1"), &plan("Recipe")).add_type(&data("r2"), &plan("Recipe"));
    store.add_property(&data("r1"), &plan("hasCookingInstructions"), Value::individual(data("i")));
    store.add_property(&data("r2"), &plan("hasCookingInstructions"), Value::individual(data("i")));
    let sat = materialize(&o, &store, DEFAULT_DEPTH);
    check(sat.same(&Iri::new(data("r1")), &Iri::new(data("r2"))), "r1 and r2 not merged")?;
    check(sat.clashes.is_empty(), format!("unexpected clashes {:?}", sat.clashes))?;

    // Without the inverse qualified scoped functionality axiom there is no merge.
    let item9 = Axiom::SubClassOf(
        ClassExpr::Class(Iri::new(plan("RecipeInstructions"))),
        ClassExpr::max(1, PropertyExpr::inverse(Iri::new(plan("hasCookingInstructions"))), ClassExpr::Class(Iri::new(plan("Recipe")))),
    );
    let mut without = o.clone();
    for m in &mut without.modules {
        m.axioms.retain(|a| *a != item9);
    }
    check(without.subclass_axiom_count() == 64, "item-9 axiom not found")?;
    let sat = materialize(&without, &store, DEFAULT_DEPTH);
    check(!sat.same(&Iri::new(data("r1")), &Iri::new(data("r2"))), "merged without the functionality axiom")?;
    Ok("1 clash; recipes merged (and not merged without the item-9 axiom)".into())
}

fn competency_question() -> Outcome {
    let o = recipe();
    let store = read_instance_store(RECIPE_SAMPLE_DATA).map_err(|e| e.to_string())?;
    let recipes: BTreeSet<_> =
        store.class_assertions.iter().filter(|(_, c)| c.local_name() == "Recipe").map(|(i, _)| i.clone()).collect();
    check(recipes.len() == 3, format!("{} recipes in the sample data", recipes.len()))?;
    let sat = materialize(&o, &store, DEFAULT_DEPTH);
    let pattern = parse_query(RECIPE_QUERY_7).map_err(|e| e.to_string())?;
    let rows = query(&o, &sat, &pattern, false).map_err(|e| e.to_string())?;
    let answers: BTreeSet<String> = rows.iter().map(|b| b["recipe"].to_string()).collect();
    let expected = BTreeSet::from(["https://example.org/recipe/data/pulledPork".to_owned()]);
    check(answers == expected, format!("answers {answers:?}"))?;
    Ok("exactly the pulled pork recipe".into())
}

fn write_tree(dir: &Path, files: &[(String, String)]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, text) in files {
        fs::write(dir.join(name), text)?;
    }
    Ok(())
}

fn read_tree(dir: &Path) -> std::io::Result<BTreeMap<String, Vec<u8>>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        out.insert(entry.file_name().to_string_lossy().into_owned(), fs::read(entry.path())?);
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let root = std::env::temp_dir().join(format!("odp-forge-acceptance-{}", std::process::id()));
    let run = |dir: PathBuf| -> Result<BTreeMap<String, Vec<u8>>, String> {
        let files = compile_outputs(&recipe(), "recipe", &[Format::Manchester, Format::Turtle]);
        write_tree(&dir, &files).map_err(|e| e.to_string())?;
        read_tree(&dir).map_err(|e| e.to_string())
    };
    let first = run(root.join("a"));
    let second = run(root.join("b"));
    let _ = fs::remove_dir_all(&root);
    let (first, second) = (first?, second?);
    check(first.len() == 16, format!("{} files", first.len()))?;
    check(first == second, "output trees differ")?;
    Ok(format!("{} files byte-identical", first.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        (1, "golden recipe compile", LIMIT_GOLDEN, golden_recipe_compile),
        (2, "catalog fidelity", LIMIT_CATALOG, catalog_fidelity),
        (3, "movie example reproduction", LIMIT_MOVIE, movie_reproduction),
        (4, "turtle round trip", LIMIT_ROUND_TRIP, turtle_round_trip),
        (5, "renaming commutation", LIMIT_RENAMING, renaming_commutation),
        (6, "materializer oracle", LIMIT_ORACLE, materializer_oracle),
        (7, "clash detection", LIMIT_CLASH, clash_detection),
        (8, "competency question #7", LIMIT_QUERY, competency_question),
        (9, "determinism", LIMIT_DETERMINISM, determinism),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}, but took {elapsed:.2?} (limit {limit:?})")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {id} {name}: {detail} [{elapsed:.2?} <= {limit:?}]"),
            Err(why) => {
                println!("FAIL {id} {name}: {why} [{elapsed:.2?}]");
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
