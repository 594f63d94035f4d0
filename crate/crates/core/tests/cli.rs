//! End-to-end tests for every `miq` subcommand: outputs, documents and exit
//! codes.

use std::path::{Path, PathBuf};

use assert_cmd::Command;
use mi_quotient::document::{PlanDocument, ProfilesDocument, Versioned};
use predicates::prelude::*;
use tempfile::TempDir;

fn miq() -> Command {
    Command::cargo_bin("miq").expect("miq binary should exist")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// One ability per intelligence, `a1`..`a8`, plus any extra entries.
fn small_catalog(extra: &str) -> String {
    let mut entries: Vec<String> = (1..=8)
        .map(|i| format!(r#"{{"id": "a{i}", "label": "ability {i}", "intelligences": [{i}]}}"#))
        .collect();
    if !extra.is_empty() {
        entries.push(extra.to_string());
    }
    format!("{{\"version\": 1, \"abilities\": [{}]}}", entries.join(",\n"))
}

const FOUR: &str = r#"{
  "version": 1,
  "scoring": "reduced",
  "ideal": [8, 8, 8, 8, 8, 8, 8, 8],
  "profiles": [
    {"person_id": "A", "sws": [8, 0, 0, 0, 0, 0, 0, 0], "selected": []},
    {"person_id": "B", "sws": [0, 8, 8, 8, 8, 8, 8, 8], "selected": []},
    {"person_id": "C", "sws": [8, 8, 8, 8, 8, 8, 8, 0], "selected": []},
    {"person_id": "D", "sws": [0, 0, 0, 0, 0, 0, 0, 8], "selected": []}
  ]
}"#;

fn stdout_of(cmd: &mut Command) -> String {
    let out = cmd.assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

#[test]
fn validate_demo_catalog() {
    miq()
        .arg("validate")
        .arg(data("demo_catalog.json"))
        .assert()
        .code(0)
        .stdout(predicate::str::contains("ok: 64 abilities, 6 shared"));
}

#[test]
fn validate_reports_duplicate_id() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "dup.json",
        &small_catalog(r#"{"id": "a3", "intelligences": ["Musical"]}"#),
    );
    miq()
        .arg("validate")
        .arg(path)
        .assert()
        .code(2)
        .stdout(predicate::str::contains("duplicate ability id `a3`"));
}

#[test]
fn validate_reports_orphans_and_unknown_intelligences() {
    let dir = TempDir::new().unwrap();
    let orphan = write(&dir, "o.json", &small_catalog(r#"{"id": "z", "intelligences": []}"#));
    miq()
        .arg("validate")
        .arg(orphan)
        .assert()
        .code(2)
        .stdout(predicate::str::contains("`z` belongs to no intelligence"));

    let unknown = write(
        &dir,
        "u.json",
        &small_catalog(r#"{"id": "z", "intelligences": ["Existential"]}"#),
    );
    miq()
        .arg("validate")
        .arg(unknown)
        .assert()
        .code(2)
        .stdout(predicate::str::contains("Existential"));
}

#[test]
fn unreadable_inputs_exit_3() {
    miq()
        .args(["validate", "/definitely/not/here.json"])
        .assert()
        .code(3);
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", "{ not json");
    miq().arg("validate").arg(&broken).assert().code(3);
    let future = write(&dir, "v9.json", r#"{"version": 9, "abilities": []}"#);
    miq()
        .arg("validate")
        .arg(&future)
        .assert()
        .code(3)
        .stderr(predicate::str::contains("version 9"));
}

#[test]
fn partition_of_disjoint_catalog() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "c.json", &small_catalog(""));
    let text = stdout_of(miq().arg("partition").arg(path));
    assert!(text.contains("overlap set V (0):\n  (empty)"), "{text}");
    assert!(text.contains("C~3 Spatial (1 of 1):\n  a3\n"), "{text}");
}

#[test]
fn partition_shows_resolution_provenance() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "c.json",
        &small_catalog(r#"{"id": "x", "intelligences": ["Spatial", "Linguistic"]}"#),
    );
    let text = stdout_of(miq().arg("partition").arg(path));
    let c1 = text.split("C~2").next().unwrap();
    assert!(c1.contains("x  (resolved from {1,3})"), "{text}");
    let c3 = text.split("C~3").nth(1).unwrap().split("C~4").next().unwrap();
    assert!(!c3.contains('x'), "{text}");
    assert!(text.contains("x  resolved from {1,3} -> 1"), "{text}");
}

#[test]
fn partition_svg_is_well_formed() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("p.svg");
    miq()
        .arg("partition")
        .arg(data("demo_catalog.json"))
        .args(["--output", "svg", "--joined", "--out"])
        .arg(&out)
        .assert()
        .success();
    let svg = std::fs::read_to_string(&out).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let dots = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("element"))
        .count();
    assert_eq!(dots, 64);
    assert!(doc.descendants().any(|n| n.attribute("class") == Some("web")));
}

#[test]
fn partition_rejects_invalid_catalog() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "c.json", &small_catalog(r#"{"id": "a1", "intelligences": [2]}"#));
    miq().arg("partition").arg(path).assert().code(2);
}

#[test]
fn score_reproduces_listed_individual() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("profiles.json");
    miq()
        .arg("score")
        .arg(data("demo_catalog.json"))
        .arg(data("demo_responses.json"))
        .arg("--out")
        .arg(&out)
        .assert()
        .success();
    let doc = ProfilesDocument::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.ideal.0, [8; 8]);
    assert_eq!(doc.person("individual-01").unwrap().sws.0, [5, 2, 6, 7, 4, 3, 2, 8]);
}

#[test]
fn score_raw_counts_shared_abilities_on_every_axis() {
    let text = stdout_of(
        miq()
            .arg("score")
            .arg("--raw")
            .arg(data("demo_catalog.json"))
            .arg(data("demo_responses.json")),
    );
    let doc = ProfilesDocument::from_json(&text).unwrap();
    assert_eq!(doc.ideal.0, [8, 8, 8, 8, 10, 10, 9, 9]);
    assert_eq!(doc.profiles[0].sws.0, [5, 2, 6, 7, 6, 5, 2, 9]);
}

#[test]
fn score_table_input_and_empty_selection() {
    let dir = TempDir::new().unwrap();
    let catalog = write(&dir, "c.json", &small_catalog(""));
    let table = write(&dir, "r.csv", "nobody\nsome,a1,a5\n");
    let doc = ProfilesDocument::from_json(&stdout_of(miq().arg("score").arg(catalog).arg(table))).unwrap();
    assert_eq!(doc.person("nobody").unwrap().sws.0, [0; 8]);
    assert_eq!(doc.person("some").unwrap().sws.0, [1, 0, 0, 0, 1, 0, 0, 0]);

    let text = stdout_of(miq().arg("score").arg(data("demo_catalog.json")).arg(data("demo_roster.csv")));
    let doc = ProfilesDocument::from_json(&text).unwrap();
    assert_eq!(doc.profiles.len(), 12);
    assert_eq!(doc.person("individual-01").unwrap().sws.0, [5, 2, 6, 7, 4, 3, 2, 8]);
}

#[test]
fn score_names_unknown_ability() {
    let dir = TempDir::new().unwrap();
    let catalog = write(&dir, "c.json", &small_catalog(""));
    let table = write(&dir, "r.csv", "p,a1,bogus-7\n");
    miq()
        .arg("score")
        .arg(catalog)
        .arg(table)
        .assert()
        .code(2)
        .stderr(predicate::str::contains("bogus-7"));
}

fn radii(svg: &str) -> Vec<f64> {
    let doc = roxmltree::Document::parse(svg).unwrap();
    let root = doc.root_element();
    let c: f64 = root.attribute("data-center").unwrap().parse().unwrap();
    let r: f64 = root.attribute("data-radius").unwrap().parse().unwrap();
    doc.descendants()
        .filter(|n| n.attribute("class") == Some("vertex"))
        .map(|n| {
            let x: f64 = n.attribute("cx").unwrap().parse().unwrap();
            let y: f64 = n.attribute("cy").unwrap().parse().unwrap();
            ((x - c).powi(2) + (y - c).powi(2)).sqrt() / r
        })
        .collect()
}

#[test]
fn render_person_and_group() {
    let dir = TempDir::new().unwrap();
    let profiles = dir.path().join("profiles.json");
    miq()
        .arg("score")
        .arg(data("demo_catalog.json"))
        .arg(data("demo_responses.json"))
        .arg("--out")
        .arg(&profiles)
        .assert()
        .success();
    let svg = stdout_of(miq().arg("render").arg(&profiles).args(["--person", "individual-01"]));
    let expected = [5.0, 2.0, 6.0, 7.0, 4.0, 3.0, 2.0, 8.0].map(|v: f64| v / 8.0);
    for (got, want) in radii(&svg).iter().zip(expected) {
        assert!((got - want).abs() < 5e-4, "{got} vs {want}");
    }

    let four = write(&dir, "four.json", FOUR);
    let svg = stdout_of(miq().arg("render").arg(&four).args(["--group", "A,B"]));
    assert!(radii(&svg).iter().all(|r| (r - 1.0).abs() < 1e-3));

    miq()
        .arg("render")
        .arg(&four)
        .args(["--person", "Q"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("unknown person `Q`"));
}

#[test]
fn group_exact_pairs_complements() {
    let dir = TempDir::new().unwrap();
    let four = write(&dir, "four.json", FOUR);
    let text = stdout_of(miq().arg("group").arg(&four).args(["--size", "2", "--mode", "exact"]));
    let plan = PlanDocument::from_json(&text).unwrap();
    let groups: Vec<Vec<&str>> = plan
        .groups
        .iter()
        .map(|g| g.members.iter().map(String::as_str).collect())
        .collect();
    assert_eq!(groups, vec![vec!["A", "B"], vec!["C", "D"]]);
    assert_eq!(plan.objective.min_balance, "1");
    assert_eq!(plan.objective.sum_balances, "2");
}

#[test]
fn group_with_size_equal_to_roster_is_one_group() {
    let dir = TempDir::new().unwrap();
    let four = write(&dir, "four.json", FOUR);
    for mode in ["greedy", "local", "exact"] {
        let text = stdout_of(miq().arg("group").arg(&four).args(["--size", "4", "--mode", mode]));
        let plan = PlanDocument::from_json(&text).unwrap();
        assert_eq!(plan.groups.len(), 1, "{mode}");
        assert_eq!(plan.groups[0].members.len(), 4);
    }
}

#[test]
fn group_exact_size_limit() {
    let dir = TempDir::new().unwrap();
    let profiles = dir.path().join("p.json");
    let rows: Vec<String> = (0..13).map(|i| format!("p{i:02},a{}", i % 8 + 1)).collect();
    let table = write(&dir, "r.csv", &rows.join("\n"));
    let catalog = write(&dir, "c.json", &small_catalog(""));
    miq()
        .arg("score")
        .arg(catalog)
        .arg(table)
        .arg("--out")
        .arg(&profiles)
        .assert()
        .success();
    miq()
        .arg("group")
        .arg(&profiles)
        .args(["--size", "3", "--mode", "exact"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("limited to 12"));
}

#[test]
fn pipeline_writes_every_artifact() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    miq()
        .arg("pipeline")
        .arg(data("demo_catalog.json"))
        .arg(data("demo_roster.csv"))
        .args(["--size", "3", "--mode", "local", "--seed", "1", "--out-dir"])
        .arg(&out)
        .assert()
        .success()
        .stdout(predicate::str::contains("12 persons in 4 groups"));
    for name in ["profiles.json", "plan.json", "partition.svg", "group-01.svg", "group-04.svg"] {
        assert!(out.join(name).exists(), "{name}");
    }
    let plan = PlanDocument::from_json(&std::fs::read_to_string(out.join("plan.json")).unwrap()).unwrap();
    assert_eq!(plan.groups.len(), 4);
}

#[test]
fn usage_errors_exit_2() {
    miq().arg("render").arg("x.json").assert().code(2);
    miq().args(["group", "x.json"]).assert().code(2);
    miq().arg("--help").assert().code(0);
}
