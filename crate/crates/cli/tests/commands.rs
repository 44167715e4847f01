use std::fs;
use std::path::{Path, PathBuf};

use gmetric::eppa::verify_witness;
use gmetric::json::{ForbiddenJson, PathExtensionJson, SpaceJson, WitnessJson};
use gmetric::omission::is_free;
use gmetric_cli::{run, EXIT_EXHAUSTED, EXIT_INVALID, EXIT_OK};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn gm(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gmetric").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

const PATH112: &str = r#"{"monoid":{"kind":"truncated","n":2},"points":["a","b","c"],"dist":[[0,1,2],[1,0,1],[2,1,0]]}"#;
const EDGE: &str = r#"{"monoid":{"kind":"truncated","n":2},"points":["x","y"],"dist":[[0,1],[1,0]]}"#;

#[test]
fn witness_for_the_path_is_small_and_verifies() {
    let dir = TempDir::new().unwrap();
    let space = write(dir.path(), "path112.json", PATH112);
    let r = gm(&["witness", "--space", space.to_str().unwrap(), "--max-size", "6"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let w: WitnessJson = serde_json::from_str(&r.stdout).unwrap();
    let w = w.build().unwrap();
    assert!(w.size() <= 5);
    assert!(verify_witness(&w).ok());
    assert!(r.stderr.starts_with("witness with"));

    let wf = write(dir.path(), "w.json", &r.stdout);
    let v = gm(&["verify", "--witness", wf.to_str().unwrap()]);
    assert_eq!(v.code, EXIT_OK, "{}", v.stderr);
}

#[test]
fn exhausted_search_exits_two() {
    let dir = TempDir::new().unwrap();
    let space = write(dir.path(), "path112.json", PATH112);
    let r = gm(&["witness", "--space", space.to_str().unwrap(), "--max-size", "3"]);
    assert_eq!(r.code, EXIT_EXHAUSTED);
    let err: Value = serde_json::from_str(r.stderr.trim()).unwrap();
    assert_eq!(err["error"], "exhausted");
}

#[test]
fn forbidden_odd_five_has_two_triangles() {
    let r = gm(&["forbidden-odd", "--n", "5"]);
    assert_eq!(r.code, EXIT_OK);
    let f: ForbiddenJson = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(f.members.len(), 2);
    assert_eq!(r.stderr.trim(), "2 triangles");
    assert_eq!(gm(&["forbidden-odd", "--n", "4"]).code, EXIT_INVALID);
}

#[test]
fn bad_monoid_reports_the_axiom() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"kind":"table","labels":["0","1","2"],"plus":[[0,1,2],[1,2,2],[2,2,1]]}"#,
    );
    let r = gm(&["monoid-check", "--file", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_INVALID);
    let err: Value = serde_json::from_str(r.stderr.trim()).unwrap();
    assert_eq!(err["error"], "monoid_axiom");
    assert!(err["axiom"].is_string());

    let good = write(dir.path(), "good.json", r#"{"kind":"truncated","n":3}"#);
    let r = gm(&["monoid-check", "--file", good.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["archimedean"], true);
}

#[test]
fn invalid_space_names_the_condition() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"monoid":{"kind":"truncated","n":3},"points":["a","b","c"],"dist":[[0,1,3],[1,0,1],[3,1,0]]}"#,
    );
    let r = gm(&["space-check", "--space", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_INVALID);
    let err: Value = serde_json::from_str(r.stderr.trim()).unwrap();
    assert_eq!(err["condition"], "triangle");
}

#[test]
fn missing_file_and_bad_arguments_are_invalid() {
    assert_eq!(gm(&["space-check", "--space", "/nonexistent/x.json"]).code, EXIT_INVALID);
    assert_eq!(gm(&["witness", "--max-size", "0", "--space", "x"]).code, EXIT_INVALID);
    assert_eq!(gm(&[]).code, EXIT_INVALID);
    assert_eq!(gm(&["no-such-command"]).code, EXIT_INVALID);
}

#[test]
fn help_lists_every_subcommand() {
    let r = gm(&["--help"]);
    assert_eq!(r.code, EXIT_OK);
    for sub in [
        "monoid-check",
        "space-check",
        "amalgamate",
        "sigma",
        "witness",
        "witness-sa",
        "witness-free",
        "verify",
        "path-extensions",
        "parity",
        "forbidden-odd",
        "saturate",
        "audit",
        "random-free",
    ] {
        assert!(r.stdout.contains(sub), "missing {sub}");
    }
}

#[test]
fn amalgamate_round_trips_and_renders_dot() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", EDGE);
    let b = write(dir.path(), "b.json", PATH112);
    let args = ["amalgamate", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap(), "--glue", "y:a"];
    let r = gm(&args);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let s: SpaceJson = serde_json::from_str(&r.stdout).unwrap();
    let space = s.build().unwrap();
    assert_eq!(space.len(), 4);
    assert_eq!(serde_json::to_string_pretty(&SpaceJson::of(&space)).unwrap() + "\n", r.stdout);

    let mut dot_args = args.to_vec();
    dot_args.extend(["--format", "dot"]);
    let d = gm(&dot_args);
    assert!(d.stdout.starts_with("graph"));
    assert!(d.stdout.contains("label=\"2\""));

    let bad = gm(&["amalgamate", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap(), "--glue", "q:a"]);
    assert_eq!(bad.code, EXIT_INVALID);
}

#[test]
fn sigma_matches_the_known_system_and_checks_graphs() {
    let dir = TempDir::new().unwrap();
    let r = gm(&["sigma", "--truncated", "3", "--s", "1,2,3"]);
    assert_eq!(r.code, EXIT_OK);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let tuples: Vec<Vec<String>> = serde_json::from_value(v["tuples"].clone()).unwrap();
    let want: Vec<Vec<String>> = [vec!["2", "1"], vec!["3", "1"], vec!["3", "1", "1"], vec!["3", "2"]]
        .iter()
        .map(|t| t.iter().map(|s| s.to_string()).collect())
        .collect();
    assert_eq!(tuples, want);

    // A triangle with labels 1, 1, 3 contains the pattern (3, 1, 1).
    let g = write(dir.path(), "g.json", r#"{"vertices":["a","b","c"],"edges":[["a","b",1],["b","c",1],["a","c",3]]}"#);
    let r = gm(&["sigma", "--truncated", "3", "--s", "1,2,3", "--graph", g.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["geodesic_consistent"], false);

    let g = write(dir.path(), "h.json", r#"{"vertices":["a","b","c"],"edges":[["a","b",1],["b","c",1]]}"#);
    let r = gm(&["sigma", "--truncated", "3", "--s", "1,2,3", "--graph", g.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["geodesic_consistent"], true);
    let completion: SpaceJson = serde_json::from_value(v["completion"].clone()).unwrap();
    assert_eq!(completion.dist[0][2], 2);

    assert_eq!(gm(&["sigma", "--truncated", "3", "--s", "9"]).code, EXIT_INVALID);
}

#[test]
fn free_witness_and_parity_for_truncated_spaces() {
    let dir = TempDir::new().unwrap();
    let space = write(dir.path(), "edge.json", EDGE);
    let r = gm(&["witness-free", "--space", space.to_str().unwrap(), "--odd", "3"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let w = serde_json::from_str::<WitnessJson>(&r.stdout).unwrap().build().unwrap();
    let f = gmetric::omission::odd_perimeter_triangles(3).unwrap();
    assert!(is_free(&w.witness, &f));
    assert!(verify_witness(&w).ok());

    let tri = write(
        dir.path(),
        "tri.json",
        r#"{"monoid":{"kind":"truncated","n":3},"points":["a","b","c"],"dist":[[0,1,2],[1,0,2],[2,2,0]]}"#,
    );
    let r = gm(&["parity", "--space", tri.to_str().unwrap(), "--n", "5"]);
    assert_eq!(r.code, EXIT_OK);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(v["perimeter"], 5);
}

#[test]
fn path_extensions_of_the_unit_triangle() {
    let dir = TempDir::new().unwrap();
    let tri = write(
        dir.path(),
        "tri.json",
        r#"{"monoid":{"kind":"truncated","n":2},"points":["a","b","c"],"dist":[[0,1,1],[1,0,1],[1,1,0]]}"#,
    );
    let r = gm(&["path-extensions", "--space", tri.to_str().unwrap(), "--s", "1,2"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let exts: Vec<PathExtensionJson> = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(exts.len(), 1);
    assert_eq!(exts[0].points.len(), 3);
}

#[test]
fn semi_archimedean_witness_over_a_max_chain() {
    let dir = TempDir::new().unwrap();
    let s = write(
        dir.path(),
        "u.json",
        r#"{"monoid":{"kind":"max_chain","n":2},"points":["p","q","r"],"dist":[[0,1,2],[1,0,2],[2,2,0]]}"#,
    );
    let r = gm(&["witness-sa", "--space", s.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let w = serde_json::from_str::<WitnessJson>(&r.stdout).unwrap().build().unwrap();
    assert!(verify_witness(&w).ok());
}

#[test]
fn saturate_and_audit() {
    let dir = TempDir::new().unwrap();
    let space = write(dir.path(), "edge.json", EDGE);
    let r = gm(&["saturate", "--space", space.to_str().unwrap(), "--odd", "3", "--depth", "2"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let result: SpaceJson = serde_json::from_value(v["result"].clone()).unwrap();
    let result = result.build().unwrap();
    assert!(is_free(&result, &gmetric::omission::odd_perimeter_triangles(3).unwrap()));
    assert_eq!(v["levels"].as_array().unwrap().len(), 2);

    let c5 = write(
        dir.path(),
        "c5.json",
        &serde_json::to_string(&SpaceJson::of(
            &gmetric::space::truncated_path_metric(&gmetric::space::SimpleGraph::cycle(5), 2).unwrap(),
        ))
        .unwrap(),
    );
    let r = gm(&["audit", "--space", c5.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn random_free_is_deterministic_and_writes_files() {
    let dir = TempDir::new().unwrap();
    let out1 = dir.path().join("r1.json");
    let out2 = dir.path().join("r2.json");
    let base = ["random-free", "--truncated", "5", "--odd", "5", "--n", "6", "--seed", "7", "--out"];
    let r1 = gm(&[&base[..], &[out1.to_str().unwrap()]].concat());
    let r2 = gm(&[&base[..], &[out2.to_str().unwrap()]].concat());
    assert_eq!(r1.code, EXIT_OK, "{}", r1.stderr);
    assert_eq!(r1.stdout, r2.stdout);
    assert!(r1.stdout.contains("6 points"));
    let a = fs::read(&out1).unwrap();
    assert_eq!(a, fs::read(&out2).unwrap());
    let s = serde_json::from_slice::<SpaceJson>(&a).unwrap().build().unwrap();
    assert!(is_free(&s, &gmetric::omission::odd_perimeter_triangles(5).unwrap()));

    let one = write(dir.path(), "one.json", r#"{"members":[{"monoid":{"kind":"truncated","n":2},"points":["a"],"dist":[[0]]}],"spectrum_bound":[1]}"#);
    let r = gm(&["random-free", "--truncated", "2", "--forbidden", one.to_str().unwrap(), "--n", "2"]);
    assert_eq!(r.code, EXIT_INVALID);
}
