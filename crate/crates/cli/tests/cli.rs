//! End-to-end behavior of the `okounkov` binary and the job runner.

use std::path::{Path, PathBuf};
use std::process::{Command as Process, Output};

use okounkov::glseries::TruncationBound;
use okounkov_cli::{
    parse_series_file, parse_series_str, parse_surface_file, run, serialize_series, Command, FlagSpec, JobSpec,
    CACHE_ENV,
};
use serde_json::Value;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn corpus(name: &str) -> PathBuf {
    corpus_dir().join(format!("{name}.json"))
}

fn okounkov(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_okounkov")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

fn is_surface(p: &Path) -> bool {
    p.file_name().unwrap().to_string_lossy().starts_with("surface_")
}

#[test]
fn every_corpus_file_parses() {
    let files = corpus_files();
    assert_eq!(files.len(), 12);
    for path in files {
        if is_surface(&path) {
            parse_surface_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        } else {
            parse_series_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        }
    }
}

#[test]
fn series_round_trip_through_json() {
    let bound = TruncationBound::new(3).unwrap();
    for path in corpus_files().into_iter().filter(|p| !is_surface(p)) {
        let series = parse_series_file(&path).unwrap();
        let text = serialize_series(&series).unwrap();
        let again = parse_series_str(&text, "round trip").unwrap();
        assert_eq!(again.ambient_dim(), series.ambient_dim());
        assert_eq!(again.divisor_degree(), series.divisor_degree());
        assert_eq!(again.generators(), series.generators(), "{}", path.display());
        assert_eq!(again.dims(bound).unwrap(), series.dims(bound).unwrap());
        assert_eq!(serialize_series(&again).unwrap(), text);
    }
}

#[test]
fn identical_jobs_give_identical_bytes() {
    let mut job = JobSpec::new(Command::Body, corpus("p2_except_x2x3"), 5);
    job.flag = FlagSpec::Seed(3);
    let a = run(&job).unwrap().to_json();
    let b = run(&job).unwrap().to_json();
    assert_eq!(a, b);
    assert!(a.contains("\"seed\": 3"));

    let input = corpus("p2_two_points");
    let args = ["generic-test", path_str(&input), "--flags", "3", "--K", "4"];
    let first = okounkov(&args);
    let second = okounkov(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn body_of_the_plane_example() {
    let v = stdout_json(&okounkov(&["body", path_str(&corpus("p2_except_x2x3")), "--K", "4"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "body");
    assert_eq!(v["exact"], true);
    assert_eq!(v["payload"]["body"]["certificate"]["kind"], "monomial-generators");
    let vertices = v["payload"]["body"]["polytope"]["vertices"].as_array().unwrap().clone();
    let mut found: Vec<Vec<String>> = vertices
        .iter()
        .map(|p| p.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect())
        .collect();
    found.sort();
    let expected = [["0/1", "0/1"], ["0/1", "2/1"], ["2/1", "0/1"]];
    assert_eq!(found, expected.map(|p| p.map(String::from).to_vec()).to_vec());
    assert_eq!(v["payload"]["polytope_volume"], Value::Null);
    assert_eq!(v["payload"]["body"]["polytope"]["volume"], "2/1");
    assert_eq!(v["payload"]["semigroup"]["index"], "1");
}

#[test]
fn slice_of_the_complete_quadrics() {
    let v = stdout_json(&okounkov(&["slice", path_str(&corpus("p2_complete_O2")), "--t", "1", "--K", "4"]));
    let p = &v["payload"];
    assert_eq!(p["equal"], true);
    assert_eq!(p["direct"]["vertices"], serde_json::json!([["0/1"], ["1/1"]]));
    assert_eq!(p["formula"]["vertices"], p["direct"]["vertices"]);
}

#[test]
fn generic_test_on_the_plane_example() {
    let v = stdout_json(&okounkov(&[
        "generic-test",
        path_str(&corpus("p2_except_x2x3")),
        "--flags",
        "5",
        "--K",
        "8",
    ]));
    assert_eq!(v["payload"]["all_equal"], true);
    assert_eq!(v["payload"]["bodies"].as_array().unwrap().len(), 5);
}

#[test]
fn surface_command_reports_the_triangle() {
    let v = stdout_json(&okounkov(&["surface", path_str(&corpus("surface_p2_2h"))]));
    let p = &v["payload"];
    assert_eq!(p["mu"], "2/1");
    assert_eq!(p["area"], "2/1");
    assert_eq!(p["beta"], serde_json::json!([{ "slope": "-1/1", "intercept": "2/1" }]));
}

#[test]
fn exit_codes_classify_failures() {
    let missing = okounkov(&["body", "/nonexistent/series.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ \"ambient_dim\": 2, ").unwrap();
    let out = okounkov(&["body", path_str(&broken)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("broken.json:1:"));

    let bad_degree = dir.path().join("bad_degree.json");
    std::fs::write(
        &bad_degree,
        r#"{"ambient_dim": 2, "divisor_degree": 2, "generators": [{"degree": 1, "forms": [[{"exp": [1, 0, 0], "num": 1}]]}]}"#,
    )
    .unwrap();
    let out = okounkov(&["body", path_str(&bad_degree)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("generators[0].forms[0]"));

    // A binomial generator makes the series non-monomial; sheafification needs monomial levels.
    let binomial = dir.path().join("binomial.json");
    std::fs::write(
        &binomial,
        r#"{"ambient_dim": 1, "divisor_degree": 1, "generators": [{"degree": 1, "forms": [[{"exp": [1, 0], "num": 1}, {"exp": [0, 1], "num": 1}]]}]}"#,
    )
    .unwrap();
    assert_eq!(okounkov(&["sheafify", path_str(&binomial), "--K", "2"]).status.code(), Some(3));

    // A three-dimensional body has no planar figure.
    let svg = dir.path().join("body.svg");
    let out = okounkov(&["body", path_str(&corpus("p3_complete_O1")), "--K", "2", "--svg", path_str(&svg)]);
    assert_eq!(out.status.code(), Some(3));

    assert_eq!(okounkov(&["body", path_str(&corpus("p2_squares")), "--K", "0"]).status.code(), Some(2));
    assert_eq!(okounkov(&["slice", path_str(&corpus("p2_squares"))]).status.code(), Some(2));
}

#[test]
fn svg_figures_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let body_svg = dir.path().join("body.svg");
    let out = okounkov(&["body", path_str(&corpus("p2_except_x2x3")), "--K", "3", "--svg", path_str(&body_svg)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&body_svg).unwrap();
    assert!(text.contains("<svg") && text.contains("<polygon"));

    let surface_svg = dir.path().join("surface.svg");
    let out = okounkov(&["surface", path_str(&corpus("surface_blowup_2h_line")), "--svg", path_str(&surface_svg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&surface_svg).unwrap();
    for label in ["(a)", "(b)", "(c)", "?"] {
        assert!(text.contains(label), "missing {label}");
    }
}

#[test]
fn cached_results_match_fresh_ones() {
    let dir = tempfile::tempdir().unwrap();
    let input = corpus("p2_point_base");
    let args = ["volume", path_str(&input), "--K", "6"];
    let fresh = okounkov(&args);
    let run_cached = || {
        Process::new(env!("CARGO_BIN_EXE_okounkov"))
            .args(args)
            .env(CACHE_ENV, dir.path())
            .output()
            .unwrap()
    };
    let first = run_cached();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = run_cached();
    assert_eq!(fresh.stdout, first.stdout);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn output_file_receives_the_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = okounkov(&["base-locus", path_str(&corpus("p2_two_points")), "--K", "3", "-o", path_str(&target)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["payload"]["empty"], false);
    assert_eq!(v["payload"]["components"], serde_json::json!([[0, 1], [0, 2]]));
}
