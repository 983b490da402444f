use std::fs;
use std::path::Path;

use choreq::cli::{run, EXIT_INPUT, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use choreq::fixtures::Fixture;
use choreq::io::serialize_instance;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("choreq").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn repro_two_agent_counterexample() {
    let (code, out, _) = cli(&["repro", "--example", "thm2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("no EFX+fPO allocation exists"));
}

#[test]
fn repro_all_examples() {
    let (code, out, _) = cli(&["repro", "--example", "all"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(!out.contains("[FAIL]"));
    let (code, _, err) = cli(&["repro", "--example", "B9"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("unknown example"));
}

#[test]
fn three_agent_solver_rejects_two_agents() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "thm2.json", &serialize_instance(&Fixture::Thm2.instance()));
    let (code, _, err) = cli(&["solve", "--alg", "three-agents", "--input", &input]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("requires exactly 3 agents"), "{err}");
}

#[test]
fn check_reports_failures_with_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "thm2.json", &serialize_instance(&Fixture::Thm2.instance()));
    let alloc = write(dir.path(), "x.json", r#"{"a": ["j1", "j3"], "b": ["j2", "j4"]}"#);
    let (code, out, _) = cli(&["check", "--input", &input, "--alloc", &alloc, "--props", "efx,fpo"]);
    assert_eq!(code, EXIT_VERIFY);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "efx: pass");
    assert!(lines[1].starts_with("fpo: FAIL"), "{out}");

    let b1 = write(dir.path(), "b1.json", &serialize_instance(&Fixture::B1.instance()));
    let rr = write(dir.path(), "rr.json", r#"{"a": ["j1"], "b": ["j2"], "c": ["j3"]}"#);
    let (code, out, _) = cli(&["check", "--input", &b1, "--alloc", &rr, "--props", "ef1,po"]);
    assert_eq!(code, EXIT_VERIFY, "{out}");
    assert!(out.contains("ef1: pass"));
    assert!(out.contains("po: FAIL (dominated by"));

    let (code, _, err) = cli(&["check", "--input", &input, "--alloc", &alloc, "--props", "ce"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("needs --payments"));
}

#[test]
fn solve_verify_and_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("b.json");
    let input = input.to_str().unwrap();
    let (code, _, _) = cli(&[
        "gen", "--class", "bivalued", "--agents", "3", "--chores", "8", "--k", "3", "--seed", "11", "--output", input,
    ]);
    assert_eq!(code, EXIT_OK);
    let result = dir.path().join("r.json");
    let result = result.to_str().unwrap();
    let trace = dir.path().join("t.json");
    let trace = trace.to_str().unwrap();
    for alg in ["three-agents", "bivalued-balanced", "bivalued-efx", "two-type"] {
        let (code, out, err) = cli(&[
            "solve", "--alg", alg, "--input", input, "--output", result, "--verify", "--trace", trace,
        ]);
        if alg == "two-type" {
            assert_eq!(code, EXIT_INPUT, "{err}");
            continue;
        }
        assert_eq!(code, EXIT_OK, "{alg}: {out}{err}");
        assert!(out.contains("fpo: pass"));
        assert!(fs::read_to_string(trace).unwrap().starts_with('{'));
        let (code, out, _) = cli(&[
            "check", "--input", input, "--alloc", result, "--payments", result, "--props", "ef1,ce,fpo",
        ]);
        assert_eq!(code, EXIT_OK, "{alg}: {out}");
    }
    let (code, out, _) = cli(&["solve", "--alg", "bivalued-efx", "--input", input, "--verify", "--trace"]);
    assert_eq!(code, EXIT_OK);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(json["trace"]["case"].is_string());
    assert_eq!(json["certificate"].as_array().unwrap().len(), 3);
    assert!(json["payments"].is_object());
}

#[test]
fn zero_costs_are_set_aside() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "z.json",
        r#"{"disutility": [[0, 2, 3], [1, 0, 3], [4, 4, 1]]}"#,
    );
    let (code, out, err) = cli(&["solve", "--alg", "three-agents", "--input", &input, "--verify"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(json.get("payments").is_none());
    assert_eq!(json["allocation"]["a1"][0], "j1");
}

#[test]
fn oracle_lists_allocations() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "thm2.json", &serialize_instance(&Fixture::Thm2.instance()));
    let (code, out, _) = cli(&["oracle", "--input", &input, "--find", "efx"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("4 allocation(s) satisfy efx"));
    assert_eq!(out.lines().count(), 5);
    let (_, out, _) = cli(&["oracle", "--input", &input, "--find", "efx,fpo"]);
    assert!(out.starts_with("0 allocation(s)"));
    let (code, _, err) = cli(&["oracle", "--input", &input, "--find", "ef1", "--limit", "3"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("limit"));
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&["solve", "--nope"]).0, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(cli(&["solve", "--alg", "magic", "--input", "x"]).0, EXIT_USAGE);
    assert_eq!(cli(&["check", "--input", "x", "--alloc", "y", "--props", "nice"]).0, EXIT_USAGE);
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("repro"));
}

#[test]
fn bad_input_files() {
    let dir = tempfile::tempdir().unwrap();
    let neg = write(dir.path(), "neg.json", r#"{"disutility": [[1, -2], [1, 1]]}"#);
    let (code, _, err) = cli(&["solve", "--alg", "two-type", "--input", &neg]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("disutility[0][1]"), "{err}");
    let (code, _, _) = cli(&["solve", "--alg", "two-type", "--input", "/nonexistent/file.json"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn gen_is_seeded() {
    let (_, a, _) = cli(&["gen", "--class", "two-type", "--agents", "4", "--chores", "6", "--seed", "1"]);
    let (_, b, _) = cli(&["gen", "--class", "two-type", "--agents", "4", "--chores", "6", "--seed", "1"]);
    let (_, c, _) = cli(&["gen", "--class", "two-type", "--agents", "4", "--chores", "6", "--seed", "2"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(cli(&["gen", "--class", "three-agent", "--agents", "2", "--chores", "3"]).0, EXIT_INPUT);
}
