use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chore_sched::io::parse_instance;
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chore-sched"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn demo_ef1_po_reports_non_existence() {
    let out = run(&["demo", "ef1-po"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("-2, -10, -1, -10, -2"), "{text}");
    assert!(text.contains("exists: false"), "{text}");

    let out = run(&["demo", "ef1-po", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["exists"]["exists"], Value::Bool(false));
    assert_eq!(v["exists"]["witness"], Value::Null);
}

#[test]
fn every_demo_reproduces_its_failure() {
    for name in ["efx-maximal", "ef1-po", "ef1-complete", "round-robin", "envy-cycle"] {
        let out = run(&["demo", name, "--format", "json"]);
        assert_eq!(code(&out), 1, "{name}: {}", stderr(&out));
    }
    let v = json(&run(&["demo", "round-robin", "--format", "json"]));
    let assignment = &v["schedule"]["assignment"];
    for c in [0, 2, 4, 6] {
        assert_eq!(assignment[c.to_string()], Value::from(0));
    }
    assert_eq!(v["ef1"]["holds"], Value::Bool(false));
}

#[test]
fn generate_is_deterministic() {
    let a = run(&["generate", "--kind", "random-path", "-m", "6", "--seed", "7"]);
    let b = run(&["generate", "--kind", "random-path", "-m", "6", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["generate", "--kind", "random-path", "-m", "6", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn auto_dispatch_follows_instance_structure() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (
            vec!["--kind", "random-intervals", "-n", "2", "-m", "10"],
            "two-agent-interval",
        ),
        (
            vec!["--kind", "random-dichotomous-path", "-n", "5", "-m", "12"],
            "dichotomous-path",
        ),
        (
            vec!["--kind", "bounded-components", "-n", "3", "-m", "9", "--identical"],
            "bounded-components",
        ),
    ];
    for (idx, (gen, algo)) in cases.iter().enumerate() {
        let file = dir.path().join(format!("{idx}.json"));
        let mut args = vec!["generate"];
        args.extend(gen);
        args.extend(["--seed", "3", "--out", s(&file)]);
        let out = run(&args);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert!(out.stdout.is_empty());

        let out = run(&["solve", s(&file), "--format", "json"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let v = json(&out);
        assert_eq!(v["algorithm"], Value::from(*algo));
        assert_eq!(v["ef1"]["holds"], Value::Bool(true));
        assert_eq!(v["maximal"], Value::Bool(true));
    }
}

#[test]
fn generated_instances_meet_their_constraints() {
    let out = run(&[
        "generate",
        "--kind",
        "random-dichotomous-path",
        "-n",
        "5",
        "-m",
        "9",
        "--seed",
        "1",
    ]);
    let inst = parse_instance(&stdout(&out)).unwrap();
    assert!(inst.valuations().dichotomy(false).is_some());
    assert!(inst.graph().is_path());

    let out = run(&[
        "generate",
        "--kind",
        "bounded-components",
        "-n",
        "3",
        "-m",
        "12",
        "--seed",
        "1",
    ]);
    let inst = parse_instance(&stdout(&out)).unwrap();
    assert!(inst.graph().components().iter().all(|c| c.len() <= 3));

    let out = run(&[
        "generate",
        "--kind",
        "bounded-components",
        "-n",
        "3",
        "--component-size",
        "4",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn solved_schedule_checks_out() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("inst.json");
    let sched = dir.path().join("sched.json");
    run(&[
        "generate",
        "--kind",
        "random-intervals",
        "-m",
        "9",
        "--seed",
        "11",
        "--out",
        s(&inst),
    ]);
    let out = run(&["solve", s(&inst), "--out", s(&sched)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("ef1: holds"));
    let out = run(&["check", s(&inst), "--schedule", s(&sched), "--criterion", "ef1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("maximal: yes"));
}

#[test]
fn failing_check_lists_the_violating_pair() {
    let dir = TempDir::new().unwrap();
    let inst = write(
        dir.path(),
        "inst.json",
        r#"{"agents": 2, "path": 4, "valuations": [[-1, -3, -1, -3], [-1, -3, -1, -3]]}"#,
    );
    let sched = write(
        dir.path(),
        "sched.json",
        r#"{"assignment": {"0": 0, "1": 1, "2": 0, "3": 1}}"#,
    );
    let out = run(&["check", s(&inst), "--schedule", s(&sched), "--criterion", "ef1"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("agent 1 envies agent 0"), "{}", stdout(&out));

    let out = run(&[
        "check",
        s(&inst),
        "--schedule",
        s(&sched),
        "--criterion",
        "ef1",
        "--format",
        "json",
    ]);
    let v = json(&out);
    assert_eq!(v["holds"], Value::Bool(false));
    assert_eq!(v["verdict"]["violations"][0]["envious"], Value::from(1));
    assert_eq!(v["verdict"]["violations"][0]["envied"], Value::from(0));

    let out = run(&["check", s(&inst), "--schedule", s(&sched), "--criterion", "ef2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let broken = write(
        dir.path(),
        "broken.json",
        "{\n  \"agents\": 2,\n  \"path\": 3,\n  \"valuations\": [[-1, -1, -1], [-1, -1]]\n}",
    );
    let out = run(&["solve", s(&broken)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("row 1"), "{}", stderr(&out));

    let garbled = write(dir.path(), "garbled.json", "{\n  \"agents\": 2,\n  \"path\": oops\n}");
    let out = run(&["solve", s(&garbled)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let unknown = write(
        dir.path(),
        "unknown.json",
        r#"{"agents": 2, "path": 2, "valuations": [[-1, -1], [-1, -1]], "extra": 1}"#,
    );
    let out = run(&["solve", s(&unknown)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("extra"), "{}", stderr(&out));

    let out = run(&["solve", "/nonexistent/instance.json"]);
    assert_eq!(code(&out), 2);

    let five = write(
        dir.path(),
        "five.json",
        r#"{"agents": 2, "path": 5, "valuations": [[-1, -1, -1, -1, -1], [-1, -1, -1, -1, -1]]}"#,
    );
    let out = run(&["exists", s(&five), "--guard", "3"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("guard"), "{}", stderr(&out));

    let out = run(&["exists", s(&five), "--criterion", "nonsense"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn exists_and_enumerate_on_a_small_path() {
    let dir = TempDir::new().unwrap();
    let inst = write(
        dir.path(),
        "inst.json",
        r#"{"agents": 2, "path": 4, "valuations": [[-1, -1, -1, -4], [-1, -1, -1, -4]]}"#,
    );
    let out = run(&["exists", s(&inst), "--criterion", "efx"]);
    assert_eq!(code(&out), 1);
    let out = run(&["exists", s(&inst), "--criterion", "ef1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["exists"], Value::Bool(true));

    let out = run(&["enumerate", s(&inst), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(
        v["count"].as_u64().unwrap() as usize,
        v["schedules"].as_array().unwrap().len()
    );
    assert!(v["count"].as_u64().unwrap() > 0);

    let out = run(&["enumerate", s(&inst), "--utilitarian"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("total value:"));
}

#[test]
fn sequence_trace_for_two_agents() {
    let dir = TempDir::new().unwrap();
    let inst = write(
        dir.path(),
        "inst.json",
        r#"{"agents": 2, "path": 3, "valuations": [[-1, -2, -3], [-3, -2, -1]]}"#,
    );
    let out = run(&["sequence", s(&inst), "--algo", "two-agent-path"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.starts_with("0  RBR  initial\n1  BNR  step\n2  BRB  step\n"),
        "{text}"
    );
    assert!(text.contains("selected:"));
}

#[test]
fn dichotomous_trace_flags_padding() {
    let dir = TempDir::new().unwrap();
    let inst = write(
        dir.path(),
        "inst.json",
        r#"{"agents": 4, "path": 5, "valuations": [[-2, -1, -1, -1, -1], [-2, -1, -1, -1, -1], [-2, -1, -1, -1, -1], [-2, -1, -1, -1, -1]]}"#,
    );
    let out = run(&["sequence", s(&inst), "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["algorithm"], Value::from("dichotomous-path"));
    let trace = v["trace"].as_array().unwrap();
    assert!(trace.iter().any(|p| p["piece"]["dummy"] == Value::Bool(true)));
    let assignment = v["schedule"]["assignment"].as_object().unwrap();
    assert_eq!(assignment.len(), 5);

    let out = run(&["solve", s(&inst), "--format", "json"]);
    let assignment = json(&out)["schedule"]["assignment"].as_object().unwrap().clone();
    assert_eq!(assignment.len(), 5);
}

#[test]
fn explicit_algorithm_must_apply() {
    let dir = TempDir::new().unwrap();
    let three = write(
        dir.path(),
        "three.json",
        r#"{"agents": 3, "path": 3, "valuations": [[-1, -2, -3], [-3, -2, -1], [-1, -1, -1]]}"#,
    );
    let out = run(&["solve", s(&three), "--algo", "two-agent-path"]);
    assert_eq!(code(&out), 2);
    let out = run(&["solve", s(&three)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--algo"), "{}", stderr(&out));
}
