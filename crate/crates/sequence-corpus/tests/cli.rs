//! End-to-end checks of the command-line binary: byte-determinism of the
//! exported artifacts and the exit-code contract (0 success, 1 failed
//! mathematical precondition, 2 usage error).

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sequence-corpus"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn automaton_output_is_byte_deterministic() {
    let args = ["automaton", "catalan", "--prime", "2", "--alpha", "2"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn automaton_writes_json_and_dot_files() {
    let dir = std::env::temp_dir().join(format!("seqcorpus-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let json_path = dir.join("catalan.json");
    let dot_path = dir.join("catalan.dot");
    let out = run(&[
        "automaton",
        "catalan",
        "--prime",
        "2",
        "--alpha",
        "2",
        "--out",
        json_path.to_str().unwrap(),
        "--dot",
        dot_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let json = std::fs::read_to_string(&json_path).unwrap();
    assert!(json.starts_with('{') && json.ends_with('\n'));
    assert!(json.contains("\"format_version\": 1"));
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.starts_with("digraph"));

    // The exported document is accepted back as an analysis source.
    let res = run(&["residues", json_path.to_str().unwrap()]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    assert!(text.contains("forbidden: 3"), "unexpected output: {text}");

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn residues_from_fixture_name() {
    let out = run(&["residues", "catalan", "--prime", "2", "--alpha", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("forbidden: 3"), "unexpected output: {text}");
}

#[test]
fn precondition_failure_exits_one() {
    // The diagonal route needs an invertible derivative and the direct
    // construction only covers the prime field, so this modulus is refused.
    let out = run(&["automaton", "central-trinomial", "--prime", "2", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    let unknown = run(&["automaton", "no-such-fixture", "--prime", "2", "--alpha", "1"]);
    assert_eq!(unknown.status.code(), Some(2));

    let bad_prime = run(&["automaton", "catalan", "--prime", "6", "--alpha", "1"]);
    assert_eq!(bad_prime.status.code(), Some(2));

    let no_args = run(&[]);
    assert_eq!(no_args.status.code(), Some(2));
}

#[test]
fn verify_and_pplucas_roundtrip() {
    let out = run(&[
        "verify",
        "motzkin",
        "--prime",
        "3",
        "--alpha",
        "2",
        "--count",
        "128",
    ]);
    assert!(out.status.success());

    let out = run(&["pplucas", "--n", "10", "--m", "4", "--prime", "3", "--alpha", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim(), "C(10, 4) mod 9 = 3");
}
