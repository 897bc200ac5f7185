//! End-to-end tests of the command-line surface: golden outputs for the
//! documented examples, exit-status discipline, and output determinism.

use std::process::{Command, Output};

use sccheck::manip::Witness;

fn sccheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sccheck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is utf-8")
}

#[test]
fn eval_prints_sorted_winner_sets() {
    let out = sccheck(&["eval", "--scc", "copeland", "3 1 2;2 3 1;3 2 1;1 2 3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "3\n");

    let out = sccheck(&["eval", "--scc", "borda", "3 1 2;3 1 2;2 1 3"]);
    assert_eq!(stdout(&out), "3\n");

    let out = sccheck(&["eval", "--scc", "plurality", "1 2;2 1"]);
    assert_eq!(stdout(&out), "1 2\n");
}

#[test]
fn eval_supports_split_rule_flags() {
    let out = sccheck(&[
        "eval",
        "--scc",
        "positional",
        "--weights",
        "3,1,0",
        "3 1 2;3 1 2;2 1 3",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "3\n");

    let out = sccheck(&["eval", "--scc", "majority", "--alpha", "3/2", "1 2;2 1;1 2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn compare_names_the_four_relations() {
    let cases = [
        (("kelly", "1 2 3", "1", "1 2"), "strict"),
        (("kelly", "1 2 3", "1 3", "2"), "incomparable"),
        (("kelly", "1 2 3", "2", "2"), "weak-equal"),
        (("kelly", "1 2 3", "1 2", "1"), "reverse"),
    ];
    for ((ext, order, b, c), expected) in cases {
        let out = sccheck(&[
            "compare", "--ext", ext, "--order", order, "--b", b, "--c", c,
        ]);
        assert!(out.status.success());
        assert_eq!(stdout(&out), format!("{expected}\n"), "{b} vs {c}");
    }
}

#[test]
fn manip_decides_the_documented_cases() {
    let out = sccheck(&[
        "manip", "--scc", "negative-plurality", "--ext", "kelly", "--info", "winner", "--n", "3",
        "--m", "4",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict: strategy-proof"));

    let out = sccheck(&[
        "manip", "--scc", "copeland", "--ext", "kelly", "--info", "winner", "--n", "3", "--m", "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("verdict: manipulable"));
    assert!(text.contains("witness:"));

    let out = sccheck(&[
        "manip", "--scc", "negative-plurality", "--ext", "fishburn", "--info", "winner", "--n",
        "3", "--m", "2",
    ]);
    assert!(stdout(&out).contains("verdict: manipulable"));
}

#[test]
fn manip_json_carries_a_valid_witness() {
    let out = sccheck(&[
        "manip", "--scc", "copeland", "--ext", "kelly", "--info", "winner", "--n", "3", "--m",
        "2", "--format", "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(value["verdict"], "manipulable");
    let witness: Witness =
        serde_json::from_value(value["witness"].clone()).expect("witness matches the schema");
    assert_eq!(witness.individual, 1);

    // A strategy-proof verdict serialises a null witness.
    let out = sccheck(&[
        "manip", "--scc", "plurality", "--ext", "kelly", "--n", "3", "--m", "2", "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(value["verdict"], "strategy-proof");
    assert!(value["witness"].is_null());
}

#[test]
fn exit_status_discipline() {
    // Input errors exit 2.
    let out = sccheck(&["eval", "--scc", "banana", "1 2;2 1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sccheck(&["eval", "--scc", "borda", "1 1 2;3 2 1"]);
    assert_eq!(out.status.code(), Some(2));

    // Bound refusals exit 3, distinct from any verdict.
    let out = sccheck(&[
        "manip", "--scc", "borda", "--ext", "kelly", "--n", "3", "--m", "3", "--max-states", "10",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // The suite runner refuses oversized rows rather than skipping them.
    let out = sccheck(&["verify", "--suite", "paper", "--max-nm", "0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn deterministic_output_is_byte_identical() {
    let args = [
        "manip", "--scc", "copeland", "--ext", "kelly", "--info", "winner", "--n", "3", "--m",
        "3", "--format", "json", "--deterministic",
    ];
    let first = stdout(&sccheck(&args));
    let second = stdout(&sccheck(&args));
    assert_eq!(first, second);

    let workers: Vec<String> = args
        .iter()
        .map(|s| s.to_string())
        .chain(["--workers".to_string(), "4".to_string()])
        .collect();
    let worker_refs: Vec<&str> = workers.iter().map(|s| s.as_str()).collect();
    let parallel = stdout(&sccheck(&worker_refs));
    assert_eq!(first, parallel);
}

#[test]
fn verify_paper_suite_passes() {
    let out = sccheck(&["verify", "--suite", "paper", "--format", "csv", "--deterministic"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("rule,ext,info,n,m,expected,observed,states,millis")
    );
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        // Quoted positional rules add embedded commas; check the tail.
        let observed = fields[fields.len() - 3];
        let expected = fields[fields.len() - 4];
        assert_eq!(expected, observed, "row mismatch: {line}");
    }
}

#[test]
fn verify_property_and_axiom_suites_pass() {
    let out = sccheck(&["verify", "--suite", "kelly-properties"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("30/30 rows match"));

    let out = sccheck(&["verify", "--suite", "axioms"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("25/25 rows match"));
}

#[test]
fn axiom_and_informativeness_commands() {
    let out = sccheck(&[
        "axiom", "wsm", "--scc", "borda", "--n", "3", "--m", "3",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("holds: true"));

    let out = sccheck(&[
        "axiom", "exclusions", "--scc", "borda", "--n", "3", "--m", "3", "--format", "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["consistent"], true);
    assert_eq!(value["wsm"], true);
    assert_eq!(value["us"], true);
    assert_eq!(value["sm"], false);

    let out = sccheck(&[
        "informativeness", "--a", "winner", "--b", "zero", "--scc", "borda", "--n", "3", "--m",
        "2",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("holds"));

    let out = sccheck(&["informativeness", "--a", "zero", "--b", "complete", "--n", "2", "--m", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("fails"));

    // Winner families need a backing rule.
    let out = sccheck(&["informativeness", "--a", "winner", "--b", "zero", "--n", "3", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
}
