//! End-to-end runs of the binary: exit codes, output lines, report files.

use std::path::{Path, PathBuf};
use std::process::Command;

fn fixture(name: &str) -> String {
    format!(
        "{}/../../fixtures/{name}",
        env!("CARGO_MANIFEST_DIR")
    )
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pdsys-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn pdsys(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_pdsys"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        output.status.code().expect("exit code"),
        String::from_utf8(output.stdout).expect("utf-8 stdout"),
        String::from_utf8(output.stderr).expect("utf-8 stderr"),
    )
}

#[test]
fn deciding_words_maps_verdicts_to_exit_codes() {
    let ab = fixture("ab.json");
    let (code, out, _) = pdsys(&["pda", "run", &ab, "--word", "aabb"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("accepted ("), "{out}");

    let (code, out, _) = pdsys(&["pda", "run", &ab, "--word", "abb"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.starts_with("rejected ("), "{out}");

    let palindrome = fixture("palindrome.json");
    let (code, out, _) = pdsys(&[
        "pda",
        "run",
        &palindrome,
        "--word",
        "aabaa",
        "--max-configs",
        "3",
        "--max-steps",
        "3",
    ]);
    assert_eq!(code, 2, "{out}");
    assert!(out.starts_with("budget-exhausted"), "{out}");
}

#[test]
fn witness_lines_accompany_acceptance() {
    let (code, out, _) = pdsys(&[
        "pda",
        "run",
        &fixture("ab.json"),
        "--word",
        "ab",
        "--witness",
    ]);
    assert_eq!(code, 0);
    let moves: Vec<&str> = out.lines().skip(1).collect();
    assert!(!moves.is_empty());
    assert!(moves.iter().all(|line| line.contains("->")), "{out}");
}

#[test]
fn words_can_be_spelled_as_symbol_names() {
    let (code, _, _) = pdsys(&[
        "pda",
        "run",
        &fixture("ab.json"),
        "--symbols",
        "--word",
        "a a b b",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn determinism_check_reports_both_ways() {
    let (code, out, _) = pdsys(&["pda", "check-det", &fixture("ab.json")]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "deterministic");

    let (code, out, _) = pdsys(&["pda", "check-det", &fixture("palindrome.json")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("non-deterministic: "), "{out}");
    assert!(out.contains("clashes with"), "{out}");
}

#[test]
fn stack_emptying_conversion_round_trips() {
    let converted = scratch("ab-empty.json");
    let (code, out, _) = pdsys(&[
        "pda",
        "to-empty-stack",
        &fixture("ab.json"),
        "-o",
        converted.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("wrote "), "{out}");

    let path = converted.to_str().unwrap();
    let (code, _, _) = pdsys(&["pda", "run", path, "--word", "aabb"]);
    assert_eq!(code, 0);
    let (code, _, _) = pdsys(&["pda", "run", path, "--word", "aab"]);
    assert_eq!(code, 1);
}

#[test]
fn conversion_without_output_path_prints_the_machine() {
    let (code, out, _) = pdsys(&["pda", "to-empty-stack", &fixture("ab.json")]);
    assert_eq!(code, 0);
    let parsed: serde_json::Value = serde_json::from_str(&out).expect("machine JSON");
    assert!(parsed.get("states").is_some());
}

fn compile_even(dest: &Path) {
    let (code, _, err) = pdsys(&[
        "post",
        "compile",
        &fixture("even.post"),
        "-o",
        dest.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
}

#[test]
fn compiled_systems_run_on_encoded_words() {
    let system = scratch("even-system.json");
    compile_even(&system);
    let path = system.to_str().unwrap();

    let (code, out, _) = pdsys(&["pcpa", "run", path, "--word", "aa$"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = pdsys(&["pcpa", "run", path, "--word", "a$"]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn tracing_prints_every_step_and_the_outcome() {
    let system = scratch("even-trace-system.json");
    compile_even(&system);
    let path = system.to_str().unwrap();

    let (code, out, _) = pdsys(&["pcpa", "trace", path, "--word", "aa$"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().next().unwrap().starts_with("   0  "), "{out}");
    assert!(out.contains("communicate "), "{out}");
    assert!(out.trim_end().ends_with("steps"), "{out}");

    let (code, out, _) = pdsys(&["pcpa", "trace", path, "--word", "a$"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.trim_end().ends_with("stuck: no applicable step"), "{out}");
}

#[test]
fn reserved_communication_symbols_are_rejected_as_input() {
    let system = scratch("even-reserved-system.json");
    compile_even(&system);
    let (code, _, err) = pdsys(&[
        "pcpa",
        "run",
        system.to_str().unwrap(),
        "--symbols",
        "--word",
        "K1",
    ]);
    assert_eq!(code, 3, "{err}");
    assert!(err.starts_with("error: "), "{err}");
}

#[test]
fn queue_programs_run_directly() {
    let even = fixture("even.post");
    let (code, _, _) = pdsys(&["post", "run", &even, "--word", "aaaa"]);
    assert_eq!(code, 0);
    let (code, _, _) = pdsys(&["post", "run", &even, "--word", "aaa"]);
    assert_eq!(code, 1);
}

#[test]
fn translation_agrees_with_the_interpreter_on_short_words() {
    let (code, out, _) = pdsys(&[
        "post",
        "verify",
        &fixture("even.post"),
        "--max-len",
        "6",
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.trim(), "7/7 agree");

    let (code, out, _) = pdsys(&[
        "post",
        "verify",
        &fixture("anbn.post"),
        "--mode",
        "faithful",
        "--max-len",
        "4",
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.trim(), "31/31 agree");
}

#[test]
fn starved_verification_is_inconclusive_unless_allowed() {
    let args = [
        "post",
        "verify",
        &fixture("even.post"),
        "--max-len",
        "6",
        "--max-configs",
        "5",
        "--max-steps",
        "5",
    ];
    let (code, out, _) = pdsys(&args);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("inconclusive on "), "{out}");

    let mut relaxed = args.to_vec();
    relaxed.push("--allow-inconclusive");
    let (code, _, err) = pdsys(&relaxed);
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("warning: "), "{err}");
}

#[test]
fn membership_guessing_finds_an_assignment() {
    let ab = fixture("ab.json");
    let (code, out, _) = pdsys(&[
        "udpas",
        "member-np",
        &ab,
        "-n",
        "2",
        "--word",
        "abab",
    ]);
    assert_eq!(code, 0, "{out}");
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("member"));
    let assignment = lines.next().expect("assignment line");
    assert!(assignment.contains("1 1 2 2") || assignment.contains("1 2"), "{out}");

    let (code, out, _) = pdsys(&["udpas", "member-np", &ab, "-n", "2", "--word", "aab"]);
    assert_eq!(code, 1, "{out}");
    assert_eq!(out.trim(), "non-member");
}

#[test]
fn zero_copies_is_a_usage_error() {
    let (code, _, err) = pdsys(&[
        "udpas",
        "member-np",
        &fixture("ab.json"),
        "-n",
        "0",
        "--word",
        "ab",
    ]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("--copies"), "{err}");
}

#[test]
fn built_bundles_feed_the_turn_taking_engine() {
    let bundle_path = scratch("bundle.json");
    let (code, _, err) = pdsys(&[
        "reduce",
        "build",
        &fixture("ab-strict.json"),
        &fixture("cd-strict.json"),
        "-o",
        bundle_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");

    let bundle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&bundle_path).unwrap()).unwrap();
    assert_eq!(bundle["separator"], "#");
    assert_eq!(bundle["role_marker"], "$");
    let system_path = scratch("bundle-system.json");
    std::fs::write(&system_path, bundle["system"].to_string()).unwrap();

    let path = system_path.to_str().unwrap();
    let (code, _, _) = pdsys(&["udpas", "run", path, "--word", "#$#a#c#b#d"]);
    assert_eq!(code, 0);
    let (code, _, _) = pdsys(&["udpas", "run", path, "--word", "#$#a#d#b#c"]);
    assert_eq!(code, 1);
}

#[test]
fn input_padding_is_printed_and_guarded() {
    let (code, out, _) = pdsys(&["reduce", "transform", "--word", "ab"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "#$#a#b");

    let (code, out, _) = pdsys(&["reduce", "transform", "--word", ""]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "#$");

    let (code, _, err) = pdsys(&["reduce", "transform", "--word", "a#b"]);
    assert_eq!(code, 3);
    assert!(err.contains("reserved"), "{err}");
    let (code, _, _) = pdsys(&["reduce", "transform", "--word", "a$"]);
    assert_eq!(code, 3);
}

#[test]
fn reduction_verification_agrees_with_direct_membership() {
    let (code, out, _) = pdsys(&[
        "reduce",
        "verify",
        &fixture("ab-strict.json"),
        &fixture("cd-strict.json"),
        "--max-len",
        "3",
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.trim(), "85/85 agree");
}

#[test]
fn reports_are_written_on_request() {
    let report_path = scratch("report.json");
    let (code, _, _) = pdsys(&[
        "pda",
        "run",
        &fixture("ab.json"),
        "--word",
        "aabb",
        "--json",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["command"], "pda run");
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["verdict"], "accepted");
    assert_eq!(report["exit_code"], 0);
    assert_eq!(report["configuration"]["word"], "aabb");
    assert_eq!(report["configuration"]["max_configurations"], 100_000);
    assert!(report["witness"].as_array().is_some_and(|w| !w.is_empty()));
}

#[test]
fn broken_inputs_are_usage_errors() {
    let missing = scratch("does-not-exist.json");
    let (code, _, err) = pdsys(&["pda", "run", missing.to_str().unwrap(), "--word", "a"]);
    assert_eq!(code, 3, "{err}");

    let malformed = scratch("malformed.json");
    std::fs::write(&malformed, "{\"states\": 3}").unwrap();
    let (code, _, err) = pdsys(&["pda", "run", malformed.to_str().unwrap(), "--word", "a"]);
    assert_eq!(code, 3);
    assert!(err.contains("malformed JSON"), "{err}");

    let (code, _, _) = pdsys(&["pda", "run", &fixture("ab.json"), "--nope"]);
    assert_eq!(code, 3);

    let (code, _, _) = pdsys(&["--help"]);
    assert_eq!(code, 0);
}
