//! End-to-end runs of the binary: report formats, exit codes, file
//! round-trips, and replay of emitted instances.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use choicekit_cli::formats::{DemandFile, InstanceFile, MatchingFile};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_choicekit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn axioms_pass_and_fail_with_witnesses() {
    let worked = data("worked_example.json");
    let out = run(&[
        "axioms",
        "--input",
        worked.to_str().unwrap(),
        "--which",
        "pi",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "pi: PASS\n");

    let failing = data("subs_failing.json");
    let out = run(&[
        "axioms",
        "--input",
        failing.to_str().unwrap(),
        "--which",
        "subs,ire",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(
        text.contains("subs: FAIL [S={a,b} T={a} elem=a]"),
        "got {text}"
    );
    assert!(text.contains("ire: FAIL"));

    // default axiom set on the worked example: everything passes
    let out = run(&["axioms", "--input", worked.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 7);
}

#[test]
fn malformed_instance_is_an_input_error() {
    let dir = std::env::temp_dir().join("choicekit-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("missing_subset.json");
    std::fs::write(
        &path,
        r#"{"elements": ["a", "b"], "choice_table": {"": [], "a": ["a"], "b": ["b"]}}"#,
    )
    .unwrap();
    let out = run(&["axioms", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let bad_json = dir.join("bad.json");
    std::fs::write(&bad_json, "{ not json").unwrap();
    let out = run(&["axioms", "--input", bad_json.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let dup_order = dir.join("dup_order.json");
    std::fs::write(
        &dup_order,
        r#"{"elements": ["a", "b"], "rule": {"variant": "priority_max", "q": 1, "order": ["a", "a"]}}"#,
    )
    .unwrap();
    let out = run(&["axioms", "--input", dup_order.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn lattice_report_and_dot() {
    let worked = data("worked_example.json");
    let out = run(&["lattice", "--input", worked.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(
        text.starts_with("nodes: 7\nedges: 9\norders: 4\n"),
        "got {text}"
    );

    let dir = std::env::temp_dir().join("choicekit-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let dot_path = dir.join("figure.dot");
    let out = run(&[
        "lattice",
        "--input",
        worked.to_str().unwrap(),
        "--dot",
        dot_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.starts_with("digraph maximal_option_sets {"));
    assert_eq!(dot.matches(" -> ").count(), 9);

    // repeated runs are byte-identical
    let again = run(&["lattice", "--input", worked.to_str().unwrap(), "--dot", "-"]);
    let text_again = stdout(&again);
    assert!(text_again.ends_with(&dot));

    let failing = data("subs_failing.json");
    let out = run(&["lattice", "--input", failing.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("NONE"));
}

#[test]
fn rationalize_modes() {
    let worked = data("worked_example.json");
    let out = run(&[
        "rationalize",
        "--input",
        worked.to_str().unwrap(),
        "--mode",
        "mc-min",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("size: 2\n"), "got {text}");
    assert!(text.contains("order: a ≻ c ≻ b"));
    assert!(text.contains("order: b ≻ c ≻ a"));

    let rule = data("priority_rule.json");
    let out = run(&[
        "rationalize",
        "--input",
        rule.to_str().unwrap(),
        "--mode",
        "responsive",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "q: 3\norder: 1 ≻ 2 ≻ 3 ≻ 4 ≻ 5\n");

    let failing = data("subs_failing.json");
    let out = run(&[
        "rationalize",
        "--input",
        failing.to_str().unwrap(),
        "--mode",
        "mc",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("NONE"));
}

#[test]
fn demand_modes() {
    let contrary = data("contrary_demand.json");
    let out = run(&[
        "demand",
        "--input",
        contrary.to_str().unwrap(),
        "--mode",
        "lod",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("law-of-demand: FAIL"));

    let out = run(&[
        "demand",
        "--input",
        contrary.to_str().unwrap(),
        "--mode",
        "warp",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "demand-warp: PASS\n");

    let out = run(&[
        "demand",
        "--input",
        contrary.to_str().unwrap(),
        "--mode",
        "rationalize",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.starts_with("NONE [negative constraint cycle]"));
    assert_eq!(text.matches("cycle step:").count(), 2);

    let consistent = data("consistent_demand.json");
    let out = run(&[
        "demand",
        "--input",
        consistent.to_str().unwrap(),
        "--mode",
        "rationalize",
    ]);
    assert_eq!(code(&out), 0);
    let valuation: std::collections::BTreeMap<String, String> =
        serde_json::from_str(&stdout(&out)).expect("valuation json");
    assert_eq!(valuation.get(""), Some(&"0".to_string()));
}

#[test]
fn da_and_stability_compose() {
    let contest = data("priority_contest.json");
    let out = run(&[
        "da",
        "--input",
        contest.to_str().unwrap(),
        "--variant",
        "ck",
        "--trace",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("1: a\n2: -\n"), "got {text}");
    assert!(text.contains("round 1: a ← {1}"));

    // feed the printed matching straight back into the stability command
    let dir = std::env::temp_dir().join("choicekit-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let matching_path = dir.join("contest_matching.txt");
    std::fs::write(&matching_path, &text).unwrap();
    let out = run(&[
        "stability",
        "--input",
        contest.to_str().unwrap(),
        "--matching",
        matching_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "individual: PASS\nalpha: PASS\nbeta: PASS\ngroup: PASS\n"
    );

    // the swapped assignment is blocked
    let swapped = dir.join("contest_swapped.txt");
    std::fs::write(&swapped, "1: -\n2: a\n").unwrap();
    let out = run(&[
        "stability",
        "--input",
        contest.to_str().unwrap(),
        "--matching",
        swapped.to_str().unwrap(),
        "--notion",
        "alpha",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "alpha: FAIL [blocking agent=1 object=a]\n");
}

#[test]
fn search_outputs_replay() {
    let out = run(&["search", "--kind", "warsprio_not_subs", "--seed", "0"]);
    assert_eq!(code(&out), 0);
    let instance: InstanceFile = serde_json::from_str(&stdout(&out)).expect("instance json");
    let c = instance.to_choice_function().unwrap();
    assert!(choicekit::axioms::check_warsprio(&c).holds);
    assert!(
        !choicekit::axioms::check_substitutability(&c, choicekit::axioms::Scan::exhaustive()).holds
    );

    let out = run(&["search", "--kind", "ck_ne_ak_subs", "--seed", "0"]);
    assert_eq!(code(&out), 0);
    let file: MatchingFile = serde_json::from_str(&stdout(&out)).expect("matching json");
    let prob = file.to_problem().unwrap();
    let ck = choicekit::matching::run_ck_da(&prob).result.unwrap();
    let ak = choicekit::matching::run_ak_da(&prob).result.unwrap();
    assert_ne!(ck, ak);

    // a hopeless budget reports NONE and exits 1
    let out = run(&["search", "--kind", "ck_unstable_ire", "--max-size", "0"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "NONE\n");

    let out = run(&["search", "--kind", "nonsense"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reports_can_be_written_to_files() {
    let dir = std::env::temp_dir().join("choicekit-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let report_path = dir.join("axioms_report.txt");
    let worked = data("worked_example.json");
    let out = run(&[
        "axioms",
        "--input",
        worked.to_str().unwrap(),
        "--which",
        "pi,subs",
        "--output",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    assert_eq!(
        std::fs::read_to_string(&report_path).unwrap(),
        "pi: PASS\nsubs: PASS\n"
    );
}

#[test]
fn canonical_files_round_trip() {
    for name in [
        "worked_example.json",
        "subs_failing.json",
        "priority_rule.json",
    ] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let file: InstanceFile = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&file).unwrap() + "\n";
        assert_eq!(text, again, "{name} is not canonical");
        // and through the domain types
        let c = file.to_choice_function().unwrap();
        let re =
            serde_json::to_string_pretty(&InstanceFile::from_choice_function(&c)).unwrap() + "\n";
        assert_eq!(text, re, "{name} drifted through conversion");
    }
    let text = std::fs::read_to_string(data("priority_contest.json")).unwrap();
    let file: MatchingFile = serde_json::from_str(&text).unwrap();
    let prob = file.to_problem().unwrap();
    let re = serde_json::to_string_pretty(&MatchingFile::from_problem(&prob)).unwrap() + "\n";
    assert_eq!(text, re);

    for name in ["contrary_demand.json", "consistent_demand.json"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let file: DemandFile = serde_json::from_str(&text).unwrap();
        let (ground, obs) = file.to_observations().unwrap();
        let re = serde_json::to_string_pretty(&DemandFile::from_observations(&ground, &obs))
            .unwrap()
            + "\n";
        assert_eq!(text, re, "{name} drifted through conversion");
    }
}
