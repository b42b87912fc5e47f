use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const SEVEN_CANDIDATES: &str = r#"{"n":7,"k":4,"j":3,"ballots":[
  {"list":[1,2,3],"count":7},
  {"list":[4,5,6],"count":2},{"list":[4,5,7],"count":2},
  {"list":[4,6,7],"count":2},{"list":[5,6,7],"count":2}]}"#;

fn agreeable(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agreeable"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn structured(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let out = agreeable(&all);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn tally_seven_candidates() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "seven.json", SEVEN_CANDIDATES);
    let out = agreeable(&["tally", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("best approval: 8/15"), "{text}");
    assert!(text.contains("winners (1): {4,5,6,7}"), "{text}");
    assert!(text.contains("floor (any distribution): 4/35"), "{text}");

    let v = structured(&["tally", "--input", &input]);
    assert_eq!(v["result"]["best_value"], "8/15");
    assert_eq!(v["result"]["winners"], serde_json::json!([[4, 5, 6, 7]]));
}

#[test]
fn decimal_is_an_annotation() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "seven.json", SEVEN_CANDIDATES);
    let text = stdout(&agreeable(&["tally", "--input", &input, "--decimal"]));
    assert!(text.contains("best approval: 8/15 (~0.533333)"), "{text}");
}

#[test]
fn generated_ball_tallies_to_four_nineteenths() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("ball.json");
    let file = file.to_str().unwrap();
    let gen = agreeable(&[
        "generate",
        "--mode",
        "uniform-ball",
        "--params",
        "6,4,3",
        "--radius",
        "2",
        "--output",
        file,
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let v = structured(&[
        "tally",
        "--input",
        file,
        "--center",
        "1,2,3",
        "--radius",
        "2",
        "--check-bounds",
    ]);
    assert_eq!(v["result"]["best_value"], "4/19");
    assert_eq!(v["ball_floor"]["source"], "minimax");
    assert_eq!(v["ball_floor"]["value"], "1/5");
    assert_eq!(v["bounds_ok"], true);
}

#[test]
fn completion_fills_short_lists() {
    let dir = tempfile::tempdir().unwrap();
    let short =
        r#"{"n":6,"k":4,"j":3,"ballots":[{"list":[1],"count":1},{"list":[1,2,4],"count":1}]}"#;
    let input = write(dir.path(), "short.json", short);

    let refused = agreeable(&["tally", "--input", &input]);
    assert_eq!(refused.status.code(), Some(2));

    let v = structured(&[
        "tally",
        "--input",
        &input,
        "--complete",
        "--center",
        "1,2,3",
        "--radius",
        "1",
    ]);
    // {1} completes to {1,2,3}; both lists fit in one committee
    assert_eq!(v["result"]["best_value"], "1");
    assert_eq!(v["result"]["winners"], serde_json::json!([[1, 2, 3, 4]]));

    let tight = agreeable(&[
        "tally",
        "--input",
        &input,
        "--complete",
        "--center",
        "1,2,3",
        "--radius",
        "0",
    ]);
    assert_eq!(tight.status.code(), Some(4));
}

#[test]
fn bounds_inside_and_outside_the_hypothesis() {
    let v = structured(&["bounds", "--params", "6,4,3"]);
    assert_eq!(v["floor"], "1/5");

    let v = structured(&["bounds", "--params", "6,4,3", "--radius", "1"]);
    assert_eq!(v["ball_floor"], "1/3");

    let v = structured(&[
        "bounds", "--params", "6,4,3", "--radius", "1", "--alpha", "1/2",
    ]);
    assert_eq!(v["alpha_floor"], "1/6");

    let out = agreeable(&["bounds", "--params", "6,4,3", "--radius", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("hypothesis not satisfied"), "{text}");
    assert!(
        text.contains("concentric minimax (radius 2): 1/5"),
        "{text}"
    );
}

#[test]
fn worst_case_reports_weights() {
    let v = structured(&["worst-case", "--params", "6,4,3", "--radius", "1"]);
    assert_eq!(v["worst_case"]["value"], "1/3");
    assert_eq!(v["closed_form"], "1/3");
    let weights = v["worst_case"]["weights"].as_array().unwrap();
    assert_eq!(weights.len(), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "seven.json", SEVEN_CANDIDATES);
    let missing = dir.path().join("missing.json");
    let broken = write(dir.path(), "broken.json", "{\"n\":7,");

    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["tally", "--input", missing.to_str().unwrap()], 2),
        (vec!["tally", "--input", &broken], 2),
        (vec!["bounds", "--params", "6,6,3"], 3),
        (vec!["bounds", "--params", "6,4"], 3),
        (vec!["bounds", "--params", "6,4,3", "--radius", "4"], 3),
        (vec!["tally", "--input", &input, "--threshold", "4"], 3),
        (vec!["tally", "--input", &input, "--params", "7,4,2"], 3),
        (vec!["tally", "--input", &input, "--center", "1,2,3"], 3),
        (
            vec![
                "generate",
                "--mode",
                "random-ball",
                "--params",
                "6,4,3",
                "--radius",
                "1",
            ],
            3,
        ),
        (
            vec![
                "tally", "--input", &input, "--center", "1,2,3", "--radius", "1",
            ],
            4,
        ),
    ];
    for (args, code) in cases {
        let out = agreeable(&args);
        assert_eq!(
            out.status.code(),
            Some(code),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty(), "{args:?} should explain itself");
    }
}

#[test]
fn threshold_tally() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "seven.json", SEVEN_CANDIDATES);
    let v = structured(&["tally", "--input", &input, "--threshold", "0"]);
    assert_eq!(v["result"]["best_value"], "1");
    let v = structured(&["tally", "--input", &input, "--threshold", "2"]);
    let best = v["result"]["best_value"].as_str().unwrap();
    assert_ne!(best, "8/15");
}

#[test]
fn check_bounds_passes_on_small_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "seven.json", SEVEN_CANDIDATES);
    let out = agreeable(&["tally", "--input", &input, "--check-bounds"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("bound check: ok"));
}

#[test]
fn random_generation_is_seeded() {
    let args = [
        "generate",
        "--mode",
        "random-ball",
        "--params",
        "8,5,3",
        "--radius",
        "1",
        "--seed",
        "11",
        "--voters",
        "40",
    ];
    let a = stdout(&agreeable(&args));
    let b = stdout(&agreeable(&args));
    assert_eq!(a, b);
    let mut other = args.to_vec();
    other[8] = "12";
    assert_ne!(a, stdout(&agreeable(&other)));

    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "rb.json", &a);
    let v = structured(&[
        "tally",
        "--input",
        &input,
        "--center",
        "1,2,3",
        "--radius",
        "1",
        "--check-bounds",
    ]);
    assert_eq!(v["bounds_ok"], true);
}

#[test]
fn generated_families_are_valid_ballot_files() {
    let dir = tempfile::tempdir().unwrap();
    let modes: [&[&str]; 4] = [
        &["--mode", "uniform-all"],
        &["--mode", "uniform-ring", "--radius", "1"],
        &["--mode", "concentric", "--weights", "1/2,1/4,1/4"],
        &[
            "--mode",
            "uniform-ball",
            "--radius",
            "1",
            "--center",
            "2,4,6",
        ],
    ];
    for (i, extra) in modes.iter().enumerate() {
        let mut args = vec!["generate", "--params", "7,4,3"];
        args.extend_from_slice(extra);
        let out = agreeable(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let input = write(dir.path(), &format!("g{i}.json"), &stdout(&out));
        let tally = agreeable(&["tally", "--input", &input, "--check-bounds"]);
        assert_eq!(tally.status.code(), Some(0), "{args:?}");
    }
    let v = structured(&[
        "tally",
        "--input",
        &dir.path().join("g0.json").to_string_lossy(),
    ]);
    // uniform over all lists: every committee sits at the average
    assert_eq!(v["result"]["best_value"], "4/35");
    assert_eq!(v["result"]["winners"].as_array().unwrap().len(), 35);
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = [
        "verify",
        "--max-n",
        "7",
        "--samples",
        "12",
        "--seed",
        "5",
        "--format",
        "structured",
    ];
    let a = agreeable(&args);
    assert_eq!(a.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 5);
    assert_eq!(a.stdout, agreeable(&args).stdout);

    let full = stdout(&agreeable(&["verify", "--max-n", "5", "--samples", "3"]));
    assert!(full.contains("[pass]"));
}

#[test]
fn corrupted_coefficient_fails_verification() {
    let out = agreeable(&[
        "verify",
        "--max-n",
        "6",
        "--samples",
        "3",
        "--summary",
        "--corrupt-b",
        "1,0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("[FAIL]"), "{text}");
    assert!(text.contains("verification: FAILED"));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.txt");
    let out = agreeable(&[
        "bounds",
        "--params",
        "7,4,3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("4/35"));
}

#[test]
fn oracle_matches_tally() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "seven.json", SEVEN_CANDIDATES);
    let v = structured(&["oracle", "--input", &input]);
    assert_eq!(v["result"]["best_value"], "8/15");
    let g = structured(&[
        "oracle", "--grid", "12", "--params", "6,4,3", "--radius", "1",
    ]);
    assert_eq!(g["value"], "1/3");
}

#[test]
fn structured_bounds_golden() {
    let out = agreeable(&[
        "bounds",
        "--params",
        "6,4,3",
        "--radius",
        "1",
        "--alpha",
        "1/2",
        "--format",
        "structured",
    ]);
    let expected = r#"{
  "alpha_floor": "1/6",
  "ball_floor": "1/3",
  "floor": "1/5",
  "params": {
    "j": 3,
    "k": 4,
    "n": 6
  },
  "radius_limit": "6/5"
}
"#;
    assert_eq!(stdout(&out), expected);
}

#[test]
fn seeded_generator_output_meets_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("6,4,3", "1,2,3", "1"),
        ("8,5,3", "2,4,6", "1"),
        ("9,6,3", "1,5,9", "2"),
        ("8,6,4", "1,2,3,4", "1"),
    ];
    for seed in 0..5 {
        for (params, center, radius) in cases {
            let seed = seed.to_string();
            let gen = agreeable(&[
                "generate",
                "--mode",
                "random-ball",
                "--params",
                params,
                "--center",
                center,
                "--radius",
                radius,
                "--seed",
                &seed,
                "--voters",
                "60",
            ]);
            assert_eq!(gen.status.code(), Some(0));
            let input = write(dir.path(), "rb.json", &stdout(&gen));
            let out = agreeable(&[
                "tally",
                "--input",
                &input,
                "--center",
                center,
                "--radius",
                radius,
                "--check-bounds",
            ]);
            assert_eq!(
                out.status.code(),
                Some(0),
                "{params} {center} {radius} seed {seed}: {}",
                stdout(&out)
            );
        }
    }
}
