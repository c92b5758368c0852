//! End-to-end tests of the `eulerian-lab` binary: output text, exit codes,
//! and the cache round trip, exactly as a user would drive them.

use std::path::Path;
use std::process::{Command, Output};

fn binary() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eulerian-lab"));
    // Run from the package root so the default `data` directory resolves the
    // committed reference files.
    cmd.current_dir(env!("CARGO_MANIFEST_DIR"));
    cmd
}

fn run(args: &[&str]) -> Output {
    binary()
        .args(args)
        .output()
        .expect("the binary should spawn")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr should be UTF-8")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("the binary should not be killed by a signal")
}

#[test]
fn triangle_eulerian_n6_prints_the_classical_rows() {
    let output = run(&["triangle", "--kind", "eulerian", "--n", "6"]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(
        stdout_of(&output),
        "1\n1,1\n1,4,1\n1,11,11,1\n1,26,66,26,1\n1,57,302,302,57,1\n"
    );
}

#[test]
fn triangle_for_two_descents_counts_by_exhaustive_enumeration() {
    let output = run(&["triangle", "--kind", "descent", "--r", "2", "--n", "3"]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(stdout_of(&output), "1\n2,0\n4,2,0\n");
}

#[test]
fn triangle_rejects_unknown_kinds_with_exit_2() {
    let output = run(&["triangle", "--kind", "nonsense", "--n", "3"]);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr_of(&output).contains("unknown table kind"));
}

#[test]
fn triangle_rejects_r_on_the_eulerian_kind() {
    let output = run(&["triangle", "--kind", "eulerian", "--r", "2", "--n", "3"]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn triangle_json_output_parses_and_carries_entries() {
    let output = run(&["triangle", "--kind", "eulerian", "--n", "4", "--format", "json"]);
    assert_eq!(exit_code(&output), 0);
    let value: serde_json::Value =
        serde_json::from_str(&stdout_of(&output)).expect("JSON output should parse");
    assert_eq!(value["kind"], "eulerian");
    let entries = value["entries"].as_array().expect("an entries array");
    assert_eq!(entries.len(), 10);
}

#[test]
fn stats_reports_all_four_families() {
    let output = run(&["stats", "--word", "5,1,2,8,3,6,4,7", "--r", "2"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("n = 8, last letter = 7, r = 2"));
    assert!(text.contains("descent: count 3, positions 1,4,6"));
    assert!(text.contains("excedance: count 2, positions 1,4"));
    assert!(text.contains("anti-excedance: count 2, positions 5,7"));
}

#[test]
fn stats_rejects_words_that_are_not_permutations() {
    let output = run(&["stats", "--word", "1,1,2"]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn foata_maps_the_worked_example_forward() {
    let output = run(&["foata", "--word", "51283647"]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(stdout_of(&output), "2,5,6,7,1,4,8,3\n");
}

#[test]
fn foata_inverse_undoes_the_forward_direction() {
    let output = run(&["foata", "--word", "2,5,6,7,1,4,8,3", "--inverse"]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(stdout_of(&output), "5,1,2,8,3,6,4,7\n");
}

#[test]
fn foata_inverse_recovers_the_bracket_erasing_example() {
    // Inverting 6214573 gives 3274516; erasing the brackets of its standard
    // cycle form gives 2457613. The second step is the inverse transform.
    let output = run(&["foata", "--word", "3274516", "--inverse"]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(stdout_of(&output), "2,4,5,7,6,1,3\n");
}

#[test]
fn trees_summarizes_the_leaf_distribution() {
    let output = run(&["trees", "--n", "5"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("trees: 24"));
    assert!(text.contains("T(5, 2) = 8"));
    assert!(text.contains("T(5, 3) = 14"));
    assert!(text.contains("T(5, 4) = 2"));
}

#[test]
fn trees_selects_single_cells_by_ell_and_x() {
    let output = run(&["trees", "--n", "4", "--ell", "2", "--x", "3"]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(stdout_of(&output), "R(4, 2, 3) = 2 (recurrence route)\n");

    let output = run(&["trees", "--n", "5", "--ell", "3"]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(stdout_of(&output), "T(5, 3) = 14 (enumeration route)\n");
}

#[test]
fn trees_rejects_x_without_ell() {
    let output = run(&["trees", "--n", "5", "--x", "2"]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn verify_passing_identity_exits_0() {
    let output = run(&["verify", "--id", "thm4_desc_exc", "--max-n", "5"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("verdict: PASS"));
    assert!(text.contains("thm4_desc_exc"));
}

#[test]
fn verify_refuted_identity_exits_1_with_a_counterexample() {
    let output = run(&["verify", "--id", "t_closed_form", "--max-n", "6"]);
    assert_eq!(exit_code(&output), 1);
    let text = stdout_of(&output);
    assert!(text.contains("verdict: FAIL"));
    assert!(text.contains("counterexample: n=2, m=2: lhs = 4, rhs = 1"));
    assert!(text.contains("re-validated by independent enumeration"));
    // The frequently quoted larger instance is reported alongside.
    assert!(text.contains("(4,2): 16 vs 4"));
}

#[test]
fn verify_unknown_id_exits_2_and_points_at_the_list() {
    let output = run(&["verify", "--id", "nonsense"]);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr_of(&output).contains("verify --list"));
}

#[test]
fn verify_list_names_every_identity() {
    let output = run(&["verify", "--list"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    for id in [
        "worpitzky_classic",
        "worpitzky_generalized",
        "thm4_desc_exc",
        "thm6_rotation",
        "thm7_shift",
        "thm8_recurrence",
        "cor_1_2_exc",
        "thm10_tree_perm",
        "thm10_cor_excedance",
        "thm10_cor_big_exc",
        "thm10_cor_big_desc",
        "t_closed_form",
        "ogf_theorem2",
        "row_sums",
        "footnote_2eulerian",
    ] {
        assert!(text.contains(id), "missing {id} in --list output");
    }
}

#[test]
fn verify_json_reports_are_machine_readable() {
    let output = run(&[
        "verify", "--id", "t_closed_form", "--max-n", "5", "--format", "json",
    ]);
    assert_eq!(exit_code(&output), 1);
    let value: serde_json::Value =
        serde_json::from_str(&stdout_of(&output)).expect("JSON output should parse");
    assert_eq!(value["identity"], "t_closed_form");
    assert_eq!(value["verdict"], "FAIL");
    assert_eq!(value["counterexample"]["n"], 2);
    assert_eq!(value["counterexample"]["lhs"], "4");
    assert_eq!(value["counterexample"]["rhs"], "1");
    assert_eq!(value["counterexample"]["revalidated"], true);
}

#[test]
fn oeis_check_validates_the_committed_triangle_transcription() {
    let output = run(&["oeis-check"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("verdict: PASS"));
    assert!(text.contains("compared: 21 values"));
}

#[test]
fn oeis_check_footnote_records_alignment_findings() {
    let output = run(&["oeis-check", "--target", "footnote"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("verdict: PASS"));
    assert!(text.contains("doubling"));
}

#[test]
fn oeis_check_reports_mismatches_with_exit_1() {
    let dir = tempfile::tempdir().expect("a temporary directory");
    let bfile = dir.path().join("shifted.txt");
    std::fs::write(&bfile, "1 1\n2 1\n3 4\n4 1\n").expect("reference file should write");
    let output = run(&["oeis-check", "--bfile", bfile.to_str().expect("UTF-8 path")]);
    assert_eq!(exit_code(&output), 1);
    let text = stdout_of(&output);
    assert!(text.contains("verdict: FAIL"));
    assert!(text.contains("first mismatch at position 2"));
}

#[test]
fn cache_build_and_show_round_trip_through_the_env_var() {
    let dir = tempfile::tempdir().expect("a temporary directory");
    let cache_path = dir.path().join("nested").join("cache.json");
    let output = binary()
        .args(["cache", "build", "--max-n", "5"])
        .env("EULERIAN_LAB_CACHE", &cache_path)
        .output()
        .expect("the binary should spawn");
    assert_eq!(exit_code(&output), 0);
    assert!(stdout_of(&output).contains("cached 6 tables"));
    assert!(cache_path.is_file());

    let output = binary()
        .args(["cache", "show"])
        .env("EULERIAN_LAB_CACHE", &cache_path)
        .output()
        .expect("the binary should spawn");
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("format version: 1"));
    assert!(text.contains("eulerian n=5"));
}

#[test]
fn cache_show_fails_cleanly_on_a_missing_file() {
    let dir = tempfile::tempdir().expect("a temporary directory");
    let missing = dir.path().join("absent.json");
    let output = run(&[
        "cache",
        "show",
        "--cache-path",
        missing.to_str().expect("UTF-8 path"),
    ]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().expect("a temporary directory");
    let out = dir.path().join("triangle.csv");
    let output = run(&[
        "triangle",
        "--kind",
        "eulerian",
        "--n",
        "6",
        "--out",
        out.to_str().expect("UTF-8 path"),
    ]);
    assert_eq!(exit_code(&output), 0);
    assert!(stdout_of(&output).is_empty());
    let written = std::fs::read_to_string(&out).expect("the output file should exist");
    assert!(written.ends_with("1,57,302,302,57,1\n"));
    // Byte-identical to the committed golden file.
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/eulerian_triangle_n6.csv");
    assert_eq!(written, std::fs::read_to_string(golden).expect("golden file"));
}

#[test]
fn config_file_supplies_defaults_that_flags_override() {
    let dir = tempfile::tempdir().expect("a temporary directory");
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{ "max_n": 4, "jobs": 1 }"#).expect("config should write");

    // The config bounds the sweep at n <= 4: cells checked shrinks accordingly.
    let bounded = run(&[
        "verify",
        "--id",
        "row_sums",
        "--config",
        config.to_str().expect("UTF-8 path"),
    ]);
    assert_eq!(exit_code(&bounded), 0);
    let bounded_text = stdout_of(&bounded);
    assert!(bounded_text.contains("ranges: n <= 4"));

    // A flag overrides the same setting.
    let overridden = run(&[
        "verify",
        "--id",
        "row_sums",
        "--config",
        config.to_str().expect("UTF-8 path"),
        "--max-n",
        "6",
    ]);
    assert_eq!(exit_code(&overridden), 0);
    assert!(stdout_of(&overridden).contains("ranges: n <= 6"));
}

#[test]
fn jobs_flag_limits_the_worker_pool() {
    let output = run(&["triangle", "--kind", "descent", "--n", "6", "--jobs", "1"]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(
        stdout_of(&output),
        "1\n1,1\n1,4,1\n1,11,11,1\n1,26,66,26,1\n1,57,302,302,57,1\n"
    );
}
