//! End-to-end tests against the built binary: exit codes, config
//! precedence, artifact round trips, and the determinism guarantee.

use std::path::Path;
use std::process::{Command, Output};

fn cheb(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cheb"))
        .args(args)
        .args(["--out", dir.to_str().unwrap()])
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&cheb(&["--help"], d)), 0);
    assert_eq!(code(&cheb(&["no-such-command"], d)), 1);
    assert_eq!(code(&cheb(&["orbits", "--numax", "three"], d)), 1);
    // No family given anywhere.
    let out = cheb(&["orbits"], d);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("family"), "{}", stderr(&out));
}

#[test]
fn orbits_cat_writes_roundtrippable_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let out = cheb(&["orbits", "--family", "cat", "--numax", "5"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("fixed_point_counts=1,5,16,45,121"), "{text}");
    let data = std::fs::read_to_string(dir.path().join("orbits-cat.jsonl")).unwrap();
    let records = cheblab::orbitgen::records_from_json_lines(&data).unwrap();
    // (1-1)/1 + (5-1)/2 + (16-1)/3 + (45-5)/4 + (121-1)/5 primitive orbits.
    assert_eq!(records.len(), 41);
}

#[test]
fn density_tolerance_failure_still_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = cheb(
        &["density", "--family", "modular", "--maxlen", "10", "--tolerance", "0.0001"],
        dir.path(),
    );
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("TOLERANCE_FAIL"), "{}", stderr(&out));
    // Report-first: the artifacts exist despite the nonzero exit.
    let csv = std::fs::read_to_string(dir.path().join("density-modular-mod2.csv")).unwrap();
    assert!(csv.starts_with("representative,class_size,count,natural_freq"), "{csv}");
    // Same run without the gate succeeds.
    let ok = cheb(&["density", "--family", "modular", "--maxlen", "10"], dir.path());
    assert_eq!(code(&ok), 0);
}

#[test]
fn invariant_violations_exit_two_with_machine_readable_stderr() {
    let dir = tempfile::tempdir().unwrap();
    // Shear matrix: trace 2, not Anosov.
    let out = cheb(
        &["orbits", "--family", "cat", "--matrix", "1,1,0,1"],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    let err_line = stderr(&out);
    let json_line = err_line.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(json_line).expect("stderr ends in JSON");
    assert_eq!(v["kind"], "NotAnosov", "{err_line}");

    // Non-commuting peripheral images: two different transpositions.
    let out = cheb(&["split", "--group", "S3", "--mu", "1", "--lambda", "2"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("NoncommutingPeripheral"), "{}", stderr(&out));
}

#[test]
fn config_file_fills_in_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(&config, "family = modular\nmaxlen = 8\nmodulus = 2\n").unwrap();
    let from_file = cheb(
        &["density", "--config", config.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(code(&from_file), 0, "{}", stderr(&from_file));
    let baseline = stdout(&from_file);

    let overridden = cheb(
        &["density", "--config", config.to_str().unwrap(), "--maxlen", "10"],
        dir.path(),
    );
    let over = stdout(&overridden);
    assert_ne!(baseline, over, "flag must override the config value");
    // maxlen 8: Lyndon words of length 2..=8 with both letters = 69.
    assert!(baseline.contains("knots=69"), "{baseline}");

    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "familly = modular\n").unwrap();
    let out = cheb(&["density", "--config", bad.to_str().unwrap()], dir.path());
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown key"), "{}", stderr(&out));
}

#[test]
fn fixed_seed_reports_are_byte_identical() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let args = ["lgp", "--n", "15", "--p", "3", "--trials", "20", "--seed", "99"];
    let a = cheb(&args, dir_a.path());
    let b = cheb(&args, dir_b.path());
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(stdout(&a).lines().next(), stdout(&b).lines().next());
    let file_a = std::fs::read(dir_a.path().join("lgp-synthetic.json")).unwrap();
    let file_b = std::fs::read(dir_b.path().join("lgp-synthetic.json")).unwrap();
    assert_eq!(file_a, file_b, "same seed, same bytes");

    // A different seed must actually change the data.
    let c = cheb(&["lgp", "--n", "15", "--p", "3", "--trials", "20", "--seed", "100"], dir_b.path());
    assert_eq!(code(&c), 0);
    let file_c = std::fs::read(dir_b.path().join("lgp-synthetic.json")).unwrap();
    assert_ne!(file_a, file_c);
}

#[test]
fn lgp_unlink_control_never_surjects() {
    let dir = tempfile::tempdir().unwrap();
    let out = cheb(
        &["lgp", "--n", "10", "--trials", "15", "--unlink"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("surjective=0/15"), "{}", stdout(&out));
    assert!(dir.path().join("lgp-unlink.json").exists());
}

#[test]
fn sweep_reports_zero_counterexamples() {
    let dir = tempfile::tempdir().unwrap();
    let out = cheb(&["sweep", "--order-bound", "12"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("counterexamples=0"), "{}", stdout(&out));
    let csv = std::fs::read_to_string(dir.path().join("sweep-12.csv")).unwrap();
    assert!(csv.starts_with("group,first,second,first_size,second_size,distinguished"));
}

#[test]
fn split_emits_decomposition_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = cheb(
        &["split", "--group", "Z6", "--mu", "3", "--lambda", "2"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let body: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("split-Z6.json")).unwrap())
            .unwrap();
    assert_eq!(body["splitting"]["e"], 2);
    assert_eq!(body["splitting"]["f"], 3);
    assert_eq!(body["splitting"]["g"], 1);
}

#[test]
fn verify_defaults_report_the_known_failures_and_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    // Small cutoffs keep this fast; the verdict pattern is the same as the
    // full run: the two census-frequency criteria miss at default tolerance.
    let out = cheb(
        &["verify", "--numax", "8", "--maxlen", "12", "--trials", "25"],
        dir.path(),
    );
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("criterion  1 PASS"), "{text}");
    assert!(text.contains("criterion  2 FAIL"), "{text}");
    assert!(text.contains("criterion  4 FAIL"), "{text}");
    assert!(text.contains("criterion 11 PASS"), "{text}");
    assert!(stderr(&out).contains("TOLERANCE_FAIL"), "{}", stderr(&out));
}

#[test]
fn verify_with_loose_tolerance_passes_everything() {
    let dir = tempfile::tempdir().unwrap();
    let out = cheb(
        &["verify", "--numax", "8", "--maxlen", "10", "--tolerance", "0.5", "--trials", "25"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}\n{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("all 12 criteria passed"), "{}", stdout(&out));
}

#[test]
fn verify_on_an_empty_dataset_is_an_invariant_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = cheb(&["verify", "--maxlen", "1", "--numax", "4"], dir.path());
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stderr(&out).contains("EmptyStream"), "{}", stderr(&out));
}
