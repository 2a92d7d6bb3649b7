use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cl33"));
    for a in args {
        match a.strip_prefix('@') {
            Some(name) => cmd.arg(fixture(name)),
            None => cmd.arg(a),
        };
    }
    cmd.output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn values(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect()
}

fn assert_close(got: &[Vec<f64>], want: &[[f64; 4]]) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        for (a, b) in g.iter().zip(w) {
            assert!((a - b).abs() < 1e-12, "{g:?} vs {w:?}");
        }
    }
}

#[test]
fn apply_translates_and_rotates() {
    let out = run(&["apply", "--pipeline", "@ok.pipeline", "--points", "@ok.points"]);
    assert!(out.status.success());
    let want = [
        [1.0, 1.0, 2.0, 3.0],
        [1.0, 1.0, 1.0, 3.0],
        [2.0, 4.0, 4.0, 6.0],
        [0.0, 0.0, 0.0, 1.0],
    ];
    assert_close(&values(&stdout(&out)), &want);
}

#[test]
fn apply_pseudo_sends_eye_to_infinity() {
    let out = run(&["apply", "--pipeline", "@pseudo.pipeline", "--points", "@pseudo.points"]);
    assert_eq!(stdout(&out), "0 0 0 -1\n2 1 1 1\n");
    let out = run(&[
        "apply",
        "--pipeline",
        "@pseudo.pipeline",
        "--points",
        "@pseudo.points",
        "--normalize",
    ]);
    assert_eq!(stdout(&out), "0 0 0 -1\n1 0.5 0.5 0.5\n");
}

#[test]
fn empty_pipeline_copies_points() {
    let out = run(&[
        "apply",
        "--pipeline",
        "@empty.pipeline",
        "--points",
        "@ok.points",
        "--keep-weights",
    ]);
    assert_eq!(stdout(&out), std::fs::read_to_string(fixture("ok.points")).unwrap());
}

#[test]
fn matrix_of_empty_pipeline_is_identity() {
    let out = run(&["matrix", "--pipeline", "@empty.pipeline"]);
    let m = values(&stdout(&out));
    let id = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];
    assert_close(&m, &id);
}

#[test]
fn check_passes_and_injection_fails() {
    let out = run(&["check", "--pipeline", "@ok.pipeline"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
    let out = run(&["check", "--pipeline", "@empty.pipeline"]);
    assert!(out.status.success());
    let out = run(&["check", "--pipeline", "@ok.pipeline", "--inject", "0.01"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stdout(&out).contains("FAIL stage 1: sandwich cond.1"));
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], i32); 8] = [
        (
            &["apply", "--pipeline", "@syntax.pipeline", "--points", "@ok.points"],
            2,
        ),
        (
            &["apply", "--pipeline", "@semantic.pipeline", "--points", "@ok.points"],
            2,
        ),
        (&["apply", "--pipeline", "@ok.pipeline", "--points", "@bad.points"], 2),
        (
            &["apply", "--pipeline", "@missing.pipeline", "--points", "@ok.points"],
            2,
        ),
        (
            &[
                "apply",
                "--pipeline",
                "@ok.pipeline",
                "--points",
                "@ok.points",
                "--normalize",
                "--keep-weights",
            ],
            2,
        ),
        (
            &["apply", "--pipeline", "@degenerate.pipeline", "--points", "@ok.points"],
            3,
        ),
        (&["matrix", "--pipeline", "@degenerate.pipeline"], 3),
        (
            &[
                "apply",
                "--pipeline",
                "@overflow.pipeline",
                "--points",
                "@overflow.points",
            ],
            4,
        ),
    ];
    for (args, code) in cases {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(code),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn parse_errors_name_the_line() {
    let out = run(&["apply", "--pipeline", "@syntax.pipeline", "--points", "@ok.points"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("syntax.pipeline:2:"), "{err}");
}

#[test]
fn selftest_runs_small() {
    let out = run(&["selftest", "--samples", "20"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("10/10 suites passed"));
}
