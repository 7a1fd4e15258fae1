use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn skilldepth(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skilldepth"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data_rows(path: &Path) -> usize {
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("# config: {"), "missing metadata line");
    text.lines().count() - 2
}

#[test]
fn play_prints_value_and_scores() {
    let dir = tempfile::tempdir().unwrap();
    let o = skilldepth(
        &[
            "play",
            "--p1",
            "olmcts:350",
            "--p2",
            "ras",
            "--seed",
            "1",
            "--trace",
            "t.jsonl",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("scores") && out.contains("value"), "{out}");
    let trace = fs::read_to_string(dir.path().join("t.jsonl")).unwrap();
    let lines: Vec<&str> = trace.lines().collect();
    assert_eq!(lines.len(), 501);
    let meta: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(meta["meta"]["seed"], 1);
    let last: serde_json::Value = serde_json::from_str(lines[500]).unwrap();
    assert_eq!(last["tick"], 500);
}

#[test]
fn sweep_writes_one_row_per_point_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str, jobs: &'static str| {
        vec![
            "sweep", "--p1", "random", "--sample", "200", "--trials", "11", "--seed", "3",
            "--jobs", jobs, "--out", out,
        ]
    };
    for (out, jobs) in [("a.csv", "1"), ("b.csv", "1"), ("c.csv", "3")] {
        let o = skilldepth(&args(out, jobs), dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(data_rows(&dir.path().join("a.csv")), 200);
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(a, fs::read(dir.path().join("c.csv")).unwrap());

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(dir.path().join("a.csv"))
        .unwrap();
    let indices: Vec<u64> = reader
        .records()
        .map(|r| r.unwrap()[1].parse().unwrap())
        .collect();
    assert!(indices.windows(2).all(|w| w[0] < w[1]));

    let o = skilldepth(
        &["marginals", "a.csv", "--dim", "c", "--out", "m.csv"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("between-group variance"));
    assert_eq!(data_rows(&dir.path().join("m.csv")), 8);
}

#[test]
fn optimize_writes_log_curves_and_trials() {
    let dir = tempfile::tempdir().unwrap();
    let o = skilldepth(
        &[
            "optimize",
            "--algo",
            "mabrmhc",
            "--r",
            "5",
            "--budget",
            "5000",
            "--p1",
            "random",
            "--trials",
            "2",
            "--audit",
            "3",
            "--final-audit-only",
            "--out",
            "run",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let run = dir.path().join("run");
    assert_eq!(data_rows(&run.join("curves.csv")), 500);
    assert_eq!(data_rows(&run.join("trials.csv")), 2);
    let log = fs::read_to_string(run.join("run.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 1 + 2 * 500);
    let first: serde_json::Value = serde_json::from_str(log.lines().nth(1).unwrap()).unwrap();
    assert!(first["bandit"]["dim"].is_u64());

    let o = skilldepth(
        &[
            "validate",
            "--p1",
            "random",
            "--input",
            "run/trials.csv",
            "--games",
            "4",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("% over 2 genomes x 4 games"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("exp.cfg"),
        "# small sweep\np1 = random\nsample = 5\nsweep_trials = 2\nout = from_file.csv\n",
    )
    .unwrap();
    let o = skilldepth(&["sweep", "--config", "exp.cfg"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(data_rows(&dir.path().join("from_file.csv")), 5);
    let o = skilldepth(
        &[
            "sweep", "--config", "exp.cfg", "--set", "sample=7", "--out", "flag.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(data_rows(&dir.path().join("flag.csv")), 7);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["frobnicate"][..], &["play", "--bogus"], &[]] {
        let o = skilldepth(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains("Usage"), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_1_with_kind() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 4] = [
        (&["play", "--genome", "9-9-9-9-9"], "error: genome:"),
        (&["validate"], "error: empty-input:"),
        (&["play", "--p1", "minimax"], "error: agent:"),
        (&["sweep", "--config", "missing.cfg"], "error: io:"),
    ];
    for (args, prefix) in cases {
        let o = skilldepth(args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(stderr(&o).starts_with(prefix), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn bench_reports_throughput() {
    let dir = tempfile::tempdir().unwrap();
    let o = skilldepth(&["bench", "--games", "20"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("10000 ticks"));
}
