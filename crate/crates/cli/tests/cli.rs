use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dynmatch(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynmatch"))
        .args(args)
        .current_dir(dir)
        .env_remove("DYNMATCH_SEED")
        .output()
        .expect("binary runs")
}

fn rows(csv: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv.as_bytes()).records().map(|r| r.unwrap()).collect()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gen_run_profile_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&dynmatch(&["gen", "gnm", "--n", "30", "--m", "60", "--seed", "4", "-o", "g.txt"], d));
    let g = fs::read_to_string(d.join("g.txt")).unwrap();
    assert_eq!(g.lines().next(), Some("30"));
    assert_eq!(g.lines().count(), 61);

    let csv = ok(&dynmatch(
        &["run", "--algo", "random,level-walk,level-bfs,oracle", "--input", "g.txt", "--reps", "2", "--audit", "--undo-percent", "10", "-o", "r.csv"],
        d,
    ));
    assert!(csv.is_empty());
    let rows = fs::read_to_string(d.join("r.csv")).unwrap();
    assert!(rows.starts_with("instance,algorithm,rep,seed"));
    assert_eq!(rows.lines().count(), 1 + 4 * 2);

    let tsv = ok(&dynmatch(&["profile", "--results", "r.csv", "--tau-grid", "0.5,0.75,1"], d));
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("tau\t"));
    assert_eq!(lines[0].split('\t').count(), 5);
    let oracle_col = lines[0].split('\t').position(|c| c == "oracle").unwrap();
    for l in &lines[1..] {
        assert_eq!(l.split('\t').nth(oracle_col), Some("1"));
    }
}

#[test]
fn seeds_make_runs_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&dynmatch(&["gen", "churn", "--n", "25", "--ops", "300", "--seed", "8", "-o", "c.txt"], d));
    let weights = |seed: &str| -> Vec<String> {
        let out = Command::new(env!("CARGO_BIN_EXE_dynmatch"))
            .args(["run", "--temporal", "c.txt", "--reps", "3"])
            .current_dir(d)
            .env("DYNMATCH_SEED", seed)
            .output()
            .unwrap();
        rows(&ok(&out)).iter().map(|r| r[5].to_string()).collect()
    };
    assert_eq!(weights("5"), weights("5"));
    assert_eq!(weights("5").len(), 3);
}

#[test]
fn stream_generation_and_sidecar_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("tri.txt"), "3\n0 1 5\n1 2 4\n0 2\n").unwrap();
    ok(&dynmatch(&["gen", "stream", "--input", "tri.txt", "--seed", "1", "--undo-percent", "100", "-o", "s.txt"], d));
    let s = fs::read_to_string(d.join("s.txt")).unwrap();
    assert_eq!(s.lines().filter(|l| l.ends_with('+')).count(), 3);
    assert_eq!(s.lines().filter(|l| l.ends_with('-')).count(), 3);

    fs::write(d.join("opt.txt"), "5\n").unwrap();
    let csv = ok(&dynmatch(&["run", "--input", "tri.txt", "--reps", "1", "--opt-file", "opt.txt", "--instance", "tri"], d));
    let row = &rows(&csv)[0];
    assert_eq!(&row[0], "tri");
    assert_eq!(&row[7], "5");
}

#[test]
fn bad_input_fails_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("bad.txt"), "3\n0 1 5\n1 two\n").unwrap();
    let out = dynmatch(&["run", "--input", "bad.txt"], d);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    fs::write(d.join("del.txt"), "0 1 3 0 +\n").unwrap();
    let out = dynmatch(&["run", "--temporal", "del.txt", "--algo", "level-walk", "--level-epsilon", "0.01"], d);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilon"));

    let out = dynmatch(&["profile", "--results", "missing.csv"], d);
    assert!(!out.status.success());
}
