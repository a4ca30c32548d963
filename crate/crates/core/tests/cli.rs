use std::process::{Command, Output};

fn pcl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn trial_prints_the_learned_clause() {
    let o = pcl(&["trial", "--n", "2", "--target", "x1 AND NOT x2", "--epochs", "500"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "target:  x1 AND NOT x2\nlearned: x1 AND NOT x2\nsuccess: true\n");
}

#[test]
fn trial_writes_a_loadable_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    let o = pcl(&["trial", "--n", "3", "--epochs", "50", "--snapshot", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    match pcl::snapshot::load(&path).unwrap() {
        pcl::snapshot::Snapshot::Pcl(m) => {
            assert_eq!(m.n(), 3);
            let learned = stdout(&o).lines().nth(1).unwrap().trim_start_matches("learned: ").to_string();
            assert_eq!(m.clauses()[0].mask().to_string(), learned);
        }
        other => panic!("{other:?}")
    }
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let args = ["sweep", "--n", "2,3", "--p", "0.75", "--epochs", "20", "--trials", "5", "--seed", "9"];
    let o = pcl(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let r = pcl::experiment::parse_csv(&text).unwrap();
    assert_eq!(r.rows.len(), 2);
    assert!(r.rows.iter().all(|row| row.trials == 5 && row.seed == 9 && row.epochs == 20));

    let again = pcl(&args);
    assert_eq!(stdout(&again), text);
}

#[test]
fn verify_theory_passes() {
    let o = pcl(&["verify-theory", "--max-n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().count() >= 6);
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
}

#[test]
fn bad_arguments_exit_with_two() {
    for args in [
        &["sweep"][..],
        &["sweep", "--n", "3", "--p", "1.5"],
        &["sweep", "--preset", "figure9"],
        &["sweep", "--n", "21", "--p", "0.5"],
        &["trial", "--n", "2", "--target", "x3"],
        &["trial", "--p", "abc"],
        &["verify-theory", "--max-n", "0"],
        &["frobnicate"]
    ] {
        assert_eq!(pcl(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn io_failures_exit_with_one() {
    let o = pcl(&["sweep", "--n", "2", "--p", "0.5", "--epochs", "1", "--trials", "1", "--out", "/nonexistent/dir/r.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/dir/r.csv"));
}
