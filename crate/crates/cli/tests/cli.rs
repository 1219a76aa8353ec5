use std::path::PathBuf;
use std::process::{Command, Output};

fn smforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smforge")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Writes the M1 spec for `{a}`, `n = 2` and returns its path.
fn m1_file(dir: &std::path::Path) -> String {
    let o = smforge(&["build", "--machine", "m1", "--alphabet", "a", "--n", "2"]);
    assert!(o.status.success());
    let path = dir.join("m1.txt");
    std::fs::write(&path, &o.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn accept_exit_codes() {
    let dir = scratch("accept");
    let m = m1_file(&dir);
    let o = smforge(&["accept", "--machine", &m, "--input", "aa", "--bound", "7"]);
    assert_eq!(o.status.code(), Some(0));
    // initial word plus seven steps
    assert_eq!(stdout(&o).lines().count(), 8);
    let o = smforge(&["accept", "--machine", &m, "--input", "aaa", "--complete-m1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = smforge(&["accept", "--machine", &m, "--input", "aaa", "--bound", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = smforge(&["accept", "--machine", &m, "--input", "aaa", "--bound", "5", "--complete-m1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn build_from_a_params_file() {
    let dir = scratch("params");
    let p = dir.join("tower.toml");
    std::fs::write(&p, "alphabet = [\"a\"]\nn = 2\nk = 2\nL = 3\n").unwrap();
    let o = smforge(&["build", "--machine", "m", "--params", p.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("machine "));
    std::fs::write(&p, "alphabet = [\"a\"]\nbogus = 1\n").unwrap();
    let o = smforge(&["build", "--machine", "m", "--params", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_present_and_diagram() {
    let dir = scratch("pipeline");
    let m = m1_file(&dir);
    let o = smforge(&["run", "--machine", &m, "--input", "a", "--history", "tau1(a)"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = smforge(&["run", "--machine", &m, "--input", "a", "--history", "tau4(a)"]);
    assert_eq!(o.status.code(), Some(1));
    let trace = dir.join("w.trace");
    std::fs::write(&trace, smforge(&["accept", "--machine", &m, "--input", "aa", "--bound", "7"]).stdout).unwrap();
    let t = trace.to_str().unwrap();
    let o = smforge(&["run", "--machine", &m, "--trace", t]);
    assert_eq!(std::fs::read_to_string(&trace).unwrap(), stdout(&o));

    let a = smforge(&["present", "--machine", &m, "--group", "disk", "--trace", t]);
    let b = smforge(&["present", "--machine", &m, "--group", "disk", "--trace", t]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("relators 54"));
    let o = smforge(&["present", "--machine", &m, "--group", "m", "--format", "flat"]);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("relator ")).count(), 52);

    let o = smforge(&["diagram", "--kind", "trapezium", "--machine", &m, "--in", t, "--metrics"]);
    assert!(stdout(&o).contains("# area 49"));
    assert!(stdout(&o).contains("# structure ok"));
    let dot = dir.join("d.dot");
    let o = smforge(&["diagram", "--kind", "disk", "--machine", &m, "--in", t, "--export", "dot", "--out", dot.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("graph "));
    let o = smforge(&["diagram", "--kind", "un", "--in", "a", "--alphabet", "a", "--n", "2", "--k", "2", "--l", "3"]);
    assert_eq!(stdout(&o).trim(), "area 2793");
}

#[test]
fn bench_area_writes_table_and_plot() {
    let dir = scratch("bench");
    let d = dir.to_str().unwrap();
    let one = smforge(&["bench-area", "--alphabet", "a", "--n", "2", "--k", "2", "--l", "3", "--lengths", "1", "--out-dir", d]);
    assert_eq!(one.status.code(), Some(0));
    let o = smforge(&["bench-area", "--alphabet", "a", "--n", "2", "--k", "2", "--l", "3", "--out-dir", d]);
    let table = std::fs::read_to_string(dir.join("area.tsv")).unwrap();
    assert_eq!(table.lines().count(), 5);
    assert!(std::fs::read_to_string(dir.join("area.svg")).unwrap().starts_with("<svg"));
    // the measured ratios fall by more than 2x, so the property is reported failed
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_lemmas() {
    let o = smforge(&["verify-lemmas", "m1", "--n", "2", "--alphabet", "ab"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2n|u|+2n-1 = 11, got 11"));
    let o = smforge(&["verify-lemmas", "metrics", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let o = smforge(&["verify-lemmas", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}
