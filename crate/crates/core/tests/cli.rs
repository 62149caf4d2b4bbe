use std::path::Path;
use std::process::{Command, Output};

fn hdt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdt")).args(args).output().expect("run hdt")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn ov_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let ov = dir.path().join("ov.txt");
    let inst = dir.path().join("inst.txt");
    let prov = dir.path().join("prov.json");

    let g = hdt(&["gen", "ov", "--m", "3", "--n", "3", "--d", "4", "--planted", "--seed", "11", "--out", p(&ov)]);
    assert!(g.status.success());

    let o = hdt(&["oracle", "ov", "--in", p(&ov)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("positive"));

    let r = hdt(&[
        "reduce", "ov", "--ov", p(&ov), "--norm", "l1", "--out", p(&inst), "--provenance-out", p(&prov), "--expected",
        "pos",
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = std::fs::read_to_string(&inst).unwrap();
    assert!(text.contains("# expected: pos"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&prov).unwrap()).unwrap();
    assert!(json.is_object());

    let d = hdt(&["decide", "--in", p(&inst), "--direction", "ba"]);
    assert_eq!(d.status.code(), Some(0));
    assert!(stdout(&d).starts_with("feasible"));
}

#[test]
fn infeasible_exit_code_and_delta_override() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt");
    std::fs::write(&inst, "# hdt-instance v1\nnorm=L2\ndelta=1/2\nset A\n0 0\n1 0\nset B\n0 0\n3 0\n").unwrap();
    assert_eq!(hdt(&["decide", "--in", p(&inst)]).status.code(), Some(1));
    assert_eq!(hdt(&["decide", "--in", p(&inst), "--delta", "1"]).status.code(), Some(0));
    let v = hdt(&["value", "--in", p(&inst), "--tol", "1/64"]);
    assert!(stdout(&v).starts_with("63/64 1"), "{}", stdout(&v));
}

#[test]
fn errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "not an instance").unwrap();
    assert_eq!(hdt(&["decide", "--in", p(&bad)]).status.code(), Some(2));
    assert_eq!(hdt(&["decide", "--in", p(&dir.path().join("missing"))]).status.code(), Some(2));
}

#[test]
fn forced_ov_answer_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let ov = dir.path().join("ov.txt");
    std::fs::write(&ov, "10\n00\n\n11\n").unwrap();
    let r = hdt(&["reduce", "ov", "--ov", p(&ov)]);
    assert!(r.status.success());
    assert_eq!(stdout(&r).trim(), "preprocessed: positive");
}

#[test]
fn conv3sum_verify_and_bench_csv() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq.txt");
    std::fs::write(&seq, "1 2 1\n").unwrap();
    let o = hdt(&["oracle", "conv3sum", "--in", p(&seq)]);
    assert_eq!(o.status.code(), Some(1));
    let v = hdt(&["verify", "conv3sum", "--in", p(&seq), "--failures-dir", p(dir.path())]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    let report: serde_json::Value = serde_json::from_str(&stdout(&v)).unwrap();
    assert_eq!(report["agreement"], serde_json::Value::Bool(true));

    let csv = dir.path().join("b.csv");
    let b = hdt(&["bench", "--grid", "2x2,3x3", "--reps", "1", "--out", p(&csv)]);
    assert!(b.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("n,m,d,norm,wall_ns,candidates"));
    assert_eq!(text.lines().count(), 3);
}
