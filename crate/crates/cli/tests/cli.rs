use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gkdim"))
}

fn doc(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../documents").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn growth_of_single_diagonal_generator() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ex1.toml", "ring = \"Q[x1]\"\nsize = 1\ngenerators = [[[\"x1\"]]]\n");
    assert_eq!(ok(&["growth", &f, "--max-n", "4"]), "n,dim\n0,1\n1,2\n2,3\n3,4\n4,5\n");
}

#[test]
fn growth_of_full_matrix_algebra_stabilizes() {
    let out = ok(&["growth", doc("mat2.toml").to_str().unwrap(), "--max-n", "3"]);
    assert!(out.ends_with("3,4\n"), "{out}");
    let json = ok(&["growth", doc("mat2.toml").to_str().unwrap(), "--max-n", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["dims"], serde_json::json!([1, 3, 4, 4]));
    assert_eq!(v["stabilized_at"], 3);
}

#[test]
fn malformed_entry_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.toml", "ring = \"Q[x]\"\nsize = 1\ngenerators = [[[\"x^-1\"]]]\n");
    let o = run(&["growth", &f]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("position"), "{err}");
    assert_eq!(run(&["growth", "/nonexistent/doc.toml"]).status.code(), Some(2));
}

#[test]
fn gkdim_of_polynomial_ring_and_short_tables() {
    let f = doc("polynomial_x1_x2.toml");
    let out = ok(&["gkdim", f.to_str().unwrap()]);
    assert!(out.contains("difference-degree,2,"), "{out}");
    let o = run(&["gkdim", f.to_str().unwrap(), "--max-n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("insufficient data"));
}

#[test]
fn compare_reports() {
    let qx = doc("polynomial_x.toml");
    let qx = qx.to_str().unwrap();
    let same = ok(&["compare", qx, qx]);
    assert_eq!(same, "direction,window,k_min\nQx#1<=Qx#2,1:12,1\nQx#2<=Qx#1,1:12,1\n");
    let laurent = ok(&["compare", qx, doc("laurent.toml").to_str().unwrap()]);
    assert!(laurent.contains("Qx<=Qx-laurent,1:12,1\n") && laurent.contains("Qx-laurent<=Qx,1:12,2\n"), "{laurent}");

    let json = ok(&["compare", qx, doc("polynomial_x1_x2.toml").to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["verdict"]["not_dominated_on_window"], "Qx1x2<=Qx");
    assert_eq!(v["degree_s"], 1);
    assert_eq!(v["degree_t"], 2);
}

#[test]
fn exbig_and_charclosure() {
    assert_eq!(ok(&["exbig", "2"]), "index,t_generator\n0,x1 + x2\n1,x1*x2\n");
    let json = ok(&["exbig", "2", "--format", "json", "--max-n", "10"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["method"], "DifferenceDegree");
    assert_eq!(v["value"], "2");
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "a.toml",
        "ring = \"Q[x]\"\nsize = 2\ngenerators = [[[\"x\", \"1\"], [\"0\", \"x^2\"]]]\n",
    );
    assert_eq!(ok(&["charclosure", &f, "--word-len", "1"]), "index,t_generator\n0,x^2 + x\n1,x^3\n");
}

#[test]
fn cayley_checks_vanish() {
    let out = ok(&["cayley", doc("upper_triangular_3.toml").to_str().unwrap()]);
    assert!(out.ends_with("# all checks Zero\n"), "{out}");
    let out = ok(&["cayley", doc("polynomial_x1_x2.toml").to_str().unwrap(), "--format", "json"]);
    assert!(out.contains("\"summary\": \"all checks Zero\""));
}

#[test]
fn pipeline_report() {
    let json = ok(&["pipeline", doc("upper_triangular_x1.toml").to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["integral"], true);
    assert_eq!(v["d_estimate"]["value"], "1");
    let stages: Vec<&str> = v["stages"].as_array().unwrap().iter().map(|s| s["stage"].as_str().unwrap()).collect();
    assert_eq!(stages, ["R", "R1", "R2", "R3", "D"]);
    let csv = ok(&["pipeline", doc("upper_triangular_x0.toml").to_str().unwrap()]);
    assert!(csv.starts_with("stage,n,dim\nR,0,1\n"));

    let o = run(&["pipeline", doc("polynomial_x1_x2.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn error_classes_map_to_exit_codes() {
    let o = run(&["growth", doc("polynomial_x1_x2.toml").to_str().unwrap(), "--cap", "5"]);
    assert_eq!(o.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sqrt2.toml", "ring = \"Q\"\nsize = 2\ngenerators = [[[\"0\", \"2\"], [\"1\", \"0\"]]]\n");
    let o = run(&["pipeline", &f]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["growth", &f, "--window", "3:20"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cache_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let f = doc("upper_triangular_x0.toml");
    let args = ["pipeline", f.to_str().unwrap(), "--format", "json", "--cache-dir", cache.to_str().unwrap()];
    let cold = ok(&args);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    let warm = ok(&args);
    assert_eq!(cold, warm);

    let out = dir.path().join("out.csv");
    let printed = ok(&["growth", f.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(printed.is_empty());
    assert!(std::fs::read_to_string(out).unwrap().starts_with("n,dim\n"));
}

#[test]
fn output_does_not_depend_on_workers_or_generator_order() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "a.toml",
        "label = \"u\"\nring = \"Q(x)\"\nsize = 2\ngenerators = [[[\"x\", \"0\"], [\"0\", \"1\"]], [[\"0\", \"1\"], [\"0\", \"0\"]]]\n",
    );
    let b = write(
        dir.path(),
        "b.toml",
        "label = \"u\"\nring = \"Q(x)\"\nsize = 2\ngenerators = [[[\"0\", \"1\"], [\"0\", \"0\"]], [[\"x\", \"0\"], [\"0\", \"1\"]]]\n",
    );
    for cmd in ["growth", "pipeline"] {
        let one = ok(&[cmd, &a, "--format", "json", "--workers", "1"]);
        let four = ok(&[cmd, &b, "--format", "json", "--workers", "4"]);
        assert_eq!(one, four, "{cmd}");
    }
}
