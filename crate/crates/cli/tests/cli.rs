use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lrc-lab"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn result<'a>(v: &'a serde_json::Value, name: &str) -> &'a serde_json::Value {
    v["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["name"] == name)
        .unwrap_or_else(|| panic!("no result {name}"))
}

#[test]
fn bounds_examples() {
    let v = json(&run(&["bounds", "--name", "d2", "--n", "6", "--k", "3", "--r", "2", "--t", "2"]));
    assert_eq!(result(&v, "d_max")["value"], "3");
    assert_eq!(result(&v, "d_max")["kind"], "exact");
    let v = json(&run(&["bounds", "--name", "rate_t", "--r", "2", "--t", "2"]));
    assert_eq!(result(&v, "rate_max")["value"], "8/15");
    let v = json(&run(&["bounds", "--name", "gv_asym", "--q", "2", "--r", "3", "--delta", "0.5"]));
    assert_eq!(result(&v, "value")["value"], 0.0);
    assert_eq!(result(&v, "value")["kind"], "float");
}

#[test]
fn usage_and_domain_exit_codes() {
    let out = run(&["bounds", "--name", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gv_asym"));
    assert_eq!(run(&["bounds", "--name", "d2", "--n", "6"]).status.code(), Some(2));
    assert_eq!(run(&["curve", "--r", "3", "--bounds", "gv", "--step", "0"]).status.code(), Some(2));
    assert_eq!(run(&["curve", "--r", "3", "--bounds", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["bounds", "--name", "singleton", "--n", "4", "--k", "5", "--r", "2"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["sample", "--kind", "single", "--n", "9", "--r", "3"]).status.code(), Some(3));
    let out = bin().env("LRC_LAB_THREADS", "zero").args(["bounds", "--name", "rate_t"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_cap_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.lrc");
    // a random [40, 30] code over GF(256): both the code and its dual are
    // far beyond the enumeration caps
    let mut text = String::from("LRC G q=256 n=40 rows=30\n");
    for i in 0..30u64 {
        let row: Vec<String> = (0..40u64).map(|j| ((i * 37 + j * j * 11 + i * j) % 256).to_string()).collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    std::fs::write(&path, text).unwrap();
    let out = run(&["verify", path.to_str().unwrap(), "--r", "3"]);
    assert_eq!(out.status.code(), Some(4), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_worked_example() {
    let v = json(&run(&["verify", data("shortened_hamming_6_3.lrc").to_str().unwrap(), "--r", "2", "--t", "2"]));
    assert_eq!(result(&v, "n")["value"], "6");
    assert_eq!(result(&v, "k")["value"], "3");
    assert_eq!(result(&v, "d")["value"], "3");
    assert_eq!(v["details"]["locality_ok"], true);
    assert_eq!(v["details"]["meets"]["distance_bound_t"], true);
    let v = json(&run(&["verify", data("hamming_7_4.lrc").to_str().unwrap(), "--r", "3", "--t", "1"]));
    assert_eq!(v["details"]["locality_ok"], true);
    let v = json(&run(&["verify", data("gf4_hexacode.lrc").to_str().unwrap(), "--r", "3"]));
    assert_eq!(result(&v, "d")["value"], "4");
}

#[test]
fn verify_reports_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cut.lrc");
    std::fs::write(&path, "LRC H q=2 n=6 rows=3\n0 0 0 1 1 1\n0 1 1 0 0 1\n").unwrap();
    let out = run(&["verify", path.to_str().unwrap(), "--r", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
    assert_eq!(run(&["verify", "/nonexistent/file.lrc", "--r", "2"]).status.code(), Some(2));
}

#[test]
fn curve_output() {
    let out = run(&["curve", "--q", "2", "--r", "3", "--bounds", "gv,singleton,plotkin,lp", "--step", "0.05"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "bound,q,r,t,delta,value,aux1,aux2");
    assert_eq!(lines.len(), 1 + 4 * 21);
    assert!(lines[1].starts_with("gv,2,3,1,0,0.75,"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = run(&["curve", "--r", "6", "--t", "3", "--bounds", "expander,sa", "--step", "0.1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("expander,large,6,3,0,"));
}

#[test]
fn sampling_is_reproducible_and_dumps_parse() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("h.lrc");
    let args = [
        "sample", "--kind", "single", "--n", "24", "--k", "12", "--r", "3", "--q", "2", "--seed", "7", "--batch", "20",
        "--dump", dump.to_str().unwrap(),
    ];
    let a = run(&args);
    let first_dump = std::fs::read_to_string(&dump).unwrap();
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(first_dump, std::fs::read_to_string(&dump).unwrap());
    let v = json(&a);
    assert_eq!(result(&v, "locality_pass")["value"], "20");
    assert!(v["details"]["distance_histogram"].is_object());
    assert!(first_dump.starts_with("LRC H q=2 n=24 rows=12\n"));
    let v = json(&run(&["verify", dump.to_str().unwrap(), "--r", "3"]));
    assert_eq!(v["details"]["locality_ok"], true);

    let one_thread = bin().env("LRC_LAB_THREADS", "1").args(&args[..15]).output().unwrap();
    assert_eq!(one_thread.stdout, a.stdout);

    let v = json(&run(&["sample", "--kind", "double", "--n", "6", "--r", "1", "--q", "2"]));
    assert_eq!(result(&v, "locality_pass")["value"], "1");
}
