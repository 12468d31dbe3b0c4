use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use spectra::arith::{parse_rat, Dyadic, Rat};

fn spectra(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectra")).args(args).current_dir(dir).env_remove("SPECTRA_BITS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn number(s: &str) -> Rat {
    if s.contains("*2^") {
        Dyadic::parse(s).unwrap().to_rat()
    } else {
        parse_rat(s).unwrap()
    }
}

struct Row {
    id: String,
    lhs: (Rat, Rat),
    rhs: (Rat, Rat),
    verdict: String,
}

fn rows(csv: &str) -> Vec<Row> {
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "statement_id,n,k,lhs_lo,lhs_hi,rhs_lo,rhs_hi,verdict");
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            Row { id: f[0].into(), lhs: (number(f[3]), number(f[4])), rhs: (number(f[5]), number(f[6])), verdict: f[7].into() }
        })
        .collect()
}

fn write_fixture(dir: &Path, name: &str) {
    let o = spectra(&["gen", "--atoms", "5", "--t-ratio", "10000", "--m-ratio", "600000", "--out", name], dir);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn two_atom_inverse() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("two.json"), r#"{"atoms":[{"t":"1","m":"1/2"},{"t":"3","m":"1/2"}]}"#).unwrap();
    let o = spectra(&["inverse", "--in", "two.json"], dir.path());
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["jacobi"]["q"], serde_json::json!(["2/1", "2/1"]));
    assert_eq!(v["result"]["jacobi"]["rho_sq"], serde_json::json!(["1/1"]));
    assert_eq!(v["header"]["bits"], "128");
}

#[test]
fn generator_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path(), "a.json");
    write_fixture(dir.path(), "b.json");
    let a = fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.json")).unwrap());
    assert!(!String::from_utf8(a).unwrap().contains('.'));
}

#[test]
fn lacunary_bounds_pass_and_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path(), "fx.json");
    let args = |out: &'static str| ["verify", "thm12", "--in", "fx.json", "--lambda", "1001", "--kappa", "21", "--theta", "6e-3", "--out", out];
    let o = spectra(&args("r1"), dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&spectra(&args("r2"), dir.path())), 0);
    let j1 = fs::read(dir.path().join("r1.json")).unwrap();
    assert_eq!(j1, fs::read(dir.path().join("r2.json")).unwrap());
    let csv = fs::read_to_string(dir.path().join("r1.csv")).unwrap();
    let rs = rows(&csv);
    assert!(rs.iter().filter(|r| r.id == "thm1.2.q.lower").count() == 5);
    for r in &rs {
        // exit 0 means every verdict is a certified pass
        assert_eq!(r.verdict, "PASS");
        assert!(r.lhs.1 <= r.rhs.0, "{}", r.id);
    }
    assert!(csv.lines().skip(1).all(|l| l.split(',').skip(3).all(|f| !f.contains('.'))));
}

#[test]
fn violated_hypothesis_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path(), "fx.json");
    let o = spectra(&["verify", "thm12", "--in", "fx.json", "--lambda", "20000", "--kappa", "21", "--theta", "6e-3", "--emit", "csv"], dir.path());
    assert_eq!(code(&o), 1);
    let rs = rows(&String::from_utf8(o.stdout).unwrap());
    let bad: Vec<&Row> = rs.iter().filter(|r| r.verdict == "FAIL").collect();
    assert!(!bad.is_empty());
    for r in bad {
        assert!(r.lhs.0 >= r.rhs.1, "{}", r.id);
    }
}

#[test]
fn bits_from_the_environment_are_echoed() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path(), "fx.json");
    let o = Command::new(env!("CARGO_BIN_EXE_spectra"))
        .args(["verify", "steps", "--in", "fx.json", "--lambda", "1001", "--kappa", "21", "--theta", "7/1000", "--emit", "json"])
        .current_dir(dir.path())
        .env("SPECTRA_BITS", "200")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["header"]["bits"], "200");
    assert_eq!(v["header"]["bits_source"], "env");
}

#[test]
fn input_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&spectra(&["inverse", "--in", "missing.json"], dir.path())), 3);
    fs::write(dir.path().join("bad.json"), r#"{"atoms":[{"t":"2","m":"1"},{"t":"1","m":"1"}]}"#).unwrap();
    let o = spectra(&["inverse", "--in", "bad.json"], dir.path());
    assert_eq!(code(&o), 3);
    assert!(!o.stderr.is_empty());
    assert_eq!(code(&spectra(&["--bits", "8", "gen", "--atoms", "2", "--t-ratio", "2", "--m-ratio", "2"], dir.path())), 3);
    assert_eq!(code(&spectra(&["verify", "nope", "--in", "x.json"], dir.path())), 3);
}

#[test]
fn canonical_roundtrip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("j.json"), r#"{"q":["2","2"],"rho_sq":["1"]}"#).unwrap();
    assert_eq!(code(&spectra(&["canonical-to-h", "--in", "j.json", "--out", "h_doc.json"], p)), 0);
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(p.join("h_doc.json")).unwrap()).unwrap();
    fs::write(p.join("h.json"), doc["result"].to_string()).unwrap();
    let o = spectra(&["canonical-from-h", "--in", "h.json"], p);
    assert_eq!(code(&o), 0);
    let back: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(back["result"]["q"], serde_json::json!(["2/1", "2/1"]));
    let o = spectra(&["monodromy", "--in", "h.json"], p);
    assert_eq!(code(&o), 0);
    let m: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(m["result"]["det"], serde_json::json!(["1/1"]));
    let o = spectra(&["forward", "--in", "j.json"], p);
    assert_eq!(code(&o), 0);
}

#[test]
fn directory_inputs_fan_out() {
    let dir = tempfile::tempdir().unwrap();
    let fx = dir.path().join("fixtures");
    fs::create_dir(&fx).unwrap();
    write_fixture(&fx, "one.json");
    write_fixture(&fx, "two.json");
    let o = spectra(&["verify", "thm12", "--in", "fixtures", "--out", "reports", "--lambda", "1001", "--kappa", "21", "--theta", "6e-3"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["one.csv", "one.json", "two.csv", "two.json"] {
        assert!(dir.path().join("reports").join(name).exists(), "{name}");
    }
}

#[test]
fn fock_sigma_and_tail_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("nu.json"), r#"{"atoms":[{"t":"1","m":"1"},{"t":"10","m":"1"}]}"#).unwrap();
    let o = spectra(&["fock-sigma", "--in", "nu.json"], p);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["sigma"]["atoms"][0]["m"], "1/2");
    fs::write(p.join("base.json"), r#"{"atoms":[{"t":"1","m":"1"},{"t":"10","m":"1"},{"t":"100","m":"1"}]}"#).unwrap();
    let o = spectra(&["tail-experiment", "--in", "base.json", "--m-top", "1", "--t-values", "1e6,1e8", "--emit", "json"], p);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["table"]["rows"].as_array().unwrap().len(), 2);
}
