use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use hecke_core::asymptotic::{GammaDump, GammaTable};
use hecke_core::coxeter::{CoxeterGroup, CoxeterSystem};
use hecke_core::pipeline::{algebra, Pipeline, WeightSpec};
use hecke_core::reps::FamilyKind;
use serde_json::Value;

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).output().expect("binary runs")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn a1_full_pipeline_passes() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().to_str().unwrap();
    let o = hecke(&["--system", "A1", "--stages", "kl,reps,jring,cell", "--verify", "all", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    for f in ["kl.json", "reps.json", "jring.json", "cell.json", "findings.json"] {
        assert!(d.path().join(f).exists(), "{f}");
    }
    let f = read_json(&d.path().join("findings.json"));
    assert_eq!(f["status"], "pass");
    assert_eq!(f["suites"].as_array().unwrap().len(), 8);
    let j = read_json(&d.path().join("jring.json"));
    assert_eq!(j["schema_version"], 1);
    assert_eq!(j["seed"], 0);
}

#[test]
fn config_file_mirrors_flags() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("job.json");
    let out = d.path().join("out");
    fs::write(
        &cfg,
        format!(r#"{{"system": "A1", "stages": ["cell"], "verify": ["all"], "seed": 5, "out": {:?}}}"#, out),
    )
    .unwrap();
    let o = hecke(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(read_json(&out.join("cell.json"))["seed"], 5);
    let bad = d.path().join("bad.json");
    fs::write(&bad, r#"{"system": "A1", "stagez": []}"#).unwrap();
    assert_eq!(hecke(&["--config", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn dihedral_five_over_its_field() {
    let d = tempfile::tempdir().unwrap();
    let o = hecke(&["--system", "I2:5", "--order", "natural", "--out", d.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let j = read_json(&d.path().join("jring.json"));
    let text = j["gamma"].to_string();
    assert!(text.contains('d'), "expected irrational structure constants");
}

#[test]
fn corrupted_rep_file_is_an_input_error() {
    let d = tempfile::tempdir().unwrap();
    let rep = d.path().join("bad.json");
    fs::write(
        &rep,
        r#"{"wgraph": {"vertices": [{"Iset": ["s0"]}, {"Iset": ["s1"]}], "edges": [{"u": 0, "v": 1, "weight": "2"}]}}"#,
    )
    .unwrap();
    let out = d.path().join("out");
    let o = hecke(&["--system", "A2", "--reps", rep.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let f = read_json(&out.join("findings.json"));
    assert_eq!(f["status"], "input-error");
    assert!(f["errors"][0].as_str().unwrap().contains("braid violation"));
    let o = hecke(&["--system", "A2", "--weights", "2;1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn failed_verification_exits_two() {
    // the index representation twice: a family of the right size that
    // violates the orthogonality relations
    let d = tempfile::tempdir().unwrap();
    let rep = d.path().join("index.json");
    fs::write(&rep, r#"{"label": "index", "generators": {"s0": [["eps[1]"]]}}"#).unwrap();
    let r = rep.to_str().unwrap();
    let out = d.path().join("out");
    let o = hecke(&["rep", "leading", "--system", "A1", "--reps", &format!("{r},{r}"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert_eq!(read_json(&out.join("findings.json"))["status"], "fail");
}

#[test]
fn artifacts_are_deterministic_and_reparse() {
    let d = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = d.path().join(name);
        let o = hecke(&["--system", "B2", "--weights", "universal", "--order", "1,0", "--jobs", "2", "--seed", "11", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        out
    };
    let (a, b) = (run("a"), run("b"));
    for f in ["kl.json", "reps.json", "jring.json", "cell.json", "findings.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let j = read_json(&a.join("jring.json"));
    let dump: GammaDump = serde_json::from_value(j["gamma"].clone()).unwrap();
    let g = Arc::new(CoxeterGroup::new(CoxeterSystem::parse("B2").unwrap()).unwrap());
    let back = GammaTable::from_dump(&dump, &g).unwrap();
    let h = algebra("B2", &WeightSpec::Universal, "1,0").unwrap();
    let p = Pipeline::builtin(h, FamilyKind::Auto).unwrap();
    assert_eq!(back, p.table);
}

#[test]
fn report_summarizes_a2() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().to_str().unwrap();
    assert_eq!(hecke(&["--system", "A2", "--out", out]).status.code(), Some(0));
    let o = hecke(&["report", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("a-values: {[0], [1], [3]}"), "{s}");
    assert!(s.contains("(2,1) < (3)"), "{s}");
    assert!(s.contains("overall: pass"));
    let empty = tempfile::tempdir().unwrap();
    let o = hecke(&["report", "--out", empty.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing artifact"));
}

#[test]
fn specialize_b2_to_equal_parameters() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().to_str().unwrap();
    let o = hecke(&["cell", "specialize", "--target", "1;1", "--system", "B2", "--weights", "universal", "--order", "0,1", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = read_json(&d.path().join("cell_specialized.json"));
    assert_eq!(s["target_weights"], "1;1");
}
