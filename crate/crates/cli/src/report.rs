//! Human-readable summary of an artifact directory.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::run::Findings;

fn read(dir: &Path, name: &str) -> Result<Value, String> {
    let p = dir.join(name);
    let text = std::fs::read_to_string(&p).map_err(|e| format!("missing artifact {}: {e}", p.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .map(|a| a.iter().map(|x| x.as_str().map_or_else(|| x.to_string(), String::from)).collect())
        .unwrap_or_default()
}

/// Summary text; fails if the representation artifact or findings are absent.
pub fn report(dir: &Path) -> Result<String, String> {
    let reps = read(dir, "reps.json")?;
    let findings: Findings = serde_json::from_value(read(dir, "findings.json")?).map_err(|e| e.to_string())?;
    let mut s = String::new();
    let sys = reps["config"]["system"].as_str().unwrap_or("?");
    let _ = writeln!(s, "system {sys}, weights {}, order {}", reps["config"]["weights"], reps["config"]["order"]);
    let _ = writeln!(s, "{:<16} {:>4} {:>10} {:>14}", "representation", "dim", "a", "f");
    for r in reps["representations"].as_array().into_iter().flatten() {
        let _ = writeln!(
            s,
            "{:<16} {:>4} {:>10} {:>14}",
            r["label"].as_str().unwrap_or("?"),
            r["dim"],
            r["a"].as_str().unwrap_or("?"),
            r["f"].as_str().unwrap_or("?")
        );
    }
    let mut a: Vec<String> = reps["representations"].as_array().into_iter().flatten().map(|r| r["a"].as_str().unwrap_or("?").to_string()).collect();
    a.sort();
    a.dedup();
    let _ = writeln!(s, "a-values: {{{}}}", a.join(", "));
    let _ = writeln!(s, "L-good primes to invert: {{{}}}", strings(&reps["l_good_primes"]).join(", "));
    if let Ok(j) = read(dir, "jring.json") {
        let blocks = j["blocks"].as_array().map_or(0, Vec::len);
        let d = j["d_set"].as_array().map_or(0, Vec::len);
        let _ = writeln!(s, "L-blocks: {blocks}, |D~|: {d}");
        for b in j["blocks"].as_array().into_iter().flatten() {
            let _ = writeln!(s, "  {{{}}}", strings(b).join(", "));
        }
    }
    if let Ok(c) = read(dir, "cell.json") {
        let edges: Vec<String> = c["order_hasse"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|e| {
                let e = strings(e);
                format!("{} < {}", e[0], e[1])
            })
            .collect();
        let _ = writeln!(s, "order on representations: {}", if edges.is_empty() { "discrete".into() } else { edges.join(", ") });
    }
    let _ = writeln!(s, "{:<10} {:<8} detail", "suite", "status");
    for r in &findings.suites {
        let _ = writeln!(s, "{:<10} {:<8} {}", r.name, format!("{:?}", r.status).to_lowercase(), r.detail);
    }
    for e in &findings.errors {
        let _ = writeln!(s, "error: {e}");
    }
    let _ = writeln!(s, "overall: {}", findings.status);
    Ok(s)
}
