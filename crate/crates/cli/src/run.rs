//! Stage execution, JSON artifacts and the findings file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use hecke_core::asymptotic::{compare_gamma_kl, verify_ring, GammaTable};
use hecke_core::cellular::{
    alpha_for_target, cellular_basis, l_good_primes, specialize_weight, transition_det_t, verify_cell_datum,
    verify_p15_tilde, verify_phi, CellDatum,
};
use hecke_core::hecke::{HTable, HeckeAlgebra, KlBasis, LrPreorder, FULL_TABLE_LIMIT};
use hecke_core::pipeline::{algebra, tensors, WeightSpec};
use hecke_core::reps::{builtin_family, load_rep, prepare, rep_to_json, verify_schur_leading, FamilyKind, MatrixRep, PreparedRep};
use hecke_core::{Error, Result};

use crate::config::{JobConfig, Stage, Suite};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Findings {
    pub schema_version: u32,
    pub seed: u64,
    /// `pass`, `fail` or `input-error`.
    pub status: String,
    pub suites: Vec<SuiteResult>,
    pub errors: Vec<String>,
}

impl Findings {
    pub fn exit_code(&self) -> i32 {
        match self.status.as_str() {
            "pass" => 0,
            "fail" => 2,
            _ => 3,
        }
    }
}

/// Errors the user can fix by changing the input.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_) | Error::Input(_) | Error::BraidViolation(_) | Error::MissingIrreducibles { .. } | Error::EnumerationBound(_)
    )
}

/// State accumulated across stages.
pub struct Session {
    pub config: JobConfig,
    pub suites: Vec<Suite>,
    pub h: Option<HeckeAlgebra>,
    pub kl: Option<KlBasis>,
    pub lr: Option<LrPreorder>,
    pub ht: Option<HTable>,
    pub prepared: Vec<PreparedRep>,
    pub table: Option<GammaTable>,
    pub datum: Option<CellDatum>,
    pub results: Vec<SuiteResult>,
    pub errors: Vec<String>,
    input_error: bool,
}

fn violations<T: std::fmt::Debug>(name: &str, v: &[T]) -> Option<String> {
    if v.is_empty() {
        None
    } else {
        let shown: Vec<String> = v.iter().take(5).map(|x| format!("{x:?}")).collect();
        Some(format!("{name}: {} violations, first {}", v.len(), shown.join(", ")))
    }
}

fn record(out: &mut Vec<SuiteResult>, s: Suite, status: Status, detail: impl Into<String>) {
    out.push(SuiteResult {
        name: s.name().into(),
        status,
        detail: detail.into(),
    });
}

fn record_checks(out: &mut Vec<SuiteResult>, s: Suite, failures: Vec<Option<String>>, ok_detail: String) {
    let f: Vec<String> = failures.into_iter().flatten().collect();
    if f.is_empty() {
        record(out, s, Status::Pass, ok_detail);
    } else {
        record(out, s, Status::Fail, f.join("; "));
    }
}

impl Session {
    pub fn new(config: JobConfig) -> std::result::Result<Self, String> {
        let suites = config.suites()?;
        Ok(Session {
            config,
            suites,
            h: None,
            kl: None,
            lr: None,
            ht: None,
            prepared: Vec::new(),
            table: None,
            datum: None,
            results: Vec::new(),
            errors: Vec::new(),
            input_error: false,
        })
    }

    fn wants(&self, s: Suite) -> bool {
        self.suites.contains(&s)
    }

    fn out(&self, name: &str) -> PathBuf {
        self.config.out.join(name)
    }

    fn write(&self, name: &str, mut v: Value) -> Result<()> {
        v["schema_version"] = json!(SCHEMA_VERSION);
        v["seed"] = json!(self.config.seed);
        v["config"] = serde_json::to_value(&self.config).expect("serializable");
        let text = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
        fs::write(self.out(name), text).map_err(|e| Error::Input(format!("{}: {e}", self.out(name).display())))
    }

    /// Run every configured stage; errors stop the run and are recorded.
    pub fn run(&mut self) -> Findings {
        if let Err(e) = self.run_stages() {
            self.input_error |= is_input_error(&e);
            self.errors.push(e.to_string());
        }
        self.findings()
    }

    fn run_stages(&mut self) -> Result<()> {
        fs::create_dir_all(&self.config.out)
            .map_err(|e| Error::Input(format!("{}: {e}", self.config.out.display())))?;
        let weights: WeightSpec = self.config.weights.parse()?;
        self.h = Some(algebra(&self.config.system, &weights, &self.config.order)?);
        for stage in self.config.stages.clone() {
            eprintln!("stage {stage:?}");
            match stage {
                Stage::Kl => self.stage_kl()?,
                Stage::Reps => self.stage_reps()?,
                Stage::Jring => self.stage_jring()?,
                Stage::Cell => self.stage_cell()?,
            }
        }
        Ok(())
    }

    pub fn findings(&self) -> Findings {
        let failed = self.results.iter().any(|r| r.status == Status::Fail);
        let status = if self.input_error {
            "input-error"
        } else if failed || !self.errors.is_empty() {
            "fail"
        } else {
            "pass"
        };
        Findings {
            schema_version: SCHEMA_VERSION,
            seed: self.config.seed,
            status: status.into(),
            suites: self.results.clone(),
            errors: self.errors.clone(),
        }
    }

    fn stage_kl(&mut self) -> Result<()> {
        let h = self.h.as_ref().expect("algebra");
        let g = h.group();
        let kl = KlBasis::compute(h)?;
        let lr = LrPreorder::compute(h, &kl);
        let ht = if h.size() <= FULL_TABLE_LIMIT {
            Some(HTable::build(h, &kl)?)
        } else {
            None
        };
        let labels: Vec<String> = g.elements().map(|w| g.label(w)).collect();
        let mut polys = Vec::new();
        for w in g.elements() {
            for y in kl.cprime(w).support() {
                if y != w {
                    polys.push(json!({"y": labels[y], "w": labels[w], "p": kl.p(y, w).to_string()}));
                }
            }
        }
        let cells: Vec<Vec<&String>> = lr.partition().iter().map(|c| c.iter().map(|&w| &labels[w]).collect()).collect();
        let a: Option<Vec<String>> = ht.as_ref().map(|t| t.a_values().iter().map(|x| x.to_string()).collect());
        self.write(
            "kl.json",
            json!({
                "system": g.system().to_string(),
                "size": g.size(),
                "elements": labels,
                "two_sided_cells": cells,
                "a_values": a,
                "kl_polynomials": polys,
            }),
        )?;
        if self.wants(Suite::Kl) {
            match &ht {
                Some(t) => {
                    let checks = vec![
                        violations("a(z) = a(z^-1)", &t.a_symmetry_violations(h)),
                        violations("bar invariance", &t.bar_violations()),
                        violations("integer or two-sided", &t.dichotomy_violations(h)),
                    ];
                    record_checks(&mut self.results, Suite::Kl, checks, format!("{} elements", h.size()));
                }
                None => record(&mut self.results, Suite::Kl, Status::Skipped, format!("|W| > {FULL_TABLE_LIMIT}")),
            }
        }
        self.kl = Some(kl);
        self.lr = Some(lr);
        self.ht = ht;
        Ok(())
    }

    fn load_reps(&self) -> Result<Vec<MatrixRep>> {
        let h = self.h.as_ref().expect("algebra");
        let mut out = Vec::new();
        for r in &self.config.reps {
            let kind = match r.as_str() {
                "builtin" => Some(FamilyKind::Auto),
                "builtin:seminormal" => Some(FamilyKind::Seminormal),
                "builtin:dihedral" => Some(FamilyKind::Dihedral),
                _ => None,
            };
            match kind {
                Some(k) => out.extend(builtin_family(h, k)?),
                None => out.push(load_rep(Path::new(r), h).map_err(|e| match e {
                    Error::BraidViolation(m) => Error::BraidViolation(format!("{r}: {m}")),
                    other => other,
                })?),
            }
        }
        Ok(out)
    }

    fn stage_reps(&mut self) -> Result<()> {
        let reps = self.load_reps()?;
        let h = self.h.as_ref().expect("algebra");
        let prepared = reps.iter().map(|r| prepare(r, h)).collect::<Result<Vec<_>>>()?;
        let dims: usize = prepared.iter().map(|r| r.dim() * r.dim()).sum();
        let complete = dims == h.size();
        let primes = l_good_primes(&prepared);
        let entries: Vec<Value> = prepared
            .iter()
            .map(|p| {
                let gens: Value = serde_json::from_str(&rep_to_json(&p.rep)).expect("own output");
                json!({
                    "label": p.label(),
                    "dim": p.dim(),
                    "a": p.schur.a_lambda.to_string(),
                    "f": p.schur.f_lambda.to_string(),
                    "c": p.schur.c_lambda.to_string(),
                    "balanced": p.certificate.balanced,
                    "det_valuation": p.certificate.det_valuation.as_ref().map(|g| g.to_string()),
                    "det_constant": p.certificate.det_constant.to_string(),
                    "balanced_generators": gens["generators"],
                })
            })
            .collect();
        self.write(
            "reps.json",
            json!({"representations": entries, "complete": complete, "l_good_primes": primes}),
        )?;
        if self.wants(Suite::Balance) {
            let bad: Vec<String> = prepared
                .iter()
                .filter(|p| !p.certificate.balanced || p.certificate.direct == Some(false))
                .map(|p| p.label().to_string())
                .collect();
            record_checks(&mut self.results, 
                Suite::Balance,
                vec![violations("not balanced", &bad)],
                format!("{} representations", prepared.len()),
            );
        }
        if self.wants(Suite::Schur) {
            if complete {
                let r = verify_schur_leading(&tensors(&prepared), h)?;
                record_checks(&mut self.results, 
                    Suite::Schur,
                    vec![violations("first family", &r.star), violations("second family", &r.star_prime)],
                    "both families".into(),
                );
            } else {
                record(&mut self.results, Suite::Schur, Status::Skipped, format!("family covers {dims} of {}", h.size()));
            }
        }
        self.prepared = prepared;
        Ok(())
    }

    fn stage_jring(&mut self) -> Result<()> {
        let h = self.h.as_ref().expect("algebra");
        let g = h.group();
        let table = GammaTable::build(&tensors(&self.prepared), h.group_arc())?;
        let labels = |v: &[usize]| v.iter().map(|&w| g.label(w)).collect::<Vec<_>>();
        let d = table.d_set();
        let n: Vec<Value> = d.iter().map(|&w| json!({"d": g.label(w), "n": table.n(w).to_string()})).collect();
        self.write(
            "jring.json",
            json!({
                "gamma": table.to_dump(Some(self.config.seed)),
                "blocks": table.blocks().partition().iter().map(|b| labels(b)).collect::<Vec<_>>(),
                "d_set": n,
                "representations": self.prepared.iter().map(|p| p.label()).collect::<Vec<_>>(),
            }),
        )?;
        if self.wants(Suite::Ring) {
            let r = verify_ring(&table, self.config.seed);
            let checks = vec![
                violations("associativity", &r.associativity),
                violations("identity", &r.identity),
                violations("dual basis", &r.dual_basis),
                violations("cyclic symmetry", &r.cyclic),
                violations("duality lemma", &r.lemma_b),
                violations("anti-involution", &r.anti_involution),
                violations("block ideals", &r.block_ideal),
            ];
            record_checks(&mut self.results, Suite::Ring, checks, format!("{} associativity triples", r.associativity_checked));
        }
        if self.wants(Suite::GammaKl) {
            match &self.ht {
                Some(ht) => {
                    let c = compare_gamma_kl(&table, ht, h);
                    let checks = vec![violations("gamma", &c.mismatches), violations("a-values", &c.a_mismatches)];
                    record_checks(&mut self.results, Suite::GammaKl, checks, "all triples".into());
                }
                None => record(&mut self.results, Suite::GammaKl, Status::Skipped, format!("|W| > {FULL_TABLE_LIMIT}")),
            }
        }
        self.table = Some(table);
        Ok(())
    }

    fn stage_cell(&mut self) -> Result<()> {
        let (h, kl, lr) = (self.h.as_ref().expect("algebra"), self.kl.as_ref().expect("kl"), self.lr.as_ref().expect("lr"));
        let table = self.table.as_ref().expect("jring");
        let datum = match cellular_basis(h, kl, &self.prepared, table, lr) {
            Ok(d) => d,
            Err(e) if !is_input_error(&e) => {
                record(&mut self.results, Suite::Cell, Status::Fail, e.to_string());
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        self.write("cell.json", datum_json(&datum, h))?;
        if self.wants(Suite::Cell) {
            let r = verify_cell_datum(&datum, h)?;
            let checks = vec![
                (!r.c1).then(|| "C1: transition matrix singular".to_string()),
                violations("C2", &r.c2),
                violations("C3", &r.c3),
                (!datum.order.is_partial_order()).then(|| "order is not a partial order".to_string()),
            ];
            record_checks(&mut self.results, Suite::Cell, checks, format!("{} basis elements", datum.len()));
        }
        let ht = self.ht.as_ref();
        if self.wants(Suite::Phi) {
            match ht {
                Some(ht) => {
                    let r = verify_phi(h, ht, table, lr);
                    let checks = vec![
                        (!r.unital).then(|| "phi(C_1) is not the identity".to_string()),
                        violations("multiplicativity", &r.multiplicativity),
                        violations("filtration", &r.filtration),
                    ];
                    record_checks(&mut self.results, Suite::Phi, checks, "all pairs".into());
                }
                None => record(&mut self.results, Suite::Phi, Status::Skipped, format!("|W| > {FULL_TABLE_LIMIT}")),
            }
        }
        if self.wants(Suite::P15) {
            match ht {
                Some(ht) => {
                    let r = verify_p15_tilde(h, ht, table, lr, self.config.seed);
                    let how = if r.exhaustive { "exhaustive" } else { "sampled" };
                    record_checks(&mut self.results, 
                        Suite::P15,
                        vec![violations("identity", &r.violations)],
                        format!("{} quadruples, {how}", r.checked),
                    );
                }
                None => record(&mut self.results, Suite::P15, Status::Skipped, format!("|W| > {FULL_TABLE_LIMIT}")),
            }
        }
        self.datum = Some(datum);
        Ok(())
    }

    /// Push the cell datum to other weights and re-check it there.
    pub fn specialize(&mut self, target: &str, order: &str) -> Result<()> {
        let weights: WeightSpec = target.parse()?;
        let t = algebra(&self.config.system, &weights, order)?;
        let (Some(datum), Some(h)) = (&self.datum, &self.h) else {
            return Err(Error::Input("specialization needs a cell datum".into()));
        };
        let alpha = alpha_for_target(h, &t)?;
        let s = specialize_weight(datum, &alpha, &t)?;
        let det = transition_det_t(&s, t.gamma_rank())?;
        let unit = det.to_laurent().is_some_and(|p| p.is_monomial());
        let r = verify_cell_datum(&s, &t)?;
        let mut v = datum_json(&s, &t);
        v["target_weights"] = json!(target);
        v["target_order"] = json!(order);
        v["t_transition_det"] = json!(det.to_string());
        self.write("cell_specialized.json", v)?;
        let checks = vec![
            (!unit).then(|| format!("transition determinant {det} is not a unit")),
            violations("C2", &r.c2),
            violations("C3", &r.c3),
        ];
        record_checks(&mut self.results, Suite::Cell, checks, format!("specialized to {target}"));
        Ok(())
    }
}

fn datum_json(d: &CellDatum, h: &HeckeAlgebra) -> Value {
    let g = h.group();
    let elements: Vec<Value> = d
        .index
        .iter()
        .enumerate()
        .map(|(j, &(l, s, t))| {
            let coeffs: serde_json::Map<String, Value> = (0..d.coeffs.cols())
                .filter(|&w| !d.coeffs.get(j, w).is_zero())
                .map(|w| (g.label(w), json!(d.coeffs.get(j, w).to_string())))
                .collect();
            json!({"lambda": d.labels[l], "s": s, "t": t, "c_coefficients": coeffs})
        })
        .collect();
    let b: Vec<Value> = d
        .b
        .iter()
        .zip(&d.labels)
        .map(|(b, l)| {
            let rows: Vec<Vec<String>> = (0..b.beta.rows())
                .map(|i| (0..b.beta.cols()).map(|j| b.beta.get(i, j).to_string()).collect())
                .collect();
            json!({"lambda": l, "beta": rows, "det": b.det.to_string(), "det_primes": b.det_primes})
        })
        .collect();
    let hasse: Vec<[&String; 2]> = d.order.hasse_edges().iter().map(|&(a, b)| [&d.labels[a], &d.labels[b]]).collect();
    json!({
        "representations": d.labels,
        "dims": d.dims,
        "order_hasse": hasse,
        "l_good_primes": d.primes,
        "b_matrices": b,
        "transition_det": d.coeffs.det().to_string(),
        "elements": elements,
    })
}

/// Write the findings file next to the artifacts, if the directory exists.
pub fn write_findings(out: &Path, f: &Findings) {
    if fs::create_dir_all(out).is_ok() {
        let text = serde_json::to_string_pretty(f).expect("serializable") + "\n";
        if let Err(e) = fs::write(out.join("findings.json"), text) {
            eprintln!("cannot write findings: {e}");
        }
    }
}
