//! End-to-end acceptance run: one line per criterion, nonzero exit on failure.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use hecke_core::asymptotic::{compare_gamma_kl, verify_ring};
use hecke_core::cellular::{
    alpha_for_target, b_matrix, cellular_basis, norm_primes, specialize_weight, transition_det_t, verify_cell_datum,
    verify_p15_tilde, verify_phi,
};
use hecke_core::coxeter::ZwRing;
use hecke_core::hecke::HeckeAlgebra;
use hecke_core::linalg::Matrix;
use hecke_core::pipeline::{algebra, tensors, Pipeline, WeightSpec};
use hecke_core::reps::{constant_terms, dihedral, gram_average, load_rep, verify_schur_leading, FamilyKind};
use hecke_core::scalars::{FieldScalar, KScalar, LaurentPoly, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};

const SEED: u64 = 20_240_601;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Setting {
    Equal,
    /// Universal weights with the first class dominant.
    BOverA,
    AOverB,
}

impl Setting {
    fn weights(self) -> WeightSpec {
        match self {
            Setting::Equal => WeightSpec::Equal,
            _ => WeightSpec::Universal,
        }
    }

    fn order(self) -> &'static str {
        match self {
            Setting::Equal => "natural",
            Setting::BOverA => "1,0",
            Setting::AOverB => "0,1",
        }
    }
}

type Key = (String, Setting, FamilyKind);

#[derive(Default)]
struct Cache(HashMap<Key, Pipeline>);

impl Cache {
    fn get(&mut self, sys: &str, s: Setting, kind: FamilyKind) -> Result<&Pipeline, String> {
        let key = (sys.to_string(), s, kind);
        if !self.0.contains_key(&key) {
            let h = alg(sys, s)?;
            let p = Pipeline::builtin(h, kind).map_err(|e| format!("{sys} {s:?}: {e}"))?;
            self.0.insert(key.clone(), p);
        }
        Ok(&self.0[&key])
    }
}

fn alg(sys: &str, s: Setting) -> Result<HeckeAlgebra, String> {
    algebra(sys, &s.weights(), s.order()).map_err(|e| format!("{sys} {s:?}: {e}"))
}

fn dihedral_names(range: std::ops::RangeInclusive<u32>) -> Vec<String> {
    range.map(|m| format!("I2:{m}")).collect()
}

/// Settings that make sense for `sys`: unequal ones only with two classes.
fn settings(sys: &str) -> Vec<Setting> {
    let two_classes = sys.starts_with('B') || sys.strip_prefix("I2:").is_some_and(|m| m.parse::<u32>().unwrap() % 2 == 0);
    if two_classes {
        vec![Setting::Equal, Setting::BOverA, Setting::AOverB]
    } else {
        vec![Setting::Equal]
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn zeta_sum(h: &HeckeAlgebra, j: u32, m: u32) -> FieldScalar {
    let sys = h.group().system();
    sys.field().two_cos((j * sys.conductor() / m) as i64)
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for m in 3..=12u32 {
        let name = format!("I2:{m}");
        for s in settings(&name) {
            let h = alg(&name, s)?;
            for j in 1..=((m as usize - 1) / 2) {
                let r = dihedral(&h, j).map_err(|e| e.to_string())?;
                let avg = gram_average(&r, &h).map_err(|e| e.to_string())?;
                let c = constant_terms(&avg, h.order()).map_err(|e| e.to_string())?;
                let expect = if s == Setting::Equal {
                    FieldScalar::from_int(2).add(&zeta_sum(&h, j as u32, m))
                } else {
                    FieldScalar::one()
                };
                let want = Matrix::from_rows(vec![vec![expect, FieldScalar::zero()], vec![FieldScalar::zero(), FieldScalar::one()]]);
                ensure(c == want, || format!("{name} {s:?} j={j}: got {c:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} forms"))
}

fn criterion_2(cache: &mut Cache) -> Outcome {
    for m in 3..=12u32 {
        let p = cache.get(&format!("I2:{m}"), Setting::Equal, FamilyKind::Auto)?;
        let mut prod = FieldScalar::one();
        for r in p.prepared.iter().filter(|r| r.dim() == 2) {
            prod = prod.mul(&b_matrix(r, &p.h).map_err(|e| e.to_string())?.det);
        }
        let want = if m % 2 == 1 { FieldScalar::one() } else { FieldScalar::from_int(m as i64 / 2) };
        ensure(prod == want, || format!("m={m}: product {prod}"))?;
    }
    Ok("m = 3..12".into())
}

fn criterion_3(cache: &mut Cache) -> Outcome {
    let mut systems: Vec<String> = ["A1", "A2", "A3", "B2", "B3"].iter().map(|s| s.to_string()).collect();
    systems.extend(dihedral_names(3..=12));
    let mut n = 0;
    for sys in &systems {
        for s in settings(sys) {
            let p = cache.get(sys, s, FamilyKind::Auto)?;
            let rep = verify_schur_leading(&tensors(&p.prepared), &p.h).map_err(|e| e.to_string())?;
            ensure(rep.ok(), || format!("{sys} {s:?}: {rep:?}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} configurations"))
}

/// Configurations shared by the oracle and the sampled identity.
fn kl_configs() -> Vec<(String, Setting)> {
    let mut v: Vec<(String, Setting)> = ["A2", "A3", "B2"].iter().map(|s| (s.to_string(), Setting::Equal)).collect();
    v.extend(dihedral_names(3..=8).into_iter().map(|s| (s, Setting::Equal)));
    for s in ["B2", "I2:4", "I2:6"] {
        v.push((s.to_string(), Setting::BOverA));
    }
    v
}

fn criterion_4(cache: &mut Cache) -> Outcome {
    for (sys, s) in kl_configs() {
        let p = cache.get(&sys, s, FamilyKind::Auto)?;
        let cmp = compare_gamma_kl(&p.table, p.htable().map_err(|e| e.to_string())?, &p.h);
        ensure(cmp.ok(), || format!("{sys} {s:?}: {cmp:?}"))?;
    }
    Ok(format!("{} configurations", kl_configs().len()))
}

fn criterion_5(cache: &mut Cache) -> Outcome {
    let mut systems: Vec<String> = ["A1", "A2", "A3", "B2", "B3"].iter().map(|s| s.to_string()).collect();
    systems.extend(dihedral_names(3..=12));
    let mut triples = 0;
    for sys in &systems {
        for s in settings(sys) {
            let p = cache.get(sys, s, FamilyKind::Auto)?;
            let r = verify_ring(&p.table, SEED);
            ensure(r.ok(), || format!("{sys} {s:?}: {r:?}"))?;
            ensure(p.h.size() <= 16 || r.associativity_checked >= 10_000, || format!("{sys}: too few triples"))?;
            triples += r.associativity_checked;
        }
    }
    Ok(format!("{triples} associativity triples"))
}

fn integral(q: &Q) -> bool {
    q.denom().is_one()
}

fn power_of_two_denominator(q: &Q) -> bool {
    let mut d = q.denom();
    let two = BigInt::from(2);
    while (&d % &two).is_zero() {
        d /= &two;
    }
    d.is_one()
}

fn criterion_6(cache: &mut Cache) -> Outcome {
    for sys in ["A1", "A2", "A3", "B2", "B3", "I2:6"] {
        let p = cache.get(sys, Setting::Equal, FamilyKind::Auto)?;
        let ok = p.table.all_values(|x| x.as_rational().is_some_and(|q| integral(&q)));
        ensure(ok, || format!("{sys}: non-integral structure constant"))?;
    }
    for sys in ["B2", "B3"] {
        for s in settings(sys) {
            let p = cache.get(sys, s, FamilyKind::Auto)?;
            let ok = p.table.all_values(|x| x.as_rational().is_some_and(|q| power_of_two_denominator(&q)));
            ensure(ok, || format!("{sys} {s:?}: denominator not a power of 2"))?;
        }
    }
    for sys in dihedral_names(3..=12) {
        for s in settings(&sys) {
            let p = cache.get(&sys, s, FamilyKind::Auto)?;
            let ring = ZwRing::new(p.h.group().system());
            for t in &p.prepared {
                for w in p.h.group().elements() {
                    let m = t.leading.matrix(w);
                    for i in 0..m.rows() {
                        for j in 0..m.cols() {
                            ensure(ring.contains(m.get(i, j)), || {
                                format!("{sys} {s:?} {}: entry {} not in Z_W", t.label(), m.get(i, j))
                            })?;
                        }
                    }
                }
            }
        }
    }
    Ok("structure constants and dihedral tensors".into())
}

fn cell_configs() -> Vec<(String, Setting)> {
    let mut v = vec![("A1".to_string(), Setting::Equal), ("A2".to_string(), Setting::Equal)];
    let mut names = vec!["B2".to_string()];
    names.extend(dihedral_names(3..=8));
    for n in names {
        for s in settings(&n) {
            v.push((n.clone(), s));
        }
    }
    v
}

fn criterion_7(cache: &mut Cache) -> Outcome {
    for (sys, s) in cell_configs() {
        let p = cache.get(&sys, s, FamilyKind::Auto)?;
        let d = cellular_basis(&p.h, &p.kl, &p.prepared, &p.table, &p.lr).map_err(|e| format!("{sys} {s:?}: {e}"))?;
        let rep = verify_cell_datum(&d, &p.h).map_err(|e| e.to_string())?;
        ensure(rep.ok(), || format!("{sys} {s:?}: {rep:?}"))?;
        // a nonzero element of F is a unit of A
        ensure(!d.coeffs.det().is_zero(), || format!("{sys} {s:?}: singular transition"))?;
        ensure(d.order.is_partial_order(), || format!("{sys} {s:?}: order not partial"))?;
        if s == Setting::Equal {
            for l in 0..d.order.len() {
                for m in 0..d.order.len() {
                    if d.order.lt(l, m) {
                        let (al, am) = (&p.prepared[l].schur.a_lambda, &p.prepared[m].schur.a_lambda);
                        ensure(p.h.order().cmp(am, al).is_lt(), || format!("{sys}: a-values against the order"))?;
                    }
                }
            }
        }
    }
    Ok(format!("{} configurations", cell_configs().len()))
}

fn criterion_8(cache: &mut Cache) -> Outcome {
    for (sys, s) in cell_configs() {
        let p = cache.get(&sys, s, FamilyKind::Auto)?;
        let r = verify_phi(&p.h, p.htable().map_err(|e| e.to_string())?, &p.table, &p.lr);
        ensure(r.ok(), || format!("{sys} {s:?}: {r:?}"))?;
    }
    Ok(format!("{} configurations", cell_configs().len()))
}

fn criterion_9(cache: &mut Cache) -> Outcome {
    let mut exhaustive = 0;
    for (sys, s) in kl_configs() {
        let p = cache.get(&sys, s, FamilyKind::Auto)?;
        if p.h.size() > 16 {
            continue;
        }
        let r = verify_p15_tilde(&p.h, p.htable().map_err(|e| e.to_string())?, &p.table, &p.lr, SEED);
        ensure(r.ok() && r.exhaustive, || format!("{sys} {s:?}: {:?}", r.violations))?;
        exhaustive += 1;
    }
    let mut sampled = 0;
    for sys in ["A3", "B3"] {
        let p = cache.get(sys, Setting::Equal, FamilyKind::Auto)?;
        let r = verify_p15_tilde(&p.h, p.htable().map_err(|e| e.to_string())?, &p.table, &p.lr, SEED);
        ensure(r.ok() && r.checked >= 100_000, || format!("{sys}: {:?} of {}", r.violations, r.checked))?;
        sampled += r.checked;
    }
    Ok(format!("{exhaustive} exhaustive, {sampled} sampled"))
}

fn criterion_10(cache: &mut Cache) -> Outcome {
    for s in settings("B2") {
        let a = cache.get("B2", s, FamilyKind::Seminormal)?.table.clone();
        let b = &cache.get("B2", s, FamilyKind::Dihedral)?.table;
        ensure(&a == b, || format!("B2 {s:?}: tables differ"))?;
    }
    Ok("B2, three settings".into())
}

fn criterion_11(cache: &mut Cache) -> Outcome {
    let eq = alg("B2", Setting::Equal)?;
    for s in [Setting::BOverA, Setting::AOverB] {
        let p = cache.get("B2", s, FamilyKind::Auto)?;
        let d = cellular_basis(&p.h, &p.kl, &p.prepared, &p.table, &p.lr).map_err(|e| e.to_string())?;
        let alpha = alpha_for_target(&p.h, &eq).map_err(|e| e.to_string())?;
        let sp = specialize_weight(&d, &alpha, &eq).map_err(|e| e.to_string())?;
        let det = transition_det_t(&sp, eq.gamma_rank()).map_err(|e| e.to_string())?;
        let unit = det.to_laurent().is_some_and(|x: LaurentPoly| x.is_monomial());
        ensure(unit, || format!("{s:?}: determinant {det} is not a unit"))?;
        let rep = verify_cell_datum(&sp, &eq).map_err(|e| e.to_string())?;
        ensure(rep.c2.is_empty() && rep.c3.is_empty(), || format!("{s:?}: {rep:?}"))?;
    }
    Ok("B2 universal to equal".into())
}

fn h3_file() -> Option<PathBuf> {
    let p = std::env::var_os("HECKE_H3_WGRAPH")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/h3_3s.json"));
    p.exists().then_some(p)
}

/// `None` means skipped.
fn criterion_12() -> Option<Outcome> {
    let path = h3_file()?;
    Some((|| {
        let h = alg("H3", Setting::Equal)?;
        let rep = load_rep(&path, &h).map_err(|e| e.to_string())?;
        let avg = gram_average(&rep, &h).map_err(|e| e.to_string())?;
        let sys = h.group().system();
        let abar = sys.field().two_cos(2 * sys.conductor() as i64 / 5);
        let v = h.v(0).clone();
        let k = |p: LaurentPoly| KScalar::from_poly(p, 1);
        let diag = v.mul(&v).add(&LaurentPoly::one(1));
        let z = LaurentPoly::zero();
        let printed = Matrix::from_rows(vec![
            vec![k(diag.clone()), k(v.neg()), k(z.clone())],
            vec![k(v.neg()), k(diag.clone()), k(v.scale(&abar))],
            vec![k(z), k(v.scale(&abar)), k(diag)],
        ]);
        let (pi, pj) = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .find(|&(i, j)| !avg.get(i, j).is_zero())
            .ok_or("zero form")?;
        for i in 0..3 {
            for j in 0..3 {
                ensure(avg.get(pi, pj).mul(printed.get(i, j)) == printed.get(pi, pj).mul(avg.get(i, j)), || {
                    format!("not proportional at ({i},{j})")
                })?;
            }
        }
        let c = constant_terms(&avg, h.order()).map_err(|e| e.to_string())?;
        for n in 1..=3 {
            let minor = Matrix::from_fn(n, n, |i, j| c.get(i, j).clone()).det();
            ensure(minor.signum() > 0, || format!("leading minor {n} is {minor}"))?;
        }
        let primes = norm_primes(&c.det());
        ensure(primes.iter().all(|p| [2, 5].contains(p)), || format!("determinant primes {primes:?}"))?;
        Ok(format!("{} (det primes {primes:?})", path.display()))
    })())
}

fn main() -> ExitCode {
    let mut cache = Cache::default();
    let mut failed = 0;
    let mut line = |n: u32, name: &str, start: Instant, r: Option<Outcome>| {
        let secs = start.elapsed().as_secs_f64();
        match r {
            Some(Ok(msg)) => println!("criterion {n:>2} PASS  {name}: {msg} [{secs:.1}s]"),
            Some(Err(msg)) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {msg} [{secs:.1}s]");
            }
            None => println!("criterion {n:>2} SKIP  {name}: no data file"),
        }
    };
    let t = Instant::now();
    line(1, "dihedral Gram constant terms", t, Some(criterion_1()));
    let t = Instant::now();
    line(2, "determinant products", t, Some(criterion_2(&mut cache)));
    let t = Instant::now();
    line(3, "Schur relations", t, Some(criterion_3(&mut cache)));
    let t = Instant::now();
    line(4, "gamma tilde against KL gamma", t, Some(criterion_4(&mut cache)));
    let t = Instant::now();
    line(5, "ring axioms", t, Some(criterion_5(&mut cache)));
    let t = Instant::now();
    line(6, "integrality", t, Some(criterion_6(&mut cache)));
    let t = Instant::now();
    line(7, "cell datum axioms", t, Some(criterion_7(&mut cache)));
    let t = Instant::now();
    line(8, "homomorphism phi", t, Some(criterion_8(&mut cache)));
    let t = Instant::now();
    line(9, "P15 tilde", t, Some(criterion_9(&mut cache)));
    let t = Instant::now();
    line(10, "choice independence", t, Some(criterion_10(&mut cache)));
    let t = Instant::now();
    line(11, "specialization", t, Some(criterion_11(&mut cache)));
    let t = Instant::now();
    line(12, "H3 invariant form", t, criterion_12());
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
