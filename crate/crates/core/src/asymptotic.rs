//! The ring `J̃` built from leading matrix coefficients.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterGroup, Elem};
use crate::error::{Error, Result};
use crate::hecke::{HTable, HeckeAlgebra};
use crate::linalg::Matrix;
use crate::reps::LeadingTensor;
use crate::scalars::{FieldScalar, RealCyclotomicField};

/// Sparse element of `J̃` in the basis `{t_w}`; never stores zeros.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct JElem(BTreeMap<Elem, FieldScalar>);

impl JElem {
    pub fn zero() -> Self {
        JElem(BTreeMap::new())
    }

    /// `t_w`.
    pub fn basis(w: Elem) -> Self {
        Self::term(w, FieldScalar::one())
    }

    pub fn term(w: Elem, c: FieldScalar) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(w, c);
        }
        JElem(m)
    }

    pub fn coeff(&self, w: Elem) -> FieldScalar {
        self.0.get(&w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Elem, &FieldScalar)> {
        self.0.iter().map(|(w, c)| (*w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, w: Elem, c: &FieldScalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(w).or_default();
        *e = e.add(c);
        if e.is_zero() {
            self.0.remove(&w);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (w, c) in o.terms() {
            r.add_term(w, c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&FieldScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        let mut r = JElem::zero();
        for (w, x) in self.terms() {
            r.add_term(w, &x.mul(c));
        }
        r
    }
}

/// Structure constants `γ̃`, the numbers `ñ_w`, `D̃` and the L-blocks.
#[derive(Clone, Debug)]
pub struct GammaTable {
    group: Arc<CoxeterGroup>,
    gamma: HashMap<(Elem, Elem, Elem), FieldScalar>,
    /// `t_x t_y` as `(z, γ̃_{x,y,z^{-1}})`.
    products: HashMap<(Elem, Elem), Vec<(Elem, FieldScalar)>>,
    n: Vec<FieldScalar>,
    tensors: Vec<LeadingTensor>,
    blocks: Blocks,
}

impl PartialEq for GammaTable {
    /// Compares the ring data only, not the representations used.
    fn eq(&self, o: &Self) -> bool {
        self.gamma == o.gamma && self.n == o.n
    }
}

/// L-blocks: the partition of `W` and the block of each representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Blocks {
    pub blocks: Vec<Vec<Elem>>,
    pub block_of_elem: Vec<usize>,
    pub block_of_rep: Vec<usize>,
}

impl Blocks {
    /// Blocks sorted by smallest member.
    pub fn partition(&self) -> &[Vec<Elem>] {
        &self.blocks
    }
}

/// Connected components of the graph joining `w` to `λ` when some
/// `c^{ij}_{w,λ} ≠ 0`.
pub fn l_blocks(tensors: &[LeadingTensor], g: &CoxeterGroup) -> Result<Blocks> {
    let n = g.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let supports: Vec<Vec<Elem>> = tensors.iter().map(LeadingTensor::support).collect();
    for (t, s) in tensors.iter().zip(&supports) {
        if s.is_empty() {
            return Err(Error::Internal(format!("{}: no nonzero leading coefficient", t.label)));
        }
        for &w in &s[1..] {
            let (a, b) = (find(&mut parent, s[0]), find(&mut parent, w));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut blocks: Vec<Vec<Elem>> = Vec::new();
    let mut block_of_elem = vec![0; n];
    for w in 0..n {
        let r = find(&mut parent, w);
        let b = *index.entry(r).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[b].push(w);
        block_of_elem[w] = b;
    }
    let block_of_rep = supports.iter().map(|s| block_of_elem[s[0]]).collect();
    // E ↔ w if and only if E ↔ w^{-1}
    for (t, s) in tensors.iter().zip(&supports) {
        for &w in s {
            if !s.contains(&g.inverse(w)) {
                return Err(Error::Internal(format!("{}: support not closed under inversion", t.label)));
            }
        }
    }
    Ok(Blocks {
        blocks,
        block_of_elem,
        block_of_rep,
    })
}

fn trace_of_product(a: &Matrix<FieldScalar>, b: &Matrix<FieldScalar>) -> FieldScalar {
    let d = a.rows();
    let mut s = FieldScalar::zero();
    for i in 0..d {
        for j in 0..d {
            let x = a.get(i, j);
            let y = b.get(j, i);
            if !x.is_zero() && !y.is_zero() {
                s = s.add(&x.mul(y));
            }
        }
    }
    s
}

impl GammaTable {
    /// `γ̃_{x,y,z} = Σ_λ f_λ^{-1} tr(c_λ[x] c_λ[y] c_λ[z])`, summed only over
    /// triples inside the support of each `λ`.
    pub fn build(tensors: &[LeadingTensor], group: &Arc<CoxeterGroup>) -> Result<Self> {
        let g = group.as_ref();
        let size = g.size();
        let blocks = l_blocks(tensors, g)?;
        let finv: Vec<FieldScalar> = tensors.iter().map(|t| t.f.inv()).collect::<Result<_>>()?;
        let mut jobs = Vec::new();
        for (l, t) in tensors.iter().enumerate() {
            let s = t.support();
            for &x in &s {
                jobs.push((l, x, s.clone()));
            }
        }
        let parts: Vec<Vec<((Elem, Elem, Elem), FieldScalar)>> = jobs
            .par_iter()
            .map(|(l, x, s)| {
                let t = &tensors[*l];
                let mut out = Vec::new();
                for &y in s {
                    let xy = t.matrix(*x).mul(t.matrix(y));
                    if xy.entries().iter().all(FieldScalar::is_zero) {
                        continue;
                    }
                    for &z in s {
                        let tr = trace_of_product(&xy, t.matrix(z));
                        if !tr.is_zero() {
                            out.push(((*x, y, z), tr.mul(&finv[*l])));
                        }
                    }
                }
                out
            })
            .collect();
        let mut gamma: HashMap<(Elem, Elem, Elem), FieldScalar> = HashMap::new();
        for part in parts {
            for (key, v) in part {
                let e = gamma.entry(key).or_default();
                *e = e.add(&v);
            }
        }
        gamma.retain(|_, v| !v.is_zero());
        let n: Vec<FieldScalar> = (0..size)
            .map(|w| {
                let wi = g.inverse(w);
                let mut s = FieldScalar::zero();
                for (t, fi) in tensors.iter().zip(&finv) {
                    s = s.add(&t.matrix(wi).trace().mul(fi));
                }
                s
            })
            .collect();
        Ok(Self::assemble(group.clone(), gamma, n, tensors.to_vec(), blocks))
    }

    fn assemble(
        group: Arc<CoxeterGroup>,
        gamma: HashMap<(Elem, Elem, Elem), FieldScalar>,
        n: Vec<FieldScalar>,
        tensors: Vec<LeadingTensor>,
        blocks: Blocks,
    ) -> Self {
        let mut products: HashMap<(Elem, Elem), Vec<(Elem, FieldScalar)>> = HashMap::new();
        for (&(x, y, u), c) in &gamma {
            products.entry((x, y)).or_default().push((group.inverse(u), c.clone()));
        }
        for v in products.values_mut() {
            v.sort_by_key(|(z, _)| *z);
        }
        GammaTable {
            group,
            gamma,
            products,
            n,
            tensors,
            blocks,
        }
    }

    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.n.len()
    }

    /// `γ̃_{x,y,z}`.
    pub fn gamma(&self, x: Elem, y: Elem, z: Elem) -> FieldScalar {
        self.gamma.get(&(x, y, z)).cloned().unwrap_or_default()
    }

    /// Nonzero entries, sorted.
    pub fn nonzero(&self) -> Vec<((Elem, Elem, Elem), FieldScalar)> {
        let mut v: Vec<_> = self.gamma.iter().map(|(k, c)| (*k, c.clone())).collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    /// `ñ_w`.
    pub fn n(&self, w: Elem) -> &FieldScalar {
        &self.n[w]
    }

    /// `D̃ = {w : ñ_w ≠ 0}`.
    pub fn d_set(&self) -> Vec<Elem> {
        (0..self.size()).filter(|&w| !self.n[w].is_zero()).collect()
    }

    pub fn blocks(&self) -> &Blocks {
        &self.blocks
    }

    pub fn tensors(&self) -> &[LeadingTensor] {
        &self.tensors
    }

    /// Overwrite one structure constant; for fault-injection tests.
    pub fn with_gamma(&self, x: Elem, y: Elem, z: Elem, c: FieldScalar) -> Self {
        let mut gamma = self.gamma.clone();
        if c.is_zero() {
            gamma.remove(&(x, y, z));
        } else {
            gamma.insert((x, y, z), c);
        }
        Self::assemble(self.group.clone(), gamma, self.n.clone(), self.tensors.clone(), self.blocks.clone())
    }

    /// `t_x t_y = Σ_z γ̃_{x,y,z^{-1}} t_z`.
    pub fn basis_product(&self, x: Elem, y: Elem) -> JElem {
        let mut r = JElem::zero();
        if let Some(v) = self.products.get(&(x, y)) {
            for (z, c) in v {
                r.add_term(*z, c);
            }
        }
        r
    }

    pub fn j_multiply(&self, a: &JElem, b: &JElem) -> JElem {
        let mut r = JElem::zero();
        for (x, cx) in a.terms() {
            for (y, cy) in b.terms() {
                let c = cx.mul(cy);
                if let Some(v) = self.products.get(&(x, y)) {
                    for (z, g) in v {
                        r.add_term(*z, &g.mul(&c));
                    }
                }
            }
        }
        r
    }

    /// `1_J̃ = Σ_{d ∈ D̃} ñ_d t_d`.
    pub fn identity_element(&self) -> JElem {
        let mut r = JElem::zero();
        for (w, c) in self.n.iter().enumerate() {
            r.add_term(w, c);
        }
        r
    }

    /// `τ̄(t_w) = ñ_{w^{-1}}`, extended linearly.
    pub fn trace_tau(&self, a: &JElem) -> FieldScalar {
        let mut s = FieldScalar::zero();
        for (w, c) in a.terms() {
            s = s.add(&c.mul(&self.n[self.group.inverse(w)]));
        }
        s
    }

    /// `ρ̄^λ(t_w)`.
    pub fn rho_bar(&self, lambda: usize, w: Elem) -> &Matrix<FieldScalar> {
        self.tensors[lambda].matrix(w)
    }

    /// `ρ̄^λ(a)` for a general element.
    pub fn rho_bar_elem(&self, lambda: usize, a: &JElem) -> Matrix<FieldScalar> {
        let t = &self.tensors[lambda];
        let mut m = Matrix::filled(t.dim, t.dim, FieldScalar::zero());
        for (w, c) in a.terms() {
            m = m.add(&t.matrix(w).map(|x| x.mul(c)));
        }
        m
    }

    /// Pairs `(x, y)` where `ρ̄^λ(t_x t_y) ≠ ρ̄^λ(t_x) ρ̄^λ(t_y)` for some `λ`.
    pub fn rho_bar_violations(&self, pairs: &[(Elem, Elem)]) -> Vec<(usize, Elem, Elem)> {
        pairs
            .par_iter()
            .flat_map_iter(|&(x, y)| {
                let p = self.basis_product(x, y);
                (0..self.tensors.len())
                    .filter(|&l| self.rho_bar_elem(l, &p) != self.rho_bar(l, x).mul(self.rho_bar(l, y)))
                    .map(|l| (l, x, y))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// Every value satisfies `pred`.
    pub fn all_values(&self, pred: impl Fn(&FieldScalar) -> bool) -> bool {
        self.gamma.values().all(&pred) && self.n.iter().all(&pred)
    }

    pub fn to_dump(&self, seed: Option<u64>) -> GammaDump {
        GammaDump {
            triples: self
                .nonzero()
                .into_iter()
                .map(|((x, y, z), c)| (x, y, z, c.to_string()))
                .collect(),
            n: self.n.iter().map(|x| x.to_string()).collect(),
            d_set: self.d_set(),
            blocks: self.blocks.clone(),
            seed,
        }
    }

    /// Rebuild the ring data from a dump; representations are not restored.
    pub fn from_dump(dump: &GammaDump, group: &Arc<CoxeterGroup>) -> Result<Self> {
        let field: Option<&'static RealCyclotomicField> = Some(group.system().field());
        let mut gamma = HashMap::new();
        for (x, y, z, c) in &dump.triples {
            gamma.insert((*x, *y, *z), FieldScalar::parse(c, field)?);
        }
        let n = dump
            .n
            .iter()
            .map(|s| FieldScalar::parse(s, field))
            .collect::<Result<Vec<_>>>()?;
        if n.len() != group.size() {
            return Err(Error::Parse("ñ table has the wrong length".into()));
        }
        Ok(Self::assemble(group.clone(), gamma, n, Vec::new(), dump.blocks.clone()))
    }
}

/// Serialized form of a [`GammaTable`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaDump {
    pub triples: Vec<(Elem, Elem, Elem, String)>,
    pub n: Vec<String>,
    pub d_set: Vec<Elem>,
    pub blocks: Blocks,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Outcome of the ring-axiom checks; every list should be empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RingReport {
    pub associativity: Vec<(Elem, Elem, Elem)>,
    pub associativity_checked: usize,
    pub identity: Vec<Elem>,
    pub dual_basis: Vec<(Elem, Elem)>,
    pub cyclic: Vec<(Elem, Elem, Elem)>,
    pub lemma_b: Vec<(Elem, Elem)>,
    pub anti_involution: Vec<(Elem, Elem, Elem)>,
    pub block_ideal: Vec<(Elem, Elem)>,
    pub seed: u64,
}

impl RingReport {
    pub fn ok(&self) -> bool {
        self.associativity.is_empty()
            && self.identity.is_empty()
            && self.dual_basis.is_empty()
            && self.cyclic.is_empty()
            && self.lemma_b.is_empty()
            && self.anti_involution.is_empty()
            && self.block_ideal.is_empty()
    }
}

/// Exhaustive associativity up to this many elements, sampled beyond.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 16;
pub const ASSOC_SAMPLES: usize = 10_000;

/// Check associativity, the identity, the trace, the symmetries of `γ̃` and
/// the block decomposition.
pub fn verify_ring(t: &GammaTable, seed: u64) -> RingReport {
    let g = t.group();
    let n = t.size();
    let triples: Vec<(Elem, Elem, Elem)> = if n <= EXHAUSTIVE_ASSOC_LIMIT {
        (0..n)
            .flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..ASSOC_SAMPLES)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect()
    };
    let associativity = triples
        .par_iter()
        .filter(|&&(x, y, z)| {
            let (tx, ty, tz) = (JElem::basis(x), JElem::basis(y), JElem::basis(z));
            t.j_multiply(&t.j_multiply(&tx, &ty), &tz) != t.j_multiply(&tx, &t.j_multiply(&ty, &tz))
        })
        .cloned()
        .collect();
    let one = t.identity_element();
    let identity = (0..n)
        .filter(|&x| {
            let tx = JElem::basis(x);
            t.j_multiply(&one, &tx) != tx || t.j_multiply(&tx, &one) != tx
        })
        .collect();
    let pairs: Vec<(Elem, Elem)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    let dual_basis = pairs
        .par_iter()
        .filter(|&&(x, y)| {
            let v = t.trace_tau(&t.basis_product(x, g.inverse(y)));
            v != if x == y { FieldScalar::one() } else { FieldScalar::zero() }
        })
        .cloned()
        .collect();
    let all: Vec<(Elem, Elem, Elem)> = (0..n)
        .flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
        .collect();
    let cyclic = all
        .par_iter()
        .filter(|&&(x, y, z)| t.gamma(x, y, z) != t.gamma(y, z, x))
        .cloned()
        .collect();
    let anti_involution = all
        .par_iter()
        .filter(|&&(x, y, z)| t.gamma(x, y, z) != t.gamma(g.inverse(y), g.inverse(x), g.inverse(z)))
        .cloned()
        .collect();
    let lemma_b = pairs
        .par_iter()
        .filter(|&&(x, y)| {
            let xi = g.inverse(x);
            let mut s = FieldScalar::zero();
            for w in 0..n {
                if !t.n[w].is_zero() {
                    s = s.add(&t.gamma(xi, y, w).mul(&t.n[w]));
                }
            }
            s != if x == y { FieldScalar::one() } else { FieldScalar::zero() }
        })
        .cloned()
        .collect();
    let bo = &t.blocks.block_of_elem;
    let block_ideal = pairs
        .par_iter()
        .filter(|&&(x, w)| {
            let p = t.basis_product(x, w);
            let outside = p.terms().any(|(z, _)| bo[z] != bo[w]);
            outside
        })
        .cloned()
        .collect();
    RingReport {
        associativity,
        associativity_checked: triples.len(),
        identity,
        dual_basis,
        cyclic,
        lemma_b,
        anti_involution,
        block_ideal,
        seed,
    }
}

/// Agreement of `γ̃` with the Kazhdan-Lusztig `γ`, and of `a(z)` with `a_λ`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GammaComparison {
    pub mismatches: Vec<(Elem, Elem, Elem)>,
    /// `(λ label, z)` with `c_{z,λ} ≠ 0` but `a(z) ≠ a_λ`.
    pub a_mismatches: Vec<(String, Elem)>,
}

impl GammaComparison {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.a_mismatches.is_empty()
    }
}

pub fn compare_gamma_kl(t: &GammaTable, ht: &HTable, h: &HeckeAlgebra) -> GammaComparison {
    let n = t.size();
    let all: Vec<(Elem, Elem, Elem)> = (0..n)
        .flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
        .collect();
    let mismatches = all
        .par_iter()
        .filter(|&&(x, y, z)| t.gamma(x, y, z) != ht.gamma(h, x, y, z))
        .cloned()
        .collect();
    let mut a_mismatches = Vec::new();
    for tensor in &t.tensors {
        for z in tensor.support() {
            if ht.a(z) != &tensor.a {
                a_mismatches.push((tensor.label.clone(), z));
            }
        }
    }
    GammaComparison {
        mismatches,
        a_mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::KlBasis;
    use crate::reps::{builtin_family, prepare, FamilyKind};
    use crate::reps::tests::algebra;

    pub(crate) fn table(name: &str, w: Option<Vec<Vec<i32>>>, pr: Option<Vec<usize>>) -> (HeckeAlgebra, GammaTable) {
        table_with(name, w, pr, FamilyKind::Auto)
    }

    pub(crate) fn table_with(
        name: &str,
        w: Option<Vec<Vec<i32>>>,
        pr: Option<Vec<usize>>,
        kind: FamilyKind,
    ) -> (HeckeAlgebra, GammaTable) {
        let h = algebra(name, w, pr);
        let fam = builtin_family(&h, kind).unwrap();
        let tensors: Vec<_> = fam.iter().map(|r| prepare(r, &h).unwrap().leading).collect();
        let t = GammaTable::build(&tensors, h.group_arc()).unwrap();
        (h, t)
    }

    #[test]
    fn a1_table() {
        let (_, t) = table("A1", None, None);
        assert!(t.gamma(0, 0, 0).is_one());
        assert!(t.gamma(1, 1, 1).is_one());
        assert!(t.gamma(0, 1, 1).is_zero());
        assert!(t.gamma(1, 0, 0).is_zero());
        assert!(t.n(0).is_one() && t.n(1).is_one());
        assert_eq!(t.d_set(), vec![0, 1]);
        let one = t.identity_element();
        assert_eq!(one, JElem::basis(0).add(&JElem::basis(1)));
        assert_eq!(t.basis_product(0, 0), JElem::basis(0));
        assert_eq!(t.basis_product(1, 1), JElem::basis(1));
        assert_eq!(t.blocks().partition(), &[vec![0], vec![1]]);
        assert!(verify_ring(&t, 1).ok());
    }

    #[test]
    fn a2_matches_kl() {
        let (h, t) = table("A2", None, None);
        assert_eq!(t.d_set().len(), 4);
        let kl = KlBasis::compute(&h).unwrap();
        let ht = HTable::build(&h, &kl).unwrap();
        assert!(compare_gamma_kl(&t, &ht, &h).ok());
        assert_eq!(t.blocks().partition().len(), 3);
        for w in h.group().elements() {
            let p = t.j_multiply(&t.identity_element(), &JElem::basis(w));
            assert_eq!(t.trace_tau(&p), *t.n(h.group().inverse(w)));
        }
    }

    #[test]
    fn i2_identity_and_rho_bar() {
        let (_, t) = table("I2:5", None, None);
        let one = t.identity_element();
        for x in 0..10 {
            assert_eq!(t.j_multiply(&one, &JElem::basis(x)), JElem::basis(x));
        }
        let (_, t) = table("I2:6", None, None);
        let pairs: Vec<_> = (0..12).flat_map(|x| (0..12).map(move |y| (x, y))).collect();
        assert!(t.rho_bar_violations(&pairs).is_empty());
    }

    #[test]
    fn corrupted_table_is_caught() {
        let (_, t) = table("I2:4", None, None);
        assert!(verify_ring(&t, 7).ok());
        let bad = t.with_gamma(1, 1, 1, t.gamma(1, 1, 1).add(&FieldScalar::one()));
        let r = verify_ring(&bad, 7);
        assert!(!r.associativity.is_empty());
        assert!(r.associativity.iter().any(|&(x, y, z)| [x, y, z].contains(&1)));
    }

    #[test]
    fn dump_round_trip() {
        let (h, t) = table("I2:5", None, None);
        let d = t.to_dump(Some(3));
        let json = serde_json::to_string(&d).unwrap();
        let back: GammaDump = serde_json::from_str(&json).unwrap();
        let t2 = GammaTable::from_dump(&back, h.group_arc()).unwrap();
        assert_eq!(t, t2);
    }
}
