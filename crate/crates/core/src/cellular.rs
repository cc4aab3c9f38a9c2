//! The order on representations, the matrices `B^λ`, the cellular basis,
//! Lusztig's homomorphism `φ` and the `P̃15` identity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotic::GammaTable;
use crate::coxeter::{Elem, ZwRing};
use crate::error::{Error, Result};
use crate::hecke::{Basis, HTable, HeckeAlgebra, HeckeElem, KlBasis, LrPreorder};
use crate::linalg::Matrix;
use crate::reps::PreparedRep;
use crate::scalars::{ExponentVec, FieldScalar, KScalar, LaurentPoly, Q};

/// Prime factors of a nonzero integer, by trial division.
fn prime_factors(n: &BigInt, out: &mut Vec<u64>) {
    let mut n = if n < &BigInt::zero() { -n } else { n.clone() };
    let mut p: u64 = 2;
    while n > BigInt::one() {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            match n.to_u64() {
                Some(x) => out.push(x),
                None => out.push(u64::MAX),
            }
            break;
        }
        if (&n % &bp).is_zero() {
            out.push(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        p += 1;
    }
}

/// Rational primes dividing the numerator or denominator of `q`.
pub fn rational_primes(q: &Q) -> Vec<u64> {
    let mut out = Vec::new();
    if !q.is_zero() {
        prime_factors(&q.numer(), &mut out);
        prime_factors(&q.denom(), &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Rational primes dividing the norm of `x`.
pub fn norm_primes(x: &FieldScalar) -> Vec<u64> {
    rational_primes(&x.norm())
}

/// Primes to invert so that every `f_λ` becomes a unit.
pub fn l_good_primes(reps: &[PreparedRep]) -> Vec<u64> {
    let mut out: Vec<u64> = reps.iter().flat_map(|r| norm_primes(&r.schur.f_lambda)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Constant terms of the normalized invariant form of one representation.
#[derive(Clone, Debug, PartialEq)]
pub struct BMatrix {
    pub beta: Matrix<FieldScalar>,
    pub det: FieldScalar,
    /// Primes dividing the norm of `det`.
    pub det_primes: Vec<u64>,
}

/// `B^λ`, checked to be symmetric, positive definite and to intertwine `ρ̄^λ`.
pub fn b_matrix(rep: &PreparedRep, h: &HeckeAlgebra) -> Result<BMatrix> {
    let beta = rep.b_matrix(h.order())?;
    let label = rep.label();
    if !beta.is_symmetric() {
        return Err(Error::Internal(format!("{label}: B is not symmetric")));
    }
    let d = beta.rows();
    for k in 1..=d {
        let minor = Matrix::from_fn(k, k, |i, j| beta.get(i, j).clone()).det();
        if minor.signum() <= 0 {
            return Err(Error::NotPositiveDefinite(format!("{label}: leading minor {k} is {minor}")));
        }
    }
    let g = h.group();
    let c = &rep.leading;
    for w in g.elements() {
        if beta.mul(c.matrix(g.inverse(w))) != c.matrix(w).transpose().mul(&beta) {
            return Err(Error::Internal(format!("{label}: B does not intertwine at {}", g.label(w))));
        }
    }
    let det = beta.det();
    let det_primes = norm_primes(&det);
    Ok(BMatrix { beta, det, det_primes })
}

/// Result of comparing two representations under `⊴`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LambdaRel {
    Equal,
    Less,
    Greater,
    Incomparable,
}

/// The partial order `⊴` on representations, through their L-blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaOrder {
    rel: Vec<Vec<LambdaRel>>,
}

impl LambdaOrder {
    /// `λ ◁ μ` when some (every) `x ∈ F_λ`, `y ∈ F_μ` have `x <_LR y`.
    pub fn compute(table: &GammaTable, lr: &LrPreorder) -> Result<Self> {
        let b = table.blocks();
        let nrep = b.block_of_rep.len();
        let members = |l: usize| &b.blocks[b.block_of_rep[l]];
        let exhaustive = table.size() <= 20;
        let mut rel = vec![vec![LambdaRel::Incomparable; nrep]; nrep];
        for l in 0..nrep {
            for m in 0..nrep {
                if l == m {
                    rel[l][m] = LambdaRel::Equal;
                    continue;
                }
                let (fl, fm) = (members(l), members(m));
                let strictly = |x: Elem, y: Elem| lr.lt(x, y);
                let less = strictly(fl[0], fm[0]);
                let greater = strictly(fm[0], fl[0]);
                if exhaustive {
                    for &x in fl {
                        for &y in fm {
                            if strictly(x, y) != less || strictly(y, x) != greater {
                                return Err(Error::Internal(
                                    "order on representations depends on block representatives".into(),
                                ));
                            }
                        }
                    }
                }
                rel[l][m] = match (less, greater) {
                    (true, false) => LambdaRel::Less,
                    (false, true) => LambdaRel::Greater,
                    (false, false) => LambdaRel::Incomparable,
                    (true, true) => return Err(Error::Internal("two-sided cells are not antisymmetric".into())),
                };
            }
        }
        Ok(LambdaOrder { rel })
    }

    pub fn len(&self) -> usize {
        self.rel.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rel.is_empty()
    }

    pub fn cmp(&self, l: usize, m: usize) -> LambdaRel {
        self.rel[l][m]
    }

    /// `λ ◁ μ`.
    pub fn lt(&self, l: usize, m: usize) -> bool {
        self.rel[l][m] == LambdaRel::Less
    }

    /// Antisymmetric, transitive and consistent in both directions.
    pub fn is_partial_order(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let dual = match self.rel[a][b] {
                    LambdaRel::Less => LambdaRel::Greater,
                    LambdaRel::Greater => LambdaRel::Less,
                    r => r,
                };
                if self.rel[b][a] != dual || (a != b && self.rel[a][b] == LambdaRel::Equal) {
                    return false;
                }
                for c in 0..n {
                    if self.lt(a, b) && self.lt(b, c) && !self.lt(a, c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Covering pairs `(λ, μ)` with `λ ◁ μ`.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// A cellular basis: each element is an `F`-combination of the `C_w`,
/// stored also in the T-basis of the algebra it lives in.
#[derive(Clone, Debug)]
pub struct CellDatum {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub order: LambdaOrder,
    /// `(λ, s, t)` for each basis element.
    pub index: Vec<(usize, usize, usize)>,
    /// Row `j` holds the `C_w`-coordinates of element `j`.
    pub coeffs: Matrix<FieldScalar>,
    /// T-expansion of each `C_w`.
    pub cw_t: Vec<HeckeElem>,
    /// T-expansion of each basis element.
    pub elems_t: Vec<HeckeElem>,
    pub b: Vec<BMatrix>,
    /// Primes inverted in the coefficient ring.
    pub primes: Vec<u64>,
}

fn combine(coeffs: &[FieldScalar], cw_t: &[HeckeElem]) -> HeckeElem {
    let n = cw_t.len();
    let mut acc = HeckeElem::zero(Basis::T, n);
    for (w, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            for y in cw_t[w].support() {
                acc.add_to(y, &cw_t[w].coeff(y).scale(c));
            }
        }
    }
    acc
}

impl CellDatum {
    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Position of `C^λ_{s,t}`.
    pub fn position(&self, l: usize, s: usize, t: usize) -> usize {
        self.index.iter().position(|&x| x == (l, s, t)).expect("valid index")
    }

    /// `C^λ_{s,t}` in the T-basis.
    pub fn element(&self, l: usize, s: usize, t: usize) -> &HeckeElem {
        &self.elems_t[self.position(l, s, t)]
    }

    /// Exchange two basis elements; for fault-injection tests.
    pub fn swap_elements(&mut self, i: usize, j: usize) {
        let n = self.coeffs.cols();
        for w in 0..n {
            let a = self.coeffs.get(i, w).clone();
            let b = self.coeffs.get(j, w).clone();
            self.coeffs.set(i, w, b);
            self.coeffs.set(j, w, a);
        }
        self.elems_t.swap(i, j);
    }

    /// Coordinates of a T-basis element in the `C_w`, by triangular solve.
    fn to_cw(&self, h: &HeckeAlgebra, x: &HeckeElem) -> Result<Vec<LaurentPoly>> {
        let g = h.group();
        let mut rest = x.clone();
        let mut out = vec![LaurentPoly::zero(); g.size()];
        for stratum in g.strata().iter().rev() {
            for &w in stratum {
                let c = rest.coeff(w).clone();
                if c.is_zero() {
                    continue;
                }
                let lead = self.cw_t[w].coeff(w);
                if !lead.is_constant() || lead.is_zero() {
                    return Err(Error::Internal("C_w is not unitriangular".into()));
                }
                let q = c.scale(&lead.constant_coeff().inv()?);
                for y in self.cw_t[w].support() {
                    rest.add_to(y, &self.cw_t[w].coeff(y).mul(&q).neg());
                }
                out[w] = q;
            }
        }
        if !rest.is_zero() {
            return Err(Error::Internal("triangular solve left a remainder".into()));
        }
        Ok(out)
    }
}

/// `C^λ_{s,t} = Σ_w Σ_u β_{tu} ρ̄_{us}(t_{w^{-1}}) C_w`.
pub fn cellular_basis(
    h: &HeckeAlgebra,
    kl: &KlBasis,
    reps: &[PreparedRep],
    table: &GammaTable,
    lr: &LrPreorder,
) -> Result<CellDatum> {
    let g = h.group();
    let n = g.size();
    let order = LambdaOrder::compute(table, lr)?;
    let b: Vec<BMatrix> = reps.iter().map(|r| b_matrix(r, h)).collect::<Result<_>>()?;
    let primes = l_good_primes(reps);
    let ring = ZwRing::new(g.system()).localized(&primes);
    let blocks = table.blocks();
    let mut index = Vec::new();
    let mut rows: Vec<Vec<FieldScalar>> = Vec::new();
    for (l, rep) in reps.iter().enumerate() {
        let d = rep.dim();
        let block = blocks.block_of_rep[l];
        let prods: Vec<Matrix<FieldScalar>> =
            (0..n).map(|w| b[l].beta.mul(rep.leading.matrix(g.inverse(w)))).collect();
        for s in 0..d {
            for t in 0..d {
                let row: Vec<FieldScalar> = (0..n).map(|w| prods[w].get(t, s).clone()).collect();
                for (w, c) in row.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if blocks.block_of_elem[w] != block {
                        return Err(Error::Internal(format!("{}: element outside its block", rep.label())));
                    }
                    if !ring.contains(c) {
                        return Err(Error::Integrality(format!(
                            "{}: coefficient {c} of C_{} not in the L-good ring (primes {primes:?})",
                            rep.label(),
                            g.label(w)
                        )));
                    }
                }
                index.push((l, s, t));
                rows.push(row);
            }
        }
    }
    if index.len() != n {
        return Err(Error::MissingIrreducibles { have: index.len(), need: n });
    }
    let coeffs = Matrix::from_rows(rows);
    let cw_t: Vec<HeckeElem> = (0..n).map(|w| kl.c(h, w)).collect();
    let elems_t = (0..n).map(|j| combine(coeffs.row(j), &cw_t)).collect();
    Ok(CellDatum {
        labels: reps.iter().map(|r| r.label().to_string()).collect(),
        dims: reps.iter().map(PreparedRep::dim).collect(),
        order,
        index,
        coeffs,
        cw_t,
        elems_t,
        b,
        primes,
    })
}

/// Outcome of the three cell-datum axioms.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    /// Determinant of the transition matrix to `{C_w}`.
    pub transition_det: String,
    pub c1: bool,
    /// Elements `j` with `(C_j)^* ≠ C_{j^*}`.
    pub c2: Vec<usize>,
    /// `(λ, generator, s, t)` where the action leaves the allowed span or
    /// depends on `t`.
    pub c3: Vec<(usize, usize, usize, usize)>,
}

impl CellReport {
    pub fn ok(&self) -> bool {
        self.c1 && self.c2.is_empty() && self.c3.is_empty()
    }
}

/// `T_w ↦ T_{w^{-1}}` on a T-basis element.
pub fn star(h: &HeckeAlgebra, x: &HeckeElem) -> HeckeElem {
    let g = h.group();
    let mut out = HeckeElem::zero(Basis::T, x.len());
    for w in x.support() {
        out.set(g.inverse(w), x.coeff(w).clone());
    }
    out
}

/// Check (C1)–(C3); (C3) is tested on `T_s` for every generator.
pub fn verify_cell_datum(datum: &CellDatum, h: &HeckeAlgebra) -> Result<CellReport> {
    let n = datum.len();
    let det = datum.coeffs.det();
    let c1 = !det.is_zero();
    let mut report = CellReport {
        transition_det: det.to_string(),
        c1,
        ..Default::default()
    };
    report.c2 = (0..n)
        .filter(|&j| {
            let (l, s, t) = datum.index[j];
            let k = datum.index.iter().position(|&x| x == (l, t, s));
            k.is_none_or(|k| star(h, &datum.elems_t[j]) != datum.elems_t[k])
        })
        .collect();
    if !c1 {
        return Ok(report);
    }
    let minv = datum.coeffs.inverse()?;
    let to_cell = |x: &HeckeElem| -> Result<Vec<LaurentPoly>> {
        let cw = datum.to_cw(h, x)?;
        Ok((0..n)
            .map(|j| {
                let mut acc = LaurentPoly::zero();
                for (w, c) in cw.iter().enumerate() {
                    let m = minv.get(w, j);
                    if !c.is_zero() && !m.is_zero() {
                        acc = acc.add(&c.scale(m));
                    }
                }
                acc
            })
            .collect())
    };
    let gens = h.group().rank();
    let jobs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..gens).map(move |s| (j, s))).collect();
    let coords: Vec<((usize, usize), Vec<LaurentPoly>)> = jobs
        .par_iter()
        .map(|&(j, s)| Ok(((j, s), to_cell(&h.t_gen_left(s, &datum.elems_t[j]))?)))
        .collect::<Result<_>>()?;
    let coords: BTreeMap<(usize, usize), Vec<LaurentPoly>> = coords.into_iter().collect();
    let mut bad = Vec::new();
    for (&(j, gen), c) in &coords {
        let (l, s, t) = datum.index[j];
        let ok = c.iter().enumerate().all(|(k, x)| {
            if x.is_zero() {
                return true;
            }
            let (m, _, t2) = datum.index[k];
            if m == l {
                t2 == t
            } else {
                datum.order.lt(m, l)
            }
        });
        // r(s', s) read at t must equal the one read at t = 0
        let j0 = datum.position(l, s, 0);
        let base = &coords[&(j0, gen)];
        let same = (0..datum.dims[l]).all(|s2| {
            let k = datum.position(l, s2, t);
            let k0 = datum.position(l, s2, 0);
            c[k] == base[k0]
        });
        if !ok || !same {
            bad.push((l, gen, s, t));
        }
    }
    report.c3 = bad;
    Ok(report)
}

/// `ε^g ↦ ε^{α(g)}` with `α(e_i) = images[i]`.
pub fn alpha_map(images: &[ExponentVec]) -> impl Fn(&ExponentVec) -> ExponentVec + '_ {
    move |g: &ExponentVec| {
        let k2 = images.first().map_or(0, |x| x.rank());
        g.coords()
            .iter()
            .enumerate()
            .fold(ExponentVec::zero(k2), |acc, (i, &c)| &acc + &images[i].scale(c))
    }
}

/// Images of the unit vectors sending each source weight to the target
/// weight; needs every source weight to be a unit vector.
pub fn alpha_for_target(source: &HeckeAlgebra, target: &HeckeAlgebra) -> Result<Vec<ExponentVec>> {
    let k = source.gamma_rank();
    let mut images: Vec<Option<ExponentVec>> = vec![None; k];
    for s in 0..source.group().rank() {
        let g = source.weights().generator(s);
        let i = (0..k)
            .find(|&i| g.coords()[i] == 1 && g.coords().iter().filter(|&&c| c != 0).count() == 1)
            .ok_or_else(|| Error::Input("source weights must be unit vectors".into()))?;
        let img = target.weights().generator(s).clone();
        match &images[i] {
            Some(old) if old != &img => {
                return Err(Error::Input("target weights are not constant on a source class".into()))
            }
            _ => images[i] = Some(img),
        }
    }
    images
        .into_iter()
        .map(|x| x.ok_or_else(|| Error::Input("unused coordinate in source weights".into())))
        .collect()
}

fn specialize_elem(x: &HeckeElem, f: &impl Fn(&ExponentVec) -> ExponentVec) -> HeckeElem {
    x.map_coeffs(|p| p.map_exponents(f))
}

/// Apply `ε^g ↦ ε^{α(g)}` to every T-coefficient; the result lives in
/// `target`, whose weights should be the image of the source weights.
pub fn specialize_weight(datum: &CellDatum, images: &[ExponentVec], target: &HeckeAlgebra) -> Result<CellDatum> {
    let k2 = target.gamma_rank();
    if images.iter().any(|g| g.rank() != k2) {
        return Err(Error::Input("specialization images have the wrong rank".into()));
    }
    let f = alpha_map(images);
    Ok(CellDatum {
        cw_t: datum.cw_t.iter().map(|x| specialize_elem(x, &f)).collect(),
        elems_t: datum.elems_t.iter().map(|x| specialize_elem(x, &f)).collect(),
        ..datum.clone()
    })
}

/// Determinant over `K` of the T-coordinate transition matrix.
pub fn transition_det_t(datum: &CellDatum, rank: usize) -> Result<KScalar> {
    let n = datum.len();
    let m = Matrix::from_fn(n, n, |j, w| KScalar::from_poly(datum.elems_t[j].coeff(w).clone(), rank));
    Ok(m.det())
}

/// Sparse element of `J̃_A = A ⊗ J̃`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct JaElem(pub BTreeMap<Elem, LaurentPoly>);

impl JaElem {
    pub fn add_term(&mut self, w: Elem, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(w).or_insert_with(LaurentPoly::zero);
        *e = e.add(c);
        if e.is_zero() {
            self.0.remove(&w);
        }
    }

    pub fn coeff(&self, w: Elem) -> LaurentPoly {
        self.0.get(&w).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (w, c) in &o.0 {
            r.add_term(*w, c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (w, c) in &o.0 {
            r.add_term(*w, &c.neg());
        }
        r
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        let mut r = JaElem::default();
        for (w, c) in &self.0 {
            r.add_term(*w, &c.mul(p));
        }
        r
    }

    pub fn support(&self) -> impl Iterator<Item = Elem> + '_ {
        self.0.keys().copied()
    }
}

/// Product in `J̃_A`.
pub fn ja_multiply(t: &GammaTable, a: &JaElem, b: &JaElem) -> JaElem {
    let mut r = JaElem::default();
    for (&x, cx) in &a.0 {
        for (&y, cy) in &b.0 {
            let c = cx.mul(cy);
            for (z, g) in t.basis_product(x, y).terms() {
                r.add_term(z, &c.scale(g));
            }
        }
    }
    r
}

/// `φ(C_w) = Σ_{d ∈ D̃, z ~_LR d} h_{w,d,z} ñ_d t_z`.
pub fn lusztig_phi(w: Elem, ht: &HTable, t: &GammaTable, lr: &LrPreorder) -> JaElem {
    let mut r = JaElem::default();
    for d in t.d_set() {
        let nd = t.n(d);
        for z in ht.product(w, d).support() {
            if lr.equivalent(z, d) {
                r.add_term(z, &ht.h(w, d, z).scale(nd));
            }
        }
    }
    r
}

/// `φ` on an element written in the C-basis.
pub fn phi(x: &HeckeElem, ht: &HTable, t: &GammaTable, lr: &LrPreorder) -> JaElem {
    assert_eq!(x.basis, Basis::C);
    let mut r = JaElem::default();
    for w in x.support() {
        r = r.add(&lusztig_phi(w, ht, t, lr).scale(x.coeff(w)));
    }
    r
}

/// Failures of unitality, multiplicativity and the filtration property.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhiReport {
    pub unital: bool,
    pub multiplicativity: Vec<(Elem, Elem)>,
    /// `(s, w)` where `φ(C_s) t_w − C_s.t_w` is not strictly below `w`.
    pub filtration: Vec<(usize, Elem)>,
}

impl PhiReport {
    pub fn ok(&self) -> bool {
        self.unital && self.multiplicativity.is_empty() && self.filtration.is_empty()
    }
}

pub fn verify_phi(h: &HeckeAlgebra, ht: &HTable, t: &GammaTable, lr: &LrPreorder) -> PhiReport {
    let g = h.group();
    let n = g.size();
    let one = {
        let mut r = JaElem::default();
        for (w, c) in t.identity_element().terms() {
            r.add_term(w, &LaurentPoly::constant(c.clone(), h.gamma_rank()));
        }
        r
    };
    let phis: Vec<JaElem> = (0..n).into_par_iter().map(|w| lusztig_phi(w, ht, t, lr)).collect();
    let unital = phis[0] == one;
    let pairs: Vec<(Elem, Elem)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    let multiplicativity = pairs
        .par_iter()
        .filter(|&&(x, y)| {
            let mut lhs = JaElem::default();
            let p = ht.product(x, y);
            for z in p.support() {
                lhs = lhs.add(&phis[z].scale(p.coeff(z)));
            }
            lhs != ja_multiply(t, &phis[x], &phis[y])
        })
        .cloned()
        .collect();
    let mut filtration = Vec::new();
    for s in 0..g.rank() {
        let cs = g.generator(s);
        for w in 0..n {
            let mut tw = JaElem::default();
            tw.add_term(w, &LaurentPoly::one(h.gamma_rank()));
            let lhs = ja_multiply(t, &phis[cs], &tw);
            let mut action = JaElem::default();
            let p = ht.product(cs, w);
            for z in p.support() {
                action.add_term(z, p.coeff(z));
            }
            if lhs.sub(&action).support().any(|y| !lr.lt(y, w)) {
                filtration.push((s, w));
            }
        }
    }
    PhiReport {
        unital,
        multiplicativity,
        filtration,
    }
}

/// Violations of `P̃15`, exhaustive or on a seeded sample.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct P15Report {
    pub checked: usize,
    pub exhaustive: bool,
    /// `(x, x', y, w)`.
    pub violations: Vec<(Elem, Elem, Elem, Elem)>,
    pub seed: u64,
}

impl P15Report {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const P15_EXHAUSTIVE_LIMIT: usize = 16;
pub const P15_SAMPLES: usize = 100_000;

fn p15_holds(ht: &HTable, t: &GammaTable, h: &HeckeAlgebra, (x, xp, y, w): (Elem, Elem, Elem, Elem)) -> bool {
    let g = h.group();
    let n = g.size();
    let mut lhs = LaurentPoly::zero();
    let mut rhs = LaurentPoly::zero();
    for u in 0..n {
        let a = t.gamma(w, xp, g.inverse(u));
        if !a.is_zero() {
            lhs = lhs.add(&ht.h(x, u, y).scale(&a));
        }
        let b = t.gamma(u, xp, g.inverse(y));
        if !b.is_zero() {
            rhs = rhs.add(&ht.h(x, w, u).scale(&b));
        }
    }
    lhs == rhs
}

/// `Σ_u γ̃_{w,x',u^{-1}} h_{x,u,y} = Σ_u h_{x,w,u} γ̃_{u,x',y^{-1}}` for `w ~_LR y`.
pub fn verify_p15_tilde(h: &HeckeAlgebra, ht: &HTable, t: &GammaTable, lr: &LrPreorder, seed: u64) -> P15Report {
    let n = h.size();
    let exhaustive = n <= P15_EXHAUSTIVE_LIMIT;
    let quads: Vec<(Elem, Elem, Elem, Elem)> = if exhaustive {
        let mut v = Vec::new();
        for y in 0..n {
            for w in 0..n {
                if !lr.equivalent(w, y) {
                    continue;
                }
                for x in 0..n {
                    for xp in 0..n {
                        v.push((x, xp, y, w));
                    }
                }
            }
        }
        v
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..P15_SAMPLES)
            .map(|_| {
                let y = rng.gen_range(0..n);
                let cell = &lr.cells()[lr.cell_of(y)];
                let w = cell[rng.gen_range(0..cell.len())];
                (rng.gen_range(0..n), rng.gen_range(0..n), y, w)
            })
            .collect()
    };
    let violations = quads
        .par_iter()
        .filter(|&&q| !p15_holds(ht, t, h, q))
        .cloned()
        .collect();
    P15Report {
        checked: quads.len(),
        exhaustive,
        violations,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotic::GammaTable;
    use crate::reps::tests::algebra;
    use crate::reps::{builtin_family, prepare, FamilyKind};

    pub(crate) struct Setup {
        pub h: HeckeAlgebra,
        pub kl: KlBasis,
        pub reps: Vec<PreparedRep>,
        pub table: GammaTable,
        pub ht: HTable,
        pub lr: LrPreorder,
    }

    pub(crate) fn setup(name: &str, w: Option<Vec<Vec<i32>>>, pr: Option<Vec<usize>>) -> Setup {
        let h = algebra(name, w, pr);
        let kl = KlBasis::compute(&h).unwrap();
        let fam = builtin_family(&h, FamilyKind::Auto).unwrap();
        let reps: Vec<_> = fam.iter().map(|r| prepare(r, &h).unwrap()).collect();
        let tensors: Vec<_> = reps.iter().map(|r| r.leading.clone()).collect();
        let table = GammaTable::build(&tensors, h.group_arc()).unwrap();
        let ht = HTable::build(&h, &kl).unwrap();
        let lr = LrPreorder::compute(&h, &kl);
        Setup { h, kl, reps, table, ht, lr }
    }

    #[test]
    fn primes() {
        assert_eq!(rational_primes(&Q::new(-12, 35)), vec![2, 3, 5, 7]);
        assert!(rational_primes(&Q::from_int(1)).is_empty());
    }

    #[test]
    fn a1_datum() {
        let st = setup("A1", None, None);
        let d = cellular_basis(&st.h, &st.kl, &st.reps, &st.table, &st.lr).unwrap();
        let idx = d.labels.iter().position(|l| l == "(2)").unwrap();
        let sgn = d.labels.iter().position(|l| l == "(1,1)").unwrap();
        assert_eq!(d.element(idx, 0, 0), &st.kl.c(&st.h, 0));
        assert_eq!(d.element(sgn, 0, 0), &st.kl.c(&st.h, 1));
        assert!(verify_cell_datum(&d, &st.h).unwrap().ok());
        let phi_s = lusztig_phi(1, &st.ht, &st.table, &st.lr);
        let v = st.h.v(0);
        assert_eq!(phi_s.coeff(1), v.add(&v.bar()));
        assert!(phi_s.coeff(0).is_zero());
        assert!(verify_phi(&st.h, &st.ht, &st.table, &st.lr).ok());
        let p = verify_p15_tilde(&st.h, &st.ht, &st.table, &st.lr, 0);
        assert!(p.ok() && p.exhaustive);
    }

    #[test]
    fn a2_order_and_datum() {
        let st = setup("A2", None, None);
        let d = cellular_basis(&st.h, &st.kl, &st.reps, &st.table, &st.lr).unwrap();
        let pos = |l: &str| d.labels.iter().position(|x| x == l).unwrap();
        let (idx, refl, sgn) = (pos("(3)"), pos("(2,1)"), pos("(1,1,1)"));
        assert_eq!(d.order.cmp(sgn, refl), LambdaRel::Less);
        assert_eq!(d.order.cmp(refl, idx), LambdaRel::Less);
        assert_eq!(d.order.cmp(idx, sgn), LambdaRel::Greater);
        assert!(d.order.is_partial_order());
        assert_eq!(d.order.hasse_edges().len(), 2);
        let rep = verify_cell_datum(&d, &st.h).unwrap();
        assert!(rep.ok(), "{rep:?}");
        // a_μ < a_λ whenever λ ◁ μ
        for l in 0..3 {
            for m in 0..3 {
                if d.order.lt(l, m) {
                    assert!(st.h.order().cmp(&st.reps[m].schur.a_lambda, &st.reps[l].schur.a_lambda).is_lt());
                }
            }
        }
    }

    #[test]
    fn swapped_datum_fails() {
        let st = setup("I2:4", None, None);
        let mut d = cellular_basis(&st.h, &st.kl, &st.reps, &st.table, &st.lr).unwrap();
        let a = d.index.iter().position(|&(l, _, _)| d.dims[l] == 2).unwrap();
        let b = d.index.iter().position(|&(l, _, _)| d.dims[l] == 1 && d.order.lt(l, d.index[a].0)).unwrap();
        d.swap_elements(a, b);
        assert!(!verify_cell_datum(&d, &st.h).unwrap().c3.is_empty());
    }

    #[test]
    fn dihedral_b_matrices() {
        for m in [5u32, 6] {
            let st = setup(&format!("I2:{m}"), None, None);
            let mut prod = FieldScalar::one();
            for r in st.reps.iter().filter(|r| r.dim() == 2) {
                prod = prod.mul(&b_matrix(r, &st.h).unwrap().det);
            }
            let expect = if m % 2 == 1 { FieldScalar::one() } else { FieldScalar::from_int(m as i64 / 2) };
            assert_eq!(prod, expect);
        }
    }

    #[test]
    fn i2_4_phi_multiplicative() {
        let st = setup("I2:4", None, None);
        assert!(verify_phi(&st.h, &st.ht, &st.table, &st.lr).ok());
        assert!(verify_p15_tilde(&st.h, &st.ht, &st.table, &st.lr, 0).ok());
    }

    #[test]
    fn identity_specialization() {
        let st = setup("B2", Some(vec![vec![0, 1], vec![1, 0]]), Some(vec![1, 0]));
        let d = cellular_basis(&st.h, &st.kl, &st.reps, &st.table, &st.lr).unwrap();
        let id = vec![ExponentVec::unit(2, 0), ExponentVec::unit(2, 1)];
        let s = specialize_weight(&d, &id, &st.h).unwrap();
        assert_eq!(s.elems_t, d.elems_t);
        let eq = algebra("B2", None, None);
        let alpha = alpha_for_target(&st.h, &eq).unwrap();
        let s = specialize_weight(&d, &alpha, &eq).unwrap();
        let det = transition_det_t(&s, 1).unwrap();
        let p = det.to_laurent().unwrap();
        assert!(p.is_monomial());
        assert!(verify_cell_datum(&s, &eq).unwrap().ok());
    }
    #[test]
    fn i2_6_collapses_to_one_variable() {
        let st = setup("I2:6", Some(vec![vec![0, 1], vec![1, 0]]), Some(vec![1, 0]));
        let d = cellular_basis(&st.h, &st.kl, &st.reps, &st.table, &st.lr).unwrap();
        let target = algebra("I2:6", Some(vec![vec![3], vec![1]]), None);
        let alpha = alpha_for_target(&st.h, &target).unwrap();
        assert_eq!(alpha, vec![ExponentVec::from_slice(&[1]), ExponentVec::from_slice(&[3])]);
        let s = specialize_weight(&d, &alpha, &target).unwrap();
        for (x, y) in d.elems_t.iter().zip(&s.elems_t) {
            for w in 0..x.len() {
                // eps^(i,j) becomes eps^(i + 3j), summed by hand
                let mut terms = Vec::new();
                for (g, c) in x.coeff(w).terms() {
                    let e = g.coords()[0] + 3 * g.coords()[1];
                    terms.push((ExponentVec::from_slice(&[e]), c.clone()));
                }
                assert_eq!(y.coeff(w), &LaurentPoly::from_terms(terms));
            }
        }
        let rep = verify_cell_datum(&s, &target).unwrap();
        assert!(rep.ok(), "{rep:?}");
    }
}
