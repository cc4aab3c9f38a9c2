//! Elements of the fraction field `K` of `A`.
//!
//! Denominators that show up in practice (seminormal forms, Gram-Schmidt on
//! small forms) are products of binomials `1 ± ε^g`. We keep the denominator
//! factored into pieces `Φ_d(ε^h)` along primitive directions `h`, plus a
//! list of leftover factors for anything else. Factored storage lets us
//! cancel by cheap trial division, so entries of long matrix words stay
//! small without a multivariate gcd.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;

use super::exponent::{ExponentVec, MonomialOrder};
use super::field::{cyclotomic_poly, FieldScalar, RealCyclotomicField};
use super::laurent::LaurentPoly;
use super::ValuationData;
use crate::error::{Error, Result};

/// `Φ_d(ε^h)`, normalized to constant term 1 (so `d = 1` means `1 - ε^h`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
struct CycFactor {
    d: u32,
    dir: ExponentVec,
}

fn cyc_coeffs(d: u32) -> &'static [i64] {
    static CACHE: OnceLock<std::sync::Mutex<HashMap<u32, &'static [i64]>>> = OnceLock::new();
    let m = CACHE.get_or_init(Default::default);
    let mut g = m.lock().unwrap();
    g.entry(d).or_insert_with(|| {
        let mut c = cyclotomic_poly(d);
        if d == 1 {
            c = vec![1, -1];
        }
        Box::leak(c.into_boxed_slice())
    })
}

fn euler_phi(d: u32) -> u32 {
    (1..=d).filter(|k| k.gcd(&d) == 1).count() as u32
}

impl CycFactor {
    fn degree(&self) -> i32 {
        (cyc_coeffs(self.d).len() - 1) as i32
    }

    fn poly(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            cyc_coeffs(self.d)
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (self.dir.scale(i as i32), FieldScalar::from_int(c)))
                .collect(),
        )
    }
}

/// Primitive direction and multiplicity of `g` with first nonzero coordinate
/// positive. `g` must be nonzero.
fn primitive(g: &ExponentVec) -> (ExponentVec, i32) {
    let mut n = 0i32;
    for &c in g.coords() {
        n = n.gcd(&c);
    }
    let first = g.coords().iter().find(|&&c| c != 0).copied().unwrap();
    let n = if first < 0 { -n } else { n };
    (ExponentVec(g.0.iter().map(|c| c / n).collect()), n)
}

/// Exact division of `p` by `f(ε^h)` where `f` has nonzero constant term.
fn div_along(p: &LaurentPoly, h: &ExponentVec, f: &[i64]) -> Option<LaurentPoly> {
    if p.is_zero() {
        return Some(LaurentPoly::zero());
    }
    let pivot = h.coords().iter().position(|&c| c != 0).unwrap();
    let hp = h.0[pivot];
    // group by residue class along h
    let mut classes: BTreeMap<ExponentVec, Vec<(i32, FieldScalar)>> = BTreeMap::new();
    for (g, c) in p.terms() {
        let t = g.0[pivot].div_euclid(hp);
        let base = g - &h.scale(t);
        classes.entry(base).or_default().push((t, c.clone()));
    }
    let deg = f.len() - 1;
    let f0 = FieldScalar::from_int(f[0]);
    let f0i = f0.inv().ok()?;
    let fs: Vec<FieldScalar> = f.iter().map(|&c| FieldScalar::from_int(c)).collect();
    let mut out = Vec::new();
    for (base, mut ts) in classes {
        ts.sort_by_key(|x| x.0);
        let tmin = ts[0].0;
        let len = (ts.last().unwrap().0 - tmin) as usize + 1;
        if len <= deg {
            return None;
        }
        let mut a = vec![FieldScalar::zero(); len];
        for (t, c) in ts {
            a[(t - tmin) as usize] = c;
        }
        let qlen = len - deg;
        let mut q: Vec<FieldScalar> = Vec::with_capacity(qlen);
        for i in 0..qlen {
            let mut acc = a[i].clone();
            for j in 1..=deg.min(i) {
                if !fs[j].is_zero() && !q[i - j].is_zero() {
                    acc = acc.sub(&fs[j].mul(&q[i - j]));
                }
            }
            q.push(acc.mul(&f0i));
        }
        for (i, ai) in a.iter().enumerate().skip(qlen) {
            let mut acc = FieldScalar::zero();
            for j in (i + 1 - qlen)..=deg.min(i) {
                if !fs[j].is_zero() {
                    acc = acc.add(&fs[j].mul(&q[i - j]));
                }
            }
            if acc != *ai {
                return None;
            }
        }
        for (i, c) in q.into_iter().enumerate() {
            if !c.is_zero() {
                out.push((&base + &h.scale(tmin + i as i32), c));
            }
        }
    }
    Some(LaurentPoly::from_terms(out))
}

/// Normalize a polynomial so its storage-smallest term is `1·ε^0`.
/// Returns `(unit, shift, normalized)` with `p = unit · ε^shift · normalized`.
fn normalize_poly(p: &LaurentPoly) -> (FieldScalar, ExponentVec, LaurentPoly) {
    let (g, c) = p.terms()[0].clone();
    let ci = c.inv().expect("nonzero");
    (c, g.clone(), p.shift(&-&g).scale(&ci))
}

/// The factored denominator.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
struct Denominator {
    cyc: BTreeMap<CycFactor, u32>,
    /// Leftover factors, each normalized as in [`normalize_poly`].
    rest: Vec<(LaurentPoly, u32)>,
}

impl Denominator {
    fn is_one(&self) -> bool {
        self.cyc.is_empty() && self.rest.is_empty()
    }

    fn expand(&self, rank: usize) -> LaurentPoly {
        let mut p = LaurentPoly::one(rank);
        for (f, &m) in &self.cyc {
            p = p.mul(&f.poly().pow(m));
        }
        for (r, m) in &self.rest {
            p = p.mul(&r.pow(*m));
        }
        p
    }

    fn add_rest(&mut self, r: LaurentPoly, m: u32) {
        if let Some(e) = self.rest.iter_mut().find(|(x, _)| *x == r) {
            e.1 += m;
        } else {
            self.rest.push((r, m));
        }
    }

    /// Product `self · o`.
    fn mul(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (f, &m) in &o.cyc {
            *out.cyc.entry(f.clone()).or_insert(0) += m;
        }
        for (r, m) in &o.rest {
            out.add_rest(r.clone(), *m);
        }
        out
    }

    /// Least common multiple in the factored sense.
    fn lcm(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (f, &m) in &o.cyc {
            let e = out.cyc.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        for (r, m) in &o.rest {
            if let Some(e) = out.rest.iter_mut().find(|(x, _)| x == r) {
                e.1 = e.1.max(*m);
            } else {
                out.rest.push((r.clone(), *m));
            }
        }
        out
    }

    /// `self / o` as a polynomial; `o` must divide `self` factorwise.
    fn cofactor(&self, o: &Self, rank: usize) -> LaurentPoly {
        let mut p = LaurentPoly::one(rank);
        for (f, &m) in &self.cyc {
            let k = m - o.cyc.get(f).copied().unwrap_or(0);
            if k > 0 {
                p = p.mul(&f.poly().pow(k));
            }
        }
        for (r, m) in &self.rest {
            let have = o.rest.iter().find(|(x, _)| x == r).map(|e| e.1).unwrap_or(0);
            if m - have > 0 {
                p = p.mul(&r.pow(m - have));
            }
        }
        p
    }
}

/// Split `p` into unit, monomial, cyclotomic factors and leftover.
fn factor(p: &LaurentPoly) -> (FieldScalar, ExponentVec, Denominator) {
    let (unit, shift, mut q) = normalize_poly(p);
    let mut den = Denominator::default();
    if q.is_monomial() {
        return (unit, shift, den);
    }
    // binomial 1 ± ε^{n h}
    if q.len() == 2 {
        let (g, c) = &q.terms()[1];
        if c.is_one() || c == &FieldScalar::from_int(-1) {
            let (h, n) = primitive(g);
            let n = n as u32;
            let ds: Vec<u32> = if c.is_one() {
                (1..=2 * n).filter(|d| (2 * n) % d == 0 && n % d != 0).collect()
            } else {
                (1..=n).filter(|d| n % d == 0).collect()
            };
            for d in ds {
                den.cyc.insert(CycFactor { d, dir: h.clone() }, 1);
            }
            return (unit, shift, den);
        }
    }
    // trial division along directions present in the support
    let mut dirs: Vec<ExponentVec> = Vec::new();
    for (g, _) in q.terms().iter().skip(1) {
        let (h, _) = primitive(g);
        if !dirs.contains(&h) {
            dirs.push(h);
        }
    }
    for h in dirs {
        let pivot = h.coords().iter().position(|&c| c != 0).unwrap();
        let span = {
            let ts: Vec<i32> = q.terms().iter().map(|(g, _)| g.0[pivot].div_euclid(h.0[pivot])).collect();
            (ts.iter().max().unwrap() - ts.iter().min().unwrap()) as u32
        };
        if span == 0 {
            continue;
        }
        for d in 1..=(4 * span + 6) {
            if euler_phi(d) > span {
                continue;
            }
            let f = cyc_coeffs(d);
            while q.len() > 1 {
                match div_along(&q, &h, f) {
                    Some(r) => {
                        *den.cyc.entry(CycFactor { d, dir: h.clone() }).or_insert(0) += 1;
                        q = r;
                    }
                    None => break,
                }
            }
        }
    }
    let (u2, s2, q) = normalize_poly(&q);
    if !q.is_one() {
        den.add_rest(q, 1);
    }
    (unit.mul(&u2), &shift + &s2, den)
}

/// A ratio `num / den` with a factored, normalized denominator.
#[derive(Clone)]
pub struct KScalar {
    num: LaurentPoly,
    den: Denominator,
    rank: usize,
}

impl KScalar {
    pub fn zero(rank: usize) -> Self {
        KScalar {
            num: LaurentPoly::zero(),
            den: Denominator::default(),
            rank,
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::from_poly(LaurentPoly::one(rank), rank)
    }

    pub fn from_poly(p: LaurentPoly, rank: usize) -> Self {
        debug_assert!(p.rank().is_none_or(|k| k == rank));
        KScalar {
            num: p,
            den: Denominator::default(),
            rank,
        }
    }

    pub fn from_scalar(c: FieldScalar, rank: usize) -> Self {
        Self::from_poly(LaurentPoly::constant(c, rank), rank)
    }

    pub fn eps(g: ExponentVec) -> Self {
        let k = g.rank();
        Self::from_poly(LaurentPoly::eps(g), k)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    /// The denominator multiplied out.
    pub fn denominator(&self) -> LaurentPoly {
        self.den.expand(self.rank)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as a Laurent polynomial, if the denominator cancelled.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        if self.den.is_one() || self.num.is_zero() {
            Some(self.num.clone())
        } else {
            None
        }
    }

    fn cancel(mut self) -> Self {
        if self.num.is_zero() {
            self.den = Denominator::default();
            return self;
        }
        let keys: Vec<CycFactor> = self.den.cyc.keys().cloned().collect();
        for f in keys {
            let coeffs = cyc_coeffs(f.d);
            loop {
                let m = self.den.cyc[&f];
                if m == 0 {
                    break;
                }
                match div_along(&self.num, &f.dir, coeffs) {
                    Some(q) => {
                        self.num = q;
                        *self.den.cyc.get_mut(&f).unwrap() -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.cyc.retain(|_, m| *m > 0);
        for i in 0..self.den.rest.len() {
            while self.den.rest[i].1 > 0 {
                match self.num.exact_div(&self.den.rest[i].0) {
                    Some(q) => {
                        self.num = q;
                        self.den.rest[i].1 -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.rest.retain(|(_, m)| *m > 0);
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            let r = KScalar {
                num: self.num.add(&o.num),
                den: self.den.clone(),
                rank: self.rank,
            };
            return if r.den.is_one() { r } else { r.cancel() };
        }
        let l = self.den.lcm(&o.den);
        let a = self.num.mul(&l.cofactor(&self.den, self.rank));
        let b = o.num.mul(&l.cofactor(&o.den, self.rank));
        KScalar {
            num: a.add(&b),
            den: l,
            rank: self.rank,
        }
        .cancel()
    }

    pub fn neg(&self) -> Self {
        KScalar {
            num: self.num.neg(),
            den: self.den.clone(),
            rank: self.rank,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.rank);
        }
        let r = KScalar {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
            rank: self.rank,
        };
        if self.den.is_one() || o.den.is_one() {
            // cancellation can only come from the other numerator
            if r.den.is_one() {
                return r;
            }
        }
        r.cancel()
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        self.mul(&KScalar::from_poly(p.clone(), self.rank))
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        KScalar {
            num: self.num.scale(c),
            den: if c.is_zero() { Denominator::default() } else { self.den.clone() },
            rank: self.rank,
        }
    }

    pub fn shift(&self, g: &ExponentVec) -> Self {
        KScalar {
            num: self.num.shift(g),
            den: self.den.clone(),
            rank: self.rank,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Arithmetic("division by zero in K".into()));
        }
        let (unit, shift, den) = factor(&self.num);
        let num = self
            .den
            .expand(self.rank)
            .shift(&-&shift)
            .scale(&unit.inv()?);
        Ok(KScalar {
            num,
            den,
            rank: self.rank,
        }
        .cancel())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Bar involution `ε^g ↦ ε^{-g}`.
    pub fn bar(&self) -> Self {
        if self.den.is_one() {
            return KScalar::from_poly(self.num.bar(), self.rank);
        }
        let (unit, shift, den) = factor(&self.den.expand(self.rank).bar());
        KScalar {
            num: self.num.bar().shift(&-&shift).scale(&unit.inv().expect("nonzero")),
            den,
            rank: self.rank,
        }
        .cancel()
    }

    /// `(g_x, r_x)` with `x = r_x ε^{g_x}(1+p)/(1+q)`.
    pub fn valuation_data(&self, ord: &MonomialOrder) -> ValuationData {
        let Some((g, c)) = self.num.min_term(ord).cloned() else {
            return ValuationData {
                g: None,
                r: FieldScalar::zero(),
            };
        };
        let mut g = g;
        let mut r = c;
        for (f, &m) in &self.den.cyc {
            let coeffs = cyc_coeffs(f.d);
            if !ord.is_positive(&f.dir) {
                let top = FieldScalar::from_int(*coeffs.last().unwrap());
                g = &g - &f.dir.scale(f.degree() * m as i32);
                if m % 2 == 1 {
                    r = r.mul(&top.inv().unwrap());
                }
            }
        }
        for (p, m) in &self.den.rest {
            let (h, c) = p.min_term(ord).unwrap();
            g = &g - &h.scale(*m as i32);
            r = r.mul(&c.pow(*m).inv().unwrap());
        }
        ValuationData { g: Some(g), r }
    }

    /// Apply `ε^g ↦ ε^{f(g)}`; only defined when the denominator is trivial.
    pub fn map_exponents(&self, f: impl Fn(&ExponentVec) -> ExponentVec, rank: usize) -> Result<Self> {
        match self.to_laurent() {
            Some(p) => Ok(KScalar::from_poly(p.map_exponents(f), rank)),
            None => Err(Error::Arithmetic("specialization of a proper fraction".into())),
        }
    }

    /// Parse `num` or `(num)/(den)` in canonical Laurent text.
    pub fn parse(s: &str, rank: usize, field: Option<&'static RealCyclotomicField>) -> Result<Self> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix('(') {
            if let Some(idx) = find_fraction_split(rest) {
                let num = LaurentPoly::parse(&rest[..idx], field)?;
                let den_s = rest[idx + 2..].trim();
                let den_s = den_s
                    .strip_prefix('(')
                    .and_then(|x| x.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("bad fraction `{s}`")))?;
                let den = LaurentPoly::parse(den_s, field)?;
                return KScalar::from_poly(num, rank).div(&KScalar::from_poly(den, rank));
            }
        }
        Ok(KScalar::from_poly(LaurentPoly::parse(t, field)?, rank))
    }
}

/// Index of the `)/` closing the numerator in `rest` (which follows `(`).
fn find_fraction_split(rest: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in rest.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                if depth == 0 {
                    return rest[i..].starts_with(")/").then_some(i);
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    None
}

impl PartialEq for KScalar {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        // cross-multiplication
        self.num.mul(&o.denominator()) == o.num.mul(&self.denominator())
    }
}

impl fmt::Display for KScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.denominator())
        }
    }
}

impl fmt::Debug for KScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: &[i32]) -> ExponentVec {
        ExponentVec::from_slice(c)
    }

    fn v(n: i32) -> KScalar {
        KScalar::eps(e(&[n]))
    }

    #[test]
    fn binomial_cancellation() {
        let one = KScalar::one(1);
        // (v + v^3) / (1 + v^2) = v
        let x = v(1).add(&v(3)).div(&one.add(&v(2))).unwrap();
        assert_eq!(x.to_laurent(), Some(LaurentPoly::eps(e(&[1]))));
        // (1 - v^6)/(1 - v^2) = 1 + v^2 + v^4
        let y = one.sub(&v(6)).div(&one.sub(&v(2))).unwrap();
        assert_eq!(y.to_laurent().unwrap(), one.add(&v(2)).add(&v(4)).to_laurent().unwrap());
    }

    #[test]
    fn sums_over_common_denominators() {
        let one = KScalar::one(1);
        let a = one.div(&one.sub(&v(2))).unwrap();
        let b = v(2).div(&one.sub(&v(2))).unwrap();
        // 1/(1-q) - q/(1-q) = 1
        assert_eq!(a.sub(&b).to_laurent(), Some(LaurentPoly::one(1)));
        let c = one.div(&one.add(&v(2))).unwrap();
        let s = a.add(&c);
        // 1/(1-q) + 1/(1+q) = 2/(1-q^2)
        let expect = KScalar::from_poly(LaurentPoly::from_int(2, 1), 1)
            .div(&one.sub(&v(4)))
            .unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn general_denominators() {
        let one = KScalar::one(2);
        let x = KScalar::eps(e(&[1, 0]));
        let y = KScalar::eps(e(&[0, 1]));
        let d = one.add(&x).add(&y.mul(&y).scale(&FieldScalar::from_int(3)));
        let z = x.div(&d).unwrap();
        assert_eq!(z.mul(&d), x);
        assert!(z.sub(&z).is_zero());
        assert_eq!(z.add(&z).div(&z).unwrap(), KScalar::from_scalar(FieldScalar::from_int(2), 2));
    }

    #[test]
    fn valuation_of_fractions() {
        let ord = MonomialOrder::natural(1);
        let one = KScalar::one(1);
        let x = v(1).add(&v(3)).div(&one.add(&v(2))).unwrap();
        let vd = x.valuation_data(&ord);
        assert_eq!(vd.g, Some(e(&[1])));
        assert!(vd.r.is_one());
        // 1/(1 - v^-2) = -v^2/(1 - v^2): valuation 2, leading -1
        let y = one.div(&one.sub(&v(-2))).unwrap();
        let vd = y.valuation_data(&ord);
        assert_eq!(vd.g, Some(e(&[2])));
        assert_eq!(vd.r, FieldScalar::from_int(-1));
        // under the reversed sign convention the factor 1 - v^2 leads with -v^2
        let z = one.div(&one.sub(&v(2))).unwrap();
        let vd = z.valuation_data(&ord);
        assert_eq!(vd.g, Some(e(&[0])));
        assert!(vd.r.is_one());
        assert_eq!(KScalar::zero(1).valuation_data(&ord).g, None);
    }

    #[test]
    fn bar_of_fraction() {
        let one = KScalar::one(1);
        let x = v(1).div(&one.sub(&v(2))).unwrap();
        // bar: v^-1/(1 - v^-2) = v/(v^2 - 1) = -v/(1-v^2) = -x
        assert_eq!(x.bar(), x.neg());
    }

    #[test]
    fn text_round_trip() {
        let one = KScalar::one(1);
        let x = v(1).div(&one.sub(&v(2))).unwrap();
        let s = x.to_string();
        assert_eq!(KScalar::parse(&s, 1, None).unwrap(), x);
        assert_eq!(KScalar::parse("1*eps[2]", 1, None).unwrap(), v(2));
    }
}
