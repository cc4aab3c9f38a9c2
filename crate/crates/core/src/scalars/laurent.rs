//! Laurent polynomials `A = F[Γ]` with sparse sorted storage.

use std::cmp::Ordering;
use std::fmt;

use super::exponent::{ExponentVec, MonomialOrder};
use super::field::{FieldScalar, RealCyclotomicField};
use super::rational::Q;
use crate::error::{Error, Result};

/// Finite sum `Σ c_g ε^g`. Terms are sorted by the storage order of
/// [`ExponentVec`] and never carry a zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(ExponentVec, FieldScalar)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(FieldScalar::one(), ExponentVec::zero(rank))
    }

    pub fn constant(c: FieldScalar, rank: usize) -> Self {
        Self::monomial(c, ExponentVec::zero(rank))
    }

    pub fn from_int(n: i64, rank: usize) -> Self {
        Self::constant(FieldScalar::from_int(n), rank)
    }

    pub fn monomial(c: FieldScalar, g: ExponentVec) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: vec![(g, c)] }
    }

    /// `ε^g`.
    pub fn eps(g: ExponentVec) -> Self {
        Self::monomial(FieldScalar::one(), g)
    }

    /// Build from arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(mut t: Vec<(ExponentVec, FieldScalar)>) -> Self {
        t.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(ExponentVec, FieldScalar)> = Vec::with_capacity(t.len());
        for (g, c) in t {
            match out.last_mut() {
                Some((h, d)) if *h == g => *d = d.add(&c),
                _ => out.push((g, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LaurentPoly { terms: out }
    }

    pub fn terms(&self) -> &[(ExponentVec, FieldScalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Rank of the exponent group, if any term is present.
    pub fn rank(&self) -> Option<usize> {
        self.terms.first().map(|(g, _)| g.rank())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    /// Support contained in `{0}`.
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(g, _)| g.is_zero())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coeff(&self, g: &ExponentVec) -> FieldScalar {
        match self.terms.binary_search_by(|(h, _)| h.cmp(g)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => FieldScalar::zero(),
        }
    }

    /// Coefficient at the zero exponent.
    pub fn constant_coeff(&self) -> FieldScalar {
        match self.rank() {
            Some(k) => self.coeff(&ExponentVec::zero(k)),
            None => FieldScalar::zero(),
        }
    }

    pub fn field(&self) -> Option<&'static RealCyclotomicField> {
        self.terms.iter().find_map(|(_, c)| c.field())
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].1.add(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        LaurentPoly { terms: out }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(g, d)| (g.clone(), d.mul(c))).collect(),
        }
    }

    pub fn scale_q(&self, q: &Q) -> Self {
        self.scale(&FieldScalar::from_q(q.clone()))
    }

    /// Multiply by `ε^h`.
    pub fn shift(&self, h: &ExponentVec) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(g, c)| (g + h, c.clone())).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if o.terms.len() == 1 {
            let (h, c) = &o.terms[0];
            return LaurentPoly {
                terms: self.terms.iter().map(|(g, d)| (g + h, d.mul(c))).collect(),
            };
        }
        if self.terms.len() == 1 {
            return o.mul(self);
        }
        let mut t = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (g, c) in &self.terms {
            for (h, d) in &o.terms {
                t.push((g + h, c.mul(d)));
            }
        }
        Self::from_terms(t)
    }

    pub fn pow(&self, e: u32) -> Self {
        let k = self.rank().unwrap_or(1);
        let mut acc = Self::one(k);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The bar involution `ε^g ↦ ε^{-g}` (coefficients are real, so fixed).
    pub fn bar(&self) -> Self {
        let mut terms: Vec<_> = self.terms.iter().map(|(g, c)| (-g, c.clone())).collect();
        terms.reverse();
        LaurentPoly { terms }
    }

    /// Smallest exponent in the support under `ord`.
    pub fn min_exponent(&self, ord: &MonomialOrder) -> Result<ExponentVec> {
        self.min_term(ord).map(|(g, _)| g.clone()).ok_or(Error::UndefinedValuation)
    }

    pub fn max_exponent(&self, ord: &MonomialOrder) -> Result<ExponentVec> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(&a.0, &b.0))
            .map(|(g, _)| g.clone())
            .ok_or(Error::UndefinedValuation)
    }

    /// Term with the smallest exponent under `ord`.
    pub fn min_term(&self, ord: &MonomialOrder) -> Option<&(ExponentVec, FieldScalar)> {
        self.terms.iter().min_by(|a, b| ord.cmp(&a.0, &b.0))
    }

    /// Terms whose exponent satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&ExponentVec) -> bool) -> Self {
        LaurentPoly {
            terms: self.terms.iter().filter(|(g, _)| keep(g)).cloned().collect(),
        }
    }

    /// Part supported on `Γ_{>0}`.
    pub fn positive_part(&self, ord: &MonomialOrder) -> Self {
        self.filter(|g| ord.is_positive(g))
    }

    /// Part supported on `Γ_{≥0}`.
    pub fn nonnegative_part(&self, ord: &MonomialOrder) -> Self {
        self.filter(|g| ord.is_nonnegative(g))
    }

    /// Every exponent strictly negative under `ord`.
    pub fn is_strictly_negative(&self, ord: &MonomialOrder) -> bool {
        self.terms.iter().all(|(g, _)| ord.sign(g) == Ordering::Less)
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// Apply a group homomorphism to every exponent.
    pub fn map_exponents(&self, f: impl Fn(&ExponentVec) -> ExponentVec) -> Self {
        Self::from_terms(self.terms.iter().map(|(g, c)| (f(g), c.clone())).collect())
    }

    /// Image under `ε^g ↦ 1`.
    pub fn eval_at_one(&self) -> FieldScalar {
        self.terms.iter().fold(FieldScalar::zero(), |acc, (_, c)| acc.add(c))
    }

    /// Attach the coefficient field to rational coefficients (for parsing).
    pub fn with_field(self, f: Option<&'static RealCyclotomicField>) -> Self {
        LaurentPoly {
            terms: self.terms.into_iter().map(|(g, c)| (g, c.with_field(f))).collect(),
        }
    }

    /// Exact quotient by `d`, or `None` if `d` does not divide `self`.
    ///
    /// Long division on the storage-order leading term; the quotient support
    /// is confined to the coordinate box forced by Newton polytopes, which
    /// makes the loop terminate.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.terms.len() == 1 {
            let (h, c) = &d.terms[0];
            let ci = c.inv().ok()?;
            return Some(LaurentPoly {
                terms: self.terms.iter().map(|(g, x)| (g - h, x.mul(&ci))).collect(),
            });
        }
        let k = d.terms[0].0.rank();
        let bbox = |p: &Self| {
            let mut lo = vec![i32::MAX; k];
            let mut hi = vec![i32::MIN; k];
            for (g, _) in &p.terms {
                for i in 0..k {
                    lo[i] = lo[i].min(g.0[i]);
                    hi[i] = hi[i].max(g.0[i]);
                }
            }
            (lo, hi)
        };
        let (nlo, nhi) = bbox(self);
        let (dlo, dhi) = bbox(d);
        let qlo: Vec<i32> = (0..k).map(|i| nlo[i] - dlo[i]).collect();
        let qhi: Vec<i32> = (0..k).map(|i| nhi[i] - dhi[i]).collect();
        if (0..k).any(|i| qlo[i] > qhi[i]) {
            return None;
        }
        let (dg, dc) = d.terms.last().unwrap();
        let dci = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut q = Vec::new();
        while let Some((g, c)) = rem.terms.last().cloned() {
            let e = &g - dg;
            if (0..k).any(|i| e.0[i] < qlo[i] || e.0[i] > qhi[i]) {
                return None;
            }
            let coef = c.mul(&dci);
            rem = rem.sub(&d.shift(&e).scale(&coef));
            q.push((e, coef));
        }
        Some(Self::from_terms(q))
    }

    /// Parse the canonical text form.
    pub fn parse(s: &str, field: Option<&'static RealCyclotomicField>) -> Result<Self> {
        let t = s.trim();
        if t == "0" {
            return Ok(Self::zero());
        }
        let err = |m: &str| Error::Parse(format!("laurent polynomial `{s}`: {m}"));
        let mut terms = Vec::new();
        for piece in split_top_level(t) {
            let piece = piece.trim();
            let pos = piece.rfind("eps[").ok_or_else(|| err("missing eps[...]"))?;
            let (cpart, epart) = piece.split_at(pos);
            let g: ExponentVec = epart
                .strip_prefix("eps")
                .unwrap()
                .parse()
                .map_err(|_| err("bad exponent"))?;
            let cpart = cpart.trim_end();
            let cpart = cpart.strip_suffix('*').unwrap_or(cpart).trim();
            let c = match cpart {
                "" => FieldScalar::one(),
                "-" => FieldScalar::from_int(-1),
                c => {
                    let c = c
                        .strip_prefix('(')
                        .and_then(|x| x.strip_suffix(')'))
                        .unwrap_or(c);
                    FieldScalar::parse(c, field)?
                }
            };
            terms.push((g, c.with_field(field)));
        }
        Ok(Self::from_terms(terms))
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b'+' if depth == 0 && i > 0 && b[i - 1] == b' ' => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    out.push(&s[start..]);
    out
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.coeffs().iter().filter(|x| !x.is_zero()).count() > 1 {
                write!(f, "({c})*eps{g}")?;
            } else {
                write!(f, "{c}*eps{g}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::real_cyclotomic;

    fn e(c: &[i32]) -> ExponentVec {
        ExponentVec::from_slice(c)
    }

    fn v(n: i32) -> LaurentPoly {
        LaurentPoly::eps(e(&[n]))
    }

    #[test]
    fn arithmetic_and_bar() {
        let p = v(1).add(&v(-1));
        assert_eq!(p.mul(&p), v(2).add(&LaurentPoly::from_int(2, 1)).add(&v(-2)));
        assert!(p.is_bar_invariant());
        assert_eq!(v(1).sub(&v(1)), LaurentPoly::zero());
    }

    #[test]
    fn min_exponent_examples() {
        let ord = MonomialOrder::natural(1);
        assert_eq!(LaurentPoly::one(1).min_exponent(&ord).unwrap(), e(&[0]));
        assert_eq!(v(1).add(&v(-1)).min_exponent(&ord).unwrap(), e(&[-1]));
        let p = LaurentPoly::eps(e(&[2, -1])).add(&LaurentPoly::eps(e(&[0, 3])));
        let ord2 = MonomialOrder::new(vec![1, 0]).unwrap();
        assert_eq!(p.min_exponent(&ord2).unwrap(), e(&[2, -1]));
        assert_eq!(LaurentPoly::zero().min_exponent(&ord), Err(Error::UndefinedValuation));
    }

    #[test]
    fn exact_division() {
        let a = v(1).add(&v(3));
        let b = LaurentPoly::one(1).add(&v(2));
        assert_eq!(a.exact_div(&b), Some(v(1)));
        assert_eq!(b.exact_div(&v(1).add(&LaurentPoly::one(1))), None);
        let x = LaurentPoly::eps(e(&[1, 0]));
        let y = LaurentPoly::eps(e(&[0, 1]));
        let f = x.add(&y.scale_q(&Q::from_int(-3)));
        let g = x.mul(&y).add(&LaurentPoly::one(2)).add(&y.bar());
        assert_eq!(f.mul(&g).exact_div(&g), Some(f.clone()));
        assert_eq!(f.mul(&g).add(&x).exact_div(&g), None);
    }

    #[test]
    fn canonical_text_round_trip() {
        let f = real_cyclotomic(5);
        let d = f.generator();
        let p = LaurentPoly::from_terms(vec![
            (e(&[0, -1]), FieldScalar::from_int(-2)),
            (e(&[1, 2]), d.add(&FieldScalar::one())),
            (e(&[0, 0]), FieldScalar::from_q(Q::new(1, 3))),
        ]);
        let s = p.to_string();
        assert_eq!(s, "-2*eps[0,-1] + 1/3*eps[0,0] + (1+d)*eps[1,2]");
        assert_eq!(LaurentPoly::parse(&s, Some(f)).unwrap(), p);
        assert_eq!(LaurentPoly::parse("0", None).unwrap(), LaurentPoly::zero());
    }
}
