//! The coefficient field `F = Q(d)` with `d = 2cos(2π/N)`.
//!
//! Elements are polynomials in `d` with rational coefficients, reduced modulo
//! the minimal polynomial of `d`. Rational elements carry no field reference,
//! so `0` and `1` can be built without knowing `N`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

use smallvec::SmallVec;

use super::rational::Q;
use crate::error::{Error, Result};

/// Polynomial over `Q`, coefficients from low to high degree.
type QPoly = Vec<Q>;

fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[Q], b: &[Q]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[Q], b: &[Q]) -> QPoly {
    let n = a.len().max(b.len());
    let mut out: QPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or(Q::ZERO);
            let y = b.get(i).cloned().unwrap_or(Q::ZERO);
            x.sub(&y)
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by nonzero `b`.
fn poly_divrem(a: &[Q], b: &[Q]) -> (QPoly, QPoly) {
    let mut r: QPoly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Q::ZERO; r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r[r.len() - 1].div(&lead);
        for (i, bi) in b.iter().enumerate() {
            r[k + i] = r[k + i].sub(&c.mul(bi));
        }
        q[k] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn eval_sign_at(p: &[Q], x: &Q) -> i32 {
    let mut acc = Q::ZERO;
    for c in p.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc.signum()
}

/// Integer cyclotomic polynomial `Φ_n`, low to high.
pub(crate) fn cyclotomic_poly(n: u32) -> Vec<i64> {
    fn rec(n: u32, cache: &mut HashMap<u32, QPoly>) -> QPoly {
        if let Some(p) = cache.get(&n) {
            return p.clone();
        }
        // x^n - 1 divided by all Φ_d with d | n, d < n
        let mut num = vec![Q::ZERO; n as usize + 1];
        num[0] = Q::from_int(-1);
        num[n as usize] = Q::ONE;
        for d in 1..n {
            if n % d == 0 {
                let phi = rec(d, cache);
                num = poly_divrem(&num, &phi).0;
            }
        }
        cache.insert(n, num.clone());
        num
    }
    let mut cache = HashMap::new();
    rec(n, &mut cache)
        .iter()
        .map(|c| {
            assert!(c.is_integer());
            c.to_string().parse::<i64>().expect("small cyclotomic coefficient")
        })
        .collect()
}

/// The real subfield `Q(2cos(2π/N))` of the `N`-th cyclotomic field.
pub struct RealCyclotomicField {
    conductor: u32,
    /// Monic minimal polynomial of the generator, low to high.
    minpoly: QPoly,
    /// Rational isolating interval for the generator; refined on demand.
    interval: Mutex<(Q, Q)>,
}

impl fmt::Debug for RealCyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(2cos(2pi/{}))", self.conductor)
    }
}

fn minimal_poly_of_two_cos(n: u32) -> QPoly {
    match n {
        1 => return vec![Q::from_int(-2), Q::ONE],
        2 => return vec![Q::from_int(2), Q::ONE],
        _ => {}
    }
    let phi: Vec<Q> = cyclotomic_poly(n).into_iter().map(Q::from_int).collect();
    let m = (phi.len() - 1) / 2;
    // D_k(y) with x^k + x^{-k} = D_k(x + 1/x)
    let mut dk: Vec<QPoly> = vec![vec![Q::from_int(2)], vec![Q::ZERO, Q::ONE]];
    for k in 2..=m {
        let shifted: QPoly = std::iter::once(Q::ZERO).chain(dk[k - 1].iter().cloned()).collect();
        let next = poly_sub(&shifted, &dk[k - 2]);
        dk.push(next);
    }
    let mut psi: QPoly = vec![phi[m].clone()];
    for k in 1..=m {
        let c = &phi[m + k];
        let term: QPoly = dk[k].iter().map(|x| x.mul(c)).collect();
        let n = psi.len().max(term.len());
        psi = (0..n)
            .map(|i| {
                psi.get(i).cloned().unwrap_or(Q::ZERO).add(&term.get(i).cloned().unwrap_or(Q::ZERO))
            })
            .collect();
    }
    trim(&mut psi);
    psi
}

fn q_from_f64_floor(x: f64, bits: i32) -> Q {
    let scale = 2f64.powi(bits);
    let n = (x * scale).floor() as i64;
    Q::new(n, 1i64 << bits)
}

impl RealCyclotomicField {
    fn new(conductor: u32) -> Self {
        assert!(conductor >= 1);
        let minpoly = minimal_poly_of_two_cos(conductor);
        let approx = 2.0 * (2.0 * std::f64::consts::PI / conductor as f64).cos();
        let mut lo = q_from_f64_floor(approx, 40).sub(&Q::new(1, 1 << 30));
        let mut hi = q_from_f64_floor(approx, 40).add(&Q::new(1, 1 << 30));
        if minpoly.len() == 2 {
            let root = minpoly[0].neg();
            lo = root.clone();
            hi = root;
        } else {
            let (slo, shi) = (eval_sign_at(&minpoly, &lo), eval_sign_at(&minpoly, &hi));
            assert!(slo * shi < 0, "failed to isolate 2cos(2pi/{conductor})");
        }
        RealCyclotomicField {
            conductor,
            minpoly,
            interval: Mutex::new((lo, hi)),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minimal_polynomial(&self) -> &[Q] {
        &self.minpoly
    }

    /// Current rational enclosure of the generator.
    pub fn generator_interval(&self) -> (Q, Q) {
        self.interval.lock().unwrap().clone()
    }

    fn refine(&self, steps: usize) {
        let mut guard = self.interval.lock().unwrap();
        let (lo, hi) = &mut *guard;
        if lo == hi {
            return;
        }
        let slo = eval_sign_at(&self.minpoly, lo);
        for _ in 0..steps {
            let mid = lo.add(hi).mul(&Q::new(1, 2));
            let sm = eval_sign_at(&self.minpoly, &mid);
            if sm == 0 {
                *lo = mid.clone();
                *hi = mid;
                return;
            }
            if sm == slo {
                *lo = mid;
            } else {
                *hi = mid;
            }
        }
    }

    fn reduce(&self, p: &mut QPoly) {
        trim(p);
        let d = self.degree();
        while p.len() > d {
            let top = p.len() - 1;
            let c = p[top].clone();
            let shift = top - d;
            for (i, m) in self.minpoly.iter().enumerate() {
                p[shift + i] = p[shift + i].sub(&c.mul(m));
            }
            trim(p);
        }
    }

    /// The generator `d = 2cos(2π/N)`.
    pub fn generator(&'static self) -> FieldScalar {
        FieldScalar::from_poly(vec![Q::ZERO, Q::ONE], Some(self))
    }

    /// `2cos(2πk/N)` expressed in the generator.
    pub fn two_cos(&'static self, k: i64) -> FieldScalar {
        let n = self.conductor as i64;
        let k = k.rem_euclid(n) as usize;
        let mut prev: QPoly = vec![Q::from_int(2)];
        if k == 0 {
            return FieldScalar::from_poly(prev, Some(self));
        }
        let mut cur: QPoly = vec![Q::ZERO, Q::ONE];
        self.reduce(&mut cur);
        for _ in 1..k {
            let shifted: QPoly = std::iter::once(Q::ZERO).chain(cur.iter().cloned()).collect();
            let mut next = poly_sub(&shifted, &prev);
            self.reduce(&mut next);
            prev = std::mem::replace(&mut cur, next);
        }
        FieldScalar::from_poly(cur, Some(self))
    }
}

static REGISTRY: OnceLock<Mutex<HashMap<u32, &'static RealCyclotomicField>>> = OnceLock::new();

/// The field `Q(2cos(2π/N))`, built once per conductor and shared.
pub fn real_cyclotomic(conductor: u32) -> &'static RealCyclotomicField {
    let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = reg.lock().unwrap();
    map.entry(conductor)
        .or_insert_with(|| Box::leak(Box::new(RealCyclotomicField::new(conductor))))
}

/// An element of `F`.
#[derive(Clone)]
pub struct FieldScalar {
    coeffs: SmallVec<[Q; 2]>,
    field: Option<&'static RealCyclotomicField>,
}

impl FieldScalar {
    pub fn zero() -> Self {
        FieldScalar {
            coeffs: SmallVec::new(),
            field: None,
        }
    }

    pub fn one() -> Self {
        FieldScalar::from_q(Q::ONE)
    }

    pub fn from_int(n: i64) -> Self {
        FieldScalar::from_q(Q::from_int(n))
    }

    pub fn from_q(q: Q) -> Self {
        let mut coeffs = SmallVec::new();
        if !q.is_zero() {
            coeffs.push(q);
        }
        FieldScalar { coeffs, field: None }
    }

    /// Build from a polynomial in the generator; reduces if a field is given.
    pub fn from_poly(mut p: Vec<Q>, field: Option<&'static RealCyclotomicField>) -> Self {
        trim(&mut p);
        match field {
            Some(f) => f.reduce(&mut p),
            None => assert!(p.len() <= 1, "irrational element without a field"),
        }
        FieldScalar {
            coeffs: p.into_iter().collect(),
            field,
        }
    }

    /// Coefficients in the generator, low to high, no trailing zeros.
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn field(&self) -> Option<&'static RealCyclotomicField> {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self.coeffs.len() {
            0 => Some(Q::ZERO),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Whether all coefficients in the generator basis are integers.
    ///
    /// `Z[d]` is the ring of integers of `F`, so this is exactly membership
    /// in the ring of algebraic integers of `F`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(Q::is_integer)
    }

    fn join(&self, o: &Self) -> Option<&'static RealCyclotomicField> {
        match (self.field, o.field) {
            (Some(a), Some(b)) => {
                debug_assert_eq!(a.conductor, b.conductor, "mixing coefficient fields");
                Some(a)
            }
            (a, b) => a.or(b),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut c: SmallVec<[Q; 2]> = (0..n)
            .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => Q::ZERO,
            })
            .collect();
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        FieldScalar {
            coeffs: c,
            field: self.join(o),
        }
    }

    pub fn neg(&self) -> Self {
        FieldScalar {
            coeffs: self.coeffs.iter().map(Q::neg).collect(),
            field: self.field,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, q: &Q) -> Self {
        if q.is_zero() {
            return FieldScalar::zero();
        }
        FieldScalar {
            coeffs: self.coeffs.iter().map(|c| c.mul(q)).collect(),
            field: self.field,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FieldScalar::zero();
        }
        if self.coeffs.len() == 1 {
            let mut r = o.scale(&self.coeffs[0]);
            r.field = self.join(o);
            return r;
        }
        if o.coeffs.len() == 1 {
            let mut r = self.scale(&o.coeffs[0]);
            r.field = self.join(o);
            return r;
        }
        let field = self.join(o).expect("irrational elements carry a field");
        let mut p = poly_mul(&self.coeffs, &o.coeffs);
        field.reduce(&mut p);
        FieldScalar {
            coeffs: p.into_iter().collect(),
            field: Some(field),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Arithmetic("division by zero in coefficient field".into()));
        }
        if self.coeffs.len() == 1 {
            return Ok(FieldScalar {
                coeffs: smallvec::smallvec![self.coeffs[0].inv()],
                field: self.field,
            });
        }
        let field = self.field.expect("irrational elements carry a field");
        // extended Euclid: s*a + t*m = g, with g a nonzero constant
        let m: QPoly = field.minpoly.clone();
        let a: QPoly = self.coeffs.to_vec();
        let (mut r0, mut r1) = (m, a);
        let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![Q::ONE]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r1.is_empty() {
            return Err(Error::Arithmetic("element is not invertible (minimal polynomial reducible?)".into()));
        }
        let c = r1[0].inv();
        let mut s: QPoly = s1.iter().map(|x| x.mul(&c)).collect();
        field.reduce(&mut s);
        Ok(FieldScalar {
            coeffs: s.into_iter().collect(),
            field: Some(field),
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = FieldScalar::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact sign as a real number (-1, 0, 1), via interval refinement of the
    /// generator.
    pub fn signum(&self) -> i32 {
        match self.coeffs.len() {
            0 => return 0,
            1 => return self.coeffs[0].signum(),
            _ => {}
        }
        let field = self.field.expect("irrational elements carry a field");
        loop {
            let (lo, hi) = field.generator_interval();
            let (a, b) = eval_interval(&self.coeffs, &lo, &hi);
            if a.signum() > 0 {
                return 1;
            }
            if b.signum() < 0 {
                return -1;
            }
            if lo == hi {
                // exact rational generator: the enclosure is a point
                return a.signum();
            }
            field.refine(16);
        }
    }

    /// Coordinates in the power basis `1, d, .., d^{D-1}` of `field` (padded).
    pub fn coords_in(&self, field: Option<&'static RealCyclotomicField>) -> Vec<Q> {
        let n = field.map_or(1, |f| f.degree());
        (0..n).map(|i| self.coeffs.get(i).cloned().unwrap_or(Q::ZERO)).collect()
    }

    /// Field norm `N_{F/Q}`: determinant of multiplication by `self`.
    pub fn norm(&self) -> Q {
        let Some(f) = self.field else {
            return self.coeffs.first().cloned().unwrap_or(Q::ZERO);
        };
        let n = f.degree();
        let mut cols = Vec::with_capacity(n);
        let mut basis = FieldScalar::one().with_field(Some(f));
        for _ in 0..n {
            cols.push(self.mul(&basis).coords_in(Some(f)));
            basis = basis.mul(&f.generator());
        }
        let m = crate::linalg::Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
        m.det()
    }

    /// Floating point approximation; for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let x = match self.field {
            Some(f) => 2.0 * (2.0 * std::f64::consts::PI / f.conductor as f64).cos(),
            None => 0.0,
        };
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            let cf = c.numer().to_string().parse::<f64>().unwrap_or(f64::NAN)
                / c.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
            acc = acc * x + cf;
        }
        acc
    }

    /// Attach a field to a rational element (no-op otherwise).
    pub fn with_field(mut self, field: Option<&'static RealCyclotomicField>) -> Self {
        if self.field.is_none() {
            self.field = field;
        }
        self
    }

    /// Parse the canonical text form, e.g. `1/2-3*d+d^2`.
    pub fn parse(s: &str, field: Option<&'static RealCyclotomicField>) -> Result<Self> {
        let err = |m: &str| Error::Parse(format!("field element `{s}`: {m}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err("empty"));
        }
        // split into signed terms
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (i, ch) in t.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.is_empty() && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
                if ch == '-' {
                    cur.push('-');
                }
                continue;
            }
            if ch == '+' && cur.is_empty() {
                continue;
            }
            cur.push(ch);
        }
        if !cur.is_empty() {
            terms.push(cur);
        }
        let mut poly: QPoly = Vec::new();
        for term in terms {
            let (coef, deg) = if let Some(pos) = term.find('d') {
                let (c, rest) = term.split_at(pos);
                let c = c.strip_suffix('*').unwrap_or(c);
                let c = match c {
                    "" | "+" => Q::ONE,
                    "-" => Q::from_int(-1),
                    c => c.parse::<Q>().map_err(|_| err("bad coefficient"))?,
                };
                let deg = match rest.strip_prefix('d').unwrap() {
                    "" => 1usize,
                    r => r
                        .strip_prefix('^')
                        .ok_or_else(|| err("expected ^"))?
                        .parse::<usize>()
                        .map_err(|_| err("bad exponent"))?,
                };
                (c, deg)
            } else {
                (term.parse::<Q>().map_err(|_| err("bad rational"))?, 0)
            };
            if poly.len() <= deg {
                poly.resize(deg + 1, Q::ZERO);
            }
            poly[deg] = poly[deg].add(&coef);
        }
        trim(&mut poly);
        if poly.len() > 1 && field.is_none() {
            return Err(err("generator used but no coefficient field is known"));
        }
        Ok(FieldScalar::from_poly(poly, field))
    }
}

/// Interval enclosure of `Σ c_i x^i` for `x ∈ [lo, hi]`.
fn eval_interval(coeffs: &[Q], lo: &Q, hi: &Q) -> (Q, Q) {
    let mut a = Q::ZERO;
    let mut b = Q::ZERO;
    for c in coeffs.iter().rev() {
        let prods = [a.mul(lo), a.mul(hi), b.mul(lo), b.mul(hi)];
        let mn = prods.iter().min().unwrap().clone();
        let mx = prods.iter().max().unwrap().clone();
        a = mn.add(c);
        b = mx.add(c);
    }
    (a, b)
}

impl PartialEq for FieldScalar {
    fn eq(&self, o: &Self) -> bool {
        self.coeffs == o.coeffs
    }
}

impl Eq for FieldScalar {}

impl Hash for FieldScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl Default for FieldScalar {
    fn default() -> Self {
        FieldScalar::zero()
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.signum() < 0;
            let a = c.abs();
            if !first {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "d")?;
                    } else {
                        write!(f, "d^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn minimal_polynomials() {
        // 2cos(2π/5) = (-1+√5)/2 satisfies y^2 + y - 1
        assert_eq!(minimal_poly_of_two_cos(5), vec![q(-1), q(1), q(1)]);
        // 2cos(π/4)... 2cos(2π/8) = √2: y^2 - 2
        assert_eq!(minimal_poly_of_two_cos(8), vec![q(-2), q(0), q(1)]);
        // 2cos(2π/7): y^3 + y^2 - 2y - 1
        assert_eq!(minimal_poly_of_two_cos(7), vec![q(-1), q(-2), q(1), q(1)]);
        assert_eq!(minimal_poly_of_two_cos(3), vec![q(1), q(1)]);
        assert_eq!(minimal_poly_of_two_cos(4), vec![q(0), q(1)]);
        assert_eq!(minimal_poly_of_two_cos(6), vec![q(-1), q(1)]);
    }

    #[test]
    fn two_cos_values() {
        let f = real_cyclotomic(12);
        // 2cos(2π·3/12) = 0, 2cos(2π·2/12) = 1, 2cos(2π·4/12) = -1
        assert!(f.two_cos(3).is_zero());
        assert_eq!(f.two_cos(2), FieldScalar::one());
        assert_eq!(f.two_cos(4), FieldScalar::from_int(-1));
        assert_eq!(f.two_cos(0), FieldScalar::from_int(2));
        let d = f.generator();
        // d = √3, so d^2 = 3
        assert_eq!(d.mul(&d), FieldScalar::from_int(3));
    }

    #[test]
    fn inverse_and_sign() {
        let f = real_cyclotomic(7);
        let d = f.generator();
        let x = d.mul(&d).sub(&FieldScalar::from_int(2)).add(&d);
        let xi = x.inv().unwrap();
        assert!(x.mul(&xi).is_one());
        for k in 0..7 {
            let c = f.two_cos(k);
            let expect = 2.0 * (2.0 * std::f64::consts::PI * k as f64 / 7.0).cos();
            assert_eq!(c.signum(), if expect > 0.0 { 1 } else { -1 });
            assert!((c.to_f64() - expect).abs() < 1e-9);
        }
        let five = real_cyclotomic(5);
        let a = five.generator(); // (-1+√5)/2 ≈ 0.618
        let tiny = a.sub(&FieldScalar::from_q(Q::new(618033988, 1_000_000_000)));
        assert_eq!(tiny.signum(), 1);
    }

    #[test]
    fn text_round_trip() {
        let f = real_cyclotomic(7);
        let d = f.generator();
        let x = d.mul(&d).scale(&Q::new(-3, 2)).add(&FieldScalar::from_q(Q::new(1, 5))).sub(&d);
        let s = x.to_string();
        assert_eq!(s, "1/5-d-3/2*d^2");
        assert_eq!(FieldScalar::parse(&s, Some(f)).unwrap(), x);
        assert_eq!(FieldScalar::parse("-d", Some(f)).unwrap(), d.neg());
        assert!(FieldScalar::parse("d", None).is_err());
    }
}
