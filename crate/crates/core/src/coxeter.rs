//! Finite Coxeter systems, their elements and weight functions.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{real_cyclotomic, ExponentVec, FieldScalar, MonomialOrder, RealCyclotomicField, Q};

/// Element index into the enumerated table. The identity is always `0`.
pub type Elem = usize;

pub const DEFAULT_BOUND: usize = 100_000;

/// A Coxeter matrix with a name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterSystem {
    name: String,
    m: Vec<Vec<u32>>,
}

impl CoxeterSystem {
    pub fn from_matrix(name: impl Into<String>, m: Vec<Vec<u32>>) -> Result<Self> {
        let n = m.len();
        if n == 0 || n > 32 {
            return Err(Error::Input(format!("rank {n} outside 1..=32")));
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input("Coxeter matrix is not square".into()));
            }
            for (j, &x) in row.iter().enumerate() {
                if i == j && x != 1 {
                    return Err(Error::Input(format!("m[{i}][{i}] must be 1")));
                }
                if i != j && x < 2 {
                    return Err(Error::Input(format!("m[{i}][{j}] must be >= 2")));
                }
                if m[j][i] != x {
                    return Err(Error::Input("Coxeter matrix is not symmetric".into()));
                }
            }
        }
        Ok(CoxeterSystem { name: name.into(), m })
    }

    fn chain(name: String, edges: &[u32]) -> Self {
        let n = edges.len() + 1;
        let mut m = vec![vec![2u32; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (i, &e) in edges.iter().enumerate() {
            m[i][i + 1] = e;
            m[i + 1][i] = e;
        }
        CoxeterSystem { name, m }
    }

    /// Type `A_n`, generators `s_1..s_n`.
    pub fn a(n: usize) -> Self {
        assert!(n >= 1);
        Self::chain(format!("A{n}"), &vec![3; n - 1])
    }

    /// Type `B_n`, generators `[s_0, s_1, ..]` with `m(s_0, s_1) = 4`.
    pub fn b(n: usize) -> Self {
        assert!(n >= 2);
        let mut e = vec![4];
        e.extend(std::iter::repeat_n(3, n - 2));
        Self::chain(format!("B{n}"), &e)
    }

    /// Dihedral type `I_2(m)`, generators `[s_1, s_2]`.
    pub fn i2(m: u32) -> Self {
        assert!(m >= 2);
        Self::chain(format!("I2:{m}"), &[m])
    }

    /// Type `H_3` with `m(s_1, s_2) = 5`.
    pub fn h3() -> Self {
        Self::chain("H3".into(), &[5, 3])
    }

    /// Parse `A3`, `B2`, `I2:7`, `I2(7)`, `H3`, or a JSON Coxeter matrix.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('[') {
            let m: Vec<Vec<u32>> = serde_json::from_str(t).map_err(|e| Error::Parse(format!("Coxeter matrix: {e}")))?;
            return Self::from_matrix("custom", m);
        }
        let bad = || Error::Input(format!("unknown Coxeter type `{s}`"));
        let up = t.to_ascii_uppercase();
        if let Some(rest) = up.strip_prefix("I2") {
            let m: u32 = rest
                .trim_start_matches([':', '('])
                .trim_end_matches(')')
                .parse()
                .map_err(|_| bad())?;
            if m < 2 {
                return Err(bad());
            }
            return Ok(Self::i2(m));
        }
        let (kind, n) = up.split_at(1);
        let n: usize = n.parse().map_err(|_| bad())?;
        match (kind, n) {
            ("A", n) if n >= 1 => Ok(Self::a(n)),
            ("B", n) if n >= 2 => Ok(Self::b(n)),
            ("H", 3) => Ok(Self::h3()),
            _ => Err(bad()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn m(&self, s: usize, t: usize) -> u32 {
        self.m[s][t]
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.m
    }

    /// `N = lcm(m_st)`; fixes the coefficient field `Q(2cos(2π/N))`.
    pub fn conductor(&self) -> u32 {
        let mut n = 1u32;
        for row in &self.m {
            for &x in row {
                n = n.lcm(&x);
            }
        }
        n
    }

    pub fn field(&self) -> &'static RealCyclotomicField {
        real_cyclotomic(self.conductor())
    }

    /// Conjugacy class index of each generator. Generators are conjugate iff
    /// joined by a path of odd edges. Classes are numbered from the class of
    /// the last generator backwards.
    pub fn generator_classes(&self) -> Vec<usize> {
        let n = self.rank();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for s in 0..n {
            for t in s + 1..n {
                if self.m[s][t] % 2 == 1 {
                    let (a, b) = (find(&mut parent, s), find(&mut parent, t));
                    parent[a] = b;
                }
            }
        }
        let mut label: HashMap<usize, usize> = HashMap::new();
        let mut out = vec![0; n];
        for s in (0..n).rev() {
            let r = find(&mut parent, s);
            let next = label.len();
            out[s] = *label.entry(r).or_insert(next);
        }
        out
    }

    pub fn num_classes(&self) -> usize {
        self.generator_classes().iter().max().map_or(0, |m| m + 1)
    }

    /// Matrices of the generators in a reflection representation over `F`.
    ///
    /// Uses `σ_s(α_t) = α_t − c_st α_s` with `c_st c_ts = 4cos²(π/m_st)`,
    /// split as `c_st = −4cos²(π/m)` and `c_ts = −1` for `s < t`. Valid because
    /// finite Coxeter graphs are forests.
    pub fn reflection_matrices(&self) -> Vec<Matrix<FieldScalar>> {
        let n = self.rank();
        let f = self.field();
        let nn = self.conductor() as i64;
        let mut c = vec![vec![FieldScalar::zero(); n]; n];
        for s in 0..n {
            c[s][s] = FieldScalar::from_int(2);
            for t in s + 1..n {
                let m = self.m[s][t] as i64;
                if m == 2 {
                    continue;
                }
                let four_cos2 = FieldScalar::from_int(2).add(&f.two_cos(nn / m));
                c[s][t] = four_cos2.neg();
                c[t][s] = FieldScalar::from_int(-1);
            }
        }
        (0..n)
            .map(|s| {
                Matrix::from_fn(n, n, |i, j| {
                    let id = if i == j { FieldScalar::one() } else { FieldScalar::zero() };
                    if i == s {
                        id.sub(&c[s][j])
                    } else {
                        id
                    }
                })
            })
            .collect()
    }
}

impl fmt::Display for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

#[derive(Clone, Debug)]
struct ElemData {
    length: u32,
    word: Vec<u8>,
    inverse: Elem,
    ldesc: u32,
    rdesc: u32,
}

/// The enumerated group: elements in ShortLex order of their least reduced
/// words, with left and right generator multiplication tables.
#[derive(Clone, Debug)]
pub struct CoxeterGroup {
    sys: CoxeterSystem,
    elems: Vec<ElemData>,
    lmul: Vec<Vec<Elem>>,
    rmul: Vec<Vec<Elem>>,
    table: Option<Vec<u32>>,
    matrices: Vec<Matrix<FieldScalar>>,
}

impl CoxeterGroup {
    pub fn new(sys: CoxeterSystem) -> Result<Self> {
        Self::enumerate(sys, DEFAULT_BOUND)
    }

    /// Breadth-first enumeration; fails once more than `bound` elements appear.
    pub fn enumerate(sys: CoxeterSystem, bound: usize) -> Result<Self> {
        let n = sys.rank();
        let gens = sys.reflection_matrices();
        let one = FieldScalar::one();
        let id = Matrix::identity(n, &one);
        let mut index: HashMap<Vec<FieldScalar>, Elem> = HashMap::new();
        index.insert(id.entries().to_vec(), 0);
        let mut mats = vec![id];
        let mut words: Vec<Vec<u8>> = vec![Vec::new()];
        let mut rmul: Vec<Vec<Elem>> = Vec::new();
        let mut i = 0;
        while i < mats.len() {
            let mut row = Vec::with_capacity(n);
            for (s, g) in gens.iter().enumerate() {
                let m = mats[i].mul(g);
                let key = m.entries().to_vec();
                let id = match index.get(&key) {
                    Some(&j) => j,
                    None => {
                        let j = mats.len();
                        if j >= bound {
                            return Err(Error::EnumerationBound(bound));
                        }
                        index.insert(key, j);
                        let mut w = words[i].clone();
                        w.push(s as u8);
                        words.push(w);
                        mats.push(m);
                        j
                    }
                };
                row.push(id);
            }
            rmul.push(row);
            i += 1;
        }
        let size = mats.len();
        let lmul: Vec<Vec<Elem>> = (0..n)
            .map(|s| (0..size).map(|w| index[&gens[s].mul(&mats[w]).entries().to_vec()]).collect())
            .collect();
        let mut elems: Vec<ElemData> = words
            .into_iter()
            .map(|w| ElemData {
                length: w.len() as u32,
                word: w,
                inverse: 0,
                ldesc: 0,
                rdesc: 0,
            })
            .collect();
        for w in 0..size {
            let mut x = 0;
            for &s in elems[w].word.iter().rev() {
                x = rmul[x][s as usize];
            }
            elems[w].inverse = x;
            for s in 0..n {
                if elems[lmul[s][w]].length < elems[w].length {
                    elems[w].ldesc |= 1 << s;
                }
                if elems[rmul[w][s]].length < elems[w].length {
                    elems[w].rdesc |= 1 << s;
                }
            }
        }
        let mut g = CoxeterGroup {
            sys,
            elems,
            lmul,
            rmul,
            table: None,
            matrices: mats,
        };
        if size <= 1000 {
            let mut t = vec![0u32; size * size];
            for x in 0..size {
                for y in 0..size {
                    let v = if y == 0 {
                        x
                    } else {
                        let w = &g.elems[y].word;
                        let prefix = g.rmul_word_prefix(y);
                        g.rmul[t[x * size + prefix] as usize][*w.last().unwrap() as usize]
                    };
                    t[x * size + y] = v as u32;
                }
            }
            g.table = Some(t);
        }
        Ok(g)
    }

    /// The element obtained by dropping the last letter of the word of `y`.
    fn rmul_word_prefix(&self, y: Elem) -> Elem {
        let s = *self.elems[y].word.last().unwrap() as usize;
        self.rmul[y][s]
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn rank(&self) -> usize {
        self.sys.rank()
    }

    pub fn size(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.elems.len()
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn generator(&self, s: usize) -> Elem {
        self.rmul[0][s]
    }

    pub fn length(&self, w: Elem) -> u32 {
        self.elems[w].length
    }

    /// ShortLex-least reduced word (generator indices).
    pub fn word(&self, w: Elem) -> &[u8] {
        &self.elems[w].word
    }

    pub fn inverse(&self, w: Elem) -> Elem {
        self.elems[w].inverse
    }

    pub fn lmul(&self, s: usize, w: Elem) -> Elem {
        self.lmul[s][w]
    }

    pub fn rmul(&self, w: Elem, s: usize) -> Elem {
        self.rmul[w][s]
    }

    pub fn is_left_descent(&self, s: usize, w: Elem) -> bool {
        self.elems[w].ldesc >> s & 1 == 1
    }

    pub fn is_right_descent(&self, w: Elem, s: usize) -> bool {
        self.elems[w].rdesc >> s & 1 == 1
    }

    pub fn left_descents(&self, w: Elem) -> u32 {
        self.elems[w].ldesc
    }

    pub fn right_descents(&self, w: Elem) -> u32 {
        self.elems[w].rdesc
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        match &self.table {
            Some(t) => t[x * self.size() + y] as Elem,
            None => self.elems[y].word.iter().fold(x, |acc, &s| self.rmul[acc][s as usize]),
        }
    }

    pub fn longest(&self) -> Elem {
        self.size() - 1
    }

    pub fn max_length(&self) -> u32 {
        self.elems.last().map_or(0, |e| e.length)
    }

    pub fn from_word(&self, word: &[u8]) -> Elem {
        word.iter().fold(0, |acc, &s| self.rmul[acc][s as usize])
    }

    /// Matrix of `w` in the reflection representation.
    pub fn matrix(&self, w: Elem) -> &Matrix<FieldScalar> {
        &self.matrices[w]
    }

    /// Human-readable name, e.g. `s0s1` or `1`.
    pub fn label(&self, w: Elem) -> String {
        if w == 0 {
            return "1".into();
        }
        self.elems[w].word.iter().map(|s| format!("s{s}")).collect()
    }

    /// Elements grouped by length.
    pub fn strata(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.max_length() as usize + 1];
        for w in self.elements() {
            out[self.length(w) as usize].push(w);
        }
        out
    }
}

/// The ring `Z_W = Z[2cos(2π/m_st)]` inside `F`, possibly with some rational
/// primes inverted.
#[derive(Clone, Debug)]
pub struct ZwRing {
    field: &'static RealCyclotomicField,
    /// Powers `β^0..β^{e-1}` of the chosen generator, as `F`-coordinates.
    powers: Vec<Vec<Q>>,
    inverted: Vec<u64>,
}

impl ZwRing {
    /// Uses the `2cos(2π/m)` generating the largest subfield; for every finite
    /// irreducible type the others are rational, so they lie in `Z[β]`.
    pub fn new(sys: &CoxeterSystem) -> Self {
        let field = sys.field();
        let nn = sys.conductor() as i64;
        let mut best: Vec<Vec<Q>> = vec![FieldScalar::one().coords_in(Some(field))];
        let mut ms: Vec<u32> = sys.matrix().iter().flatten().copied().filter(|&m| m > 2).collect();
        ms.sort_unstable();
        ms.dedup();
        for m in ms {
            let beta = field.two_cos(nn / m as i64);
            let powers = independent_powers(&beta, field);
            if powers.len() > best.len() {
                best = powers;
            }
        }
        ZwRing {
            field,
            powers: best,
            inverted: Vec::new(),
        }
    }

    /// Same ring with the given primes inverted.
    pub fn localized(&self, primes: &[u64]) -> Self {
        let mut inverted = self.inverted.clone();
        inverted.extend_from_slice(primes);
        inverted.sort_unstable();
        inverted.dedup();
        ZwRing {
            inverted,
            ..self.clone()
        }
    }

    pub fn inverted_primes(&self) -> &[u64] {
        &self.inverted
    }

    /// Coordinates in the basis `1, β, .., β^{e-1}`, or `None` if `x` is not
    /// in `Q(β)`.
    pub fn coordinates(&self, x: &FieldScalar) -> Option<Vec<Q>> {
        solve_columns(&self.powers, &x.coords_in(Some(self.field)))
    }

    pub fn contains(&self, x: &FieldScalar) -> bool {
        self.coordinates(x).is_some_and(|c| {
            c.iter().all(|q| {
                let mut d = q.denom();
                for &p in &self.inverted {
                    let bp = num_bigint::BigInt::from(p);
                    while (&d % &bp) == num_bigint::BigInt::from(0) {
                        d /= &bp;
                    }
                }
                d == num_bigint::BigInt::from(1)
            })
        })
    }
}

fn independent_powers(beta: &FieldScalar, field: &'static RealCyclotomicField) -> Vec<Vec<Q>> {
    let mut out = vec![FieldScalar::one().coords_in(Some(field))];
    let mut p = beta.clone();
    loop {
        let c = p.coords_in(Some(field));
        if solve_columns(&out, &c).is_some() {
            return out;
        }
        out.push(c);
        p = p.mul(beta);
    }
}

/// Solve `Σ x_j cols[j] = b` over `Q` for linearly independent columns.
fn solve_columns(cols: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = b.len();
    let k = cols.len();
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..n {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=k {
                    let t = m[r][j].mul(&f);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    if (r..n).any(|i| !m[i][k].is_zero()) {
        return None;
    }
    let mut x = vec![Q::ZERO; k];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = m[i][k].clone();
    }
    Some(x)
}

/// `L : S → Γ`, extended to `W` along reduced words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunction {
    values: Vec<ExponentVec>,
}

/// Why a weight function was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightViolation {
    Rank { expected: usize, got: usize },
    NotPositive { generator: usize },
    Unequal { s: usize, t: usize },
}

impl fmt::Display for WeightViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightViolation::Rank { expected, got } => {
                write!(f, "weight rank {got} does not match order rank {expected}")
            }
            WeightViolation::NotPositive { generator } => write!(f, "L(s) > 0 fails for s{generator}"),
            WeightViolation::Unequal { s, t } => {
                write!(f, "conjugate generators with unequal weights: s{s}, s{t}")
            }
        }
    }
}

impl WeightFunction {
    pub fn new(values: Vec<ExponentVec>) -> Result<Self> {
        let k = values.first().map(|g| g.rank()).unwrap_or(0);
        if values.iter().any(|g| g.rank() != k) {
            return Err(Error::Input("weights of different ranks".into()));
        }
        Ok(WeightFunction { values })
    }

    /// Universal weights: one coordinate per generator conjugacy class.
    pub fn universal(sys: &CoxeterSystem) -> Self {
        let cls = sys.generator_classes();
        let k = sys.num_classes();
        WeightFunction {
            values: cls.iter().map(|&c| ExponentVec::unit(k, c)).collect(),
        }
    }

    /// All generators weighted `1` in `Γ = Z`.
    pub fn equal(sys: &CoxeterSystem) -> Self {
        WeightFunction {
            values: vec![ExponentVec::from_slice(&[1]); sys.rank()],
        }
    }

    pub fn rank(&self) -> usize {
        self.values.first().map_or(0, |g| g.rank())
    }

    pub fn generator(&self, s: usize) -> &ExponentVec {
        &self.values[s]
    }

    pub fn values(&self) -> &[ExponentVec] {
        &self.values
    }

    pub fn of(&self, g: &CoxeterGroup, w: Elem) -> ExponentVec {
        g.word(w)
            .iter()
            .fold(ExponentVec::zero(self.rank()), |acc, &s| &acc + &self.values[s as usize])
    }

    /// Compose with a homomorphism `Γ → Γ'` given on unit vectors.
    pub fn specialize(&self, images: &[ExponentVec]) -> Self {
        let k2 = images.first().map_or(0, |g| g.rank());
        WeightFunction {
            values: self
                .values
                .iter()
                .map(|g| {
                    let mut out = ExponentVec::zero(k2);
                    for (i, &c) in g.coords().iter().enumerate() {
                        out = &out + &images[i].scale(c);
                    }
                    out
                })
                .collect(),
        }
    }
}

/// Class-constancy and strict positivity of `L`.
pub fn validate_weight(
    sys: &CoxeterSystem,
    l: &WeightFunction,
    ord: &MonomialOrder,
) -> std::result::Result<(), WeightViolation> {
    if l.rank() != ord.rank() {
        return Err(WeightViolation::Rank {
            expected: ord.rank(),
            got: l.rank(),
        });
    }
    let cls = sys.generator_classes();
    for s in 0..sys.rank() {
        for t in s + 1..sys.rank() {
            if cls[s] == cls[t] && l.values[s] != l.values[t] {
                return Err(WeightViolation::Unequal { s, t });
            }
        }
    }
    for s in 0..sys.rank() {
        if !ord.is_positive(&l.values[s]) {
            return Err(WeightViolation::NotPositive { generator: s });
        }
    }
    Ok(())
}
