//! Built-in representations: one-dimensional, dihedral, and seminormal
//! representations of types A and B.

use std::fmt;

use super::MatrixRep;
use crate::error::{Error, Result};
use crate::hecke::HeckeAlgebra;
use crate::linalg::Matrix;
use crate::scalars::{ExponentVec, KScalar, LaurentPoly};

/// Which construction [`builtin_family`] should use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Hash)]
pub enum FamilyKind {
    /// Seminormal for A and B, dihedral for other rank-two systems.
    #[default]
    Auto,
    Seminormal,
    Dihedral,
}

/// A partition, parts weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(pub Vec<usize>);

/// A pair of partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition(pub Partition, pub Partition);

impl Partition {
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_valid(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1]) && self.0.iter().all(|&p| p > 0)
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl Bipartition {
    pub fn size(&self) -> usize {
        self.0.size() + self.1.size()
    }

    pub fn all(n: usize) -> Vec<Bipartition> {
        let mut out = Vec::new();
        for k in (0..=n).rev() {
            for a in Partition::all(k) {
                for b in Partition::all(n - k) {
                    out.push(Bipartition(a.clone(), b));
                }
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<usize> = if t.trim().is_empty() {
            Vec::new()
        } else {
            t.split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("partition `{s}`"))))
                .collect::<Result<_>>()?
        };
        let p = Partition(parts);
        if !p.is_valid() {
            return Err(Error::Input(format!("`{s}` is not a partition")));
        }
        Ok(p)
    }
}

impl std::str::FromStr for Bipartition {
    type Err = Error;
    /// `((2,1),(1))`; the empty partition is `()`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bipartition `{s}`")))?;
        let close = inner.find(')').ok_or_else(|| Error::Parse(format!("bipartition `{s}`")))?;
        let (a, rest) = inner.split_at(close + 1);
        let b = rest.trim().strip_prefix(',').ok_or_else(|| Error::Parse(format!("bipartition `{s}`")))?;
        Ok(Bipartition(a.parse()?, b.parse()?))
    }
}

fn kpoly(p: &LaurentPoly, rank: usize) -> KScalar {
    KScalar::from_poly(p.clone(), rank)
}

/// `T_s ↦ v_s` where `signs[s]` is true, `T_s ↦ −v_s^{-1}` otherwise.
pub fn onedim(h: &HeckeAlgebra, label: &str, signs: &[bool]) -> Result<MatrixRep> {
    let k = h.gamma_rank();
    let gens = signs
        .iter()
        .enumerate()
        .map(|(s, &plus)| {
            let v = h.v(s);
            let x = if plus { v.clone() } else { v.bar().neg() };
            Matrix::from_rows(vec![vec![kpoly(&x, k)]])
        })
        .collect();
    MatrixRep::new(label, h, gens)
}

/// Roles `(s1, s2)` with `L(s1) ≥ L(s2)` under the order of `h`.
fn dihedral_roles(h: &HeckeAlgebra) -> (usize, usize) {
    let w = h.weights();
    if h.order().cmp(w.generator(0), w.generator(1)).is_lt() {
        (1, 0)
    } else {
        (0, 1)
    }
}

fn dihedral_data(h: &HeckeAlgebra, j: usize) -> Result<(usize, usize, LaurentPoly, LaurentPoly, LaurentPoly)> {
    let sys = h.group().system();
    if sys.rank() != 2 {
        return Err(Error::Input("dihedral representations need a rank-2 system".into()));
    }
    let m = sys.m(0, 1) as usize;
    let top = if m % 2 == 0 { (m - 2) / 2 } else { (m - 1) / 2 };
    if j < 1 || j > top {
        return Err(Error::Input(format!("j = {j} outside 1..={top} for m = {m}")));
    }
    let (r1, r2) = dihedral_roles(h);
    let (v1, v2) = (h.v(r1).clone(), h.v(r2).clone());
    let f = sys.field();
    let n = sys.conductor() as i64;
    let zeta = f.two_cos(j as i64 * n / m as i64);
    let k = h.gamma_rank();
    let mu = v1
        .mul(&v2.bar())
        .add(&LaurentPoly::constant(zeta, k))
        .add(&v1.bar().mul(&v2));
    Ok((r1, r2, v1, v2, mu))
}

/// The two-dimensional `ρ_j` of `I_2(m)`, with the generator of larger
/// weight in the role of `s_1`.
pub fn dihedral(h: &HeckeAlgebra, j: usize) -> Result<MatrixRep> {
    let (r1, r2, v1, v2, mu) = dihedral_data(h, j)?;
    let k = h.gamma_rank();
    let z = LaurentPoly::zero();
    let m1 = [[v1.bar().neg(), z.clone()], [mu, v1.clone()]];
    let m2 = [[v2.clone(), LaurentPoly::one(k)], [z, v2.bar().neg()]];
    let to_m = |a: &[[LaurentPoly; 2]; 2]| Matrix::from_fn(2, 2, |i, jj| kpoly(&a[i][jj], k));
    let mut gens = vec![Matrix::filled(1, 1, KScalar::zero(k)); 2];
    gens[r1] = to_m(&m1);
    gens[r2] = to_m(&m2);
    MatrixRep::new(format!("rho{j}"), h, gens)
}

/// The invariant form `Ω_j` matching [`dihedral`].
pub fn dihedral_omega(h: &HeckeAlgebra, j: usize) -> Result<Matrix<KScalar>> {
    let (_, _, v1, v2, mu) = dihedral_data(h, j)?;
    let k = h.gamma_rank();
    let v1mu = v1.mul(&mu);
    let a = v1mu.mul(&v2.add(&v2.bar()));
    let d = v1.mul(&v1.add(&v1.bar()));
    Ok(Matrix::from_rows(vec![
        vec![kpoly(&a, k), kpoly(&v1mu, k)],
        vec![kpoly(&v1mu, k), kpoly(&d, k)],
    ]))
}

/// Cell of a (multi)tableau: component, row, column.
type Cell = (usize, usize, usize);

/// Standard multitableaux: `pos[k]` is the cell holding entry `k`.
fn standard_tableaux(shape: &[Partition]) -> Vec<Vec<Cell>> {
    let n: usize = shape.iter().map(Partition::size).sum();
    let mut fill: Vec<Vec<usize>> = shape.iter().map(|p| vec![0; p.0.len()]).collect();
    let mut cur = Vec::with_capacity(n);
    let mut out = Vec::new();
    fn rec(shape: &[Partition], fill: &mut [Vec<usize>], cur: &mut Vec<Cell>, n: usize, out: &mut Vec<Vec<Cell>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..shape.len() {
            for r in 0..shape[c].0.len() {
                let col = fill[c][r];
                if col < shape[c].0[r] && (r == 0 || fill[c][r - 1] > col) {
                    fill[c][r] += 1;
                    cur.push((c, r, col));
                    rec(shape, fill, cur, n, out);
                    cur.pop();
                    fill[c][r] -= 1;
                }
            }
        }
    }
    rec(shape, &mut fill, &mut cur, n, &mut out);
    out
}

/// Residue `±ε^g` of a cell: `Q_c q^{col − row}`.
struct Residues {
    /// `(sign, exponent)` of `Q_c` per component.
    comp: Vec<(bool, ExponentVec)>,
    /// exponent of `q`
    q: ExponentVec,
}

impl Residues {
    fn of(&self, cell: Cell) -> (bool, ExponentVec) {
        let (c, r, col) = cell;
        let (sign, g) = &self.comp[c];
        (*sign, g + &self.q.scale(col as i32 - r as i32))
    }
}

fn signed_eps(sign: bool, g: &ExponentVec) -> KScalar {
    let e = KScalar::eps(g.clone());
    if sign {
        e
    } else {
        e.neg()
    }
}

/// Seminormal matrix of the generator swapping entries `k` and `k + 1`, in
/// the normalization with eigenvalues `q` and `−1`.
fn seminormal_swap(tabs: &[Vec<Cell>], k: usize, res: &Residues, rank: usize) -> Result<Matrix<KScalar>> {
    let n = tabs.len();
    let one = KScalar::one(rank);
    let q = KScalar::eps(res.q.clone());
    let d_of = |rho: &KScalar| -> Result<KScalar> { q.sub(&one).mul(rho).div(&rho.sub(&one)) };
    let mut m = Matrix::filled(n, n, KScalar::zero(rank));
    for (t, pos) in tabs.iter().enumerate() {
        let (sa, ga) = res.of(pos[k]);
        let (sb, gb) = res.of(pos[k + 1]);
        let rho = signed_eps(sa == sb, &(&gb - &ga));
        let d = d_of(&rho)?;
        m.set(t, t, d.clone());
        let (a, b) = (pos[k], pos[k + 1]);
        let same_line = a.0 == b.0 && (a.1 == b.1 || a.2 == b.2);
        if same_line {
            continue;
        }
        let mut swapped = pos.clone();
        swapped.swap(k, k + 1);
        let t2 = tabs
            .iter()
            .position(|x| *x == swapped)
            .ok_or_else(|| Error::Internal("swapped tableau missing".into()))?;
        let forward = (b.0, b.1) > (a.0, a.1);
        let entry = if forward {
            one.clone()
        } else {
            let d2 = d_of(&rho.inv()?)?;
            q.add(&d.mul(&d2))
        };
        m.set(t2, t, entry);
    }
    Ok(m)
}

/// Seminormal representation of type `A_n` for a partition of `n + 1`.
pub fn seminormal_a(h: &HeckeAlgebra, shape: &Partition) -> Result<MatrixRep> {
    let n = h.group().rank();
    if !shape.is_valid() || shape.size() != n + 1 {
        return Err(Error::Input(format!("{shape} is not a partition of {}", n + 1)));
    }
    let k = h.gamma_rank();
    let va = h.v(0);
    let res = Residues {
        comp: vec![(true, ExponentVec::zero(k))],
        q: h.weights().generator(0).scale(2),
    };
    let tabs = standard_tableaux(std::slice::from_ref(shape));
    let vinv = kpoly(&va.bar(), k);
    let gens = (0..n)
        .map(|i| Ok(seminormal_swap(&tabs, i, &res, k)?.scale(&vinv)))
        .collect::<Result<Vec<_>>>()?;
    MatrixRep::new(shape.to_string(), h, gens)
}

/// Seminormal representation of type `B_n` (generators `s_0, s_1, ..`) for a
/// bipartition of `n`; `s_0` carries the weight `b`, the others `a`.
pub fn seminormal_b(h: &HeckeAlgebra, shape: &Bipartition) -> Result<MatrixRep> {
    let n = h.group().rank();
    let parts = [shape.0.clone(), shape.1.clone()];
    if parts.iter().any(|p| !p.is_valid()) || shape.size() != n {
        return Err(Error::Input(format!("{shape} is not a bipartition of {n}")));
    }
    let k = h.gamma_rank();
    let wb = h.weights().generator(0);
    let wa = h.weights().generator(1);
    let res = Residues {
        comp: vec![(true, wb.scale(2)), (false, ExponentVec::zero(k))],
        q: wa.scale(2),
    };
    let tabs = standard_tableaux(&parts);
    let vb = h.v(0);
    let t0 = Matrix::diagonal(
        tabs.iter()
            .map(|pos| if pos[0].0 == 0 { kpoly(vb, k) } else { kpoly(&vb.bar().neg(), k) })
            .collect(),
    );
    let vinv = kpoly(&h.v(1).bar(), k);
    let mut gens = vec![t0];
    for i in 1..n {
        gens.push(seminormal_swap(&tabs, i - 1, &res, k)?.scale(&vinv));
    }
    MatrixRep::new(shape.to_string(), h, gens)
}

/// Family shape recognized from the system name.
enum SysKind {
    A(usize),
    B(usize),
    Dihedral(usize),
}

fn sys_kind(h: &HeckeAlgebra) -> Option<SysKind> {
    let sys = h.group().system();
    let name = sys.name();
    let n = sys.rank();
    if let Some(rest) = name.strip_prefix('A') {
        if rest.parse::<usize>().ok() == Some(n) {
            return Some(SysKind::A(n));
        }
    }
    if let Some(rest) = name.strip_prefix('B') {
        if rest.parse::<usize>().ok() == Some(n) {
            return Some(SysKind::B(n));
        }
    }
    if n == 2 {
        return Some(SysKind::Dihedral(sys.m(0, 1) as usize));
    }
    None
}

/// A complete set of irreducible representations, one per isomorphism class.
pub fn builtin_family(h: &HeckeAlgebra, kind: FamilyKind) -> Result<Vec<MatrixRep>> {
    let sk = sys_kind(h).ok_or_else(|| {
        Error::Input(format!(
            "no built-in family for {}; supply representation files",
            h.group().system().name()
        ))
    })?;
    match (sk, kind) {
        (SysKind::A(n), FamilyKind::Auto | FamilyKind::Seminormal) => {
            Partition::all(n + 1).iter().map(|p| seminormal_a(h, p)).collect()
        }
        (SysKind::B(n), FamilyKind::Auto | FamilyKind::Seminormal) => {
            Bipartition::all(n).iter().map(|p| seminormal_b(h, p)).collect()
        }
        (SysKind::A(1), FamilyKind::Dihedral) => Partition::all(2).iter().map(|p| seminormal_a(h, p)).collect(),
        (SysKind::Dihedral(m), FamilyKind::Auto | FamilyKind::Dihedral) => dihedral_family(h, m),
        (SysKind::B(2), FamilyKind::Dihedral) => dihedral_family(h, 4),
        (SysKind::A(2), FamilyKind::Dihedral) => dihedral_family(h, 3),
        (SysKind::Dihedral(_), FamilyKind::Seminormal) => {
            Err(Error::Input("seminormal family needs type A or B".into()))
        }
        _ => Err(Error::Input("requested family is not available for this system".into())),
    }
}

fn dihedral_family(h: &HeckeAlgebra, m: usize) -> Result<Vec<MatrixRep>> {
    let mut out = vec![onedim(h, "index", &[true, true])?, onedim(h, "sign", &[false, false])?];
    if m % 2 == 0 {
        out.push(onedim(h, "eps1", &[false, true])?);
        out.push(onedim(h, "eps2", &[true, false])?);
    }
    let top = if m % 2 == 0 { (m - 2) / 2 } else { (m - 1) / 2 };
    for j in 1..=top {
        out.push(dihedral(h, j)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::algebra;
    use super::*;
    use crate::scalars::KScalar;

    #[test]
    fn partitions_and_tableaux() {
        assert_eq!(Partition::all(4).len(), 5);
        assert_eq!(Bipartition::all(3).len(), 10);
        let p: Partition = "(2,1)".parse().unwrap();
        assert_eq!(standard_tableaux(&[p.clone()]).len(), 2);
        let b: Bipartition = "((2,1),(1))".parse().unwrap();
        assert_eq!(b.to_string(), "((2,1),(1))");
        let e: Bipartition = "((),(1,1))".parse().unwrap();
        assert_eq!(e.0.size(), 0);
        assert_eq!(standard_tableaux(&[b.0.clone(), b.1.clone()]).len(), 8);
    }

    #[test]
    fn family_dimensions() {
        for (name, w, pr) in [
            ("A1", None, None),
            ("A2", None, None),
            ("A3", None, None),
            ("B2", Some(vec![vec![0, 1], vec![1, 0]]), Some(vec![1, 0])),
            ("B2", None, None),
            ("B3", Some(vec![vec![0, 1], vec![1, 0], vec![1, 0]]), Some(vec![0, 1])),
            ("I2:5", None, None),
            ("I2:6", Some(vec![vec![0, 1], vec![1, 0]]), Some(vec![1, 0])),
        ] {
            let h = algebra(name, w, pr);
            let fam = builtin_family(&h, FamilyKind::Auto).unwrap();
            let total: usize = fam.iter().map(|r| r.dim() * r.dim()).sum();
            assert_eq!(total, h.size(), "{name}");
        }
    }

    #[test]
    fn seminormal_a1_is_index_and_sign() {
        let h = algebra("A1", None, None);
        let idx = seminormal_a(&h, &"(2)".parse().unwrap()).unwrap();
        assert_eq!(idx.generator(0).get(0, 0), &KScalar::from_poly(h.v(0).clone(), 1));
        let sgn = seminormal_a(&h, &"(1,1)".parse().unwrap()).unwrap();
        assert_eq!(sgn.generator(0).get(0, 0), &KScalar::from_poly(h.v(0).bar().neg(), 1));
    }

    #[test]
    fn seminormal_matches_dihedral_characters() {
        let h = algebra("A2", None, None);
        let a = seminormal_a(&h, &"(2,1)".parse().unwrap()).unwrap();
        let d = dihedral(&h, 1).unwrap();
        for w in h.group().elements() {
            assert_eq!(a.trace_poly(w).unwrap(), d.trace_poly(w).unwrap());
        }
        let h = algebra("B2", Some(vec![vec![0, 1], vec![1, 0]]), Some(vec![1, 0]));
        let b = seminormal_b(&h, &"((1),(1))".parse().unwrap()).unwrap();
        let d = dihedral(&h, 1).unwrap();
        for w in h.group().elements() {
            assert_eq!(b.trace_poly(w).unwrap(), d.trace_poly(w).unwrap());
        }
    }

    #[test]
    fn dihedral_mu_for_m3() {
        let h = algebra("I2:3", None, None);
        let d = dihedral(&h, 1).unwrap();
        // μ_1 = 2 + 2cos(2π/3) = 1
        assert!(d.generator(0).get(1, 0).to_laurent().unwrap().is_one());
    }

    #[test]
    fn dihedral_omega_intertwines() {
        for m in 3..=12u32 {
            for (w, pr) in [
                (None, None),
                (Some(vec![vec![0, 1], vec![1, 0]]), Some(vec![1, 0])),
                (Some(vec![vec![1, 0], vec![0, 1]]), Some(vec![1, 0])),
            ] {
                if m % 2 == 1 && w.is_some() {
                    continue;
                }
                let h = algebra(&format!("I2:{m}"), w, pr);
                let top = if m % 2 == 0 { (m - 2) / 2 } else { (m - 1) / 2 };
                for j in 1..=top as usize {
                    let r = dihedral(&h, j).unwrap();
                    let om = dihedral_omega(&h, j).unwrap();
                    assert!(om.is_symmetric());
                    for s in 0..2 {
                        let g = r.generator(s);
                        assert_eq!(om.mul(g), g.transpose().mul(&om), "m={m} j={j}");
                    }
                }
            }
        }
    }
}
