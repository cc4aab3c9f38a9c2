//! Structure constants `C_x C_y = Σ_z h_{x,y,z} C_z`, the a-function and `γ`.

use rayon::prelude::*;

use super::{Basis, HeckeAlgebra, HeckeElem, KlBasis};
use crate::coxeter::Elem;
use crate::error::{Error, Result};
use crate::scalars::{ExponentVec, FieldScalar, LaurentPoly};

/// Largest group for which the full cube of constants is materialized.
pub const FULL_TABLE_LIMIT: usize = 48;

/// All `h_{x,y,z}`, stored as `rows[y][x]` (a C-basis element over `z`).
pub struct HTable {
    rows: Vec<Vec<HeckeElem>>,
    a: Vec<ExponentVec>,
    rank: usize,
}

/// `C_x C_y` for every `x`, with `y` fixed, in the C-basis.
///
/// Uses `C_x = C_s C_{x'} − Σ_z μ^s_{z,x'} C_z` for `x = s x'`.
pub fn products_with(h: &HeckeAlgebra, kl: &KlBasis, y: Elem) -> Vec<HeckeElem> {
    let g = h.group();
    let n = h.size();
    let k = h.gamma_rank();
    let mut out: Vec<HeckeElem> = Vec::with_capacity(n);
    out.push(HeckeElem::basis_elem(Basis::C, n, y, k));
    for x in 1..n {
        let s = g.word(x)[0] as usize;
        let xp = g.lmul(s, x);
        let mut p = kl.c_gen_left(h, s, &out[xp]);
        for (z, m) in kl.mu(s, xp) {
            p = p.sub(&out[*z].scale(m));
        }
        out.push(p);
    }
    out
}

impl HTable {
    /// Full table; refuses groups larger than [`FULL_TABLE_LIMIT`].
    pub fn build(h: &HeckeAlgebra, kl: &KlBasis) -> Result<Self> {
        let n = h.size();
        if n > FULL_TABLE_LIMIT {
            return Err(Error::Input(format!(
                "full h-table limited to |W| <= {FULL_TABLE_LIMIT}, got {n}"
            )));
        }
        let rows: Vec<Vec<HeckeElem>> = (0..n).into_par_iter().map(|y| products_with(h, kl, y)).collect();
        let ord = h.order();
        let rank = h.gamma_rank();
        let mut a = vec![ExponentVec::zero(rank); n];
        for row in &rows {
            for prod in row {
                for z in prod.support() {
                    let m = prod.coeff(z).min_exponent(ord)?;
                    let neg = -&m;
                    if ord.cmp(&neg, &a[z]).is_gt() {
                        a[z] = neg;
                    }
                }
            }
        }
        Ok(HTable { rows, a, rank })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// `h_{x,y,z}`.
    pub fn h(&self, x: Elem, y: Elem, z: Elem) -> &LaurentPoly {
        self.rows[y][x].coeff(z)
    }

    /// `C_x C_y` in the C-basis.
    pub fn product(&self, x: Elem, y: Elem) -> &HeckeElem {
        &self.rows[y][x]
    }

    /// `a(z)`.
    pub fn a(&self, z: Elem) -> &ExponentVec {
        &self.a[z]
    }

    pub fn a_values(&self) -> &[ExponentVec] {
        &self.a
    }

    /// `γ_{x,y,z}`: the coefficient of `ε^{−a(z)}` in `h_{x,y,z^{-1}}`.
    pub fn gamma(&self, h: &HeckeAlgebra, x: Elem, y: Elem, z: Elem) -> FieldScalar {
        let zi = h.group().inverse(z);
        self.h(x, y, zi).coeff(&-&self.a[z])
    }

    /// Elements `z` with `a(z) ≠ a(z^{-1})`; empty unless something is wrong.
    pub fn a_symmetry_violations(&self, h: &HeckeAlgebra) -> Vec<Elem> {
        (0..self.size())
            .filter(|&z| self.a[z] != self.a[h.group().inverse(z)])
            .collect()
    }

    /// Triples whose constant is not bar-invariant.
    pub fn bar_violations(&self) -> Vec<(Elem, Elem, Elem)> {
        let mut out = Vec::new();
        for (y, row) in self.rows.iter().enumerate() {
            for (x, prod) in row.iter().enumerate() {
                for z in prod.support() {
                    if !prod.coeff(z).is_bar_invariant() {
                        out.push((x, y, z));
                    }
                }
            }
        }
        out
    }

    /// Triples where `h` is neither a rational integer constant nor has
    /// terms on both sides of zero.
    pub fn dichotomy_violations(&self, h: &HeckeAlgebra) -> Vec<(Elem, Elem, Elem)> {
        let ord = h.order();
        let mut out = Vec::new();
        for (y, row) in self.rows.iter().enumerate() {
            for (x, prod) in row.iter().enumerate() {
                for z in prod.support() {
                    let p = prod.coeff(z);
                    let ok = if p.is_constant() {
                        p.constant_coeff().as_rational().is_some_and(|q| q.is_integer())
                    } else {
                        let neg = p.terms().iter().any(|(g, _)| ord.sign(g).is_lt());
                        let pos = p.terms().iter().any(|(g, _)| ord.sign(g).is_gt());
                        neg && pos
                    };
                    if !ok {
                        out.push((x, y, z));
                    }
                }
            }
        }
        out
    }

    /// Compare `Σ_z h_{x,y,z} C_z` with the T-basis product `C_x C_y`.
    pub fn consistent_at(&self, h: &HeckeAlgebra, kl: &KlBasis, x: Elem, y: Elem) -> bool {
        let lhs = kl.c_to_t(h, self.product(x, y));
        let rhs = h.t_multiply(&kl.c(h, x), &kl.c(h, y));
        lhs == rhs
    }

    pub fn gamma_rank(&self) -> usize {
        self.rank
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::algebra;
    use super::*;

    fn table(name: &str) -> (HeckeAlgebra, KlBasis, HTable) {
        let h = algebra(name);
        let kl = KlBasis::compute(&h).unwrap();
        let t = HTable::build(&h, &kl).unwrap();
        (h, kl, t)
    }

    #[test]
    fn a1_constants() {
        let (h, _, t) = table("A1");
        let v = h.v(0);
        assert_eq!(t.h(1, 1, 1), &v.add(&v.bar()));
        assert!(t.h(1, 1, 0).is_zero());
        assert_eq!(t.a(0), &ExponentVec::zero(1));
        assert_eq!(t.a(1), h.weights().generator(0));
        assert!(t.gamma(&h, 1, 1, 1).is_one());
        assert!(t.gamma(&h, 0, 0, 0).is_one());
    }

    #[test]
    fn identity_row() {
        let (_, _, t) = table("B2");
        for y in 0..8 {
            for z in 0..8 {
                assert_eq!(t.h(0, y, z).is_one(), y == z);
                assert_eq!(t.h(0, y, z).is_zero(), y != z);
            }
        }
    }

    #[test]
    fn a2_equal_parameters() {
        let (h, _, t) = table("A2");
        let w0 = h.group().longest();
        assert_eq!(t.a(w0), &ExponentVec::from_slice(&[3]));
        for x in 0..6 {
            for y in 0..6 {
                for z in 0..6 {
                    let g = t.gamma(&h, x, y, z);
                    assert!(g.is_zero() || g.is_one());
                }
            }
        }
    }

    #[test]
    fn table_invariants() {
        for name in ["I2:4", "A2", "I2:5"] {
            let (h, kl, t) = table(name);
            assert!(t.bar_violations().is_empty());
            assert!(t.dichotomy_violations(&h).is_empty());
            assert!(t.a_symmetry_violations(&h).is_empty());
            for x in h.group().elements() {
                for y in h.group().elements() {
                    assert!(t.consistent_at(&h, &kl, x, y), "{name} {x} {y}");
                }
            }
        }
    }
}
