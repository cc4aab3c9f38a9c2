//! The generic Iwahori-Hecke algebra over `A = F[Γ]`.

mod cells;
mod htable;
mod kl;

use std::sync::{Arc, OnceLock};

pub use cells::{refines, LrPreorder};
pub use htable::{products_with, HTable, FULL_TABLE_LIMIT};
pub use kl::KlBasis;

use crate::coxeter::{CoxeterGroup, Elem, WeightFunction};
use crate::error::{Error, Result};
use crate::scalars::{ExponentVec, LaurentPoly, MonomialOrder};

/// Which basis a [`HeckeElem`] is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    T,
    CPrime,
    C,
}

/// Dense coefficient vector indexed by group elements.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeElem {
    pub basis: Basis,
    coeffs: Vec<LaurentPoly>,
}

impl HeckeElem {
    pub fn zero(basis: Basis, n: usize) -> Self {
        HeckeElem {
            basis,
            coeffs: vec![LaurentPoly::zero(); n],
        }
    }

    pub fn basis_elem(basis: Basis, n: usize, w: Elem, rank: usize) -> Self {
        let mut h = Self::zero(basis, n);
        h.coeffs[w] = LaurentPoly::one(rank);
        h
    }

    pub fn from_coeffs(basis: Basis, coeffs: Vec<LaurentPoly>) -> Self {
        HeckeElem { basis, coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, w: Elem) -> &LaurentPoly {
        &self.coeffs[w]
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn set(&mut self, w: Elem, p: LaurentPoly) {
        self.coeffs[w] = p;
    }

    pub fn add_to(&mut self, w: Elem, p: &LaurentPoly) {
        if !p.is_zero() {
            self.coeffs[w] = self.coeffs[w].add(p);
        }
    }

    /// Elements with nonzero coefficient, increasing.
    pub fn support(&self) -> impl Iterator<Item = Elem> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(w, _)| w)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.basis, o.basis);
        HeckeElem {
            basis: self.basis,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.basis, o.basis);
        HeckeElem {
            basis: self.basis,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        HeckeElem {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|a| a.mul(p)).collect(),
        }
    }

    /// Apply `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        HeckeElem {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// `H` for a fixed group, weight function and monomial order.
pub struct HeckeAlgebra {
    group: Arc<CoxeterGroup>,
    weights: WeightFunction,
    order: MonomialOrder,
    /// `v_s = ε^{L(s)}`
    v: Vec<LaurentPoly>,
    /// `v_s − v_s^{-1}`
    vdiff: Vec<LaurentPoly>,
    bar_t: OnceLock<Vec<HeckeElem>>,
}

impl HeckeAlgebra {
    pub fn new(group: Arc<CoxeterGroup>, weights: WeightFunction, order: MonomialOrder) -> Result<Self> {
        crate::coxeter::validate_weight(group.system(), &weights, &order)
            .map_err(|v| Error::Input(v.to_string()))?;
        let v: Vec<LaurentPoly> = weights.values().iter().map(|g| LaurentPoly::eps(g.clone())).collect();
        let vdiff = v.iter().map(|p| p.sub(&p.bar())).collect();
        Ok(HeckeAlgebra {
            group,
            weights,
            order,
            v,
            vdiff,
            bar_t: OnceLock::new(),
        })
    }

    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<CoxeterGroup> {
        &self.group
    }

    pub fn weights(&self) -> &WeightFunction {
        &self.weights
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Rank of `Γ`.
    pub fn gamma_rank(&self) -> usize {
        self.order.rank()
    }

    pub fn size(&self) -> usize {
        self.group.size()
    }

    /// `v_s`.
    pub fn v(&self, s: usize) -> &LaurentPoly {
        &self.v[s]
    }

    /// `ε^{L(w)}`.
    pub fn v_elem(&self, w: Elem) -> LaurentPoly {
        LaurentPoly::eps(self.weights.of(&self.group, w))
    }

    pub fn weight(&self, w: Elem) -> ExponentVec {
        self.weights.of(&self.group, w)
    }

    pub fn one(&self) -> LaurentPoly {
        LaurentPoly::one(self.gamma_rank())
    }

    pub fn t(&self, w: Elem) -> HeckeElem {
        HeckeElem::basis_elem(Basis::T, self.size(), w, self.gamma_rank())
    }

    /// `T_s · h` in the T-basis.
    pub fn t_gen_left(&self, s: usize, h: &HeckeElem) -> HeckeElem {
        debug_assert_eq!(h.basis, Basis::T);
        let g = &self.group;
        let mut out = HeckeElem::zero(Basis::T, self.size());
        for y in h.support() {
            let c = h.coeff(y);
            let sy = g.lmul(s, y);
            out.add_to(sy, c);
            if g.length(sy) < g.length(y) {
                out.add_to(y, &c.mul(&self.vdiff[s]));
            }
        }
        out
    }

    /// `h · T_s` in the T-basis.
    pub fn t_gen_right(&self, h: &HeckeElem, s: usize) -> HeckeElem {
        debug_assert_eq!(h.basis, Basis::T);
        let g = &self.group;
        let mut out = HeckeElem::zero(Basis::T, self.size());
        for y in h.support() {
            let c = h.coeff(y);
            let ys = g.rmul(y, s);
            out.add_to(ys, c);
            if g.length(ys) < g.length(y) {
                out.add_to(y, &c.mul(&self.vdiff[s]));
            }
        }
        out
    }

    /// `T_w · h`, expanding `T_w` along its reduced word.
    pub fn t_elem_left(&self, w: Elem, h: &HeckeElem) -> HeckeElem {
        let mut acc = h.clone();
        for &s in self.group.word(w).iter().rev() {
            acc = self.t_gen_left(s as usize, &acc);
        }
        acc
    }

    /// Product of two T-basis elements.
    pub fn t_multiply(&self, a: &HeckeElem, b: &HeckeElem) -> HeckeElem {
        assert!(a.basis == Basis::T && b.basis == Basis::T, "t_multiply expects T-basis input");
        let mut out = HeckeElem::zero(Basis::T, self.size());
        for x in a.support() {
            let p = self.t_elem_left(x, b).scale(a.coeff(x));
            out = out.add(&p);
        }
        out
    }

    fn bar_table(&self) -> &Vec<HeckeElem> {
        self.bar_t.get_or_init(|| {
            let g = &self.group;
            let n = self.size();
            let mut table: Vec<HeckeElem> = Vec::with_capacity(n);
            table.push(self.t(0));
            for w in 1..n {
                // w = s·w' with s the first letter; bar(T_w) = bar(T_s) bar(T_w')
                let s = g.word(w)[0] as usize;
                let wp = g.lmul(s, w);
                let b = &table[wp];
                let ts_b = self.t_gen_left(s, b);
                let out = ts_b.sub(&b.scale(&self.vdiff[s]));
                table.push(out);
            }
            table
        })
    }

    /// `bar(T_w) = T_{w^{-1}}^{-1}` in the T-basis.
    pub fn bar_t(&self, w: Elem) -> &HeckeElem {
        &self.bar_table()[w]
    }

    /// The bar involution on a T-basis element.
    pub fn bar(&self, h: &HeckeElem) -> HeckeElem {
        assert_eq!(h.basis, Basis::T, "bar expects T-basis input");
        let mut out = HeckeElem::zero(Basis::T, self.size());
        for w in h.support() {
            let c = h.coeff(w).bar();
            out = out.add(&self.bar_t(w).scale(&c));
        }
        out
    }

    /// The ring involution `j`: `a ↦ ā`, `T_y ↦ (−1)^{l(y)} T_y`.
    pub fn j(&self, h: &HeckeElem) -> HeckeElem {
        assert_eq!(h.basis, Basis::T);
        let g = &self.group;
        HeckeElem {
            basis: Basis::T,
            coeffs: h
                .coeffs
                .iter()
                .enumerate()
                .map(|(y, c)| {
                    let b = c.bar();
                    if g.length(y) % 2 == 1 {
                        b.neg()
                    } else {
                        b
                    }
                })
                .collect(),
        }
    }

    /// The anti-involution `T_w ↦ T_{w^{-1}}` (any basis; it maps `C_w ↦ C_{w^{-1}}`).
    pub fn flat(&self, h: &HeckeElem) -> HeckeElem {
        let mut out = HeckeElem::zero(h.basis, self.size());
        for w in h.support() {
            out.set(self.group.inverse(w), h.coeff(w).clone());
        }
        out
    }
}
