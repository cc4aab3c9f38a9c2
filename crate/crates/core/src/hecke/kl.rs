//! Kazhdan-Lusztig bases `C'_w` and `C_w = j(C'_w)` for unequal parameters.

use rayon::prelude::*;

use super::{Basis, HeckeAlgebra, HeckeElem};
use crate::coxeter::Elem;
use crate::error::{Error, Result};
use crate::scalars::LaurentPoly;

/// `C'_w` for all `w`, and the structure data
/// `C'_s C'_v = C'_{sv} + Σ_y μ^s_{y,v} C'_y` for every `sv > v`.
pub struct KlBasis {
    cprime: Vec<HeckeElem>,
    /// `mu[s][v]`: pairs `(y, μ^s_{y,v})`, only filled for `sv > v`.
    mu: Vec<Vec<Vec<(Elem, LaurentPoly)>>>,
}

impl KlBasis {
    /// Stratum by stratum; within a stratum all products are independent.
    pub fn compute(h: &HeckeAlgebra) -> Result<Self> {
        let g = h.group();
        let n = h.size();
        let rank = g.rank();
        let ord = h.order();
        let mut cprime: Vec<Option<HeckeElem>> = vec![None; n];
        cprime[0] = Some(h.t(0));
        let mut mu = vec![vec![Vec::new(); n]; rank];
        let strata = g.strata();
        for stratum in strata.iter().skip(1) {
            // every pair (s, v) with w = sv in this stratum
            let pairs: Vec<(usize, Elem)> = stratum
                .iter()
                .flat_map(|&w| {
                    (0..rank)
                        .filter(move |&s| g.is_left_descent(s, w))
                        .map(move |s| (s, g.lmul(s, w)))
                })
                .collect();
            let done: &Vec<Option<HeckeElem>> = &cprime;
            let results: Vec<(usize, Elem, HeckeElem, Vec<(Elem, LaurentPoly)>)> = pairs
                .par_iter()
                .map(|&(s, v)| {
                    let cv = done[v].as_ref().expect("shorter element computed");
                    // C'_s C'_v with C'_s = T_s + v_s^{-1}
                    let mut p = h.t_gen_left(s, cv).add(&cv.scale(&h.v(s).bar()));
                    let w = g.lmul(s, v);
                    let mut corr = Vec::new();
                    let lw = g.length(w);
                    for y in (0..w).rev() {
                        if g.length(y) >= lw {
                            continue;
                        }
                        let q = p.coeff(y);
                        if q.is_zero() {
                            continue;
                        }
                        let nn = q.nonnegative_part(ord);
                        if nn.is_zero() {
                            continue;
                        }
                        let pos = q.positive_part(ord);
                        let m = nn.add(&pos.bar());
                        let cy = done[y].as_ref().expect("shorter element computed");
                        p = p.sub(&cy.scale(&m));
                        corr.push((y, m));
                    }
                    corr.sort_by_key(|x| x.0);
                    (s, v, p, corr)
                })
                .collect();
            for (s, v, p, corr) in results {
                let w = g.lmul(s, v);
                mu[s][v] = corr;
                if cprime[w].is_none() {
                    cprime[w] = Some(p);
                } else if cprime[w].as_ref() != Some(&p) {
                    return Err(Error::Internal("KL correction failed: inconsistent C'_w".into()));
                }
            }
        }
        Ok(KlBasis {
            cprime: cprime.into_iter().map(|c| c.expect("all computed")).collect(),
            mu,
        })
    }

    /// `C'_w` in the T-basis.
    pub fn cprime(&self, w: Elem) -> &HeckeElem {
        &self.cprime[w]
    }

    /// `C_w = j(C'_w)` in the T-basis.
    pub fn c(&self, h: &HeckeAlgebra, w: Elem) -> HeckeElem {
        h.j(&self.cprime[w])
    }

    /// KL polynomial `p_{y,w}` (coefficient of `T_y` in `C'_w`).
    pub fn p(&self, y: Elem, w: Elem) -> &LaurentPoly {
        self.cprime[w].coeff(y)
    }

    /// `μ^s_{y,v}` terms for `sv > v`.
    pub fn mu(&self, s: usize, v: Elem) -> &[(Elem, LaurentPoly)] {
        &self.mu[s][v]
    }

    /// `C_s · h` for `h` in the C-basis.
    pub fn c_gen_left(&self, hk: &HeckeAlgebra, s: usize, x: &HeckeElem) -> HeckeElem {
        debug_assert_eq!(x.basis, Basis::C);
        let g = hk.group();
        let vs = hk.v(s);
        let vsum = vs.add(&vs.bar());
        let mut out = HeckeElem::zero(Basis::C, x.len());
        for u in x.support() {
            let a = x.coeff(u);
            let su = g.lmul(s, u);
            if g.length(su) < g.length(u) {
                out.add_to(u, &a.mul(&vsum));
            } else {
                out.add_to(su, a);
                for (z, m) in &self.mu[s][u] {
                    out.add_to(*z, &a.mul(m));
                }
            }
        }
        out
    }

    /// Rewrite a C-basis element in the T-basis.
    pub fn c_to_t(&self, hk: &HeckeAlgebra, x: &HeckeElem) -> HeckeElem {
        assert_eq!(x.basis, Basis::C);
        let mut out = HeckeElem::zero(Basis::T, x.len());
        for w in x.support() {
            out = out.add(&self.c(hk, w).scale(x.coeff(w)));
        }
        out
    }

    /// Rewrite a T-basis element in the C-basis (unitriangular solve).
    pub fn t_to_c(&self, hk: &HeckeAlgebra, x: &HeckeElem) -> HeckeElem {
        assert_eq!(x.basis, Basis::T);
        let g = hk.group();
        let n = x.len();
        let mut rest = x.clone();
        let mut out = HeckeElem::zero(Basis::C, n);
        for w in (0..n).rev() {
            let a = rest.coeff(w).clone();
            if a.is_zero() {
                continue;
            }
            // leading coefficient of C_w at T_w is (−1)^{l(w)}
            let a = if g.length(w) % 2 == 1 { a.neg() } else { a };
            rest = rest.sub(&self.c(hk, w).scale(&a));
            out.set(w, a);
        }
        debug_assert!(rest.is_zero());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::algebra;
    use super::*;
    use crate::scalars::ExponentVec;

    #[test]
    fn small_kl_elements() {
        let h = algebra("A1");
        let kl = KlBasis::compute(&h).unwrap();
        assert_eq!(kl.cprime(0), &h.t(0));
        let mut cs = h.t(1);
        cs.set(0, h.v(0).bar());
        assert_eq!(kl.cprime(1), &cs);
        let mut c = h.t(1).scale(&LaurentPoly::from_int(-1, 1));
        c.set(0, h.v(0).clone());
        assert_eq!(kl.c(&h, 1), c);
    }

    #[test]
    fn a2_longest_element() {
        let h = algebra("A2");
        let kl = KlBasis::compute(&h).unwrap();
        let w0 = h.group().longest();
        for y in 0..6 {
            let e = h.group().length(y) as i32 - 3;
            assert_eq!(kl.p(y, w0), &LaurentPoly::eps(ExponentVec::from_slice(&[e])));
        }
    }

    #[test]
    fn bar_invariance_and_triangularity() {
        for name in ["A2", "B3", "I2:5", "I2:6"] {
            let h = algebra(name);
            let kl = KlBasis::compute(&h).unwrap();
            let g = h.group();
            for w in g.elements() {
                assert_eq!(&h.bar(kl.cprime(w)), kl.cprime(w), "{name}");
                let c = kl.c(&h, w);
                assert_eq!(h.bar(&c), c);
                for y in kl.cprime(w).support() {
                    if y == w {
                        assert!(kl.p(y, w).is_one());
                    } else {
                        assert!(g.length(y) < g.length(w));
                        assert!(kl.p(y, w).is_strictly_negative(h.order()));
                    }
                }
            }
        }
    }

    #[test]
    fn basis_round_trip() {
        let h = algebra("B2");
        let kl = KlBasis::compute(&h).unwrap();
        for w in h.group().elements() {
            let t = h.t(w);
            let c = kl.t_to_c(&h, &t);
            assert_eq!(kl.c_to_t(&h, &c), t);
        }
    }
}
