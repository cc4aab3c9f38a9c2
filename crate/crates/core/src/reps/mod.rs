//! Matrix representations of `H_K`: construction, validation, Schur elements,
//! invariant forms, balancing and leading matrix coefficients.

mod balance;
mod builtin;
mod file;

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

pub use balance::{
    balance, constant_terms, gram_average, intertwines, is_balanced, leading_coeffs, normalize_form, prepare,
    schur_element, verify_schur_leading, BalanceCertificate, LeadingTensor, PreparedRep, SchurData, SchurReport,
};
pub use builtin::{
    builtin_family, dihedral, dihedral_omega, onedim, seminormal_a, seminormal_b, Bipartition, FamilyKind, Partition,
};
pub use file::{load_rep, parse_rep, rep_to_json, wgraph_rep, WGraph, WGraphEdge, WGraphVertex};

use crate::coxeter::{CoxeterGroup, Elem};
use crate::error::{Error, Result};
use crate::hecke::HeckeAlgebra;
use crate::linalg::Matrix;
use crate::scalars::{FieldScalar, KScalar, LaurentPoly};

/// `ρ(T_s)` for each generator, with `ρ(T_x T_y) = ρ(T_x) ρ(T_y)`.
pub struct MatrixRep {
    label: String,
    rank: usize,
    group: Arc<CoxeterGroup>,
    gens: Vec<Matrix<KScalar>>,
    words: OnceLock<Vec<Matrix<KScalar>>>,
}

impl Clone for MatrixRep {
    fn clone(&self) -> Self {
        MatrixRep {
            label: self.label.clone(),
            rank: self.rank,
            group: self.group.clone(),
            gens: self.gens.clone(),
            words: self.words.clone(),
        }
    }
}

impl std::fmt::Debug for MatrixRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MatrixRep({}, dim {})", self.label, self.dim())
    }
}

impl MatrixRep {
    /// Build and check the quadratic and braid relations.
    pub fn new(label: impl Into<String>, h: &HeckeAlgebra, gens: Vec<Matrix<KScalar>>) -> Result<Self> {
        let rep = Self::new_unchecked(label, h, gens)?;
        rep.validate(h)?;
        Ok(rep)
    }

    /// Shapes are checked, relations are not.
    pub fn new_unchecked(label: impl Into<String>, h: &HeckeAlgebra, gens: Vec<Matrix<KScalar>>) -> Result<Self> {
        let label = label.into();
        if gens.len() != h.group().rank() {
            return Err(Error::Input(format!(
                "{label}: {} generator matrices for rank {}",
                gens.len(),
                h.group().rank()
            )));
        }
        let d = gens.first().map_or(0, |m| m.rows());
        if d == 0 || gens.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::Input(format!("{label}: generator matrices must be square of equal size")));
        }
        Ok(MatrixRep {
            label,
            rank: h.gamma_rank(),
            group: h.group_arc().clone(),
            gens,
            words: OnceLock::new(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.gens[0].rows()
    }

    pub fn gamma_rank(&self) -> usize {
        self.rank
    }

    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn generators(&self) -> &[Matrix<KScalar>] {
        &self.gens
    }

    pub fn generator(&self, s: usize) -> &Matrix<KScalar> {
        &self.gens[s]
    }

    fn one(&self) -> KScalar {
        KScalar::one(self.rank)
    }

    /// Quadratic relation per generator, braid relation per pair.
    pub fn validate(&self, h: &HeckeAlgebra) -> Result<()> {
        let d = self.dim();
        let id = Matrix::identity(d, &self.one());
        for (s, m) in self.gens.iter().enumerate() {
            let v = KScalar::from_poly(h.v(s).clone(), self.rank);
            let lhs = m.sub(&id.scale(&v)).mul(&m.add(&id.scale(&v.inv()?)));
            if !lhs.is_zero() {
                return Err(Error::BraidViolation(format!("{}: quadratic relation fails for s{s}", self.label)));
            }
        }
        let sys = self.group.system();
        for s in 0..self.gens.len() {
            for t in s + 1..self.gens.len() {
                let m = sys.m(s, t) as usize;
                let mut a = id.clone();
                let mut b = id.clone();
                for i in 0..m {
                    let (x, y) = if i % 2 == 0 { (s, t) } else { (t, s) };
                    a = a.mul(&self.gens[x]);
                    b = b.mul(&self.gens[y]);
                }
                if a != b {
                    return Err(Error::BraidViolation(format!(
                        "{}: braid relation fails for (s{s}, s{t})",
                        self.label
                    )));
                }
            }
        }
        Ok(())
    }

    fn word_matrices(&self) -> &Vec<Matrix<KScalar>> {
        self.words.get_or_init(|| {
            let g = &self.group;
            let n = g.size();
            let mut out: Vec<Option<Matrix<KScalar>>> = vec![None; n];
            out[0] = Some(Matrix::identity(self.dim(), &self.one()));
            for stratum in g.strata().iter().skip(1) {
                let done = &out;
                let new: Vec<(Elem, Matrix<KScalar>)> = stratum
                    .par_iter()
                    .map(|&w| {
                        let s = g.word(w)[0] as usize;
                        let rest = done[g.lmul(s, w)].as_ref().expect("shorter word computed");
                        (w, self.gens[s].mul(rest))
                    })
                    .collect();
                for (w, m) in new {
                    out[w] = Some(m);
                }
            }
            out.into_iter().map(|m| m.expect("all elements reached")).collect()
        })
    }

    /// `ρ(T_w)`, built along the ShortLex reduced word.
    pub fn matrix_of(&self, w: Elem) -> &Matrix<KScalar> {
        &self.word_matrices()[w]
    }

    /// `ρ(T_w)` recomputed along the word read from the right; equals
    /// [`Self::matrix_of`] for a valid representation.
    pub fn matrix_of_right(&self, w: Elem) -> Matrix<KScalar> {
        let g = &self.group;
        if w == 0 {
            return Matrix::identity(self.dim(), &self.one());
        }
        let word = g.word(w);
        let s = *word.last().unwrap() as usize;
        self.matrix_of(g.rmul(w, s)).mul(&self.gens[s])
    }

    /// `ρ(h)` for `h` in the T-basis.
    pub fn matrix_of_elem(&self, h: &crate::hecke::HeckeElem) -> Matrix<KScalar> {
        assert_eq!(h.basis, crate::hecke::Basis::T);
        let mut acc = Matrix::filled(self.dim(), self.dim(), KScalar::zero(self.rank));
        for w in h.support() {
            let c = KScalar::from_poly(h.coeff(w).clone(), self.rank);
            acc = acc.add(&self.matrix_of(w).scale(&c));
        }
        acc
    }

    pub fn trace(&self, w: Elem) -> KScalar {
        self.matrix_of(w).trace()
    }

    /// `tr ρ(T_w)` as a Laurent polynomial (characters of `H_K` lie in `A`).
    pub fn trace_poly(&self, w: Elem) -> Result<LaurentPoly> {
        self.trace(w).to_laurent().ok_or_else(|| {
            Error::NotOverRing(format!("{}: trace of T_{} is not in A", self.label, self.group.label(w)))
        })
    }

    /// Character of `W` obtained by `ε^g ↦ 1`.
    pub fn specialized_character(&self) -> Result<Vec<FieldScalar>> {
        (0..self.group.size()).map(|w| Ok(self.trace_poly(w)?.eval_at_one())).collect()
    }

    /// `P^{-1} ρ P`, i.e. the representation on the basis given by the
    /// columns of `p`.
    pub fn conjugate(&self, p: &Matrix<KScalar>) -> Result<MatrixRep> {
        let pinv = p.inverse()?;
        Ok(MatrixRep {
            label: self.label.clone(),
            rank: self.rank,
            group: self.group.clone(),
            gens: self.gens.iter().map(|m| pinv.mul(m).mul(p)).collect(),
            words: OnceLock::new(),
        })
    }

    /// Conjugation by a diagonal matrix, skipping the general inverse.
    pub fn conjugate_diagonal(&self, diag: &[KScalar]) -> Result<MatrixRep> {
        let inv: Vec<KScalar> = diag.iter().map(KScalar::inv).collect::<Result<_>>()?;
        let gens = self
            .gens
            .iter()
            .map(|m| Matrix::from_fn(m.rows(), m.cols(), |i, j| inv[i].mul(m.get(i, j)).mul(&diag[j])))
            .collect();
        Ok(MatrixRep {
            label: self.label.clone(),
            rank: self.rank,
            group: self.group.clone(),
            gens,
            words: OnceLock::new(),
        })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::coxeter::{CoxeterSystem, WeightFunction};
    use crate::scalars::{ExponentVec, MonomialOrder};

    pub(crate) fn algebra(name: &str, weights: Option<Vec<Vec<i32>>>, priority: Option<Vec<usize>>) -> HeckeAlgebra {
        let sys = CoxeterSystem::parse(name).unwrap();
        let g = Arc::new(CoxeterGroup::new(sys.clone()).unwrap());
        let l = match weights {
            Some(w) => WeightFunction::new(w.iter().map(|x| ExponentVec::from_slice(x)).collect()).unwrap(),
            None => WeightFunction::equal(&sys),
        };
        let k = l.rank();
        let ord = match priority {
            Some(p) => MonomialOrder::new(p).unwrap(),
            None => MonomialOrder::natural(k),
        };
        HeckeAlgebra::new(g, l, ord).unwrap()
    }

    #[test]
    fn rejects_bad_generators() {
        let h = algebra("A2", None, None);
        let v = KScalar::from_poly(h.v(0).clone(), 1);
        let m = Matrix::from_rows(vec![vec![v]]);
        let ok = MatrixRep::new("index", &h, vec![m.clone(), m.clone()]).unwrap();
        assert_eq!(ok.trace_poly(h.group().longest()).unwrap(), h.v_elem(h.group().longest()));
        let minus = Matrix::from_rows(vec![vec![h_inv_neg(&h)]]);
        // conjugate generators sent to different eigenvalues break the braid relation
        let err = MatrixRep::new("bad", &h, vec![m, minus]).unwrap_err();
        assert!(matches!(err, Error::BraidViolation(_)));
        let two = Matrix::from_rows(vec![vec![KScalar::from_poly(LaurentPoly::from_int(2, 1), 1)]]);
        assert!(matches!(
            MatrixRep::new("q", &h, vec![two.clone(), two]).unwrap_err(),
            Error::BraidViolation(_)
        ));
    }

    fn h_inv_neg(h: &HeckeAlgebra) -> KScalar {
        KScalar::from_poly(h.v(0).bar().neg(), 1)
    }
}
