//! Schur elements, invariant forms, balancing and leading coefficients.

use rayon::prelude::*;

use super::MatrixRep;
use crate::coxeter::Elem;
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, FULL_TABLE_LIMIT};
use crate::linalg::Matrix;
use crate::scalars::{constant_term_after_shift, ExponentVec, FieldScalar, KScalar, LaurentPoly, MonomialOrder, Q};

/// `c_λ`, `a_λ` and `f_λ` of one representation.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurData {
    pub c_lambda: LaurentPoly,
    pub a_lambda: ExponentVec,
    pub f_lambda: FieldScalar,
}

/// `c_λ = (1/d) Σ_w tr ρ(T_w) tr ρ(T_{w^{-1}})`.
pub fn schur_element(rep: &MatrixRep, h: &HeckeAlgebra) -> Result<SchurData> {
    let g = h.group();
    let k = h.gamma_rank();
    let traces: Vec<KScalar> = (0..g.size()).into_par_iter().map(|w| rep.trace(w)).collect();
    let sum = (0..g.size())
        .into_par_iter()
        .map(|w| traces[w].mul(&traces[g.inverse(w)]))
        .reduce(|| KScalar::zero(k), |a, b| a.add(&b));
    let c = sum
        .to_laurent()
        .ok_or_else(|| Error::NotOverRing(format!("{}: trace sum keeps a denominator", rep.label())))?
        .scale_q(&Q::new(1, rep.dim() as i64));
    schur_from_poly(c, h.order(), rep.label())
}

fn schur_from_poly(c: LaurentPoly, ord: &MonomialOrder, label: &str) -> Result<SchurData> {
    let (g, f) = c
        .min_term(ord)
        .cloned()
        .ok_or_else(|| Error::Internal(format!("{label}: vanishing Schur element")))?;
    let a = (-&g)
        .halve()
        .ok_or_else(|| Error::Internal(format!("{label}: Schur valuation {g} is odd")))?;
    if f.signum() <= 0 {
        return Err(Error::Internal(format!("{label}: f = {f} is not positive")));
    }
    Ok(SchurData {
        c_lambda: c,
        a_lambda: a,
        f_lambda: f,
    })
}

/// Least valuation among the nonzero entries.
fn min_valuation(m: &Matrix<KScalar>, ord: &MonomialOrder) -> Option<ExponentVec> {
    m.entries()
        .iter()
        .filter_map(|x| x.valuation_data(ord).g)
        .reduce(|a, b| if ord.cmp(&a, &b).is_le() { a } else { b })
}

/// Entrywise constant terms of a matrix in `M_d(O)`.
pub fn constant_terms(m: &Matrix<KScalar>, ord: &MonomialOrder) -> Result<Matrix<FieldScalar>> {
    let zero = ExponentVec::zero(m.get(0, 0).rank());
    m.try_map(|x| constant_term_after_shift(x, &zero, ord))
}

/// True if `Ω ρ(T_s) = ρ(T_s)ᵗ Ω` for every generator.
pub fn intertwines(rep: &MatrixRep, omega: &Matrix<KScalar>) -> bool {
    rep.generators()
        .iter()
        .all(|t| omega.mul(t) == t.transpose().mul(omega))
}

/// `Σ_w ρ(T_w)ᵗ ρ(T_w)`, rescaled into `M_d(O)` with some unit entry and
/// with the constant term of the last diagonal entry equal to 1.
pub fn gram_average(rep: &MatrixRep, h: &HeckeAlgebra) -> Result<Matrix<KScalar>> {
    let d = rep.dim();
    let k = h.gamma_rank();
    let zero = Matrix::filled(d, d, KScalar::zero(k));
    let sum = (0..h.size())
        .into_par_iter()
        .map(|w| {
            let m = rep.matrix_of(w);
            m.transpose().mul(m)
        })
        .reduce(|| zero.clone(), |a, b| a.add(&b));
    let omega = normalize_form(&sum, h.order())?;
    if !omega.is_symmetric() || !intertwines(rep, &omega) {
        return Err(Error::Internal(format!("{}: averaged form does not intertwine", rep.label())));
    }
    Ok(omega)
}

/// Scale a form by `r ε^{−g}` so its entries lie in `O`, one is a unit and
/// the last positive diagonal constant term becomes 1.
pub fn normalize_form(omega: &Matrix<KScalar>, ord: &MonomialOrder) -> Result<Matrix<KScalar>> {
    let g = min_valuation(omega, ord).ok_or(Error::Degenerate)?;
    let shifted = omega.map(|x| x.shift(&-&g));
    let b = constant_terms(&shifted, ord)?;
    let d = b.rows();
    let pivot = (0..d)
        .rev()
        .map(|i| b.get(i, i).clone())
        .find(|x| !x.is_zero())
        .unwrap_or_else(FieldScalar::one);
    let s = pivot.inv()?;
    Ok(shifted.map(|x| x.scale(&s)))
}

/// Determinant data backing a balancedness verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct BalanceCertificate {
    /// Valuation of `det Ω` (`None` if zero).
    pub det_valuation: Option<ExponentVec>,
    pub det_constant: FieldScalar,
    pub balanced: bool,
    /// Entrywise check of `ε^{a_λ} ρ(T_w) ∈ M_d(O)`, when run.
    pub direct: Option<bool>,
}

fn directly_balanced(rep: &MatrixRep, a: &ExponentVec, ord: &MonomialOrder, n: usize) -> bool {
    (0..n).into_par_iter().all(|w| {
        rep.matrix_of(w)
            .entries()
            .iter()
            .all(|x| constant_term_after_shift(x, a, ord).is_ok())
    })
}

/// Balancedness via `det Ω ∈ O^×` for a normalized invariant form, cross
/// checked entrywise on small groups.
pub fn is_balanced(rep: &MatrixRep, omega: &Matrix<KScalar>, h: &HeckeAlgebra) -> Result<BalanceCertificate> {
    let ord = h.order();
    if !omega.is_symmetric() || !intertwines(rep, omega) {
        return Err(Error::Input(format!("{}: form is not a symmetric intertwiner", rep.label())));
    }
    if constant_terms(omega, ord).is_err() {
        return Err(Error::Input(format!("{}: form is not normalized into O", rep.label())));
    }
    let det = omega.det();
    let vd = det.valuation_data(ord);
    let balanced = vd.g.as_ref().is_some_and(|g| g.is_zero());
    let direct = if h.size() <= FULL_TABLE_LIMIT {
        let a = schur_element(rep, h)?.a_lambda;
        let ok = directly_balanced(rep, &a, ord, h.size());
        if ok != balanced {
            return Err(Error::Internal(format!(
                "{}: determinant criterion ({balanced}) disagrees with entrywise check ({ok})",
                rep.label()
            )));
        }
        Some(ok)
    } else {
        None
    };
    Ok(BalanceCertificate {
        det_valuation: vd.g,
        det_constant: vd.r,
        balanced,
        direct,
    })
}

/// An equivalent balanced representation.
///
/// Orthogonalizes the averaged form over `K`, then rescales each basis
/// vector by `ε^{−g_i}` with `2 g_i` the valuation of its norm.
pub fn balance(rep: &MatrixRep, h: &HeckeAlgebra) -> Result<MatrixRep> {
    let ord = h.order();
    let omega = gram_average(rep, h)?;
    if is_balanced(rep, &omega, h)?.balanced {
        return Ok(rep.clone());
    }
    let d = rep.dim();
    let k = h.gamma_rank();
    let form = |x: &[KScalar], y: &[KScalar]| -> KScalar {
        let mut acc = KScalar::zero(k);
        for i in 0..d {
            for j in 0..d {
                let o = omega.get(i, j);
                if !o.is_zero() && !x[i].is_zero() && !y[j].is_zero() {
                    acc = acc.add(&x[i].mul(o).mul(&y[j]));
                }
            }
        }
        acc
    };
    let mut basis: Vec<Vec<KScalar>> = Vec::with_capacity(d);
    let mut norms: Vec<KScalar> = Vec::with_capacity(d);
    for i in 0..d {
        let mut u: Vec<KScalar> = (0..d).map(|j| if i == j { KScalar::one(k) } else { KScalar::zero(k) }).collect();
        let e = u.clone();
        for (b, n) in basis.iter().zip(&norms) {
            let c = form(&e, b).div(n)?;
            if !c.is_zero() {
                for j in 0..d {
                    u[j] = u[j].sub(&c.mul(&b[j]));
                }
            }
        }
        let n = form(&u, &u);
        if n.is_zero() {
            return Err(Error::Degenerate);
        }
        basis.push(u);
        norms.push(n);
    }
    let mut scaled = Vec::with_capacity(d);
    for (u, n) in basis.iter().zip(&norms) {
        let g = n.valuation_data(ord).g.ok_or(Error::Degenerate)?;
        let half = ExponentVec::from_slice(&g.coords().iter().map(|c| c.div_euclid(2)).collect::<Vec<_>>());
        let s = KScalar::eps(-&half);
        scaled.push(u.iter().map(|x| x.mul(&s)).collect::<Vec<_>>());
    }
    let diagonal = (0..d).all(|i| (0..d).all(|j| i == j || basis[i][j].is_zero()));
    let out = if diagonal {
        rep.conjugate_diagonal(&(0..d).map(|i| scaled[i][i].clone()).collect::<Vec<_>>())?
    } else {
        rep.conjugate(&Matrix::from_fn(d, d, |i, j| scaled[j][i].clone()))?
    };
    let omega2 = gram_average(&out, h)?;
    if !is_balanced(&out, &omega2, h)?.balanced {
        return Err(Error::NotBalanced(format!(
            "{}: rescaling by half valuations did not balance",
            rep.label()
        )));
    }
    Ok(out)
}

/// Leading matrix coefficients of one balanced representation.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingTensor {
    pub label: String,
    pub dim: usize,
    pub a: ExponentVec,
    pub f: FieldScalar,
    /// `c[w]_{ij}`.
    pub c: Vec<Matrix<FieldScalar>>,
}

impl LeadingTensor {
    pub fn matrix(&self, w: Elem) -> &Matrix<FieldScalar> {
        &self.c[w]
    }

    pub fn entry(&self, w: Elem, i: usize, j: usize) -> &FieldScalar {
        self.c[w].get(i, j)
    }

    /// Elements with a nonzero coefficient.
    pub fn support(&self) -> Vec<Elem> {
        (0..self.c.len())
            .filter(|&w| self.c[w].entries().iter().any(|x| !x.is_zero()))
            .collect()
    }
}

/// `c^{ij}_{w,λ}`: constant term of `(−1)^{l(w)} ε^{a_λ} ρ_{ij}(T_w)`.
pub fn leading_coeffs(rep: &MatrixRep, schur: &SchurData, h: &HeckeAlgebra) -> Result<LeadingTensor> {
    let ord = h.order();
    let g = h.group();
    let a = &schur.a_lambda;
    let c = (0..g.size())
        .into_par_iter()
        .map(|w| {
            let m = rep.matrix_of(w).try_map(|x| {
                constant_term_after_shift(x, a, ord).map_err(|_| {
                    Error::NotBalanced(format!("{}: entry of T_{} outside O", rep.label(), g.label(w)))
                })
            })?;
            Ok(if g.length(w) % 2 == 1 { m.map(FieldScalar::neg) } else { m })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LeadingTensor {
        label: rep.label().to_string(),
        dim: rep.dim(),
        a: a.clone(),
        f: schur.f_lambda.clone(),
        c,
    })
}

/// Violations of the two families of Schur relations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SchurReport {
    /// `(λ, μ, i, j, k, l)` failing the first family.
    pub star: Vec<(String, String, usize, usize, usize, usize)>,
    /// `(x, y)` failing the inverted family.
    pub star_prime: Vec<(Elem, Elem)>,
}

impl SchurReport {
    pub fn ok(&self) -> bool {
        self.star.is_empty() && self.star_prime.is_empty()
    }
}

/// Check both orthogonality families on a complete set of tensors.
pub fn verify_schur_leading(tensors: &[LeadingTensor], h: &HeckeAlgebra) -> Result<SchurReport> {
    let g = h.group();
    let n = g.size();
    let have: usize = tensors.iter().map(|t| t.dim * t.dim).sum();
    if have != n {
        return Err(Error::MissingIrreducibles { have, need: n });
    }
    let pairs: Vec<(usize, usize)> = (0..tensors.len())
        .flat_map(|l| (0..tensors.len()).map(move |m| (l, m)))
        .collect();
    let star: Vec<_> = pairs
        .par_iter()
        .flat_map_iter(|&(l, m)| {
            let (tl, tm) = (&tensors[l], &tensors[m]);
            let mut bad = Vec::new();
            for i in 0..tl.dim {
                for j in 0..tl.dim {
                    for k in 0..tm.dim {
                        for ll in 0..tm.dim {
                            let mut s = FieldScalar::zero();
                            for w in 0..n {
                                let a = tl.entry(w, i, j);
                                if !a.is_zero() {
                                    s = s.add(&a.mul(tm.entry(g.inverse(w), k, ll)));
                                }
                            }
                            let expect = if l == m && i == ll && j == k {
                                tl.f.clone()
                            } else {
                                FieldScalar::zero()
                            };
                            if s != expect {
                                bad.push((tl.label.clone(), tm.label.clone(), i, j, k, ll));
                            }
                        }
                    }
                }
            }
            bad
        })
        .collect();
    let finv: Vec<FieldScalar> = tensors.iter().map(|t| t.f.inv()).collect::<Result<_>>()?;
    let star_prime: Vec<_> = (0..n)
        .into_par_iter()
        .flat_map_iter(|x| {
            let mut bad = Vec::new();
            for y in 0..n {
                let yi = g.inverse(y);
                let mut s = FieldScalar::zero();
                for (t, fi) in tensors.iter().zip(&finv) {
                    let tr = t.matrix(x).mul(t.matrix(yi)).trace();
                    if !tr.is_zero() {
                        s = s.add(&tr.mul(fi));
                    }
                }
                let expect = if x == y { FieldScalar::one() } else { FieldScalar::zero() };
                if s != expect {
                    bad.push((x, y));
                }
            }
            bad
        })
        .collect();
    Ok(SchurReport { star, star_prime })
}

/// A balanced representation with everything derived from it.
#[derive(Clone, Debug)]
pub struct PreparedRep {
    pub rep: MatrixRep,
    pub schur: SchurData,
    pub omega: Matrix<KScalar>,
    pub certificate: BalanceCertificate,
    pub leading: LeadingTensor,
}

impl PreparedRep {
    pub fn label(&self) -> &str {
        self.rep.label()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Constant terms of the normalized form.
    pub fn b_matrix(&self, ord: &MonomialOrder) -> Result<Matrix<FieldScalar>> {
        constant_terms(&self.omega, ord)
    }
}

/// Balance `rep` and compute its Schur data, form and leading coefficients.
pub fn prepare(rep: &MatrixRep, h: &HeckeAlgebra) -> Result<PreparedRep> {
    let schur = schur_element(rep, h)?;
    let rep = balance(rep, h)?;
    let omega = gram_average(&rep, h)?;
    let certificate = is_balanced(&rep, &omega, h)?;
    let leading = leading_coeffs(&rep, &schur, h)?;
    Ok(PreparedRep {
        rep,
        schur,
        omega,
        certificate,
        leading,
    })
}
