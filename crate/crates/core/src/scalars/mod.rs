//! The coefficient tower `Z_W ⊂ F ⊂ A = F[Γ] ⊂ K` and valuations.

pub mod exponent;
pub mod field;
pub mod kscalar;
pub mod laurent;
pub mod rational;

use std::fmt;

pub use exponent::{ExponentVec, MonomialOrder};
pub use field::{real_cyclotomic, FieldScalar, RealCyclotomicField};
pub use kscalar::KScalar;
pub use laurent::LaurentPoly;
pub use rational::Q;

use crate::error::{Error, Result};

/// Normal form data `x = r ε^g (1+p)/(1+q)`; `g = None` encodes `+∞` (x = 0).
#[derive(Clone, Debug, PartialEq)]
pub struct ValuationData {
    pub g: Option<ExponentVec>,
    pub r: FieldScalar,
}

/// Smallest exponent of a nonzero polynomial.
pub fn min_exponent(p: &LaurentPoly, ord: &MonomialOrder) -> Result<ExponentVec> {
    p.min_exponent(ord)
}

pub fn valuation_data(x: &KScalar, ord: &MonomialOrder) -> ValuationData {
    x.valuation_data(ord)
}

/// Constant term of `ε^g x`, which must lie in the valuation ring.
pub fn constant_term_after_shift(x: &KScalar, g: &ExponentVec, ord: &MonomialOrder) -> Result<FieldScalar> {
    let vd = x.valuation_data(ord);
    let Some(h) = vd.g else {
        return Ok(FieldScalar::zero());
    };
    let s = &h + g;
    match ord.sign(&s) {
        std::cmp::Ordering::Less => Err(Error::NotInValuationRing),
        std::cmp::Ordering::Equal => Ok(vd.r),
        std::cmp::Ordering::Greater => Ok(FieldScalar::zero()),
    }
}

/// Same as [`constant_term_after_shift`] for a polynomial.
pub fn laurent_constant_term_after_shift(
    p: &LaurentPoly,
    g: &ExponentVec,
    ord: &MonomialOrder,
) -> Result<FieldScalar> {
    let Some((h, c)) = p.min_term(ord) else {
        return Ok(FieldScalar::zero());
    };
    let s = h + g;
    match ord.sign(&s) {
        std::cmp::Ordering::Less => Err(Error::NotInValuationRing),
        std::cmp::Ordering::Equal => Ok(c.clone()),
        std::cmp::Ordering::Greater => Ok(FieldScalar::zero()),
    }
}

/// Minimal commutative ring interface used by the generic matrix code.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn r_add(&self, o: &Self) -> Self;
    fn r_sub(&self, o: &Self) -> Self;
    fn r_neg(&self) -> Self;
    fn r_mul(&self, o: &Self) -> Self;
    fn r_is_zero(&self) -> bool;
}

/// Rings in which every nonzero element is invertible.
pub trait Field: Ring {
    fn r_inv(&self) -> Result<Self>;
}

macro_rules! ring_impl {
    ($t:ty, $zero:expr, $one:expr) => {
        impl Ring for $t {
            fn zero_like(&self) -> Self {
                #[allow(clippy::redundant_closure_call)]
                ($zero)(self)
            }
            fn one_like(&self) -> Self {
                #[allow(clippy::redundant_closure_call)]
                ($one)(self)
            }
            fn r_add(&self, o: &Self) -> Self {
                <$t>::add(self, o)
            }
            fn r_sub(&self, o: &Self) -> Self {
                <$t>::sub(self, o)
            }
            fn r_neg(&self) -> Self {
                <$t>::neg(self)
            }
            fn r_mul(&self, o: &Self) -> Self {
                <$t>::mul(self, o)
            }
            fn r_is_zero(&self) -> bool {
                <$t>::is_zero(self)
            }
        }
    };
}

ring_impl!(Q, |_: &Q| Q::ZERO, |_: &Q| Q::ONE);
ring_impl!(FieldScalar, |_: &FieldScalar| FieldScalar::zero(), |_: &FieldScalar| FieldScalar::one());
ring_impl!(
    LaurentPoly,
    |_: &LaurentPoly| LaurentPoly::zero(),
    |p: &LaurentPoly| LaurentPoly::one(p.rank().unwrap_or(1))
);
ring_impl!(KScalar, |x: &KScalar| KScalar::zero(x.rank()), |x: &KScalar| KScalar::one(x.rank()));

impl Field for Q {
    fn r_inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::Arithmetic("division by zero".into()))
        } else {
            Ok(self.inv())
        }
    }
}

impl Field for FieldScalar {
    fn r_inv(&self) -> Result<Self> {
        self.inv()
    }
}

impl Field for KScalar {
    fn r_inv(&self) -> Result<Self> {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: &[i32]) -> ExponentVec {
        ExponentVec::from_slice(c)
    }

    #[test]
    fn valuation_examples() {
        let ord = MonomialOrder::natural(1);
        let one = KScalar::one(1);
        assert_eq!(
            valuation_data(&one, &ord),
            ValuationData {
                g: Some(e(&[0])),
                r: FieldScalar::one()
            }
        );
        let x = KScalar::eps(e(&[-1])).neg();
        let vd = valuation_data(&x, &ord);
        assert_eq!(vd.g, Some(e(&[-1])));
        assert_eq!(vd.r, FieldScalar::from_int(-1));
    }

    #[test]
    fn constant_term_examples() {
        let ord = MonomialOrder::natural(1);
        let vinv = KScalar::eps(e(&[-1]));
        assert!(constant_term_after_shift(&vinv, &e(&[1]), &ord).unwrap().is_one());
        let x = vinv.add(&KScalar::from_scalar(FieldScalar::from_int(3), 1));
        assert!(constant_term_after_shift(&x, &e(&[1]), &ord).unwrap().is_one());
        let v = KScalar::eps(e(&[1]));
        assert!(constant_term_after_shift(&v, &e(&[1]), &ord).unwrap().is_zero());
        assert_eq!(
            constant_term_after_shift(&vinv, &e(&[0]), &ord),
            Err(Error::NotInValuationRing)
        );
    }
}
