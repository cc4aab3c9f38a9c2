//! Exponents in `Γ = Z^k` and coordinate-priority lexicographic orders.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// An element of `Z^k`.
///
/// The derived `Ord` is plain lexicographic order on the stored coordinates;
/// it is only used for canonical storage. Valuations always go through a
/// [`MonomialOrder`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExponentVec(pub SmallVec<[i32; 4]>);

impl ExponentVec {
    pub fn zero(rank: usize) -> Self {
        ExponentVec(smallvec::smallvec![0; rank])
    }

    pub fn from_slice(c: &[i32]) -> Self {
        ExponentVec(SmallVec::from_slice(c))
    }

    /// The `i`-th unit vector.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut g = Self::zero(rank);
        g.0[i] = 1;
        g
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i32) -> Self {
        ExponentVec(self.0.iter().map(|c| c * k).collect())
    }

    /// Halve every coordinate, if all are even.
    pub fn halve(&self) -> Option<Self> {
        if self.0.iter().all(|c| c % 2 == 0) {
            Some(ExponentVec(self.0.iter().map(|c| c / 2).collect()))
        } else {
            None
        }
    }
}

impl Add for &ExponentVec {
    type Output = ExponentVec;
    fn add(self, o: &ExponentVec) -> ExponentVec {
        debug_assert_eq!(self.rank(), o.rank());
        ExponentVec(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ExponentVec {
    type Output = ExponentVec;
    fn sub(self, o: &ExponentVec) -> ExponentVec {
        debug_assert_eq!(self.rank(), o.rank());
        ExponentVec(self.0.iter().zip(o.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ExponentVec {
    type Output = ExponentVec;
    fn neg(self) -> ExponentVec {
        ExponentVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for ExponentVec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .unwrap_or(t);
        let mut v = SmallVec::new();
        for part in inner.split(',') {
            let p = part.trim();
            if p.is_empty() {
                continue;
            }
            v.push(
                p.parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad exponent vector `{s}`")))?,
            );
        }
        Ok(ExponentVec(v))
    }
}

/// A lexicographic order on `Z^k` comparing coordinates in priority order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    priority: Vec<usize>,
}

impl MonomialOrder {
    /// Priority is a permutation of `0..k`, highest priority first.
    pub fn new(priority: Vec<usize>) -> Result<Self> {
        let k = priority.len();
        if k == 0 {
            return Err(Error::Input("monomial order needs rank >= 1".into()));
        }
        let mut seen = vec![false; k];
        for &p in &priority {
            if p >= k || seen[p] {
                return Err(Error::Input(format!("priority {priority:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(MonomialOrder { priority })
    }

    /// Compare coordinate 0 first, then 1, and so on.
    pub fn natural(rank: usize) -> Self {
        MonomialOrder {
            priority: (0..rank).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.priority.len()
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn cmp(&self, a: &ExponentVec, b: &ExponentVec) -> Ordering {
        for &i in &self.priority {
            match a.0[i].cmp(&b.0[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// Sign of `g` relative to zero.
    pub fn sign(&self, g: &ExponentVec) -> Ordering {
        for &i in &self.priority {
            match g.0[i].cmp(&0) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn is_positive(&self, g: &ExponentVec) -> bool {
        self.sign(g) == Ordering::Greater
    }

    pub fn is_nonnegative(&self, g: &ExponentVec) -> bool {
        self.sign(g) != Ordering::Less
    }

    pub fn max<'a>(&self, a: &'a ExponentVec, b: &'a ExponentVec) -> &'a ExponentVec {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: &[i32]) -> ExponentVec {
        ExponentVec::from_slice(c)
    }

    #[test]
    fn priority_comparison() {
        let ord = MonomialOrder::new(vec![1, 0]).unwrap();
        assert_eq!(ord.cmp(&e(&[2, -1]), &e(&[0, 3])), Ordering::Less);
        assert_eq!(MonomialOrder::natural(2).cmp(&e(&[2, -1]), &e(&[0, 3])), Ordering::Greater);
        assert!(ord.is_positive(&e(&[-5, 1])));
        assert!(MonomialOrder::new(vec![0, 0]).is_err());
    }

    #[test]
    fn text_form() {
        let g = e(&[3, -2]);
        assert_eq!(g.to_string(), "[3,-2]");
        assert_eq!("[3,-2]".parse::<ExponentVec>().unwrap(), g);
    }
}
