//! Dense matrices over any [`Ring`], with elimination over fields.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{Field, Ring};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<T> = rows.into_iter().flatten().collect();
        Self::new(r, c, data)
    }

    pub fn filled(rows: usize, cols: usize, x: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![x; rows * cols],
        }
    }

    /// Identity, using `one` to fix the ring context.
    pub fn identity(n: usize, one: &T) -> Self {
        let zero = one.zero_like();
        Self::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        let n = d.len();
        let zero = d[0].zero_like();
        Self::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { zero.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Ring>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.r_add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.r_sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.r_mul(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut data = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc: Option<T> = None;
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.r_is_zero() {
                        continue;
                    }
                    let b = o.get(k, j);
                    if b.r_is_zero() {
                        continue;
                    }
                    let p = a.r_mul(b);
                    acc = Some(match acc {
                        Some(x) => x.r_add(&p),
                        None => p,
                    });
                }
                data.push(acc.unwrap_or_else(|| self.data[0].zero_like()));
            }
        }
        Matrix {
            rows: self.rows,
            cols: o.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::r_is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> T {
        let mut acc = self.data[0].zero_like();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.r_add(self.get(i, i));
        }
        acc
    }
}

impl<T: Field> Matrix<T> {
    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let one = self.data[0].one_like();
        if n == 0 {
            return one;
        }
        let mut a = self.clone();
        let mut det = one;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).r_is_zero()) else {
                return self.data[0].zero_like();
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
                det = det.r_neg();
            }
            let piv = a.get(c, c).clone();
            det = det.r_mul(&piv);
            let pinv = piv.r_inv().expect("nonzero pivot");
            for r in c + 1..n {
                let f = a.get(r, c).r_mul(&pinv);
                if f.r_is_zero() {
                    continue;
                }
                for j in c..n {
                    let x = a.get(r, j).r_sub(&f.r_mul(a.get(c, j)));
                    a.set(r, j, x);
                }
            }
        }
        det
    }

    /// Solve `self · X = b` for square invertible `self`.
    pub fn solve(&self, b: &Self) -> Result<Self> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, b.rows);
        let n = self.rows;
        let m = b.cols;
        let mut a = self.clone();
        let mut x = b.clone();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a.get(r, c).r_is_zero())
                .ok_or_else(|| Error::Arithmetic("singular matrix".into()))?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
                for j in 0..m {
                    x.data.swap(p * m + j, c * m + j);
                }
            }
            let pinv = a.get(c, c).r_inv()?;
            for j in 0..n {
                let v = a.get(c, j).r_mul(&pinv);
                a.set(c, j, v);
            }
            for j in 0..m {
                let v = x.get(c, j).r_mul(&pinv);
                x.set(c, j, v);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.r_is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j).r_sub(&f.r_mul(a.get(c, j)));
                    a.set(r, j, v);
                }
                for j in 0..m {
                    let v = x.get(r, j).r_sub(&f.r_mul(x.get(c, j)));
                    x.set(r, j, v);
                }
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        let one = self.data[0].one_like();
        self.solve(&Self::identity(self.rows, &one))
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Q;

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Q::from_int(x)).collect()).collect())
    }

    #[test]
    fn det_and_inverse() {
        let a = qm(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), Q::from_int(18));
        let ai = a.inverse().unwrap();
        assert_eq!(a.mul(&ai), Matrix::identity(3, &Q::ONE));
        assert_eq!(qm(&[&[1, 2], &[2, 4]]).det(), Q::ZERO);
        assert!(qm(&[&[0, 1], &[1, 0]]).det() == Q::from_int(-1));
    }
}
