//! Dense integer matrices over a pluggable scalar type.
//!
//! The reduction code runs on machine integers first and falls back to
//! arbitrary precision when an operation overflows, so every routine here is
//! written against the [`Scalar`] trait and reports overflow as `None`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    /// Compare absolute values.
    fn abs_cmp(&self, other: &Self) -> Ordering;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn checked_sub(&self, other: &Self) -> Option<Self>;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn checked_neg(&self) -> Option<Self>;
    /// Quotient rounded to nearest, so that `|self - q*d| <= |d|/2`.
    fn div_nearest(&self, d: &Self) -> Option<Self>;
    /// Euclidean remainder in `[0, |d|)`.
    fn rem_euclid(&self, d: &Self) -> Option<Self>;
    fn divides(&self, other: &Self) -> bool;
    fn to_i64(&self) -> Option<i64>;
    fn to_bigint(&self) -> BigInt;

    /// `self - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(&q.checked_mul(b)?)
    }
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        i64::checked_add(*self, *other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        i64::checked_sub(*self, *other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        i64::checked_mul(*self, *other)
    }
    fn checked_neg(&self) -> Option<Self> {
        i64::checked_neg(*self)
    }
    fn div_nearest(&self, d: &Self) -> Option<Self> {
        if *d == 0 {
            return None;
        }
        let (a, b) = (*self as i128, *d as i128);
        let q = a.div_euclid(b);
        let r = a - q * b;
        let q = if 2 * r.abs() > b.abs() { q + b.signum() } else { q };
        i64::try_from(q).ok()
    }
    fn rem_euclid(&self, d: &Self) -> Option<Self> {
        if *d == 0 {
            return None;
        }
        i64::checked_rem_euclid(*self, *d)
    }
    fn divides(&self, other: &Self) -> bool {
        if *self == 0 {
            *other == 0
        } else {
            (*other as i128) % (*self as i128) == 0
        }
    }
    fn to_i64(&self) -> Option<i64> {
        Some(*self)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_nearest(&self, d: &Self) -> Option<Self> {
        if Zero::is_zero(d) {
            return None;
        }
        let (q, r) = self.div_mod_floor(&d.abs());
        let q = q * d.signum();
        let two_r: BigInt = r * 2;
        if two_r > d.abs() {
            Some(q + d.signum())
        } else {
            Some(q)
        }
    }
    fn rem_euclid(&self, d: &Self) -> Option<Self> {
        if Zero::is_zero(d) {
            return None;
        }
        Some(self.mod_floor(&d.abs()))
    }
    fn divides(&self, other: &Self) -> bool {
        if Zero::is_zero(self) {
            Zero::is_zero(other)
        } else {
            Zero::is_zero(&(other % self))
        }
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<i64>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).checked_add(&a.checked_mul(b)?)?;
                    out.set(i, j, v);
                }
            }
        }
        Some(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Option<Vec<T>> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![T::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (a, b) in self.row(i).iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    *o = o.checked_add(&a.checked_mul(b)?)?;
                }
            }
        }
        Some(out)
    }

    /// Submatrix picking the given rows and columns, in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[dst] -= q * row[src]`
    pub fn row_sub_mul(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        for c in 0..self.cols {
            let s = self.get(src, c);
            if s.is_zero() {
                continue;
            }
            let v = self.get(dst, c).sub_mul(q, s)?;
            self.set(dst, c, v);
        }
        Some(())
    }

    /// `col[dst] -= q * col[src]`
    pub fn col_sub_mul(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        for r in 0..self.rows {
            let s = self.get(r, src);
            if s.is_zero() {
                continue;
            }
            let v = self.get(r, dst).sub_mul(q, s)?;
            self.set(r, dst, v);
        }
        Some(())
    }

    pub fn negate_row(&mut self, r: usize) -> Option<()> {
        for c in 0..self.cols {
            let v = self.get(r, c).checked_neg()?;
            self.set(r, c, v);
        }
        Some(())
    }

    pub fn negate_col(&mut self, c: usize) -> Option<()> {
        for r in 0..self.rows {
            let v = self.get(r, c).checked_neg()?;
            self.set(r, c, v);
        }
        Some(())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> Option<U>) -> Option<Matrix<U>> {
        let data = self.data.iter().map(f).collect::<Option<Vec<U>>>()?;
        Some(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn to_big(&self) -> Matrix<BigInt> {
        self.map(|v| Some(v.to_bigint())).expect("conversion to BigInt cannot fail")
    }

    pub fn to_i64(&self) -> Option<Matrix<i64>> {
        self.map(Scalar::to_i64)
    }

    /// Nonzero entries as `(row, col, value)` triplets in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    out.push((r, c, v.clone()));
                }
            }
        }
        out
    }
}

impl Matrix<BigInt> {
    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::from(1);
        }
        let mut m = self.clone();
        let mut sign = BigInt::from(1);
        let mut prev = BigInt::from(1);
        for k in 0..n - 1 {
            if Zero::is_zero(m.get(k, k)) {
                let Some(p) = (k + 1..n).find(|&r| !Zero::is_zero(m.get(r, k))) else {
                    return BigInt::from(0);
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Write nonzero entries as "row col value" lines.
pub fn to_sparse_triplet_text<T: Scalar>(m: &Matrix<T>) -> String {
    let mut s = format!("# {} {}\n", m.rows(), m.cols());
    for (r, c, v) in m.triplets() {
        s.push_str(&format!("{r} {c} {v}\n"));
    }
    s
}
