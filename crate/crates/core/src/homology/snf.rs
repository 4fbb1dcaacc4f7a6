//! Smith normal form with unimodular transforms.
//!
//! Pivots are chosen by smallest absolute value (first by position on ties)
//! and quotients are rounded to nearest, which keeps intermediate entries
//! small. Every reduction first runs on `i64` with checked arithmetic and is
//! redone over `BigInt` if anything overflows.

use num_bigint::BigInt;

use super::matrix::{IntMatrix, Matrix, Scalar};

/// `s = u * a * v` with `s` diagonal, nonnegative and satisfying the
/// divisibility chain; `u`, `v` unimodular with inverses `u_inv`, `v_inv`.
#[derive(Clone, Debug)]
pub struct SmithForm<T: Scalar> {
    pub s: Matrix<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub v_inv: Matrix<T>,
    pub rank: usize,
}

impl<T: Scalar> SmithForm<T> {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }

    fn to_big(&self) -> SmithForm<BigInt> {
        SmithForm {
            s: self.s.to_big(),
            u: self.u.to_big(),
            v: self.v.to_big(),
            u_inv: self.u_inv.to_big(),
            v_inv: self.v_inv.to_big(),
            rank: self.rank,
        }
    }
}

struct Reducer<T> {
    a: Matrix<T>,
    track: bool,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
    v_inv: Matrix<T>,
}

impl<T: Scalar> Reducer<T> {
    fn new(a: Matrix<T>, track: bool) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let (mu, mv) = if track { (m, n) } else { (0, 0) };
        Reducer {
            a,
            track,
            u: Matrix::identity(mu),
            u_inv: Matrix::identity(mu),
            v: Matrix::identity(mv),
            v_inv: Matrix::identity(mv),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if self.track {
            self.u.swap_rows(i, j);
            self.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if self.track {
            self.v.swap_cols(i, j);
            self.v_inv.swap_rows(i, j);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_op(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        self.a.row_sub_mul(dst, src, q)?;
        if self.track {
            self.u.row_sub_mul(dst, src, q)?;
            // inverse: col[src] += q * col[dst]
            self.u_inv.col_sub_mul(src, dst, &q.checked_neg()?)?;
        }
        Some(())
    }

    /// col[dst] -= q * col[src]
    fn col_op(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        self.a.col_sub_mul(dst, src, q)?;
        if self.track {
            self.v.col_sub_mul(dst, src, q)?;
            self.v_inv.row_sub_mul(src, dst, &q.checked_neg()?)?;
        }
        Some(())
    }

    fn negate_row(&mut self, r: usize) -> Option<()> {
        self.a.negate_row(r)?;
        if self.track {
            self.u.negate_row(r)?;
            self.u_inv.negate_col(r)?;
        }
        Some(())
    }

    fn min_abs_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.a.rows() {
            for c in t..self.a.cols() {
                let v = self.a.get(r, c);
                if v.is_zero() {
                    continue;
                }
                match best {
                    Some((br, bc)) if v.abs_cmp(self.a.get(br, bc)) != std::cmp::Ordering::Less => {}
                    _ => best = Some((r, c)),
                }
            }
        }
        best
    }

    fn run(mut self) -> Option<SmithForm<T>> {
        let (m, n) = (self.a.rows(), self.a.cols());
        let mut t = 0;
        while t < m.min(n) {
            let Some((pr, pc)) = self.min_abs_in(t) else { break };
            self.swap_rows(t, pr);
            self.swap_cols(t, pc);
            loop {
                let mut clean = true;
                for i in t + 1..m {
                    if self.a.get(i, t).is_zero() {
                        continue;
                    }
                    let q = self.a.get(i, t).div_nearest(self.a.get(t, t))?;
                    self.row_op(i, t, &q)?;
                    if !self.a.get(i, t).is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..n {
                    if self.a.get(t, j).is_zero() {
                        continue;
                    }
                    let q = self.a.get(t, j).div_nearest(self.a.get(t, t))?;
                    self.col_op(j, t, &q)?;
                    if !self.a.get(t, j).is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    // a remainder smaller than the pivot survived; promote it
                    let mut best = (t, t);
                    for i in t + 1..m {
                        let v = self.a.get(i, t);
                        if !v.is_zero() && v.abs_cmp(self.a.get(best.0, best.1)).is_lt() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..n {
                        let v = self.a.get(t, j);
                        if !v.is_zero() && v.abs_cmp(self.a.get(best.0, best.1)).is_lt() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                // divisibility of the remaining block
                let pivot = self.a.get(t, t).clone();
                let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !pivot.divides(self.a.get(i, j))));
                match offender {
                    Some(i) => {
                        // row[t] += row[i]
                        let minus_one = T::one().checked_neg()?;
                        self.row_op(t, i, &minus_one)?;
                    }
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t)?;
            }
            t += 1;
        }
        Some(SmithForm { s: self.a, u: self.u, v: self.v, u_inv: self.u_inv, v_inv: self.v_inv, rank: t })
    }
}

/// Generic entry point; `None` signals overflow of the scalar type.
pub fn smith_generic<T: Scalar>(a: &Matrix<T>, track: bool) -> Option<SmithForm<T>> {
    Reducer::new(a.clone(), track).run()
}

/// Smith normal form of an `i64` matrix, escalating to `BigInt` on overflow.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm<BigInt> {
    match smith_generic(a, true) {
        Some(f) => f.to_big(),
        None => smith_generic(&a.to_big(), true).expect("BigInt reduction cannot overflow"),
    }
}

/// Smith normal form over `i64` when every transform fits, `None` otherwise.
pub fn smith_normal_form_i64(a: &IntMatrix) -> Option<SmithForm<i64>> {
    if let Some(f) = smith_generic(a, true) {
        return Some(f);
    }
    let big = smith_generic(&a.to_big(), true)?;
    Some(SmithForm {
        s: big.s.to_i64()?,
        u: big.u.to_i64()?,
        v: big.v.to_i64()?,
        u_inv: big.u_inv.to_i64()?,
        v_inv: big.v_inv.to_i64()?,
        rank: big.rank,
    })
}

/// Invariant factors only (no transforms tracked).
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    match smith_generic(a, false) {
        Some(f) => f.diagonal().iter().map(Scalar::to_bigint).collect(),
        None => smith_generic(&a.to_big(), false).expect("BigInt reduction cannot overflow").diagonal(),
    }
}
