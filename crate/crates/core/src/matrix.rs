//! Dense matrices over exact rationals.

use crate::rational::{rint, to_f64, Rational};
use num_traits::{One, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// A dense `rows x cols` matrix of rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMat { rows, cols, data }
    }

    /// Builds from integer entries, row-major nested slices.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        RatMat::from_fn(r, c, |i, j| rint(rows[i][j]))
    }

    pub fn diag(entries: &[Rational]) -> Self {
        let n = entries.len();
        RatMat::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { Rational::zero() })
    }

    /// The symplectic matrix of order 2n: [[0, -I], [I, 0]].
    pub fn theta(n: usize) -> Self {
        let mut m = RatMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = -Rational::one();
            m[(n + i, i)] = Rational::one();
        }
        m
    }

    /// The involutive pairing matrix of order 2n: [[0, I], [I, 0]].
    pub fn xi(n: usize) -> Self {
        let mut m = RatMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = Rational::one();
            m[(n + i, i)] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> RatMat {
        RatMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..=i).all(|j| self[(i, j)] == -self[(j, i)].clone()))
    }

    pub fn scale(&self, c: &Rational) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Stacks `self` on top of `other` (matching column counts).
    pub fn vstack(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.cols, "vstack: column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        RatMat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Copies `block` into `self` with its (0,0) entry at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &RatMat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> RatMat {
        RatMat::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Rank by Gaussian elimination over the rationals (exact).
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut col = 0;
        while rank < a.rows && col < a.cols {
            let pivot = (rank..a.rows).find(|&i| !a[(i, col)].is_zero());
            let Some(p) = pivot else {
                col += 1;
                continue;
            };
            if p != rank {
                for j in 0..a.cols {
                    let tmp = a[(rank, j)].clone();
                    a[(rank, j)] = a[(p, j)].clone();
                    a[(p, j)] = tmp;
                }
            }
            let inv = a[(rank, col)].clone();
            for i in (rank + 1)..a.rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let factor = &a[(i, col)] / &inv;
                for j in col..a.cols {
                    let sub = &factor * &a[(rank, j)];
                    a[(i, j)] = &a[(i, j)] - &sub;
                }
            }
            rank += 1;
            col += 1;
        }
        rank
    }

    /// Solves `self * X = rhs` exactly; `None` when the system is singular
    /// or inconsistent.
    pub fn solve(&self, rhs: &RatMat) -> Option<RatMat> {
        assert_eq!(self.rows, rhs.rows, "solve: shape mismatch");
        let n = self.cols;
        let mut aug = RatMat::zeros(self.rows, n + rhs.cols);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, rhs);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..aug.rows).find(|&i| !aug[(i, c)].is_zero()) else { continue };
            for j in 0..aug.cols {
                let tmp = aug[(r, j)].clone();
                aug[(r, j)] = aug[(p, j)].clone();
                aug[(p, j)] = tmp;
            }
            let inv = aug[(r, c)].clone();
            for j in 0..aug.cols {
                aug[(r, j)] = &aug[(r, j)] / &inv;
            }
            for i in 0..aug.rows {
                if i != r && !aug[(i, c)].is_zero() {
                    let f = aug[(i, c)].clone();
                    for j in 0..aug.cols {
                        let sub = &f * &aug[(r, j)];
                        aug[(i, j)] = &aug[(i, j)] - &sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == aug.rows {
                break;
            }
        }
        // Inconsistent rows?
        for i in r..aug.rows {
            for j in n..aug.cols {
                if !aug[(i, j)].is_zero() {
                    return None;
                }
            }
        }
        if pivots.len() < n {
            return None; // underdetermined; callers need a unique solution
        }
        let mut x = RatMat::zeros(n, rhs.cols);
        for (row, &c) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(c, j)] = aug[(row, n + j)].clone();
            }
        }
        Some(x)
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.data.iter().map(to_f64).collect()
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &RatMat {
    type Output = RatMat;
    fn add(self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RatMat {
    type Output = RatMat;
    fn sub(self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub: shape mismatch");
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RatMat {
    type Output = RatMat;
    fn neg(self) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }
}

impl Mul for &RatMat {
    type Output = RatMat;
    fn mul(self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "mul: shape mismatch");
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * &other[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &add;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn theta_and_xi_identities() {
        for n in 1..4 {
            let th = RatMat::theta(n);
            assert!(th.is_skew_symmetric());
            assert_eq!(&th * &th, RatMat::identity(2 * n).scale(&rint(-1)));
            let xi = RatMat::xi(n);
            assert!(xi.is_symmetric());
            assert_eq!(&xi * &xi, RatMat::identity(2 * n));
        }
    }

    #[test]
    fn rank_and_solve() {
        let a = RatMat::from_i64(&[&[2, 1], &[4, 2]]);
        assert_eq!(a.rank(), 1);
        let b = RatMat::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(b.rank(), 2);
        let rhs = RatMat::from_i64(&[&[5], &[11]]);
        let x = b.solve(&rhs).unwrap();
        assert_eq!(x[(0, 0)], rat(1, 1));
        assert_eq!(x[(1, 0)], rat(2, 1));
        assert!(a.solve(&rhs).is_none());
    }
}
