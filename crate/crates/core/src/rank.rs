//! Constant-rank test for tall polynomial matrices: R(s) of shape 2n x n has
//! rank n at every complex s iff the GCD of all n x n minors is a nonzero
//! constant. Minors are computed fraction-free (Bareiss) over scalar
//! polynomials, the GCD by the Euclidean remainder sequence with monic
//! normalization.

use crate::onevar::OneVarPolyMat;
use crate::rational::Rational;
use num_traits::Zero;

/// Dense scalar polynomial over the rationals, ascending coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly(Vec<Rational>);

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly(coeffs)
    }

    pub fn zero() -> Self {
        RatPoly(Vec::new())
    }

    pub fn one() -> Self {
        RatPoly(vec![crate::rational::rint(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn is_nonzero_constant(&self) -> bool {
        self.0.len() == 1
    }

    fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        RatPoly::new(out)
    }

    fn sub(&self, other: &RatPoly) -> RatPoly {
        let len = self.0.len().max(other.0.len());
        let z = Rational::zero();
        RatPoly::new(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&z) - other.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    /// Exact quotient; panics if the division leaves a remainder (Bareiss
    /// guarantees exactness).
    fn div_exact(&self, divisor: &RatPoly) -> RatPoly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return RatPoly::zero();
        }
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        let mut rem = self.0.clone();
        let d = divisor.0.len();
        if rem.len() < d {
            return (RatPoly::zero(), RatPoly::new(rem));
        }
        let lead = divisor.0.last().unwrap().clone();
        let mut quot = vec![Rational::zero(); rem.len() - d + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + d - 1] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dv) in divisor.0.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * dv);
            }
            quot[i] = c;
        }
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let lead = self.0.last().unwrap().clone();
        RatPoly::new(self.0.iter().map(|c| c / &lead).collect())
    }

    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }
}

/// Determinant of a square matrix of scalar polynomials, fraction-free.
fn poly_det(mut m: Vec<Vec<RatPoly>>) -> RatPoly {
    let n = m.len();
    if n == 0 {
        return RatPoly::one();
    }
    let mut prev = RatPoly::one();
    let mut sign = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return RatPoly::zero();
            };
            m.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        RatPoly::zero().sub(&det)
    } else {
        det
    }
}

fn entry_poly(a: &OneVarPolyMat, i: usize, j: usize) -> RatPoly {
    RatPoly::new(a.coeffs().iter().map(|c| c[(i, j)].clone()).collect())
}

/// True iff the tall matrix R(s) keeps full column rank at every complex s:
/// the GCD of all maximal minors is a nonzero constant.
pub fn constant_full_rank(r: &OneVarPolyMat) -> bool {
    let rows = r.rows();
    let cols = r.cols();
    if rows < cols {
        return false;
    }
    let mut gcd = RatPoly::zero();
    let mut choice: Vec<usize> = (0..cols).collect();
    loop {
        let minor = poly_det(
            choice
                .iter()
                .map(|&i| (0..cols).map(|j| entry_poly(r, i, j)).collect())
                .collect(),
        );
        gcd = gcd.gcd(&minor);
        if gcd.is_nonzero_constant() {
            return true;
        }
        // Next k-combination of row indices in lexicographic order.
        let mut idx = cols;
        loop {
            if idx == 0 {
                return gcd.is_nonzero_constant();
            }
            idx -= 1;
            if choice[idx] < rows - (cols - idx) {
                choice[idx] += 1;
                for t in idx + 1..cols {
                    choice[t] = choice[t - 1] + 1;
                }
                break;
            }
        }
    }
}
