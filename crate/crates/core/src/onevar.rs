//! Matrix polynomials in a single indeterminate with exact rational
//! coefficients: A(s) = A_0 + A_1 s + ... + A_N s^N.

use crate::matrix::RatMat;
use crate::rational::Rational;
use std::fmt;

/// Adjointness classification of a square matrix polynomial, comparing
/// A(s) against its formal adjoint A'(-s).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjointness {
    SelfAdjoint,
    SkewAdjoint,
    Neither,
}

/// Coefficient list `[A_0, ..., A_N]` with trailing zero blocks trimmed.
/// The zero polynomial is the empty list and reports degree -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneVarPolyMat {
    rows: usize,
    cols: usize,
    coeffs: Vec<RatMat>,
}

impl OneVarPolyMat {
    pub fn new(rows: usize, cols: usize, mut coeffs: Vec<RatMat>) -> Self {
        for c in &coeffs {
            assert_eq!((c.rows(), c.cols()), (rows, cols), "coefficient shape mismatch");
        }
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        OneVarPolyMat { rows, cols, coeffs }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        OneVarPolyMat { rows, cols, coeffs: Vec::new() }
    }

    pub fn constant(m: RatMat) -> Self {
        let (r, c) = (m.rows(), m.cols());
        OneVarPolyMat::new(r, c, vec![m])
    }

    /// The scalar polynomial `s` (1x1).
    pub fn s() -> Self {
        OneVarPolyMat::new(1, 1, vec![RatMat::zeros(1, 1), RatMat::identity(1)])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient block of s^k (zero matrix beyond the degree).
    pub fn coeff(&self, k: usize) -> RatMat {
        self.coeffs.get(k).cloned().unwrap_or_else(|| RatMat::zeros(self.rows, self.cols))
    }

    pub fn coeffs(&self) -> &[RatMat] {
        &self.coeffs
    }

    /// The formal adjoint A'(-s): block k maps to (-1)^k A_k transposed.
    pub fn formal_adjoint(&self) -> OneVarPolyMat {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| if k % 2 == 0 { a.transpose() } else { -&a.transpose() })
            .collect();
        OneVarPolyMat::new(self.cols, self.rows, coeffs)
    }

    /// Compares A(s) against its formal adjoint. The zero matrix reports
    /// self-adjoint (self takes precedence over skew).
    pub fn classify_adjointness(&self) -> Adjointness {
        assert_eq!(self.rows, self.cols, "classify_adjointness: non-square input");
        let adj = self.formal_adjoint();
        if *self == adj {
            Adjointness::SelfAdjoint
        } else if *self == -&adj {
            Adjointness::SkewAdjoint
        } else {
            Adjointness::Neither
        }
    }

    pub fn transpose(&self) -> OneVarPolyMat {
        OneVarPolyMat::new(
            self.cols,
            self.rows,
            self.coeffs.iter().map(|c| c.transpose()).collect(),
        )
    }

    /// A(-s): flips the sign of odd-degree blocks.
    pub fn reflect(&self) -> OneVarPolyMat {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| if k % 2 == 0 { a.clone() } else { -a })
            .collect();
        OneVarPolyMat::new(self.rows, self.cols, coeffs)
    }

    pub fn scale(&self, c: &Rational) -> OneVarPolyMat {
        OneVarPolyMat::new(self.rows, self.cols, self.coeffs.iter().map(|m| m.scale(c)).collect())
    }

    pub fn eval(&self, s: &Rational) -> RatMat {
        let mut acc = RatMat::zeros(self.rows, self.cols);
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(s) + c;
        }
        acc
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &OneVarPolyMat) -> OneVarPolyMat {
        assert_eq!(self.cols, other.cols, "vstack: column mismatch");
        let deg = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..deg).map(|k| self.coeff(k).vstack(&other.coeff(k))).collect();
        OneVarPolyMat::new(self.rows + other.rows, self.cols, coeffs)
    }

    /// Extracts the row band [r0, r0+rows).
    pub fn row_block(&self, r0: usize, rows: usize) -> OneVarPolyMat {
        OneVarPolyMat::new(
            rows,
            self.cols,
            self.coeffs.iter().map(|c| c.block(r0, 0, rows, self.cols)).collect(),
        )
    }

    /// Multiplies on the left by a constant matrix.
    pub fn lmul_const(&self, m: &RatMat) -> OneVarPolyMat {
        OneVarPolyMat::new(m.rows(), self.cols, self.coeffs.iter().map(|c| m * c).collect())
    }
}

impl std::ops::Add for &OneVarPolyMat {
    type Output = OneVarPolyMat;
    fn add(self, other: &OneVarPolyMat) -> OneVarPolyMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        let deg = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..deg).map(|k| &self.coeff(k) + &other.coeff(k)).collect();
        OneVarPolyMat::new(self.rows, self.cols, coeffs)
    }
}

impl std::ops::Sub for &OneVarPolyMat {
    type Output = OneVarPolyMat;
    fn sub(self, other: &OneVarPolyMat) -> OneVarPolyMat {
        self + &(-other)
    }
}

impl std::ops::Neg for &OneVarPolyMat {
    type Output = OneVarPolyMat;
    fn neg(self) -> OneVarPolyMat {
        OneVarPolyMat::new(self.rows, self.cols, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl std::ops::Mul for &OneVarPolyMat {
    type Output = OneVarPolyMat;
    fn mul(self, other: &OneVarPolyMat) -> OneVarPolyMat {
        assert_eq!(self.cols, other.rows, "mul: shape mismatch");
        if self.is_zero() || other.is_zero() {
            return OneVarPolyMat::zero(self.rows, other.cols);
        }
        let deg = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![RatMat::zeros(self.rows, other.cols); deg];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = a * b;
                coeffs[i + j] = &coeffs[i + j] + &prod;
            }
        }
        OneVarPolyMat::new(self.rows, other.cols, coeffs)
    }
}

impl fmt::Display for OneVarPolyMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::rational::format_rational;
        if self.is_zero() {
            return write!(f, "0 ({}x{})", self.rows, self.cols);
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[")?;
            for i in 0..self.rows {
                if i > 0 {
                    write!(f, "; ")?;
                }
                for j in 0..self.cols {
                    if j > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", format_rational(&c[(i, j)]))?;
                }
            }
            write!(f, "]")?;
            match k {
                0 => {}
                1 => write!(f, "*s")?,
                _ => write!(f, "*s^{}", k)?,
            }
        }
        Ok(())
    }
}
