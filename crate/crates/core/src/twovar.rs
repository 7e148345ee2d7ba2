//! Matrix polynomials in two indeterminates, Phi(z, e) = sum Phi_{k,l} z^k e^l,
//! stored as a sparse map of nonzero coefficient blocks. These encode bilinear
//! differential forms; the central operation is exact division by (z + e).

use crate::error::AlgebraError;
use crate::matrix::RatMat;
use crate::onevar::OneVarPolyMat;
use crate::rational::Rational;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoVarPolyMat {
    rows: usize,
    cols: usize,
    blocks: BTreeMap<(usize, usize), RatMat>,
}

impl TwoVarPolyMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        TwoVarPolyMat { rows, cols, blocks: BTreeMap::new() }
    }

    pub fn from_blocks(
        rows: usize,
        cols: usize,
        blocks: impl IntoIterator<Item = ((usize, usize), RatMat)>,
    ) -> Self {
        let mut m = TwoVarPolyMat::zero(rows, cols);
        for ((k, l), b) in blocks {
            assert_eq!((b.rows(), b.cols()), (rows, cols), "block shape mismatch");
            if !b.is_zero() {
                m.blocks.insert((k, l), b);
            }
        }
        m
    }

    /// Phi_{i,j} = X_i^T M Y_j, the bilinear form X^T(z) M Y(e).
    pub fn outer_product(x: &OneVarPolyMat, m: &RatMat, y: &OneVarPolyMat) -> Self {
        assert_eq!(m.rows(), x.rows(), "outer_product: M rows must match X rows");
        assert_eq!(m.cols(), y.rows(), "outer_product: M cols must match Y rows");
        let mut out = TwoVarPolyMat::zero(x.cols(), y.cols());
        for (i, xi) in x.coeffs().iter().enumerate() {
            let xtm = &xi.transpose() * m;
            for (j, yj) in y.coeffs().iter().enumerate() {
                out.add_block(i, j, &(&xtm * yj));
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Max total index appearing in a nonzero block (per-variable degree bound).
    pub fn degree(&self) -> isize {
        self.blocks.keys().map(|&(k, l)| k.max(l) as isize).max().unwrap_or(-1)
    }

    pub fn block(&self, k: usize, l: usize) -> RatMat {
        self.blocks.get(&(k, l)).cloned().unwrap_or_else(|| RatMat::zeros(self.rows, self.cols))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, usize), &RatMat)> {
        self.blocks.iter()
    }

    fn add_block(&mut self, k: usize, l: usize, b: &RatMat) {
        if b.is_zero() {
            return;
        }
        let entry = self.blocks.entry((k, l)).or_insert_with(|| RatMat::zeros(self.rows, self.cols));
        *entry = &*entry + b;
        if entry.is_zero() {
            self.blocks.remove(&(k, l));
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = TwoVarPolyMat::zero(self.rows, self.cols);
        for (&(k, l), b) in &self.blocks {
            out.add_block(k, l, &b.scale(c));
        }
        out
    }

    /// Symmetric as a bilinear form: Phi_{k,l} = Phi_{l,k}^T for all blocks.
    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && self.blocks.iter().all(|(&(k, l), b)| *b == self.block(l, k).transpose())
    }

    /// Skew as a bilinear form: Phi_{k,l} = -Phi_{l,k}^T for all blocks.
    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && self.blocks.iter().all(|(&(k, l), b)| *b == -&self.block(l, k).transpose())
    }

    /// The stacked (M+1)-by-(M+1) array of coefficient blocks, where M is the
    /// largest index appearing; the (k,l) slot holds Phi_{k,l}.
    pub fn coefficient_matrix(&self) -> RatMat {
        let m = (self.degree().max(0) as usize) + 1;
        let mut out = RatMat::zeros(m * self.rows, m * self.cols);
        for (&(k, l), b) in &self.blocks {
            out.set_block(k * self.rows, l * self.cols, b);
        }
        out
    }

    /// Evaluation on the anti-diagonal, Phi(-s, s), collapsed to one variable.
    pub fn anti_diagonal(&self) -> OneVarPolyMat {
        let mut acc = OneVarPolyMat::zero(self.rows, self.cols);
        for (&(k, l), b) in &self.blocks {
            let sign = if k % 2 == 0 { b.clone() } else { -b };
            let mut coeffs = vec![RatMat::zeros(self.rows, self.cols); k + l + 1];
            coeffs[k + l] = sign;
            acc = &acc + &OneVarPolyMat::new(self.rows, self.cols, coeffs);
        }
        acc
    }

    /// Substitution (-s, s) in which the first variable carries the sign but
    /// with the variables swapped on entry order is irrelevant: same as
    /// `anti_diagonal`; kept for call-site readability when the input is an
    /// energy density H and the output is its variational operator Q.
    pub fn reflect_diagonal(&self) -> OneVarPolyMat {
        let q = self.anti_diagonal();
        if self.is_symmetric() {
            debug_assert_eq!(q, q.formal_adjoint(), "reflect of a symmetric form must be self-adjoint");
        }
        q
    }

    /// Multiplication by (z + e).
    pub fn mul_by_sum(&self) -> TwoVarPolyMat {
        let mut out = TwoVarPolyMat::zero(self.rows, self.cols);
        for (&(k, l), b) in &self.blocks {
            out.add_block(k + 1, l, b);
            out.add_block(k, l + 1, b);
        }
        out
    }

    /// Exact division by (z + e). Fails with the anti-diagonal residual when
    /// the input is not divisible.
    pub fn divide_by_sum(&self) -> Result<TwoVarPolyMat, AlgebraError> {
        let residual = self.anti_diagonal();
        if !residual.is_zero() {
            return Err(AlgebraError::NotDivisible { residual });
        }
        if self.is_zero() {
            return Ok(TwoVarPolyMat::zero(self.rows, self.cols));
        }
        let kmax = self.blocks.keys().map(|&(k, _)| k).max().unwrap();
        let lmax = self.blocks.keys().map(|&(_, l)| l).max().unwrap();
        // From (z+e)Psi = Phi: Phi_{k+1,l} = Psi_{k,l} + Psi_{k+1,l-1},
        // so Psi_{k,l} = Phi_{k+1,l} - Psi_{k+1,l-1}, seeded at l = 0.
        let mut psi = TwoVarPolyMat::zero(self.rows, self.cols);
        for l in 0..=lmax {
            for k in (0..=kmax).rev() {
                let mut b = self.block(k + 1, l);
                if l > 0 {
                    b = &b - &psi.block(k + 1, l - 1);
                }
                psi.add_block(k, l, &b);
            }
        }
        debug_assert_eq!(psi.mul_by_sum(), *self, "division did not reproduce the input");
        Ok(psi)
    }

    /// Embeds a one-variable polynomial Q(s) as Q(e) (all blocks at z-index 0).
    pub fn from_second_var(q: &OneVarPolyMat) -> TwoVarPolyMat {
        TwoVarPolyMat::from_blocks(
            q.rows(),
            q.cols(),
            q.coeffs().iter().enumerate().map(|(l, b)| ((0usize, l), b.clone())),
        )
    }

    /// Embeds a one-variable polynomial as a polynomial in the first variable.
    pub fn from_first_var(q: &OneVarPolyMat) -> TwoVarPolyMat {
        TwoVarPolyMat::from_blocks(
            q.rows(),
            q.cols(),
            q.coeffs().iter().enumerate().map(|(k, b)| ((k, 0usize), b.clone())),
        )
    }

    /// For symmetric H: the remainder H^b with (z+e) H^b = H(z,e) - Q(e),
    /// Q = reflect_diagonal(H).
    pub fn boundary_remainder(&self) -> Result<TwoVarPolyMat, AlgebraError> {
        assert!(self.is_symmetric(), "boundary_remainder needs a symmetric input");
        let q = TwoVarPolyMat::from_second_var(&self.reflect_diagonal());
        (self - &q).divide_by_sum()
    }

    /// Numeric evaluation of the bilinear form on derivative jets:
    /// sum over blocks of jet1[k]^T Phi_{k,l} jet2[l], where jet[i] holds the
    /// i-th spatial derivative of a field at one point.
    pub fn bilinear_eval(&self, jet1: &[Vec<f64>], jet2: &[Vec<f64>]) -> f64 {
        let mut acc = 0.0;
        for (&(k, l), b) in &self.blocks {
            let a = &jet1[k];
            let c = &jet2[l];
            for i in 0..self.rows {
                for j in 0..self.cols {
                    let w = crate::rational::to_f64(&b[(i, j)]);
                    if w != 0.0 {
                        acc += a[i] * w * c[j];
                    }
                }
            }
        }
        acc
    }
}

impl std::ops::Add for &TwoVarPolyMat {
    type Output = TwoVarPolyMat;
    fn add(self, other: &TwoVarPolyMat) -> TwoVarPolyMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        let mut out = self.clone();
        for (&(k, l), b) in &other.blocks {
            out.add_block(k, l, b);
        }
        out
    }
}

impl std::ops::Sub for &TwoVarPolyMat {
    type Output = TwoVarPolyMat;
    fn sub(self, other: &TwoVarPolyMat) -> TwoVarPolyMat {
        self + &other.scale(&crate::rational::rint(-1))
    }
}
