//! Minimal factorizations of two-variable polynomial matrices through their
//! coefficient matrices: symmetric forms factor as T'(z) S T(e) with S a
//! +/-1 signature, skew forms as Rb'(z) Theta_p Rb(e) with Theta_p the
//! canonical symplectic pairing.

use crate::error::AlgebraError;
use crate::matrix::RatMat;
use crate::onevar::OneVarPolyMat;
use crate::rational::Rational;
use crate::twovar::TwoVarPolyMat;
use num_traits::{Signed, Zero};

/// Counts of +1 and -1 diagonal entries in the signature matrix
/// Sigma = diag(I_alpha, -I_beta).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub alpha: usize,
    pub beta: usize,
}

impl Signature {
    pub fn delta(&self) -> usize {
        self.alpha + self.beta
    }

    /// +1 for rows below alpha, -1 after.
    pub fn sign(&self, row: usize) -> i64 {
        if row < self.alpha {
            1
        } else {
            -1
        }
    }

    pub fn sigma(&self) -> RatMat {
        RatMat::diag(
            &(0..self.delta()).map(|r| crate::rational::rint(self.sign(r))).collect::<Vec<_>>(),
        )
    }
}

/// Reshapes a flat coefficient vector of length (deg+1)*n into the rows of a
/// 1 x n polynomial: segment k becomes the coefficient of s^k.
fn row_to_poly(flat: &[Rational], n: usize) -> OneVarPolyMat {
    let blocks = flat.len() / n;
    let coeffs = (0..blocks)
        .map(|k| RatMat::from_fn(1, n, |_, j| flat[k * n + j].clone()))
        .collect();
    OneVarPolyMat::new(1, n, coeffs)
}

/// Factors a symmetric form as Psi(z,e) = T'(z) D Sigma T(e) with Sigma = +/-1
/// and D = diag(scale) a positive rational diagonal; rank of T's coefficient
/// matrix equals delta = alpha + beta. Square-root free: the numeric layer
/// multiplies T's rows by sqrt(scale) to absorb D.
pub fn signature_factorization(
    psi: &TwoVarPolyMat,
) -> Result<(OneVarPolyMat, Signature, Vec<Rational>), AlgebraError> {
    if !psi.is_symmetric() {
        return Err(AlgebraError::NotSymmetric);
    }
    let n = psi.cols();
    let mut c = psi.coefficient_matrix();
    let dim = c.rows();
    let mut pivots: Vec<(Rational, Vec<Rational>)> = Vec::new();
    loop {
        // Largest-magnitude diagonal pivot; first index wins ties.
        let mut best: Option<(usize, Rational)> = None;
        for i in 0..dim {
            let v = c[(i, i)].abs();
            if !v.is_zero() && best.as_ref().map_or(true, |(_, b)| v > *b) {
                best = Some((i, v));
            }
        }
        let (d, w): (Rational, Vec<Rational>) = if let Some((i, _)) = best {
            let d = c[(i, i)].clone();
            let w = (0..dim).map(|r| &c[(r, i)] / &d).collect();
            (d, w)
        } else {
            // All-zero diagonal: pivot on the first nonzero off-diagonal entry
            // with the hyperbolic direction e_i + e_j.
            let mut found = None;
            'outer: for i in 0..dim {
                for j in (i + 1)..dim {
                    if !c[(i, j)].is_zero() {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((i, j)) = found else { break };
            let d = &c[(i, j)] + &c[(i, j)]; // u'Cu for u = e_i + e_j
            let w = (0..dim).map(|r| (&c[(r, i)] + &c[(r, j)]) / &d).collect::<Vec<_>>();
            (d, w)
        };
        for r in 0..dim {
            for s in 0..dim {
                let upd = &(&d * &w[r]) * &w[s];
                c[(r, s)] = &c[(r, s)] - &upd;
            }
        }
        pivots.push((d, w));
        if c.is_zero() {
            break;
        }
    }
    // Positive pivots first, preserving relative order within each sign class.
    let alpha = pivots.iter().filter(|(d, _)| d.is_positive()).count();
    let beta = pivots.len() - alpha;
    let (pos, neg): (Vec<_>, Vec<_>) = pivots.into_iter().partition(|(d, _)| d.is_positive());
    let mut t = OneVarPolyMat::zero(0, n);
    let mut scale = Vec::new();
    for (d, w) in pos.into_iter().chain(neg) {
        scale.push(d.abs());
        t = t.vstack(&row_to_poly(&w, n));
    }
    Ok((t, Signature { alpha, beta }, scale))
}

/// Factors a skew form as PsiBar(z,e) = Rb'(z) Theta_p Rb(e) with Rb of full
/// row rank 2p; the top p rows and bottom p rows form the canonical pair.
pub fn symplectic_factorization(
    psi_bar: &TwoVarPolyMat,
) -> Result<(OneVarPolyMat, usize), AlgebraError> {
    if !psi_bar.is_skew_symmetric() {
        return Err(AlgebraError::NotSkewSymmetric);
    }
    let n = psi_bar.cols();
    let mut a = psi_bar.coefficient_matrix();
    let dim = a.rows();
    let mut top: Vec<Vec<Rational>> = Vec::new();
    let mut bottom: Vec<Vec<Rational>> = Vec::new();
    while !a.is_zero() {
        // Lexicographically first nonzero strictly-upper entry.
        let mut found = None;
        'outer: for i in 0..dim {
            for j in (i + 1)..dim {
                if !a[(i, j)].is_zero() {
                    found = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = found else {
            return Err(AlgebraError::OddRank(2 * top.len() + 1));
        };
        let c = a[(i, j)].clone();
        let p_row: Vec<Rational> = a.row(j);
        let s_row: Vec<Rational> = a.row(i).iter().map(|v| v / &c).collect();
        // Subtract the rank-2 skew piece spanned by rows i and j, which
        // zeroes those rows and columns. Snapshot the pivot rows and columns
        // first: the update must not read entries it has already rewritten.
        let u_row = a.row(i);
        let v_row = a.row(j);
        let u_col = a.col(i);
        let v_col = a.col(j);
        for r in 0..dim {
            for t in 0..dim {
                let upd = &(&(&u_col[r] * &v_row[t]) - &(&v_col[r] * &u_row[t])) / &c;
                a[(r, t)] = &a[(r, t)] + &upd;
            }
        }
        top.push(p_row);
        bottom.push(s_row);
    }
    let p = top.len();
    let mut rb = OneVarPolyMat::zero(0, n);
    for row in top.iter().chain(bottom.iter()) {
        rb = rb.vstack(&row_to_poly(row, n));
    }
    Ok((rb, p))
}

/// Rebuilds Psi from a signature factorization, scale applied; used by tests
/// and construction-time validation.
pub fn signature_reassemble(
    t: &OneVarPolyMat,
    sig: &Signature,
    scale: &[Rational],
) -> TwoVarPolyMat {
    let d_sigma = RatMat::diag(
        &(0..sig.delta())
            .map(|r| scale[r].clone() * crate::rational::rint(sig.sign(r)))
            .collect::<Vec<_>>(),
    );
    TwoVarPolyMat::outer_product(t, &d_sigma, t)
}

/// Rebuilds PsiBar from a symplectic factorization.
pub fn symplectic_reassemble(rb: &OneVarPolyMat, p: usize) -> TwoVarPolyMat {
    TwoVarPolyMat::outer_product(rb, &RatMat::theta(p), rb)
}

/// Finds the constant symplectic change of basis G with G * rb = target and
/// G' Theta_p G = Theta_p, when one exists. Establishes that two symplectic
/// factorizations describe the same boundary pairing.
pub fn symplectic_gauge_match(
    rb: &OneVarPolyMat,
    target: &OneVarPolyMat,
    p: usize,
) -> Option<RatMat> {
    if rb.rows() != 2 * p || target.rows() != 2 * p || rb.cols() != target.cols() {
        return None;
    }
    let flat = |m: &OneVarPolyMat, deg: usize| -> RatMat {
        let n = m.cols();
        RatMat::from_fn(m.rows(), (deg + 1) * n, |i, j| m.coeff(j / n)[(i, j % n)].clone())
    };
    let deg = rb.degree().max(target.degree()).max(0) as usize;
    let r = flat(rb, deg); // 2p x (deg+1)n
    let t = flat(target, deg);
    // Solve G R = T as R' G' = T'.
    let gt = r.transpose().solve(&t.transpose())?;
    let g = gt.transpose();
    if &g * &r != t {
        return None;
    }
    let theta = RatMat::theta(p);
    if &(&g.transpose() * &theta) * &g != theta {
        return None;
    }
    Some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    #[test]
    fn scalar_one_factors_trivially() {
        let psi = TwoVarPolyMat::from_blocks(1, 1, [((0, 0), RatMat::identity(1))]);
        let (t, sig, scale) = signature_factorization(&psi).unwrap();
        assert_eq!(sig, Signature { alpha: 1, beta: 0 });
        assert_eq!(scale, vec![rint(1)]);
        assert_eq!(t, OneVarPolyMat::constant(RatMat::identity(1)));
    }

    #[test]
    fn hyperbolic_constant_block() {
        // Psi = [[0,0,0],[0,0,1],[0,1,0]]: rank 2, signature (1,1).
        let p1 = RatMat::from_i64(&[&[0, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
        let psi = TwoVarPolyMat::from_blocks(3, 3, [((0, 0), p1)]);
        let (t, sig, scale) = signature_factorization(&psi).unwrap();
        assert_eq!(sig, Signature { alpha: 1, beta: 1 });
        assert_eq!(scale, vec![rint(2), rat(1, 2)]);
        assert_eq!(t.coeff(0), RatMat::from_fn(2, 3, |i, j| match (i, j) {
            (0, 1) | (0, 2) => rat(1, 2),
            (1, 1) => rint(1),
            (1, 2) => rint(-1),
            _ => rint(0),
        }));
        assert_eq!(signature_reassemble(&t, &sig, &scale), psi);
        assert_eq!(t.coeff(0).rank(), 2);
    }

    #[test]
    fn zero_form_has_empty_factor() {
        let psi = TwoVarPolyMat::zero(4, 4);
        let (t, sig, scale) = signature_factorization(&psi).unwrap();
        assert_eq!(sig.delta(), 0);
        assert!(scale.is_empty());
        assert_eq!(t.rows(), 0);
        let (rb, p) = symplectic_factorization(&psi).unwrap();
        assert_eq!(p, 0);
        assert_eq!(rb.rows(), 0);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let psi = TwoVarPolyMat::from_blocks(2, 2, [((0, 1), RatMat::identity(2))]);
        assert!(matches!(signature_factorization(&psi), Err(AlgebraError::NotSymmetric)));
        assert!(matches!(symplectic_factorization(&psi), Err(AlgebraError::NotSkewSymmetric)));
    }

    #[test]
    fn skew_scalar_difference_form() {
        // PsiBar = -T(z - e) on the first entry of a 2-state form; T = 3.
        let t_mod = rint(3);
        let psi_bar = TwoVarPolyMat::from_blocks(
            2,
            2,
            [
                ((1, 0), RatMat::diag(&[-t_mod.clone(), rint(0)])),
                ((0, 1), RatMat::diag(&[t_mod.clone(), rint(0)])),
            ],
        );
        assert!(psi_bar.is_skew_symmetric());
        let (rb, p) = symplectic_factorization(&psi_bar).unwrap();
        assert_eq!(p, 1);
        assert_eq!(symplectic_reassemble(&rb, p), psi_bar);
        // Same pairing as the textbook gauge [[1,0],[-T s,0]].
        let target = OneVarPolyMat::new(
            2,
            2,
            vec![
                RatMat::from_fn(2, 2, |i, j| if (i, j) == (0, 0) { rint(1) } else { rint(0) }),
                RatMat::from_fn(2, 2, |i, j| if (i, j) == (1, 0) { rint(-3) } else { rint(0) }),
            ],
        );
        assert_eq!(symplectic_reassemble(&target, 1), psi_bar);
        assert!(symplectic_gauge_match(&rb, &target, 1).is_some());
    }

    #[test]
    fn gauge_match_rejects_different_span() {
        let a = OneVarPolyMat::new(2, 1, vec![RatMat::from_i64(&[&[1], &[0]])]);
        let b = OneVarPolyMat::new(2, 1, vec![RatMat::from_i64(&[&[0], &[0]]), RatMat::from_i64(&[&[1], &[0]])]);
        assert!(symplectic_gauge_match(&a, &b, 1).is_none());
    }
}
