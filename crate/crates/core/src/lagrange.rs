//! Energy boundary structure of a reciprocal operator pair (P, S): the skew
//! form S'(z)P(e) - P'(z)S(e) divides by (z + e) and factors symplectically,
//! yielding the boundary operators (Pb, Sb), the energy ports, and the
//! canonical and natural energy densities.

use crate::error::AlgebraError;
use crate::factor::{symplectic_factorization, symplectic_reassemble};
use crate::matrix::RatMat;
use crate::onevar::OneVarPolyMat;
use crate::rational::rat;
use crate::twovar::TwoVarPolyMat;

#[derive(Debug, Clone)]
pub struct ReciprocityReport {
    pub ok: bool,
    /// S'(-s)P(s) - P'(-s)S(s); zero exactly when the pair is reciprocal.
    pub residual: OneVarPolyMat,
}

pub fn check_reciprocity(p: &OneVarPolyMat, s: &OneVarPolyMat) -> Result<ReciprocityReport, AlgebraError> {
    if p.rows() != p.cols() || s.rows() != s.cols() || p.rows() != s.rows() {
        return Err(AlgebraError::ShapeMismatch {
            expected: "two square matrices of equal size".into(),
            got: format!("{}x{} and {}x{}", p.rows(), p.cols(), s.rows(), s.cols()),
        });
    }
    let residual = &(&s.formal_adjoint() * p) - &(&p.formal_adjoint() * s);
    Ok(ReciprocityReport { ok: residual.is_zero(), residual })
}

/// Closed-form reciprocity conditions for operator pairs of degree at most 2;
/// `None` when either degree exceeds 2. Equivalent to `check_reciprocity`
/// on its domain, which the property suite asserts.
pub fn degree2_reciprocity(p: &OneVarPolyMat, s: &OneVarPolyMat) -> Option<bool> {
    if p.degree() > 2 || s.degree() > 2 {
        return None;
    }
    let (p0, p1, p2) = (p.coeff(0), p.coeff(1), p.coeff(2));
    let (s0, s1, s2) = (s.coeff(0), s.coeff(1), s.coeff(2));
    let ok = (&s0.transpose() * &p0).is_symmetric()
        && (&s2.transpose() * &p2).is_symmetric()
        && (&(&p0.transpose() * &s1) - &(&s0.transpose() * &p1)).is_skew_symmetric()
        && (&(&p1.transpose() * &s2) - &(&s1.transpose() * &p2)).is_skew_symmetric()
        && (&(&(&p0.transpose() * &s2) - &(&s0.transpose() * &p2)) + &(&s1.transpose() * &p1))
            .is_symmetric();
    Some(ok)
}

/// A pair of square matrix differential operators mapping a latent field to
/// the state (through P) and the co-state (through S). Construction enforces
/// reciprocity of the pair and constant full rank of the stacked matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReciprocalOperator {
    p: OneVarPolyMat,
    s: OneVarPolyMat,
}

impl ReciprocalOperator {
    pub fn new(p: OneVarPolyMat, s: OneVarPolyMat) -> Result<Self, AlgebraError> {
        let rep = check_reciprocity(&p, &s)?;
        if !rep.ok {
            return Err(AlgebraError::NotReciprocal { residual: rep.residual });
        }
        if !crate::rank::constant_full_rank(&p.vstack(&s)) {
            return Err(AlgebraError::NotMaximal);
        }
        Ok(ReciprocalOperator { p, s })
    }

    pub fn p(&self) -> &OneVarPolyMat {
        &self.p
    }

    pub fn s(&self) -> &OneVarPolyMat {
        &self.s
    }

    pub fn state_dim(&self) -> usize {
        self.p.rows()
    }

    pub fn stacked(&self) -> OneVarPolyMat {
        self.p.vstack(&self.s)
    }

    /// S'(z)P(e) - P'(z)S(e), the skew form whose quotient by (z+e) carries
    /// the boundary energy pairing.
    pub fn skew_form(&self) -> TwoVarPolyMat {
        let r = self.stacked();
        TwoVarPolyMat::outer_product(&r, &RatMat::theta(self.state_dim()), &r)
    }
}

/// Derived boundary data and energy densities of a reciprocal pair.
#[derive(Debug, Clone)]
pub struct LagrangeStructure {
    /// Top half of the boundary operator (maps the latent jet to chi).
    pub pb: OneVarPolyMat,
    /// Bottom half (maps the latent jet to eps).
    pub sb: OneVarPolyMat,
    pub p: usize,
    /// Canonical energy density: balance boundary terms close in the ports.
    pub h: TwoVarPolyMat,
    /// Natural energy density R'(z) Xi R(e) / 2.
    pub h0: TwoVarPolyMat,
}

fn assemble(r: &ReciprocalOperator, rb: OneVarPolyMat, p: usize) -> Result<LagrangeStructure, AlgebraError> {
    // The boundary identity: (z+e) Rb'(z) Theta_p Rb(e) = S'(z)P(e) - P'(z)S(e).
    if symplectic_reassemble(&rb, p).mul_by_sum() != r.skew_form() {
        return Err(AlgebraError::BoundaryIdentity);
    }
    let n = r.state_dim();
    let stacked = r.stacked();
    let h0 = TwoVarPolyMat::outer_product(&stacked, &RatMat::xi(n), &stacked).scale(&rat(1, 2));
    let boundary = TwoVarPolyMat::outer_product(&rb, &RatMat::xi(p), &rb)
        .scale(&rat(1, 2))
        .mul_by_sum();
    let h = &h0 - &boundary;
    debug_assert!(h.is_symmetric() && h0.is_symmetric());
    debug_assert_eq!(h.reflect_diagonal(), &r.s().formal_adjoint() * r.p());
    Ok(LagrangeStructure { pb: rb.row_block(0, p), sb: rb.row_block(p, p), p, h, h0 })
}

pub fn boundary_operator(r: &ReciprocalOperator) -> Result<LagrangeStructure, AlgebraError> {
    let psi_bar = r.skew_form().divide_by_sum()?;
    let (rb, p) = symplectic_factorization(&psi_bar)?;
    assemble(r, rb, p)
}

impl LagrangeStructure {
    pub fn rb(&self) -> OneVarPolyMat {
        self.pb.vstack(&self.sb)
    }

    /// Rebuilds the structure under a constant symplectic change of boundary
    /// basis g (2p x 2p with g' Theta_p g = Theta_p).
    pub fn with_gauge(&self, r: &ReciprocalOperator, g: &RatMat) -> Result<LagrangeStructure, AlgebraError> {
        let theta = RatMat::theta(self.p);
        if &(&g.transpose() * &theta) * g != theta {
            return Err(AlgebraError::Invalid("gauge matrix is not symplectic".into()));
        }
        assemble(r, self.rb().lmul_const(g), self.p)
    }
}

pub fn natural_hamiltonian(r: &ReciprocalOperator) -> TwoVarPolyMat {
    let stacked = r.stacked();
    TwoVarPolyMat::outer_product(&stacked, &RatMat::xi(r.state_dim()), &stacked).scale(&rat(1, 2))
}

pub fn canonical_hamiltonian(lb: &LagrangeStructure) -> TwoVarPolyMat {
    lb.h.clone()
}

/// True iff h differs from the natural density by (z+e) times a symmetric
/// two-variable polynomial matrix — i.e. h belongs to the admissible family
/// of energy densities with the same variational operator.
pub fn verify_hamiltonian_compatibility(h: &TwoVarPolyMat, r: &ReciprocalOperator) -> bool {
    if !h.is_symmetric() {
        return false;
    }
    let diff = h - &natural_hamiltonian(r);
    match diff.divide_by_sum() {
        Ok(gamma) => gamma.is_symmetric(),
        Err(_) => false,
    }
}

/// Endpoint evaluations of the energy ports, length p per endpoint.
#[derive(Debug, Clone)]
pub struct EnergyPorts {
    pub chi_a: Vec<f64>,
    pub chi_b: Vec<f64>,
    pub eps_a: Vec<f64>,
    pub eps_b: Vec<f64>,
}

/// Applies a polynomial operator row-wise to derivative jets (jets[k] holds
/// the k-th spatial derivative of the latent field at one point).
pub fn eval_on_jets(m: &OneVarPolyMat, jets: &[Vec<f64>]) -> Result<Vec<f64>, AlgebraError> {
    let need = (m.degree().max(0)) as usize;
    if jets.len() <= need && !m.is_zero() {
        return Err(AlgebraError::Invalid(format!(
            "jet order {} insufficient for operator of degree {}",
            jets.len().saturating_sub(1),
            need
        )));
    }
    let n = m.cols();
    let mut out = vec![0.0; m.rows()];
    for (k, block) in m.coeffs().iter().enumerate() {
        for i in 0..m.rows() {
            for j in 0..n {
                let w = crate::rational::to_f64(&block[(i, j)]);
                if w != 0.0 {
                    out[i] += w * jets[k][j];
                }
            }
        }
    }
    Ok(out)
}

pub fn energy_boundary_values(
    lb: &LagrangeStructure,
    jets_a: &[Vec<f64>],
    jets_b: &[Vec<f64>],
) -> Result<EnergyPorts, AlgebraError> {
    Ok(EnergyPorts {
        chi_a: eval_on_jets(&lb.pb, jets_a)?,
        chi_b: eval_on_jets(&lb.pb, jets_b)?,
        eps_a: eval_on_jets(&lb.sb, jets_a)?,
        eps_b: eval_on_jets(&lb.sb, jets_b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rint;

    fn diag_poly(consts: &[crate::rational::Rational], quad: &[crate::rational::Rational]) -> OneVarPolyMat {
        // diag(consts) + diag(quad) s^2
        let n = consts.len();
        OneVarPolyMat::new(
            n,
            n,
            vec![RatMat::diag(consts), RatMat::zeros(n, n), RatMat::diag(quad)],
        )
    }

    fn rod_symplectic_pair() -> (OneVarPolyMat, OneVarPolyMat) {
        // P = I2, S = diag(k - T s^2, 1/(rho A)) with k=2, T=3, rhoA=5.
        let p = OneVarPolyMat::constant(RatMat::identity(2));
        let s = diag_poly(&[rint(2), rat(1, 5)], &[rint(-3), rint(0)]);
        (p, s)
    }

    #[test]
    fn rod_pair_is_reciprocal_and_maximal() {
        let (p, s) = rod_symplectic_pair();
        let rep = check_reciprocity(&p, &s).unwrap();
        assert!(rep.ok);
        assert_eq!(degree2_reciprocity(&p, &s), Some(true));
        assert!(ReciprocalOperator::new(p, s).is_ok());
    }

    #[test]
    fn scalar_violation_reports_residual() {
        let p = OneVarPolyMat::constant(RatMat::identity(1));
        let s = OneVarPolyMat::s();
        let rep = check_reciprocity(&p, &s).unwrap();
        assert!(!rep.ok);
        // S'(-s)P - P'(-s)S = -s - s = -2s
        assert_eq!(
            rep.residual,
            OneVarPolyMat::new(1, 1, vec![RatMat::zeros(1, 1), RatMat::identity(1).scale(&rint(-2))])
        );
        assert_eq!(degree2_reciprocity(&p, &s), Some(false));
    }

    #[test]
    fn rod_boundary_operator_and_energy_density() {
        let (p, s) = rod_symplectic_pair();
        let r = ReciprocalOperator::new(p, s).unwrap();
        let lb = boundary_operator(&r).unwrap();
        assert_eq!(lb.p, 1);
        // Canonical density diag(k + T z e, 1/(rho A)).
        let expected_h = TwoVarPolyMat::from_blocks(
            2,
            2,
            [
                ((0, 0), RatMat::diag(&[rint(2), rat(1, 5)])),
                ((1, 1), RatMat::diag(&[rint(3), rint(0)])),
            ],
        );
        assert_eq!(lb.h, expected_h);
        // Variational operator matches S'(-s)P(s).
        assert_eq!(lb.h.reflect_diagonal(), &r.s().formal_adjoint() * r.p());
        assert_eq!(lb.h0.reflect_diagonal(), &r.s().formal_adjoint() * r.p());
        // Natural density diag(k - T(z^2 + e^2)/2, 1/(rho A)).
        let expected_h0 = TwoVarPolyMat::from_blocks(
            2,
            2,
            [
                ((0, 0), RatMat::diag(&[rint(2), rat(1, 5)])),
                ((2, 0), RatMat::diag(&[rat(-3, 2), rint(0)])),
                ((0, 2), RatMat::diag(&[rat(-3, 2), rint(0)])),
            ],
        );
        assert_eq!(lb.h0, expected_h0);
        assert!(verify_hamiltonian_compatibility(&lb.h, &r));
        assert!(verify_hamiltonian_compatibility(&lb.h0, &r));
        // Shifting by a constant leaves the admissible family.
        let shifted = &lb.h
            + &TwoVarPolyMat::from_blocks(2, 2, [((0, 0), RatMat::identity(2))]);
        assert!(!verify_hamiltonian_compatibility(&shifted, &r));
    }

    #[test]
    fn rod_gauge_pins_displacement_stress_ports() {
        let (p, s) = rod_symplectic_pair();
        let r = ReciprocalOperator::new(p, s).unwrap();
        let lb = boundary_operator(&r).unwrap();
        // Target gauge: chi = u, eps = -T du/dz.
        let target = OneVarPolyMat::new(
            2,
            2,
            vec![
                RatMat::from_fn(2, 2, |i, j| if (i, j) == (0, 0) { rint(1) } else { rint(0) }),
                RatMat::from_fn(2, 2, |i, j| if (i, j) == (1, 0) { rint(-3) } else { rint(0) }),
            ],
        );
        let g = crate::factor::symplectic_gauge_match(&lb.rb(), &target, lb.p).unwrap();
        let fixed = lb.with_gauge(&r, &g).unwrap();
        assert_eq!(fixed.rb(), target);
        assert_eq!(fixed.h, lb.h, "energy density must not change under this gauge");
        let jets_a = vec![vec![2.0, 7.0], vec![0.5, 0.0]];
        let jets_b = vec![vec![-1.0, 4.0], vec![0.25, 0.0]];
        let ports = energy_boundary_values(&fixed, &jets_a, &jets_b).unwrap();
        assert_eq!(ports.chi_a, vec![2.0]);
        assert_eq!(ports.chi_b, vec![-1.0]);
        assert_eq!(ports.eps_a, vec![-3.0 * 0.5]);
        assert_eq!(ports.eps_b, vec![-3.0 * 0.25]);
    }

    #[test]
    fn degree_zero_pair_has_no_energy_ports() {
        // P = I, S = S0 symmetric constant.
        let p = OneVarPolyMat::constant(RatMat::identity(2));
        let s = OneVarPolyMat::constant(RatMat::from_i64(&[&[2, 1], &[1, 4]]));
        let r = ReciprocalOperator::new(p, s).unwrap();
        let lb = boundary_operator(&r).unwrap();
        assert_eq!(lb.p, 0);
        assert_eq!(lb.h, lb.h0);
        assert_eq!(
            lb.h.reflect_diagonal(),
            OneVarPolyMat::constant(RatMat::from_i64(&[&[2, 1], &[1, 4]]))
        );
    }

    #[test]
    fn non_maximal_pair_rejected() {
        let p = OneVarPolyMat::s();
        let s = OneVarPolyMat::s();
        assert!(matches!(ReciprocalOperator::new(p, s), Err(AlgebraError::NotMaximal)));
    }

    #[test]
    fn nonlocal_pair_boundary_data() {
        // P = diag(1, 1 - mu s^2, 1), S = diag(k, T, 1/(rho A)); mu = 1/20.
        let mu = rat(1, 20);
        let p = OneVarPolyMat::new(
            3,
            3,
            vec![
                RatMat::identity(3),
                RatMat::zeros(3, 3),
                RatMat::diag(&[rint(0), -mu.clone(), rint(0)]),
            ],
        );
        let s = OneVarPolyMat::constant(RatMat::diag(&[rint(2), rint(3), rat(1, 5)]));
        let r = ReciprocalOperator::new(p, s).unwrap();
        let lb = boundary_operator(&r).unwrap();
        assert_eq!(lb.p, 1);
        // The balance-consistent gauge: chi = mu d(lambda)/dz, eps = -T lambda.
        let target = OneVarPolyMat::new(
            2,
            3,
            vec![
                RatMat::from_fn(2, 3, |i, j| if (i, j) == (1, 1) { rint(-3) } else { rint(0) }),
                RatMat::from_fn(2, 3, |i, j| if (i, j) == (0, 1) { mu.clone() } else { rint(0) }),
            ],
        );
        let g = crate::factor::symplectic_gauge_match(&lb.rb(), &target, 1).unwrap();
        let fixed = lb.with_gauge(&r, &g).unwrap();
        assert_eq!(fixed.rb(), target);
        // In this gauge the canonical density is the physical energy
        // diag(k, T + T mu z e, 1/(rho A)).
        let expected_h = TwoVarPolyMat::from_blocks(
            3,
            3,
            [
                ((0, 0), RatMat::diag(&[rint(2), rint(3), rat(1, 5)])),
                ((1, 1), RatMat::diag(&[rint(0), rat(3, 20), rint(0)])),
            ],
        );
        assert_eq!(fixed.h, expected_h);
        // The textbook-style gauge (chi = T lambda, eps = mu d(lambda)/dz)
        // spans the same boundary pairing but yields a different (still
        // admissible) canonical density.
        let alt = OneVarPolyMat::new(
            2,
            3,
            vec![
                RatMat::from_fn(2, 3, |i, j| if (i, j) == (0, 1) { rint(3) } else { rint(0) }),
                RatMat::from_fn(2, 3, |i, j| if (i, j) == (1, 1) { mu.clone() } else { rint(0) }),
            ],
        );
        assert_eq!(symplectic_reassemble(&alt, 1).mul_by_sum(), r.skew_form());
        assert!(crate::factor::symplectic_gauge_match(&lb.rb(), &alt, 1).is_some());
        assert!(verify_hamiltonian_compatibility(&lb.h, &r));
        assert!(verify_hamiltonian_compatibility(&fixed.h, &r));
    }
}
