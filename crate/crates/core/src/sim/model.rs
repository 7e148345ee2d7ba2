//! Built-in one-dimensional elastic-rod models with exact-rational operator
//! data: the classic first-order form, the second-order (displacement /
//! momentum) form, and a strain-gradient variant whose stored energy depends
//! nonlocally on the strain.

use crate::dirac::{build_stokes_dirac, DiracStructure, HamiltonianOperator};
use crate::error::AlgebraError;
use crate::factor::symplectic_gauge_match;
use crate::lagrange::{boundary_operator, LagrangeStructure, ReciprocalOperator};
use crate::matrix::RatMat;
use crate::onevar::OneVarPolyMat;
use crate::rational::{rat, rint, to_f64, Rational};
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// State (u, p): displacement and momentum density; stiffness acts
    /// through a second-order operator, so all boundary activity flows
    /// through the energy ports.
    RodSymplectic,
    /// State (u, strain, p): first-order operator, power ports only.
    RodFirstOrder,
    /// State (u, lambda, p) with strain = (1 - mu d^2/dz^2) lambda: both
    /// power ports and energy ports are active.
    RodNonlocal,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::RodSymplectic => "rod_symplectic",
            Preset::RodFirstOrder => "rod_first_order",
            Preset::RodNonlocal => "rod_nonlocal",
        }
    }

    pub fn parse(s: &str) -> Option<Preset> {
        match s {
            "rod_symplectic" => Some(Preset::RodSymplectic),
            "rod_first_order" => Some(Preset::RodFirstOrder),
            "rod_nonlocal" => Some(Preset::RodNonlocal),
            _ => None,
        }
    }

    pub fn state_dim(self) -> usize {
        match self {
            Preset::RodSymplectic => 2,
            _ => 3,
        }
    }
}

/// Material parameters, kept exact so the derived structures stay exact.
#[derive(Debug, Clone)]
pub struct Params {
    /// Foundation stiffness (>= 0).
    pub k: Rational,
    /// Elastic modulus times cross section (> 0).
    pub t: Rational,
    /// Mass density times cross section (> 0).
    pub rho_a: Rational,
    /// Strain-gradient length-squared coefficient (>= 0, nonlocal rod only).
    pub mu: Rational,
}

impl Default for Params {
    fn default() -> Self {
        Params { k: rint(1), t: rint(1), rho_a: rint(1), mu: rat(1, 20) }
    }
}

impl Params {
    fn validate(&self) -> Result<(), AlgebraError> {
        if self.t <= Rational::zero() || self.rho_a <= Rational::zero() {
            return Err(AlgebraError::Invalid(
                "modulus and density must be positive".into(),
            ));
        }
        if self.k < Rational::zero() || self.mu < Rational::zero() {
            return Err(AlgebraError::Invalid(
                "stiffness and gradient coefficients must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Per-endpoint boundary condition for the time-domain solver.
#[derive(Debug, Clone, Copy)]
pub enum BoundaryCondition {
    /// Zero velocity (momentum pinned to zero).
    Clamped,
    /// Prescribed boundary stress amp * sin(freq * t).
    Stress { amp: f64, freq: f64 },
}

impl BoundaryCondition {
    pub fn stress_value(&self, t: f64) -> f64 {
        match self {
            BoundaryCondition::Clamped => 0.0,
            BoundaryCondition::Stress { amp, freq } => amp * (freq * t).sin(),
        }
    }

    pub fn stress_rate(&self, t: f64) -> f64 {
        match self {
            BoundaryCondition::Clamped => 0.0,
            BoundaryCondition::Stress { amp, freq } => amp * freq * (freq * t).cos(),
        }
    }
}

/// Initial displacement profile; momentum starts at zero and the remaining
/// state component is derived from the displacement for cross-model
/// comparability.
#[derive(Debug, Clone, Copy)]
pub enum InitialProfile {
    Zero,
    Gaussian { center: f64, width: f64, amp: f64 },
    SineMode { mode: usize, amp: f64 },
}

impl InitialProfile {
    pub fn displacement(&self, z: f64, a: f64, b: f64) -> f64 {
        match *self {
            InitialProfile::Zero => 0.0,
            InitialProfile::Gaussian { center, width, amp } => {
                let x = (z - center) / width;
                amp * (-x * x).exp()
            }
            InitialProfile::SineMode { mode, amp } => {
                amp * (mode as f64 * std::f64::consts::PI * (z - a) / (b - a)).sin()
            }
        }
    }
}

/// A fully derived model: exact operator pair, its boundary structures, and
/// the time-domain problem data.
#[derive(Debug, Clone)]
pub struct SystemModel {
    pub preset: Preset,
    pub params: Params,
    pub domain: (f64, f64),
    pub bc_a: BoundaryCondition,
    pub bc_b: BoundaryCondition,
    pub initial: InitialProfile,
    pub j: HamiltonianOperator,
    pub r: ReciprocalOperator,
    pub dirac: DiracStructure,
    /// Gauge-fixed so the canonical energy density matches the physically
    /// stored energy and the boundary balance closes.
    pub lagrange: LagrangeStructure,
}

fn diag_poly(coeffs_by_degree: &[Vec<Rational>]) -> OneVarPolyMat {
    let n = coeffs_by_degree[0].len();
    OneVarPolyMat::new(
        n,
        n,
        coeffs_by_degree.iter().map(|d| RatMat::diag(d)).collect(),
    )
}

pub fn builtin(
    preset: Preset,
    params: Params,
    domain: (f64, f64),
    bc_a: BoundaryCondition,
    bc_b: BoundaryCondition,
    initial: InitialProfile,
) -> Result<SystemModel, AlgebraError> {
    params.validate()?;
    if !(domain.0 < domain.1) || !domain.0.is_finite() || !domain.1.is_finite() {
        return Err(AlgebraError::Invalid("domain must satisfy a < b".into()));
    }
    let k = params.k.clone();
    let t_mod = params.t.clone();
    let inv_rho_a = rint(1) / params.rho_a.clone();
    let (j, r, gauge_target) = match preset {
        Preset::RodSymplectic => {
            let j = OneVarPolyMat::constant(RatMat::from_i64(&[&[0, 1], &[-1, 0]]));
            let p = OneVarPolyMat::constant(RatMat::identity(2));
            let s = diag_poly(&[
                vec![k.clone(), inv_rho_a.clone()],
                vec![rint(0), rint(0)],
                vec![-t_mod.clone(), rint(0)],
            ]);
            // chi = u, eps = -T u'.
            let target = OneVarPolyMat::new(
                2,
                2,
                vec![
                    RatMat::from_i64(&[&[1, 0], &[0, 0]]),
                    RatMat::from_fn(2, 2, |i, jj| {
                        if (i, jj) == (1, 0) {
                            -t_mod.clone()
                        } else {
                            rint(0)
                        }
                    }),
                ],
            );
            (j, (p, s), Some((target, 1)))
        }
        Preset::RodFirstOrder | Preset::RodNonlocal => {
            // Rows: du/dt = e3, dstrain/dt = d/dz e3, dp/dt = -e1 + d/dz e2.
            let j = OneVarPolyMat::new(
                3,
                3,
                vec![
                    RatMat::from_i64(&[&[0, 0, 1], &[0, 0, 0], &[-1, 0, 0]]),
                    RatMat::from_i64(&[&[0, 0, 0], &[0, 0, 1], &[0, 1, 0]]),
                ],
            );
            let s = diag_poly(&[vec![k.clone(), t_mod.clone(), inv_rho_a.clone()]]);
            let (p, target) = if preset == Preset::RodNonlocal && !params.mu.is_zero() {
                let p = diag_poly(&[
                    vec![rint(1), rint(1), rint(1)],
                    vec![rint(0), rint(0), rint(0)],
                    vec![rint(0), -params.mu.clone(), rint(0)],
                ]);
                // chi = mu lambda', eps = -T lambda.
                let tgt = OneVarPolyMat::new(
                    2,
                    3,
                    vec![
                        RatMat::from_fn(2, 3, |i, jj| {
                            if (i, jj) == (1, 1) {
                                -t_mod.clone()
                            } else {
                                rint(0)
                            }
                        }),
                        RatMat::from_fn(2, 3, |i, jj| {
                            if (i, jj) == (0, 1) {
                                params.mu.clone()
                            } else {
                                rint(0)
                            }
                        }),
                    ],
                );
                (p, Some((tgt, 1)))
            } else {
                (OneVarPolyMat::constant(RatMat::identity(3)), None)
            };
            (j, (p, s), target)
        }
    };
    let j = HamiltonianOperator::new(j)?;
    let r = ReciprocalOperator::new(r.0, r.1)?;
    let dirac = build_stokes_dirac(&j)?;
    let raw = boundary_operator(&r)?;
    let lagrange = match gauge_target {
        Some((target, p)) => {
            let g = symplectic_gauge_match(&raw.rb(), &target, p).ok_or_else(|| {
                AlgebraError::Invalid("no symplectic gauge reaches the pinned boundary form".into())
            })?;
            raw.with_gauge(&r, &g)?
        }
        None => raw,
    };
    Ok(SystemModel {
        preset,
        params,
        domain,
        bc_a,
        bc_b,
        initial,
        j,
        r,
        dirac,
        lagrange,
    })
}

impl SystemModel {
    pub fn state_dim(&self) -> usize {
        self.preset.state_dim()
    }

    pub fn k_f64(&self) -> f64 {
        to_f64(&self.params.k)
    }

    pub fn t_f64(&self) -> f64 {
        to_f64(&self.params.t)
    }

    pub fn rho_a_f64(&self) -> f64 {
        to_f64(&self.params.rho_a)
    }

    pub fn mu_f64(&self) -> f64 {
        to_f64(&self.params.mu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrange::canonical_hamiltonian;
    use crate::twovar::TwoVarPolyMat;

    fn default_model(preset: Preset) -> SystemModel {
        builtin(
            preset,
            Params::default(),
            (0.0, 1.0),
            BoundaryCondition::Clamped,
            BoundaryCondition::Clamped,
            InitialProfile::Gaussian { center: 0.5, width: 0.1, amp: 1.0 },
        )
        .unwrap()
    }

    #[test]
    fn symplectic_rod_energy_density_is_physical() {
        let m = default_model(Preset::RodSymplectic);
        // H = diag(k + T z*e, 1/(rho A)); the 1/2 in the stored energy is
        // applied when the quadratic form is evaluated, not in the density.
        let expect = TwoVarPolyMat::from_blocks(
            2,
            2,
            [
                ((0, 0), RatMat::diag(&[rint(1), rint(1)])),
                ((1, 1), {
                    let mut b = RatMat::zeros(2, 2);
                    b[(0, 0)] = rint(1);
                    b
                }),
            ],
        );
        assert_eq!(canonical_hamiltonian(&m.lagrange), expect);
    }

    #[test]
    fn nonlocal_rod_energy_density_is_physical() {
        let m = default_model(Preset::RodNonlocal);
        // H = diag(k, T + T mu z*e, 1/(rho A)) with k=T=rhoA=1, mu=1/20.
        let h = canonical_hamiltonian(&m.lagrange);
        assert_eq!(h.block(0, 0), RatMat::identity(3));
        let mut quad = RatMat::zeros(3, 3);
        quad[(1, 1)] = rat(1, 20);
        assert_eq!(h.block(1, 1), quad);
        assert_eq!(h.degree(), 1);
    }

    #[test]
    fn first_order_rod_has_no_energy_ports_and_two_power_ports() {
        let m = default_model(Preset::RodFirstOrder);
        assert_eq!(m.lagrange.p, 0);
        assert_eq!(m.dirac.delta(), 2);
    }

    #[test]
    fn symplectic_rod_has_no_power_ports() {
        let m = default_model(Preset::RodSymplectic);
        assert_eq!(m.dirac.delta(), 0);
        assert_eq!(m.lagrange.p, 1);
    }

    #[test]
    fn nonlocal_with_zero_mu_degenerates_to_first_order_boundary_data() {
        let m = builtin(
            Preset::RodNonlocal,
            Params { mu: rint(0), ..Params::default() },
            (0.0, 1.0),
            BoundaryCondition::Clamped,
            BoundaryCondition::Clamped,
            InitialProfile::Zero,
        )
        .unwrap();
        assert_eq!(m.lagrange.p, 0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(builtin(
            Preset::RodSymplectic,
            Params { t: rint(0), ..Params::default() },
            (0.0, 1.0),
            BoundaryCondition::Clamped,
            BoundaryCondition::Clamped,
            InitialProfile::Zero,
        )
        .is_err());
        assert!(builtin(
            Preset::RodSymplectic,
            Params::default(),
            (1.0, 0.0),
            BoundaryCondition::Clamped,
            BoundaryCondition::Clamped,
            InitialProfile::Zero,
        )
        .is_err());
    }
}
