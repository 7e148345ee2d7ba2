//! Implicit-midpoint time stepping of the semi-discrete pencil
//! Ph dx/dt = Ah x + b(t). The scheme conserves quadratic invariants of the
//! flow up to linear-solver accuracy.

use super::band::{self, spmv};
use super::discretize::DiscreteSystem;
use super::SimError;

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

fn combine(
    ph: &[Vec<(usize, f64)>],
    ah: &[Vec<(usize, f64)>],
    half_dt: f64,
) -> Vec<Vec<(usize, f64)>> {
    ph.iter()
        .zip(ah)
        .map(|(prow, arow)| {
            let mut row = prow.clone();
            for &(j, v) in arow {
                if let Some(slot) = row.iter_mut().find(|(c, _)| *c == j) {
                    slot.1 += half_dt * v;
                } else {
                    row.push((j, half_dt * v));
                }
            }
            row
        })
        .collect()
}

pub fn simulate(d: &DiscreteSystem, dt: f64, steps: usize) -> Result<Trajectory, SimError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(SimError::Invalid(format!("time step must be positive, got {dt}")));
    }
    let lhs = combine(&d.ph, &d.ah, -dt / 2.0);
    let rhs_mat = combine(&d.ph, &d.ah, dt / 2.0);
    let lu = band::factor(d.dim, &lhs).map_err(SimError::Singular)?;
    let mut states = Vec::with_capacity(steps + 1);
    let mut times = Vec::with_capacity(steps + 1);
    let mut state = d.initial_state()?;
    states.push(state.clone());
    times.push(0.0);
    for step in 0..steps {
        let t_mid = (step as f64 + 0.5) * dt;
        let mut rhs = spmv(&rhs_mat, &state);
        d.add_forcing(t_mid, dt, &mut rhs);
        lu.solve(&mut rhs);
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(SimError::NonFinite { step });
        }
        state = rhs;
        states.push(state.clone());
        times.push((step + 1) as f64 * dt);
    }
    Ok(Trajectory { dt, times, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::discretize::discretize;
    use crate::sim::model::{builtin, BoundaryCondition, InitialProfile, Params, Preset};

    fn clamped(preset: Preset) -> DiscreteSystem {
        let m = builtin(
            preset,
            Params::default(),
            (0.0, 1.0),
            BoundaryCondition::Clamped,
            BoundaryCondition::Clamped,
            InitialProfile::Gaussian { center: 0.5, width: 0.1, amp: 1.0 },
        )
        .unwrap();
        discretize(&m, 60, 2).unwrap()
    }

    #[test]
    fn clamped_boundary_momentum_stays_exactly_zero() {
        let d = clamped(Preset::RodFirstOrder);
        let traj = simulate(&d, 1e-2, 50).unwrap();
        for state in &traj.states {
            assert_eq!(state[d.idx(0, 2)], 0.0);
            assert_eq!(state[d.idx(d.n_nodes - 1, 2)], 0.0);
        }
    }

    #[test]
    fn motion_starts_from_a_static_pulse() {
        let d = clamped(Preset::RodSymplectic);
        let traj = simulate(&d, 1e-2, 20).unwrap();
        let p_mid = traj.states.last().unwrap()[d.idx(d.n_nodes / 2, 1)];
        assert!(p_mid.abs() > 1e-6, "momentum never developed");
    }

    #[test]
    fn zero_time_step_rejected() {
        let d = clamped(Preset::RodFirstOrder);
        assert!(simulate(&d, 0.0, 1).is_err());
    }
}
