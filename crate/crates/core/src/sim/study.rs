//! Refinement studies: cross-checking the displacement-momentum model
//! against the first-order model, and measuring balance-residual
//! convergence under joint space/time refinement.

use super::audit::balance_audit;
use super::discretize::discretize;
use super::model::{builtin, BoundaryCondition, InitialProfile, Params, Preset, SystemModel};
use super::step::simulate;
use super::SimError;

/// Observed convergence rates between successive refinement levels:
/// rate_i = log2(err_i / err_{i+1}) for a factor-2 refinement.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .collect()
}

#[derive(Debug)]
pub struct CrossCheck {
    pub n_cells: Vec<usize>,
    /// L2 distance between the displacement fields of the two formulations
    /// at the final time, per resolution.
    pub distances: Vec<f64>,
    pub orders: Vec<f64>,
}

fn model_with(preset: Preset, params: &Params, initial: InitialProfile) -> Result<SystemModel, SimError> {
    builtin(
        preset,
        params.clone(),
        (0.0, 1.0),
        BoundaryCondition::Clamped,
        BoundaryCondition::Clamped,
        initial,
    )
    .map_err(|e| SimError::Invalid(e.to_string()))
}

/// Runs the displacement-momentum and first-order models from the same
/// initial displacement on matched grids and compares the displacement
/// fields at the final time, across a sequence of doubled resolutions.
/// The time step is refined along with the grid so the spatial error
/// dominates.
pub fn cross_formulation_check(
    params: &Params,
    initial: InitialProfile,
    base_cells: usize,
    levels: usize,
    order: usize,
    t_end: f64,
) -> Result<CrossCheck, SimError> {
    let mut n_cells = Vec::new();
    let mut distances = Vec::new();
    for lvl in 0..levels {
        let cells = base_cells << lvl;
        let steps = (t_end / 0.5 * cells as f64).ceil() as usize;
        let dt = t_end / steps as f64;
        let sym = discretize(&model_with(Preset::RodSymplectic, params, initial)?, cells, order)?;
        let first = discretize(&model_with(Preset::RodFirstOrder, params, initial)?, cells, order)?;
        let traj_s = simulate(&sym, dt, steps)?;
        let traj_f = simulate(&first, dt, steps)?;
        let us = sym.component(traj_s.states.last().unwrap(), 0);
        let uf = first.component(traj_f.states.last().unwrap(), 0);
        let mut acc = 0.0;
        for i in 0..sym.n_nodes {
            let diff = us[i] - uf[i];
            acc += sym.quad[i] * diff * diff;
        }
        n_cells.push(cells);
        distances.push(acc.sqrt());
    }
    let orders = observed_orders(&distances);
    Ok(CrossCheck { n_cells, distances, orders })
}

#[derive(Debug)]
pub struct ConvergenceStudy {
    pub n_cells: Vec<usize>,
    pub residuals: Vec<f64>,
    pub orders: Vec<f64>,
}

/// Measures the maximum relative balance residual of a model across a
/// sequence of doubled resolutions with jointly refined time steps.
pub fn balance_convergence(
    model: &SystemModel,
    base_cells: usize,
    levels: usize,
    order: usize,
    t_end: f64,
    steps_per_cell: f64,
) -> Result<ConvergenceStudy, SimError> {
    let mut n_cells = Vec::new();
    let mut residuals = Vec::new();
    for lvl in 0..levels {
        let cells = base_cells << lvl;
        let steps = (steps_per_cell * cells as f64).ceil() as usize;
        let dt = t_end / steps as f64;
        let d = discretize(model, cells, order)?;
        let traj = simulate(&d, dt, steps)?;
        let report = balance_audit(&d, &traj)?;
        n_cells.push(cells);
        residuals.push(report.max_relative);
    }
    let orders = observed_orders(&residuals);
    Ok(ConvergenceStudy { n_cells, residuals, orders })
}

/// Final-time L2 distance between the displacement fields of the
/// strain-gradient model (per value of mu) and the first-order model, on
/// one shared grid. The discrete systems coincide at mu = 0, so the
/// distance shrinks linearly with mu.
pub fn nonlocal_limit_distances(
    params: &Params,
    mus: &[crate::rational::Rational],
    initial: InitialProfile,
    cells: usize,
    order: usize,
    dt: f64,
    steps: usize,
) -> Result<Vec<f64>, SimError> {
    let reference = discretize(&model_with(Preset::RodFirstOrder, params, initial)?, cells, order)?;
    let traj_ref = simulate(&reference, dt, steps)?;
    let u_ref = reference.component(traj_ref.states.last().unwrap(), 0);
    let mut out = Vec::new();
    for mu in mus {
        let p = Params { mu: mu.clone(), ..params.clone() };
        let d = discretize(&model_with(Preset::RodNonlocal, &p, initial)?, cells, order)?;
        let traj = simulate(&d, dt, steps)?;
        let u = d.component(traj.states.last().unwrap(), 0);
        let mut acc = 0.0;
        for i in 0..d.n_nodes {
            let diff = u[i] - u_ref[i];
            acc += d.quad[i] * diff * diff;
        }
        out.push(acc.sqrt());
    }
    Ok(out)
}
