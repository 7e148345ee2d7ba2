//! Space discretization of the built-in models on a uniform grid with
//! summation-by-parts difference operators. Produces the sparse pencil
//! (Ph, Ah) of the semi-discrete system Ph dx/dt = Ah x + b(t) together
//! with the boundary-forcing slots.

use super::band;
use super::model::{BoundaryCondition, Preset, SystemModel};
use super::stencil::{self, Stencil};
use super::SimError;

/// Closure kind of one latent-field row in the strain-gradient model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatentRow {
    /// Interior mass row (1 - mu d^2/dz^2).
    Mass,
    /// Clamped end: the latent gradient is frozen (d/dt of lambda' = 0),
    /// closing the descriptor system with a consistent flux condition.
    Flux,
    /// Stress end: the latent value is pinned to the prescribed stress / T.
    Pinned,
}

/// One inhomogeneous right-hand-side slot driven by a boundary signal.
#[derive(Debug, Clone)]
pub struct BcForcing {
    pub row: usize,
    pub scale: f64,
    /// True when the slot is driven by the time derivative of the signal
    /// (pinned-value rows); false when driven by the signal itself.
    pub rate: bool,
    /// Which endpoint's boundary signal feeds the slot.
    pub side_b: bool,
}

#[derive(Debug)]
pub struct DiscreteSystem {
    pub model: SystemModel,
    pub n_nodes: usize,
    pub dz: f64,
    pub order: usize,
    /// Components per node; the flat index is node * n + component.
    pub n: usize,
    pub dim: usize,
    pub ph: Vec<Vec<(usize, f64)>>,
    pub ah: Vec<Vec<(usize, f64)>>,
    pub forcing: Vec<BcForcing>,
    /// Per-node latent-row closure (strain-gradient model only).
    pub latent_rows: Vec<LatentRow>,
    pub d1: Stencil,
    pub d2: Stencil,
    pub quad: Vec<f64>,
}

fn sparse_identity(dim: usize) -> Vec<Vec<(usize, f64)>> {
    (0..dim).map(|i| vec![(i, 1.0)]).collect()
}

fn add(rows: &mut [Vec<(usize, f64)>], i: usize, j: usize, v: f64) {
    if v == 0.0 {
        return;
    }
    let row = &mut rows[i];
    if let Some(slot) = row.iter_mut().find(|(c, _)| *c == j) {
        slot.1 += v;
    } else {
        row.push((j, v));
    }
}

pub fn discretize(model: &SystemModel, n_cells: usize, order: usize) -> Result<DiscreteSystem, SimError> {
    if order != 2 && order != 4 {
        return Err(SimError::Invalid(format!("unsupported scheme order {order}")));
    }
    let n_nodes = n_cells + 1;
    if n_nodes < 2 * (order + 4) {
        return Err(SimError::Invalid(format!(
            "grid too coarse: need at least {} cells for order {order}",
            2 * (order + 4) - 1
        )));
    }
    let (a, b) = model.domain;
    let dz = (b - a) / n_cells as f64;
    let d1 = stencil::d1_sbp(n_nodes, dz, order);
    let d2 = stencil::d2(n_nodes, dz, order);
    let quad = stencil::quadrature(n_nodes, dz, order);
    let n = model.state_dim();
    let dim = n_nodes * n;
    let idx = |node: usize, comp: usize| node * n + comp;
    let k = model.k_f64();
    let t_mod = model.t_f64();
    let inv_rho_a = 1.0 / model.rho_a_f64();
    let mu = model.mu_f64();
    let last = n_nodes - 1;

    let mut ph = sparse_identity(dim);
    let mut ah: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
    let mut forcing = Vec::new();
    let mut latent_rows = Vec::new();

    match model.preset {
        Preset::RodSymplectic => {
            // Components: 0 = displacement u, 1 = momentum density p.
            for i in 0..n_nodes {
                add(&mut ah, idx(i, 0), idx(i, 1), inv_rho_a);
            }
            for i in 1..last {
                add(&mut ah, idx(i, 1), idx(i, 0), -k);
                for &(j, w) in &d2.rows[i] {
                    add(&mut ah, idx(i, 1), idx(j, 0), t_mod * w);
                }
            }
            for (m, bc, at_end) in [(0usize, model.bc_a, false), (last, model.bc_b, true)] {
                match bc {
                    BoundaryCondition::Clamped => {
                        // Momentum pinned; the velocity row then vanishes too.
                    }
                    BoundaryCondition::Stress { .. } => {
                        // dp/dt = -k u + d/dz sigma with the endpoint stress
                        // replaced by the prescribed signal; interior stress
                        // values come from T * D1 u.
                        add(&mut ah, idx(m, 1), idx(m, 0), -k);
                        for (j, wj) in stencil::trace_weights(n_nodes, dz, 1, order, at_end) {
                            if j == m {
                                forcing.push(BcForcing {
                                    row: idx(m, 1),
                                    scale: wj,
                                    rate: false,
                                    side_b: at_end,
                                });
                            } else {
                                for &(l, dl) in &d1.rows[j] {
                                    add(&mut ah, idx(m, 1), idx(l, 0), wj * t_mod * dl);
                                }
                            }
                        }
                    }
                }
            }
        }
        Preset::RodFirstOrder | Preset::RodNonlocal => {
            // Components: 0 = displacement u, 1 = strain (or its latent
            // potential), 2 = momentum density p.
            let nonlocal = model.preset == Preset::RodNonlocal && mu != 0.0;
            for i in 0..n_nodes {
                add(&mut ah, idx(i, 0), idx(i, 2), inv_rho_a);
                for &(j, w) in &d1.rows[i] {
                    add(&mut ah, idx(i, 1), idx(j, 2), w * inv_rho_a);
                }
            }
            for i in 0..n_nodes {
                add(&mut ah, idx(i, 2), idx(i, 0), -k);
                for &(j, w) in &d1.rows[i] {
                    add(&mut ah, idx(i, 2), idx(j, 1), w * t_mod);
                }
            }
            if nonlocal {
                // Latent-field mass rows carry (1 - mu d^2/dz^2); the
                // boundary rows are replaced by closure conditions below.
                latent_rows = vec![LatentRow::Mass; n_nodes];
                for i in 1..last {
                    for &(j, w) in &d2.rows[i] {
                        add(&mut ph, idx(i, 1), idx(j, 1), -mu * w);
                    }
                }
            }
            for (m, bc) in [(0usize, model.bc_a), (last, model.bc_b)] {
                match bc {
                    BoundaryCondition::Clamped => {
                        ah[idx(m, 2)].clear();
                        if nonlocal {
                            // Freeze the latent gradient at the clamped end:
                            // one-sided D1 applied to d(lambda)/dt equals 0.
                            latent_rows[m] = LatentRow::Flux;
                            ah[idx(m, 1)].clear();
                            ph[idx(m, 1)] = stencil::trace_weights(n_nodes, dz, 1, order, m == last)
                                .into_iter()
                                .map(|(j, w)| (idx(j, 1), w))
                                .collect();
                        }
                    }
                    BoundaryCondition::Stress { .. } => {
                        // The boundary summation-by-parts row of D1 is only
                        // first-order accurate; the driven momentum row is
                        // audited against the continuum balance, so rebuild
                        // it with one-sided weights of scheme order.
                        ah[idx(m, 2)].clear();
                        add(&mut ah, idx(m, 2), idx(m, 0), -k);
                        for (j, w) in stencil::trace_weights(n_nodes, dz, 1, order, m == last) {
                            add(&mut ah, idx(m, 2), idx(j, 1), w * t_mod);
                        }
                        // Pin the strain-like component to g(t)/T so the
                        // boundary stress matches the prescribed signal.
                        ah[idx(m, 1)].clear();
                        if nonlocal {
                            latent_rows[m] = LatentRow::Pinned;
                            ph[idx(m, 1)] = vec![(idx(m, 1), 1.0)];
                        }
                        forcing.push(BcForcing {
                            row: idx(m, 1),
                            scale: 1.0 / t_mod,
                            rate: true,
                            side_b: m == last,
                        });
                    }
                }
            }
        }
    }

    Ok(DiscreteSystem {
        model: model.clone(),
        n_nodes,
        dz,
        order,
        n,
        dim,
        ph,
        ah,
        forcing,
        latent_rows,
        d1,
        d2,
        quad,
    })
}

impl DiscreteSystem {
    pub fn idx(&self, node: usize, comp: usize) -> usize {
        node * self.n + comp
    }

    /// Extracts one component of a flat state as a per-node field.
    pub fn component(&self, state: &[f64], comp: usize) -> Vec<f64> {
        (0..self.n_nodes).map(|i| state[self.idx(i, comp)]).collect()
    }

    /// Adds the boundary forcing evaluated at time t into rhs. `weight`
    /// scales the contribution (used for the midpoint rule).
    pub fn add_forcing(&self, t: f64, weight: f64, rhs: &mut [f64]) {
        for f in &self.forcing {
            let bc = if f.side_b { &self.model.bc_b } else { &self.model.bc_a };
            let g = if f.rate { bc.stress_rate(t) } else { bc.stress_value(t) };
            rhs[f.row] += weight * f.scale * g;
        }
    }

    /// Initial state: prescribed displacement, zero momentum, and the
    /// strain-like component derived from the displacement.
    pub fn initial_state(&self) -> Result<Vec<f64>, SimError> {
        let (a, b) = self.model.domain;
        let u: Vec<f64> = (0..self.n_nodes)
            .map(|i| self.model.initial.displacement(a + i as f64 * self.dz, a, b))
            .collect();
        let mut state = vec![0.0; self.dim];
        for i in 0..self.n_nodes {
            state[self.idx(i, 0)] = u[i];
        }
        if self.n == 3 {
            let strain = self.d1.apply(&u);
            let latent = if self.model.preset == Preset::RodNonlocal && self.model.mu_f64() != 0.0 {
                // Solve the initial elliptic problem with the same latent
                // rows as the dynamics: mass rows match the strain, flux
                // rows match its one-sided gradient, pinned rows its value.
                let rows: Vec<Vec<(usize, f64)>> = (0..self.n_nodes)
                    .map(|i| {
                        self.ph[self.idx(i, 1)]
                            .iter()
                            .map(|&(col, w)| (col / self.n, w))
                            .collect()
                    })
                    .collect();
                let mut rhs = strain.clone();
                for i in 0..self.n_nodes {
                    if self.latent_rows[i] == LatentRow::Flux {
                        rhs[i] = rows[i].iter().map(|&(j, w)| w * strain[j]).sum();
                    }
                }
                let lu = band::factor(self.n_nodes, &rows).map_err(SimError::Singular)?;
                lu.solve(&mut rhs);
                rhs
            } else {
                strain
            };
            for i in 0..self.n_nodes {
                state[self.idx(i, 1)] = latent[i];
            }
        }
        Ok(state)
    }
}
