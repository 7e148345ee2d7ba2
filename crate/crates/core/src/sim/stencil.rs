//! Finite-difference building blocks on a uniform grid: summation-by-parts
//! first-derivative operators (orders 2 and 4) with their norm quadratures,
//! second-derivative stencils, and one-sided evaluation weights for boundary
//! traces.

/// Sparse row-compressed difference operator on grid values.
#[derive(Debug, Clone)]
pub struct Stencil {
    pub rows: Vec<Vec<(usize, f64)>>,
}

impl Stencil {
    pub fn apply(&self, field: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, w)| w * field[j]).sum())
            .collect()
    }

    pub fn identity(n: usize) -> Stencil {
        Stencil { rows: (0..n).map(|i| vec![(i, 1.0)]).collect() }
    }

    pub fn zero(n: usize) -> Stencil {
        Stencil { rows: vec![Vec::new(); n] }
    }

    /// Row-by-row composition: (self . other) acting on grid values.
    pub fn compose(&self, other: &Stencil) -> Stencil {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: std::collections::BTreeMap<usize, f64> = Default::default();
                for &(k, w) in row {
                    for &(j, v) in &other.rows[k] {
                        *acc.entry(j).or_insert(0.0) += w * v;
                    }
                }
                acc.into_iter().filter(|&(_, w)| w != 0.0).collect()
            })
            .collect();
        Stencil { rows }
    }
}

/// Weights of the finite-difference approximation to the m-th derivative at
/// x0 from arbitrary nodes (Fornberg's recurrence).
pub fn fornberg_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    assert!(n > m, "need more than m nodes for the m-th derivative");
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=m.min(i)).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=m.min(i)).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// First-derivative operator with the summation-by-parts property for the
/// requested interior order (2 or 4), on n_nodes uniform points.
pub fn d1_sbp(n_nodes: usize, dz: f64, order: usize) -> Stencil {
    let mut rows = vec![Vec::new(); n_nodes];
    match order {
        2 => {
            assert!(n_nodes >= 3, "grid too coarse for the order-2 stencil");
            rows[0] = vec![(0, -1.0 / dz), (1, 1.0 / dz)];
            for i in 1..n_nodes - 1 {
                rows[i] = vec![(i - 1, -0.5 / dz), (i + 1, 0.5 / dz)];
            }
            rows[n_nodes - 1] = vec![(n_nodes - 2, -1.0 / dz), (n_nodes - 1, 1.0 / dz)];
        }
        4 => {
            // Boundary closure rows (exact rationals) paired with the
            // norm diag(17/48, 59/48, 43/48, 49/48).
            let block: [&[f64]; 4] = [
                &[-24.0 / 17.0, 59.0 / 34.0, -4.0 / 17.0, -3.0 / 34.0],
                &[-0.5, 0.0, 0.5],
                &[4.0 / 43.0, -59.0 / 86.0, 0.0, 59.0 / 86.0, -4.0 / 43.0],
                &[3.0 / 98.0, 0.0, -59.0 / 98.0, 0.0, 32.0 / 49.0, -4.0 / 49.0],
            ];
            assert!(n_nodes >= 2 * block.len() + 1, "grid too coarse for the order-4 stencil");
            for (i, coeffs) in block.iter().enumerate() {
                rows[i] = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w != 0.0)
                    .map(|(j, &w)| (j, w / dz))
                    .collect();
                // Mirror with sign flip at the far boundary.
                rows[n_nodes - 1 - i] = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w != 0.0)
                    .map(|(j, &w)| (n_nodes - 1 - j, -w / dz))
                    .collect();
            }
            let diag = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
            for i in block.len()..n_nodes - block.len() {
                rows[i] = diag
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w != 0.0)
                    .map(|(o, &w)| (i + o - 2, w / dz))
                    .collect();
            }
        }
        _ => panic!("unsupported scheme order {}", order),
    }
    Stencil { rows }
}

/// Second-derivative operator of the requested interior order with one-sided
/// boundary rows of matching accuracy.
pub fn d2(n_nodes: usize, dz: f64, order: usize) -> Stencil {
    let width = match order {
        2 => 1,
        4 => 2,
        _ => panic!("unsupported scheme order {}", order),
    };
    assert!(n_nodes > 2 * width + order, "grid too coarse for the second-difference stencil");
    let nodes: Vec<f64> = (0..n_nodes).map(|i| i as f64 * dz).collect();
    let mut rows = Vec::with_capacity(n_nodes);
    for i in 0..n_nodes {
        let (start, len) = if i < width {
            (0, order + 3)
        } else if i + width >= n_nodes {
            (n_nodes - (order + 3), order + 3)
        } else {
            (i - width, 2 * width + 1)
        };
        let w = fornberg_weights(nodes[i], &nodes[start..start + len], 2);
        rows.push(
            w.into_iter()
                .enumerate()
                .filter(|&(_, v)| v != 0.0)
                .map(|(o, v)| (start + o, v))
                .collect(),
        );
    }
    Stencil { rows }
}

/// Quadrature weights matched to the SBP operator of the given order.
pub fn quadrature(n_nodes: usize, dz: f64, order: usize) -> Vec<f64> {
    let mut q = vec![dz; n_nodes];
    match order {
        2 => {
            q[0] = dz / 2.0;
            q[n_nodes - 1] = dz / 2.0;
        }
        4 => {
            let hblock = [17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0];
            for (i, &h) in hblock.iter().enumerate() {
                q[i] = h * dz;
                q[n_nodes - 1 - i] = h * dz;
            }
        }
        _ => panic!("unsupported scheme order {}", order),
    }
    q
}

/// One-sided weights for the m-th derivative at an endpoint, of the given
/// interior order, as (node, weight) pairs.
pub fn trace_weights(
    n_nodes: usize,
    dz: f64,
    m: usize,
    order: usize,
    at_end: bool,
) -> Vec<(usize, f64)> {
    if m == 0 {
        return vec![(if at_end { n_nodes - 1 } else { 0 }, 1.0)];
    }
    let len = (m + order).min(n_nodes);
    let nodes: Vec<f64> = (0..len).map(|i| i as f64 * dz).collect();
    if at_end {
        let w = fornberg_weights((len - 1) as f64 * dz, &nodes, m);
        w.into_iter()
            .enumerate()
            .filter(|&(_, v)| v != 0.0)
            .map(|(o, v)| (n_nodes - len + o, v))
            .collect()
    } else {
        let w = fornberg_weights(0.0, &nodes, m);
        w.into_iter().enumerate().filter(|&(_, v)| v != 0.0).map(|(o, v)| (o, v)).collect()
    }
}
