//! Power boundary structure of a formally skew-adjoint operator J: the
//! difference form J(e) + J'(z) divides by (z + e); factoring the quotient
//! through a signature yields the boundary map T(s) and the port pairing.

use crate::error::AlgebraError;
use crate::factor::{signature_factorization, signature_reassemble, Signature};
use crate::onevar::OneVarPolyMat;
use crate::rational::to_f64;
use crate::twovar::TwoVarPolyMat;

/// A formally skew-adjoint square matrix differential operator, validated at
/// construction: even-index coefficient blocks must be skew-symmetric and
/// odd-index blocks symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianOperator {
    j: OneVarPolyMat,
}

impl HamiltonianOperator {
    pub fn new(j: OneVarPolyMat) -> Result<Self, AlgebraError> {
        if j.rows() != j.cols() {
            return Err(AlgebraError::ShapeMismatch {
                expected: "square".into(),
                got: format!("{}x{}", j.rows(), j.cols()),
            });
        }
        for (k, block) in j.coeffs().iter().enumerate() {
            let ok = if k % 2 == 0 { block.is_skew_symmetric() } else { block.is_symmetric() };
            if !ok {
                return Err(AlgebraError::NotSkewAdjoint { block: k });
            }
        }
        Ok(HamiltonianOperator { j })
    }

    pub fn op(&self) -> &OneVarPolyMat {
        &self.j
    }

    pub fn state_dim(&self) -> usize {
        self.j.rows()
    }

    pub fn order(&self) -> isize {
        self.j.degree()
    }
}

/// The factored boundary data: (z+e) T'(z) D Sigma T(e) = J(e) + J'(z) with
/// D = diag(scale) positive. The numeric layer folds sqrt(scale) into T's
/// rows so that the port pairing uses the bare +/-1 signature.
#[derive(Debug, Clone)]
pub struct DiracStructure {
    pub t: OneVarPolyMat,
    pub sig: Signature,
    pub scale: Vec<crate::rational::Rational>,
}

pub fn build_stokes_dirac(j: &HamiltonianOperator) -> Result<DiracStructure, AlgebraError> {
    let phi = &TwoVarPolyMat::from_second_var(j.op())
        + &TwoVarPolyMat::from_first_var(&j.op().transpose());
    let psi = phi.divide_by_sum()?;
    let (t, sig, scale) = signature_factorization(&psi)?;
    debug_assert_eq!(signature_reassemble(&t, &sig, &scale), psi);
    Ok(DiracStructure { t, sig, scale })
}

impl DiracStructure {
    pub fn delta(&self) -> usize {
        self.sig.delta()
    }

    /// Row r of T with sqrt(scale_r) applied, as per-degree f64 row vectors:
    /// result[r][k] is the n-vector multiplying the k-th spatial derivative.
    pub fn scaled_rows_f64(&self) -> Vec<Vec<Vec<f64>>> {
        let n = self.t.cols();
        let deg = (self.t.degree().max(0)) as usize;
        (0..self.t.rows())
            .map(|r| {
                let s = to_f64(&self.scale[r]).sqrt();
                (0..=deg)
                    .map(|k| {
                        let c = self.t.coeff(k);
                        (0..n).map(|j| s * to_f64(&c[(r, j)])).collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// Evaluates the scaled boundary map on derivative jets (jets[k] = k-th
    /// spatial derivative of the effort field at one endpoint).
    pub fn trace_from_jets(&self, jets: &[Vec<f64>]) -> Vec<f64> {
        let rows = self.scaled_rows_f64();
        rows.iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(k, coeffs)| {
                        coeffs.iter().zip(&jets[k]).map(|(c, v)| c * v).sum::<f64>()
                    })
                    .sum()
            })
            .collect()
    }
}

/// Endpoint traces of the boundary map, length delta each.
#[derive(Debug, Clone)]
pub struct BoundaryTrace {
    pub at_a: Vec<f64>,
    pub at_b: Vec<f64>,
}

/// Conjugated boundary port pair; f'e has the dimension of power.
#[derive(Debug, Clone)]
pub struct PowerPorts {
    pub f_boundary: Vec<f64>,
    pub e_boundary: Vec<f64>,
}

impl PowerPorts {
    pub fn pairing(&self) -> f64 {
        self.f_boundary.iter().zip(&self.e_boundary).map(|(f, e)| f * e).sum()
    }
}

/// Rotates endpoint traces into the conjugated port pair:
/// f = Sigma (t_a + t_b)/sqrt(2), e = (t_b - t_a)/sqrt(2). For any two
/// trace pairs, f2'e1 + e2'f1 = t_b1' Sigma t_b2 - t_a1' Sigma t_a2.
pub fn boundary_port_values(d: &DiracStructure, tr: &BoundaryTrace) -> Result<PowerPorts, AlgebraError> {
    let delta = d.delta();
    if tr.at_a.len() != delta || tr.at_b.len() != delta {
        return Err(AlgebraError::ShapeMismatch {
            expected: format!("trace length {}", delta),
            got: format!("{}/{}", tr.at_a.len(), tr.at_b.len()),
        });
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let f = (0..delta)
        .map(|r| d.sig.sign(r) as f64 * (tr.at_a[r] + tr.at_b[r]) * inv_sqrt2)
        .collect();
    let e = (0..delta).map(|r| (tr.at_b[r] - tr.at_a[r]) * inv_sqrt2).collect();
    Ok(PowerPorts { f_boundary: f, e_boundary: e })
}

/// Alternative endpoint-local ports, available when alpha = beta: pairs the
/// positive-signature trace components against the negative ones at each
/// endpoint separately. Output stacks the a-endpoint pair before the
/// b-endpoint pair; induces the same boundary pairing as
/// `boundary_port_values`.
pub fn even_port_split(d: &DiracStructure, tr: &BoundaryTrace) -> Result<PowerPorts, AlgebraError> {
    let Signature { alpha, beta } = d.sig;
    if alpha != beta {
        return Err(AlgebraError::OddSignature { alpha, beta });
    }
    let delta = d.delta();
    if tr.at_a.len() != delta || tr.at_b.len() != delta {
        return Err(AlgebraError::ShapeMismatch {
            expected: format!("trace length {}", delta),
            got: format!("{}/{}", tr.at_a.len(), tr.at_b.len()),
        });
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut f = Vec::with_capacity(delta);
    let mut e = Vec::with_capacity(delta);
    for i in 0..alpha {
        f.push((tr.at_a[i] + tr.at_a[alpha + i]) * inv_sqrt2);
        e.push((tr.at_a[alpha + i] - tr.at_a[i]) * inv_sqrt2);
    }
    for i in 0..alpha {
        f.push((tr.at_b[i] + tr.at_b[alpha + i]) * inv_sqrt2);
        e.push((tr.at_b[i] - tr.at_b[alpha + i]) * inv_sqrt2);
    }
    Ok(PowerPorts { f_boundary: f, e_boundary: e })
}

/// Audit of the power-conservation identity at the discrete level:
/// |integral of e'f - f_boundary' e_boundary| under the supplied quadrature.
/// Fields are node-major with `n` components per node.
pub fn pairing_residual(
    f: &[f64],
    e: &[f64],
    n: usize,
    ports: &PowerPorts,
    quad: &[f64],
) -> Result<f64, AlgebraError> {
    if f.len() != e.len() || f.len() != n * quad.len() {
        return Err(AlgebraError::ShapeMismatch {
            expected: format!("{} nodes x {} components", quad.len(), n),
            got: format!("f len {}, e len {}", f.len(), e.len()),
        });
    }
    let mut integral = 0.0;
    for (node, w) in quad.iter().enumerate() {
        let mut dot = 0.0;
        for c in 0..n {
            dot += e[node * n + c] * f[node * n + c];
        }
        integral += w * dot;
    }
    Ok((integral - ports.pairing()).abs())
}
