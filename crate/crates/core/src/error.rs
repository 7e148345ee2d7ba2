use crate::onevar::OneVarPolyMat;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("matrix shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("polynomial matrix is not divisible by (zeta + eta); anti-diagonal residual is nonzero")]
    NotDivisible { residual: OneVarPolyMat },
    #[error("coefficient matrix is not symmetric")]
    NotSymmetric,
    #[error("coefficient matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("skew form has odd rank {0}; cannot factor through a symplectic pairing")]
    OddRank(usize),
    #[error("operator is not skew-adjoint: coefficient block {block} violates the alternating sign rule")]
    NotSkewAdjoint { block: usize },
    #[error("signature is not balanced (alpha = {alpha}, beta = {beta}); endpoint-local port split needs alpha = beta")]
    OddSignature { alpha: usize, beta: usize },
    #[error("operator pair fails reciprocity: residual {residual}")]
    NotReciprocal { residual: OneVarPolyMat },
    #[error("operator pair is not maximal: the stacked operator drops rank")]
    NotMaximal,
    #[error("boundary operator identity failed to close exactly")]
    BoundaryIdentity,
    #[error("{0}")]
    Invalid(String),
}
