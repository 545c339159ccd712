use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("stabilization undefined below genus 2 (genus is {0})")]
    GenusTooSmall(u64),
    #[error("genus 0 curve has no Jacobian torus")]
    GenusZero,
    #[error("graph is not stable")]
    Unstable,
    #[error("graph has bridges; apply two_edge_connectization first")]
    HasBridges,
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(u64, u64),
    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),
    #[error("edge `{0}` has non-positive valuation")]
    NonPositiveValuation(String),
    #[error("edge `{edge}`: {reason}")]
    InvalidLength { edge: String, reason: String },
    #[error("divisor has degree {0}, expected 0")]
    NonZeroDegree(i64),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
