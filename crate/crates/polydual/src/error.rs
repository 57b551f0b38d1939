use thiserror::Error;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("all vertices coincide; the polygon has zero perimeter")]
    ZeroPerimeter,

    #[error("edge {edge} has length {length:.3e}, below the smooth-locus threshold {tol:.3e}")]
    DegenerateEdge { edge: usize, length: f64, tol: f64 },

    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("cannot canonicalize: every vertex sits at the centroid")]
    Unnormalizable,

    #[error("invalid star spec: {0}")]
    InvalidSpec(String),

    #[error("complete folds exist for even n only, got n = {0}")]
    OddN(usize),

    #[error("constraint gradient vanishes; the multiplier is undefined")]
    ZeroConstraintGradient,

    #[error("point lies outside the image of the joint area-perimeter map")]
    OutsideRegion,

    #[error("invalid region label for n = {n}: {reason}")]
    InvalidLabel { n: usize, reason: String },

    #[error("malformed cell descriptors: {0}")]
    MalformedDescriptors(String),

    #[error("area is zero (or has the wrong sign); cannot rescale to the target area")]
    ZeroArea,

    #[error("perimeter level must be positive, got {0}")]
    NonPositiveLevel(f64),

    #[error("surfaces are not tangent at the base point: {0}")]
    NotTangent(String),

    #[error("restricted Hessian is degenerate (nullity {0})")]
    DegenerateRestriction(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
