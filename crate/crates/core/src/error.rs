use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("all four coefficients are zero")]
    AllZeroCoefficients,
    #[error("denominator cz+d is identically zero")]
    ZeroDenominatorMap,
    #[error("constant map has no inverse")]
    ConstantMapNotInvertible,
    #[error("evaluation at the pole")]
    EvaluationAtPole,
    #[error("the identity fixes every point")]
    IdentityMapAllFixed,
    #[error("constant map: fixed-point machinery does not apply")]
    ConstantMap,
    #[error("map is not a selfmap of the unit disk")]
    NotASelfmap,
    #[error("map is not an automorphism of the unit disk")]
    NotAnAutomorphism,
    #[error("map is not of dilation type")]
    NotDilationType,
    #[error("map has no fixed point on the unit circle")]
    NoBoundaryFixedPoint,
    #[error("boundary fixed point is not representable in the exact backend")]
    InexactFixedPoint,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("pole lies in the closed unit disk")]
    PoleInClosedDisk,
    #[error("witness undefined: {0}")]
    WitnessUndefined(String),
    #[error("kernel point lies outside the open unit disk")]
    AlphaOutsideDisk,
    #[error("criterion and case analysis disagree: {0}")]
    CrossCheckMismatch(String),
    #[error("inconsistent fixed-point data: {0}")]
    Inconsistent(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
}

impl Error {
    /// Stable identifier used in machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::AllZeroCoefficients => "AllZeroCoefficients",
            Error::ZeroDenominatorMap => "ZeroDenominatorMap",
            Error::ConstantMapNotInvertible => "ConstantMapNotInvertible",
            Error::EvaluationAtPole => "EvaluationAtPole",
            Error::IdentityMapAllFixed => "IdentityMapAllFixed",
            Error::ConstantMap => "ConstantMap",
            Error::NotASelfmap => "NotASelfmap",
            Error::NotAnAutomorphism => "NotAnAutomorphism",
            Error::NotDilationType => "NotDilationType",
            Error::NoBoundaryFixedPoint => "NoBoundaryFixedPoint",
            Error::InexactFixedPoint => "InexactFixedPoint",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::PoleInClosedDisk => "PoleInClosedDisk",
            Error::WitnessUndefined(_) => "WitnessUndefined",
            Error::AlphaOutsideDisk => "AlphaOutsideDisk",
            Error::CrossCheckMismatch(_) => "CrossCheckMismatch",
            Error::Inconsistent(_) => "Inconsistent",
            Error::Parse { .. } => "ParseError",
            Error::Validation(_) => "ValidationError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
