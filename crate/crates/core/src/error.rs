use thiserror::Error;

use crate::algebra::form::Form3;
use crate::algebra::parse::ParseError;
use crate::algebra::AlgebraError;

/// Errors raised by the geometric layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("form is not absolutely irreducible ({0} absolute factors)")]
    NotIrreducible(usize),
    #[error("form is not squarefree; repeated factor {0}")]
    NotSquarefree(Form3),
    #[error("curve must have degree at least 1")]
    DegreeTooLow,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("the form contains the curve: infinite intersection")]
    InfiniteIntersection,
    #[error("form degree {0} is below the curve degree {1}")]
    DegreeTooSmall(u32, u32),
    #[error("function is constant on the curve")]
    ConstantFunction,
    #[error("the zero function has no divisor")]
    ZeroFunction,
    #[error("objects live on different curves")]
    CurveMismatch,
    #[error("every form of the system contains the curve")]
    AllFormsContainCurve,
    #[error("forms have different degrees")]
    MixedDegrees,
    #[error("weighted set total {got} differs from the series order {expected}")]
    WrongOrder { expected: i64, got: i64 },
    #[error("weighted set exceeds the fixed contribution")]
    NotInFixedPart,
    #[error("form is not a member of the linear system")]
    NotInSystem,
    #[error("series orders differ ({0} vs {1})")]
    OrderMismatch(i64, i64),
    #[error("the weighted set is not a common member of both series")]
    NotCommonMember,
    #[error("divisor is not effective")]
    NotEffective,
    #[error("no effective representative exists")]
    NotRepresentable,
    #[error("the image of the map is not on the target curve")]
    ImageNotOnTarget,
    #[error("map is not birational (generic fiber degree {0})")]
    NotBirational(i64),
    #[error("map is indeterminate along the branch")]
    IndeterminacyAtCenter,
    #[error("pullback undefined: composed denominator contains the source curve")]
    PullbackUndefined,
    #[error("intersection points share a fiber under every tried shear")]
    SharedFiber,
    #[error("precision {0} is too low")]
    PrecisionTooLow(usize),
    #[error("series division inconclusive to the given precision")]
    Inconclusive,
    #[error("unknown branch {0}")]
    UnknownBranch(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable identifier used in machine-readable error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Algebra(_) => "AlgebraError",
            Error::Parse(_) => "ParseError",
            Error::NotIrreducible(_) => "NotIrreducible",
            Error::NotSquarefree(_) => "NotSquarefree",
            Error::DegreeTooLow => "DegreeTooLow",
            Error::PointNotOnCurve => "PointNotOnCurve",
            Error::InfiniteIntersection => "InfiniteIntersection",
            Error::DegreeTooSmall(..) => "DegreeTooSmall",
            Error::ConstantFunction => "ConstantFunction",
            Error::ZeroFunction => "ZeroFunction",
            Error::CurveMismatch => "CurveMismatch",
            Error::AllFormsContainCurve => "AllFormsContainCurve",
            Error::MixedDegrees => "MixedDegrees",
            Error::WrongOrder { .. } => "WrongOrder",
            Error::NotInFixedPart => "NotInFixedPart",
            Error::NotInSystem => "NotInSystem",
            Error::OrderMismatch(..) => "OrderMismatch",
            Error::NotCommonMember => "NotCommonMember",
            Error::NotEffective => "NotEffective",
            Error::NotRepresentable => "NotRepresentable",
            Error::ImageNotOnTarget => "ImageNotOnTarget",
            Error::NotBirational(_) => "NotBirational",
            Error::IndeterminacyAtCenter => "IndeterminacyAtCenter",
            Error::PullbackUndefined => "PullbackUndefined",
            Error::SharedFiber => "SharedFiber",
            Error::PrecisionTooLow(_) => "PrecisionTooLow",
            Error::Inconclusive => "Inconclusive",
            Error::UnknownBranch(_) => "UnknownBranch",
            Error::Invariant(_) => "InvariantViolation",
        }
    }
}
