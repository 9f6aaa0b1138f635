//! Error type shared by all geometric modules.

use std::fmt;

/// Errors raised by the geometric and exact-algebra operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix input contains non-finite entries or has the wrong shape.
    InvalidMatrix,
    /// All polynomial coefficients are (numerically) zero.
    DegeneratePolynomial,
    /// The diameters do not span the space (det X ≈ 0).
    DegenerateConjugateSystem,
    /// Two 2-vectors that should form a conjugate pair are collinear.
    DegenerateConjugatePair,
    /// Ellipsoid axes are not strictly ordered where strictness is required.
    NonStrictEllipsoid,
    /// Semi-axis list is empty, unordered or not positive.
    InvalidEllipsoid,
    /// A coordinate of the query point is zero, so the confocal root
    /// equation degenerates. Callers perturb or use closed forms.
    PointOnCoordinateHyperplane,
    /// A denominator in the coordinate-recovery product vanished.
    DegenerateConfocalConfiguration,
    /// The point is not on the quadric surface required by the operation.
    PointNotOnSurface,
    /// Cone construction failed: the apex lies in the conic's plane.
    DegenerateCone,
    /// The conic carries no real points.
    ImaginaryConic,
    /// The section ellipse is rotationally symmetric, so the dual conics
    /// collapse and the distinguished-diameter role must be changed.
    DegenerateDuality,
    /// No real common edge survived the residual filter.
    NoRealEdges { found: usize },
    /// The quartic does not have the shape required by the surd-resolvent
    /// factorisation route.
    UnsupportedQuarticShape(String),
    /// Exact inputs do not satisfy the constraint required by the branch.
    InconsistentInput(String),
    /// A pipeline step failed; the step name tags the failure site.
    Pipeline {
        step: &'static str,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, step: &'static str) -> Error {
        Error::Pipeline {
            step,
            source: Box::new(self),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidMatrix => write!(f, "invalid matrix"),
            Error::DegeneratePolynomial => write!(f, "degenerate polynomial"),
            Error::DegenerateConjugateSystem => write!(f, "degenerate conjugate system"),
            Error::DegenerateConjugatePair => write!(f, "degenerate conjugate pair"),
            Error::NonStrictEllipsoid => write!(f, "non-strict ellipsoid"),
            Error::InvalidEllipsoid => write!(f, "invalid ellipsoid axes"),
            Error::PointOnCoordinateHyperplane => write!(f, "point on coordinate hyperplane"),
            Error::DegenerateConfocalConfiguration => {
                write!(f, "degenerate confocal configuration")
            }
            Error::PointNotOnSurface => write!(f, "point not on the quadric surface"),
            Error::DegenerateCone => write!(f, "degenerate cone"),
            Error::ImaginaryConic => write!(f, "conic has no real points"),
            Error::DegenerateDuality => {
                write!(f, "degenerate duality (rotationally symmetric section)")
            }
            Error::NoRealEdges { found } => {
                write!(
                    f,
                    "no real edges (only {found} intersection points survived)"
                )
            }
            Error::UnsupportedQuarticShape(msg) => {
                write!(
                    f,
                    "unsupported quartic shape for surd-resolvent route: {msg}"
                )
            }
            Error::InconsistentInput(msg) => write!(f, "inconsistent input: {msg}"),
            Error::Pipeline { step, source } => write!(f, "{step}: {source}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
