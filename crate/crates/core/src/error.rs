use crate::models::ModelTag;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{model} point violates {constraint} (off by {excess:e})")]
    DomainViolation {
        model: ModelTag,
        constraint: &'static str,
        excess: f64,
    },
    #[error("expected {expected} coordinates, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("points belong to different models ({0} vs {1})")]
    ModelMismatch(ModelTag, ModelTag),
    #[error("points carry different curvatures")]
    CurvatureMismatch,
    #[error("curvature must be negative, got {0}")]
    InvalidCurvature(f64),
    #[error("point lies within {0:e} of the ideal boundary")]
    NumericalUnderflow(f64),
    #[error("{0} needs the square root of a non-square rational")]
    NotSquareRootFree(&'static str),
    #[error("sites {0} and {1} coincide")]
    CoincidentSites(usize, usize),
    #[error("quadric has no real zero set (squared radius {0:e})")]
    DegenerateSurface(f64),
    #[error("no surface transport from {from} to {to}: {reason}")]
    UnsupportedPath {
        from: ModelTag,
        to: ModelTag,
        reason: &'static str,
    },
    #[error("explicit geometry is only built for d = 2 or 3, got d = {0}")]
    DimensionUnsupported(usize),
    #[error("sites {0} and {1} are duplicates")]
    DuplicateSites(usize, usize),
    #[error("site list is empty")]
    EmptySites,
    #[error("diagram carries no explicit geometry")]
    NoExplicitGeometry,
    #[error("point {index}: {source}")]
    AtPoint { index: usize, source: Box<Error> },
}

impl Error {
    /// Strips any [`Error::AtPoint`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            e => e,
        }
    }

    pub(crate) fn at(self, index: usize) -> Error {
        Error::AtPoint {
            index,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
