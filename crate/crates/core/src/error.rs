use crate::geom2d::PolygonError;

/// Errors reported by the simulation and estimation layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error("invalid argument `{field}`: {reason}")]
    InvalidArgument { field: &'static str, reason: String },
    #[error("unsupported constant index: {0}")]
    UnsupportedConstant(String),
    #[error(
        "expected germ count {expected:.0} exceeds the cap {cap}; reduce the intensity or the window"
    )]
    TooManyGerms { expected: f64, cap: usize },
    #[error(
        "inclusion-exclusion visited more than {cap} nodes; use a smaller window or intensity"
    )]
    NodeCapExceeded { cap: usize },
    #[error("cell is not inside the simulation window by margin {margin}")]
    MarginViolated { margin: f64 },
    #[error("covered area fraction {v2:.6} is saturated; the intensity cannot be recovered")]
    SaturatedCoverage { v2: f64 },
    #[error("channel `{0}` is missing from the density report")]
    MissingChannel(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
