//! Error type shared by every stage of the pipeline.

use thiserror::Error;

/// What kind of resource budget was exhausted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resource {
    /// Total face count of an enumerated complex.
    Faces,
    /// Approximate bytes held by enumerated faces.
    Bytes,
    /// Wall-clock deadline.
    Time,
}

impl std::fmt::Display for Resource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Resource::Faces => write!(f, "face count"),
            Resource::Bytes => write!(f, "memory"),
            Resource::Time => write!(f, "wall clock"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor parameter is outside the range the construction is
    /// defined for (e.g. a cycle on fewer than three vertices).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A family-spec string or serialized object could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A vertex reference did not resolve.
    #[error("lookup error: {0}")]
    Lookup(String),

    /// An operation's mathematical precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A prediction was requested outside the proven range of every
    /// applicable closed-form result.
    #[error("out of proven range: {0}")]
    Range(String),

    /// Input profiles do not satisfy the hypothesis of the gluing rule.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// The operation is not defined for these inputs (e.g. a join of
    /// profiles with torsion).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A resource budget was exceeded; carries the offending count.
    #[error("resource budget exceeded ({kind}): {detail}")]
    Resource { kind: Resource, detail: String },

    /// An internal consistency check failed; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn resource(kind: Resource, detail: impl Into<String>) -> Self {
        Error::Resource {
            kind,
            detail: detail.into(),
        }
    }

    /// True when the error is a resource budget overrun (the campaign
    /// records these per instance instead of aborting a sweep).
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}
