use thiserror::Error;

/// Failures surfaced by the embedding pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is empty")]
    EmptyGraph,

    #[error("graph is disconnected: {0}")]
    Disconnected(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("non-finite coordinate at vertex {vertex} in iteration {iteration}")]
    NonFinite { vertex: usize, iteration: usize },

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("correlation undefined: zero rank variance")]
    DegenerateRanks,

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Whether the failure is numerical rather than caused by bad input data.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Stage { source, .. } => source.is_numerical(),
            other => matches!(
                other,
                Error::Eigen(_)
                    | Error::NonFinite { .. }
                    | Error::NoConvergence { .. }
                    | Error::DegenerateRanks
            ),
        }
    }

    /// The innermost error beneath any stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// Wrap the error with the name of the pipeline stage that produced it.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.in_stage(stage))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
