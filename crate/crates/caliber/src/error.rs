use std::io;

/// Failures of a scan or verification run.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Domain(#[from] caliber_core::Error),
    #[error("jobs must be at least 1")]
    ZeroJobs,
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl RunError {
    /// Bad input as opposed to an environment or internal failure.
    pub fn is_domain(&self) -> bool {
        match self {
            RunError::Domain(e) => !matches!(e, caliber_core::Error::Internal(_)),
            RunError::ZeroJobs => true,
            _ => false,
        }
    }
}
