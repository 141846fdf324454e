use thiserror::Error;

/// Errors produced by the projection library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("infeasible: sum target {s} outside [0, {upper}]")]
    Infeasible { s: f64, upper: f64 },

    #[error("degenerate partition a = b = {0}; gamma is undefined")]
    DegeneratePartition(usize),

    #[error("dimension {d} exceeds the enumeration limit of {max}")]
    Capacity { d: usize, max: usize },

    #[error("inconsistent candidate: {0}")]
    InconsistentCandidate(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, ProjError>;

pub(crate) fn check_finite(y: &[f64]) -> Result<()> {
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(ProjError::InvalidInput(format!(
            "entry {i} is not finite ({})",
            y[i]
        )));
    }
    Ok(())
}
