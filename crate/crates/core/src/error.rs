use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("nodes {first} and {second} coincide (chordal distance {distance:e})")]
    Collision {
        first: usize,
        second: usize,
        distance: f64,
    },
    #[error("grid with {m} points is too coarse; need at least {required}")]
    GridTooCoarse { m: usize, required: usize },
    #[error("polynomial degree {degree} exceeds node set degree {nodes_degree}")]
    DegreeMismatch { degree: usize, nodes_degree: usize },
    #[error("sampling matrix is numerically singular (sigma_min = {sigma_min:e})")]
    Singular { sigma_min: f64 },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Exponent check shared by every L^p routine: `1 < p < ∞`.
pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::param("p", format!("{p} is outside (1, ∞)")))
    }
}
