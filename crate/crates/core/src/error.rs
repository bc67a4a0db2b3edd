use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NotConverged { sweeps: usize },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("inverse temperature must be finite and positive, got {0}")]
    InvalidBeta(f64),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "temperature {0} is below the floor of 1e-4; use model::ground_space_state for the T -> 0 limit"
    )]
    TemperatureBelowFloor(f64),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("invalid search: {0}")]
    InvalidSearch(String),

    #[error("at grid value {value}: {source}")]
    AtGridPoint { value: f64, source: Box<Error> },

    #[error("no sudden death in bracket [{t_lo}, {t_hi}]: {reason}")]
    NoSuddenDeath {
        t_lo: f64,
        t_hi: f64,
        reason: &'static str,
    },

    #[error("no interior minimum of the level gap in [{v_lo}, {v_hi}]")]
    NoInteriorMinimum { v_lo: f64, v_hi: f64 },
}

impl Error {
    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::InvalidBeta(_)
            | Error::InvalidParameter { .. }
            | Error::TemperatureBelowFloor(_)
            | Error::InvalidSweep(_)
            | Error::InvalidSearch(_) => true,
            Error::AtGridPoint { source, .. } => source.is_validation(),
            _ => false,
        }
    }
}
