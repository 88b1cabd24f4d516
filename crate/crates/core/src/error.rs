use thiserror::Error;

use crate::spectral_stability::StabilityClass;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series did not converge within {terms} terms (|z| = {modulus}); argument too large for the series regime")]
    NonConvergence { terms: usize, modulus: f64 },

    #[error("|arg z| = {arg} does not exceed the sector half-angle {half_angle}; the algebraic expansion does not apply")]
    OutsideSector { arg: f64, half_angle: f64 },

    #[error("Mittag-Leffler value overflows f64 at |z| = {modulus}")]
    Overflow { modulus: f64 },

    #[error("similarity transform condition number {condition:e} exceeds the cap {cap:e}")]
    IllConditioned { condition: f64, cap: f64 },

    #[error("solution norm exceeded {threshold:e} at t = {time}")]
    Blowup { time: f64, threshold: f64 },

    #[error("corrector residual {residual:e} exceeds the sanity bound at t = {time}")]
    StepTooLarge { time: f64, residual: f64 },

    #[error("eigenvalue {re}{im:+}i is not inside the stability sector (margin {margin})")]
    SectorViolation { re: f64, im: f64, margin: f64 },

    #[error("spectrum is not inside the stability sector (classification: {0})")]
    HypothesisFailed(StabilityClass),

    #[error("no admissible ball radius gives a contraction: {0}")]
    ContractionFailed(String),

    #[error("Lyapunov-Perron iterate {iteration} left the ball: sup norm {sup_norm:e} > {bound:e}")]
    DivergedIterate {
        iteration: usize,
        sup_norm: f64,
        bound: f64,
    },

    #[error("|E| t^p did not settle for beta = {beta}: relative change {relative_change} between the last two decades")]
    Unstabilized { beta: f64, relative_change: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 1,
            Error::NonConvergence { .. } | Error::Overflow { .. } | Error::OutsideSector { .. } => 2,
            Error::HypothesisFailed(StabilityClass::HasUnstableMode) => 4,
            Error::HypothesisFailed(_) => 3,
            Error::SectorViolation { margin, .. } => {
                if *margin < 0.0 {
                    4
                } else {
                    3
                }
            }
            Error::IllConditioned { .. } => 5,
            Error::Blowup { .. } | Error::StepTooLarge { .. } => 6,
            Error::ContractionFailed(_) | Error::DivergedIterate { .. } => 7,
            Error::Unstabilized { .. } => 8,
        }
    }
}
