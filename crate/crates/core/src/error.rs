use thiserror::Error;

use crate::pulse::KickCalibration;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coin matrix is not unitary (max deviation {deviation:.3e})")]
    NonUnitaryCoin { deviation: f64 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("state is not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("amplitude at lattice site {site} would leave the lattice (half width {half_width})")]
    LatticeOverflow { site: i64, half_width: usize },

    #[error("lattice half width {half_width} cannot hold {required} sites of support")]
    InsufficientLattice { half_width: usize, required: usize },

    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("numeric drift: {quantity} off by {deviation:.3e}")]
    NumericDrift { quantity: &'static str, deviation: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("kick transfer maximum lies on the edge of the scanned window (t = {:.6e} s)", .0.t_kick)]
    KickAtBoundary(KickCalibration),

    #[error("at least two points with positive abscissa and ordinate are needed for a fit")]
    DegenerateFit,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
