use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("site {site} is outside the register of {n_spins} spins")]
    SiteOutOfRange { site: usize, n_spins: usize },

    #[error("a {n_spins}-spin register exceeds the dimension cap of {cap} spins")]
    DimensionCap { n_spins: usize, cap: usize },

    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for failures of a numerical certificate rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence | Error::Invariant(_))
    }
}
