use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ground state is degenerate: {0}")]
    DegenerateGroundState(String),

    #[error("dispersion vanishes on an interval (flat band)")]
    FlatBand,

    #[error("model has nonzero pairing and is not gauge invariant")]
    NotGaugeInvariant,

    #[error("model is not selfdual: {0}")]
    NotSelfdual(String),

    #[error("model is not reducible: {0}")]
    NotReducible(String),

    #[error("symbol zero at theta = {theta} is not simple")]
    NonSimpleZero { theta: f64 },

    #[error("symbol has no sign changes; model is not critical")]
    NonCritical,

    #[error("quadrature did not converge: estimated error {estimate:e} above tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("saturation not reached by L = {0}")]
    NoSaturation(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
