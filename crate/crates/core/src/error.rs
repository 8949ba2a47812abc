use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid bounds: xi_min = {xi_min}, xi_max = {xi_max}")]
    InvalidBounds { xi_min: f64, xi_max: f64 },
    #[error("grid needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("sampled field has {got} values but the grid has {expected} points")]
    LengthMismatch { expected: usize, got: usize },
    #[error("sampled field has a non-finite value at index {0}")]
    NonFinite(usize),
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("requested {k} eigenpairs from a matrix of dimension {dim}")]
    ModeCountOutOfRange { k: usize, dim: usize },
    #[error("field changes sign {0} times; expected a single monotone crossing")]
    MultipleBrackets(usize),
    #[error("psi^3 - psi - sigma has complex roots for sigma = {0}")]
    ComplexRoots(f64),
    #[error("kink endpoints must differ (alpha1 = alpha2 = {0})")]
    EqualRoots(f64),
    #[error("alpha1^2 + alpha1*alpha2 + alpha2^2 = {0}, not 1: the pair is not a root pair of the cubic")]
    VietaViolation(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("|gamma| = 1 makes the Morse minima undefined")]
    GammaUnit,
    #[error("lambda = {0} lies in the forbidden interval [-1, 0]")]
    LambdaForbidden(f64),
    #[error("at least 2 modes are needed for a splitting, got {0}")]
    InsufficientModes(usize),
    #[error("deformed potential is singular at xi = {0}")]
    SingularPotential(f64),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
