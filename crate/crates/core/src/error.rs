use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("level out of range: qubit level {qubit} (0..=1), qutrit level {qutrit} (0..=2)")]
    LevelOutOfRange { qubit: usize, qutrit: usize },

    #[error("row index {0} out of range (0..=5)")]
    RowOutOfRange(usize),

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),

    #[error("trace {0} differs from 1")]
    BadTrace(f64),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("invalid decay rate {name} = {value}: rates must be finite and nonnegative")]
    InvalidRate { name: &'static str, value: f64 },

    #[error("interference parameter k = gamma1/gamma2 is undefined for gamma2 = 0")]
    UndefinedInterference,

    #[error("invalid mixed-family parameters a = {a}, b = {b}, c = {c}: need a, b, c >= 0 and 2a + 3b + c = 1")]
    InvalidMixedParams { a: f64, b: f64, c: f64 },

    #[error("invalid amplitudes alpha = {alpha}, beta = {beta}: need alpha² + beta² = 1")]
    InvalidAmplitudes { alpha: f64, beta: f64 },

    #[error("invalid time parameter {name} = {value}")]
    InvalidTime { name: &'static str, value: f64 },

    #[error("trace drift {drift:e} at t = {t} exceeds 1e-7; the time step is too large")]
    TraceDrift { t: f64, drift: f64 },

    #[error("evolved state at t = {t} failed validation: {reason}")]
    InvalidEvolvedState { t: f64, reason: String },

    #[error("state is not entangled at t = 0 (witness {0:e})")]
    InitiallySeparable(f64),

    #[error("invalid grid point {value}: {reason}")]
    InvalidGridPoint { value: f64, reason: String },

    #[error("no closed-form solution for the {0} family")]
    NoClosedForm(&'static str),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
