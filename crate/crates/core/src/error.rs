use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of the function (zero, branch cut, sign).
    #[error("domain error: {0}")]
    Domain(String),

    /// A linear-scale value is not representable in `f64`; use a log-space routine.
    #[error("overflow: {0}")]
    Overflow(String),

    /// The requested asymptotic form is not valid at these arguments.
    #[error("outside regime: {0}")]
    Regime(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Newton iteration gave up; the best iterate and its residual are kept.
    #[error("no convergence after {iterations} iterations (best {best_re:e}{best_im:+e}i, residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        best_re: f64,
        best_im: f64,
    },

    /// Double precision cannot resolve the imaginary part of the root.
    #[error("precision: {0}")]
    Precision(String),

    /// Outside the `(l_*, zeta, eta)` window of the scaled solver.
    #[error("window violation: {0}")]
    Window(String),

    #[error("singular jacobian: {0}")]
    SingularJacobian(String),

    #[error("insufficient points: need at least {need}, got {got}")]
    InsufficientPoints { need: usize, got: usize },

    /// The regime ordering is not established (effective Mach number too large).
    #[error("refused: {0}")]
    Refused(String),

    #[error("io: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
