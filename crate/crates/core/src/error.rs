use thiserror::Error;

pub type Result<T> = std::result::Result<T, MazerError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MazerError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A closed-form denominator fell inside the relative guard band.
    #[error("singular kernel `{kernel}` (|denominator| = {magnitude:e})")]
    SingularKernel { kernel: &'static str, magnitude: f64 },

    #[error("boundary system ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("no convergence after {slices} slices (last change {change:e})")]
    NoConvergence { slices: usize, change: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("profile parse error at line {line}: {message}")]
    ProfileParse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl MazerError {
    /// Numerical failures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            MazerError::SingularKernel { .. } | MazerError::IllConditioned { .. } | MazerError::NoConvergence { .. }
        )
    }
}

impl From<std::io::Error> for MazerError {
    fn from(err: std::io::Error) -> Self {
        MazerError::Io(err.to_string())
    }
}
