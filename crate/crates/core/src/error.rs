use std::fmt;

use thiserror::Error;

/// Errors raised by operators, special functions, solvers and the expression language.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the operator's domain.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A gamma-function pole (non-positive integer argument) was hit.
    #[error("gamma pole at x = {0}")]
    Pole(f64),

    /// A series or iteration ran out of terms before its stopping rule fired.
    #[error("{op} did not converge within {terms} terms")]
    Convergence { op: &'static str, terms: usize },

    /// A user function could not be evaluated at the requested point.
    #[error("cannot evaluate {node} at argument {argument}")]
    Evaluation { node: String, argument: f64 },

    /// The adaptive integrator shrank its step below the representable limit.
    #[error("integrator step underflow at x = {x} (h = {h:e})")]
    StepFailure { x: f64, h: f64 },

    /// Input that makes the requested quantity undefined (e.g. a zero derivative in a ratio).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Symbolic differentiation reached a node without a derivative rule.
    #[error("no symbolic derivative for `{0}`")]
    UnsupportedDerivative(String),

    /// A parameter violates its admissible range.
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter { name, value, reason }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A syntax error with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: expected {}, found {}",
            self.position, self.expected, self.found
        )
    }
}

impl ParseError {
    /// Renders the source line with a caret under the failing position.
    pub fn render(&self, source: &str) -> String {
        let caret_col = source
            .get(..self.position.min(source.len()))
            .map(|s| s.chars().count())
            .unwrap_or(self.position);
        format!("{}\n{}\n{}^", self, source, " ".repeat(caret_col))
    }
}
