//! Deformed and local-fractional calculus.
//!
//! Operators (q-, κ-, Hausdorff, conformable, Grünwald-Letnikov and Yang
//! derivatives), their eigenfunctions, the special functions they need, and
//! the parameter mapping `1 - q = (1 - ζ)/l₀` that makes the q-derivative the
//! first-order truncation of the Hausdorff derivative.

// `!(a < b)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod deriv;
pub mod eigen;
pub mod error;
pub mod expr;
pub mod function;
pub mod mapping;
pub mod ode;
pub mod selftest;
pub mod special;

pub use algebra::{kappa_exp, kappa_log, q_difference, q_exp, q_log, q_sum, KappaParam, QParam};
pub use deriv::{DerivativeKind, DiffSettings};
pub use eigen::{EigenProblem, EigenReport};
pub use error::{Error, ParseError, Result};
pub use function::RealFunction;
pub use mapping::{MappingResult, SeriesExpansion};
pub use special::{HausdorffParams, MlSeriesConfig};
