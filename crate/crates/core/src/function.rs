//! Evaluable real functions of one variable.

use std::fmt;
use std::sync::Arc;

use crate::deriv::{classical_derivative, DiffSettings};
use crate::error::{Error, Result};
use crate::expr::{self, BinOp, Expr};

type Native = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// A scalar function `f: R -> R`, optionally carrying an exact derivative.
///
/// Operators ask [`RealFunction::derivative`] for `f'(x)`; it uses the exact
/// derivative when one is known and falls back to Richardson-extrapolated
/// central differences otherwise.
#[derive(Clone)]
pub struct RealFunction {
    label: String,
    repr: Repr,
}

#[derive(Clone)]
enum Repr {
    Expr {
        expr: Arc<Expr>,
        derivative: Option<Arc<Expr>>,
    },
    Native {
        f: Native,
        df: Option<Native>,
    },
    Sampled(Arc<CubicSpline>),
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("label", &self.label)
            .field("exact_derivative", &self.has_exact_derivative())
            .finish()
    }
}

impl RealFunction {
    /// Parses `source` and differentiates it symbolically when every node allows it.
    pub fn parse(source: &str) -> Result<Self> {
        let expr = expr::parse(source)?;
        Ok(Self::from_expr(expr).with_label(source))
    }

    pub fn from_expr(expr: Expr) -> Self {
        let derivative = expr::differentiate(&expr).ok().map(Arc::new);
        Self {
            label: expr.to_string(),
            repr: Repr::Expr {
                expr: Arc::new(expr),
                derivative,
            },
        }
    }

    /// Wraps a closure. Its derivative is taken numerically.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            label: "<native>".into(),
            repr: Repr::Native {
                f: Arc::new(f),
                df: None,
            },
        }
    }

    pub fn from_fn_with_derivative<F, D>(f: F, df: D) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
        D: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            label: "<native>".into(),
            repr: Repr::Native {
                f: Arc::new(f),
                df: Some(Arc::new(df)),
            },
        }
    }

    /// Natural cubic spline through `(xs[i], ys[i])`; `xs` strictly increasing.
    pub fn sampled(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        Ok(Self {
            label: "<sampled>".into(),
            repr: Repr::Sampled(Arc::new(CubicSpline::new(xs, ys)?)),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn expr(&self) -> Option<&Expr> {
        match &self.repr {
            Repr::Expr { expr, .. } => Some(expr),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match &self.repr {
            Repr::Expr { expr, .. } => expr.eval(x),
            Repr::Native { f, .. } => {
                let v = f(x)?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Evaluation {
                        node: self.label.clone(),
                        argument: x,
                    })
                }
            }
            Repr::Sampled(s) => s.eval(x),
        }
    }

    pub fn has_exact_derivative(&self) -> bool {
        match &self.repr {
            Repr::Expr { derivative, .. } => derivative.is_some(),
            Repr::Native { df, .. } => df.is_some(),
            Repr::Sampled(_) => true,
        }
    }

    /// Exact derivative at `x`, if one is attached.
    pub fn exact_derivative(&self, x: f64) -> Option<Result<f64>> {
        match &self.repr {
            Repr::Expr { derivative, .. } => derivative.as_ref().map(|d| d.eval(x)),
            Repr::Native { df, .. } => df.as_ref().map(|d| d(x)),
            Repr::Sampled(s) => Some(s.derivative(x)),
        }
    }

    /// `f'(x)`, exact when available, numerical otherwise.
    pub fn derivative(&self, x: f64, settings: &DiffSettings) -> Result<f64> {
        match self.exact_derivative(x) {
            Some(d) => d,
            None => classical_derivative(self, x, settings),
        }
    }

    /// `g(t) = f(scale * t + shift)`. Expression-backed functions stay symbolic,
    /// so `g` keeps an exact derivative.
    pub fn compose_affine(&self, scale: f64, shift: f64) -> Self {
        let label = format!("{}∘({scale}·t + {shift})", self.label);
        match &self.repr {
            Repr::Expr { expr, .. } => {
                let inner = Expr::binary(
                    BinOp::Add,
                    Expr::binary(BinOp::Mul, Expr::Number(scale), Expr::Var),
                    Expr::Number(shift),
                );
                Self::from_expr(expr.substitute(&inner)).with_label(label)
            }
            Repr::Native { f, df } => {
                let f = f.clone();
                let repr = Repr::Native {
                    f: Arc::new(move |t| f(scale * t + shift)),
                    df: df
                        .clone()
                        .map(|d| -> Native { Arc::new(move |t| Ok(scale * d(scale * t + shift)?)) }),
                };
                Self { label, repr }
            }
            Repr::Sampled(s) => {
                let (s1, s2) = (s.clone(), s.clone());
                Self::from_fn_with_derivative(
                    move |t| s1.eval(scale * t + shift),
                    move |t| Ok(scale * s2.derivative(scale * t + shift)?),
                )
                .with_label(label)
            }
        }
    }
}

/// Natural cubic spline interpolant.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::invalid(
                "samples",
                n as f64,
                "need at least two (x, y) pairs of equal length",
            ));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::invalid("samples", f64::NAN, "values must be finite"));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("samples", n as f64, "x must be strictly increasing"));
        }
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior knots
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            let mut upper = vec![0.0; k];
            for i in 0..k {
                let h0 = xs[i + 1] - xs[i];
                let h1 = xs[i + 2] - xs[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / h1 - (ys[i + 1] - ys[i]) / h0);
            }
            for i in 1..k {
                let lower = xs[i + 1] - xs[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }
        Ok(Self { xs, ys, m })
    }

    fn interval(&self, x: f64) -> Result<usize> {
        let (lo, hi) = (self.xs[0], self.xs[self.xs.len() - 1]);
        if !(x >= lo && x <= hi) {
            return Err(Error::Evaluation {
                node: format!("sampled function on [{lo}, {hi}]"),
                argument: x,
            });
        }
        Ok(self.xs.partition_point(|&k| k <= x).clamp(1, self.xs.len() - 1) - 1)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let i = self.interval(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        Ok(a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0)
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        let i = self.interval(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        Ok((self.ys[i + 1] - self.ys[i]) / h
            + ((1.0 - 3.0 * a * a) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1]) * h / 6.0)
    }
}
