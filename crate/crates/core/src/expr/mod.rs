//! A small expression language in one free variable `x`.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr    = term   { ("+" | "-") term } ;
//! term    = unary  { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" unary ] ;            (* right-associative *)
//! primary = number | "x" | "pi" | "e"
//!         | name "(" expr { "," expr } ")"
//!         | "(" expr ")" ;
//! name    = "exp" | "ln" | "sin" | "cos" | "sqrt" | "gamma" | "abs" | "pow" ;
//! ```

mod diff;
mod lexer;
mod parser;

use std::fmt;

use crate::error::{Error, Result};
use crate::special;

pub use diff::differentiate;
pub use parser::{parse, MAX_DEPTH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
    Gamma,
    Abs,
    Pow,
}

impl Builtin {
    pub const ALL: [Builtin; 8] = [
        Builtin::Exp,
        Builtin::Ln,
        Builtin::Sin,
        Builtin::Cos,
        Builtin::Sqrt,
        Builtin::Gamma,
        Builtin::Abs,
        Builtin::Pow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Exp => "exp",
            Builtin::Ln => "ln",
            Builtin::Sin => "sin",
            Builtin::Cos => "cos",
            Builtin::Sqrt => "sqrt",
            Builtin::Gamma => "gamma",
            Builtin::Abs => "abs",
            Builtin::Pow => "pow",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Pow => 2,
            _ => 1,
        }
    }
}

/// Expression tree. Trees produced by [`parse`] never exceed [`MAX_DEPTH`].
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Builtin, Vec<Expr>),
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(f: Builtin, arg: Expr) -> Self {
        Expr::Call(f, vec![arg])
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Number(_) | Expr::Var => 1,
            Expr::Neg(a) => 1 + a.depth(),
            Expr::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
            Expr::Call(_, args) => 1 + args.iter().map(Expr::depth).max().unwrap_or(0),
        }
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Number(_) => false,
            Expr::Var => true,
            Expr::Neg(a) => a.contains_var(),
            Expr::Binary(_, a, b) => a.contains_var() || b.contains_var(),
            Expr::Call(_, args) => args.iter().any(Expr::contains_var),
        }
    }

    /// Replaces every occurrence of `x` with `replacement`.
    pub fn substitute(&self, replacement: &Expr) -> Expr {
        match self {
            Expr::Number(v) => Expr::Number(*v),
            Expr::Var => replacement.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(replacement))),
            Expr::Binary(op, a, b) => Expr::binary(*op, a.substitute(replacement), b.substitute(replacement)),
            Expr::Call(f, args) => Expr::Call(*f, args.iter().map(|a| a.substitute(replacement)).collect()),
        }
    }

    /// Evaluates at `x`. Any non-finite intermediate is reported as
    /// [`Error::Evaluation`] naming the node that produced it.
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Expr::Number(v) => Ok(*v),
            Expr::Var => Ok(x),
            Expr::Neg(a) => Ok(-a.eval(x)?),
            Expr::Binary(op, a, b) => {
                let (l, r) = (a.eval(x)?, b.eval(x)?);
                let v = match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => {
                        if r == 0.0 {
                            return Err(eval_error("/", r));
                        }
                        l / r
                    }
                    BinOp::Pow => l.powf(r),
                };
                finite(v, op.symbol(), if *op == BinOp::Pow { l } else { r })
            }
            Expr::Call(f, args) => {
                let a = args[0].eval(x)?;
                let v = match f {
                    Builtin::Exp => a.exp(),
                    Builtin::Ln if a > 0.0 => a.ln(),
                    Builtin::Sqrt if a >= 0.0 => a.sqrt(),
                    Builtin::Ln | Builtin::Sqrt => return Err(eval_error(f.name(), a)),
                    Builtin::Sin => a.sin(),
                    Builtin::Cos => a.cos(),
                    Builtin::Abs => a.abs(),
                    Builtin::Gamma => special::gamma(a).map_err(|_| eval_error("gamma", a))?,
                    Builtin::Pow => a.powf(args[1].eval(x)?),
                };
                finite(v, f.name(), a)
            }
        }
    }
}

fn eval_error(node: &str, argument: f64) -> Error {
    Error::Evaluation {
        node: node.to_string(),
        argument,
    }
}

fn finite(v: f64, node: &str, argument: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(eval_error(node, argument))
    }
}

/// Prints a fully parenthesized form that [`parse`] reads back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(v) if *v < 0.0 => write!(f, "(-{:?})", -v),
            Expr::Number(v) => write!(f, "{v:?}"),
            Expr::Var => f.write_str("x"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn eval(src: &str, x: f64) -> Result<f64> {
        parse(src).unwrap().eval(x)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval("x^2", 3.0).unwrap(), 9.0);
        assert_eq!(eval("exp(-x^2/2)", 0.0).unwrap(), 1.0);
        assert!((eval("sin(x)", std::f64::consts::FRAC_PI_2).unwrap() - 1.0).abs() <= 1e-15);
        assert_relative_eq!(
            eval("gamma(x)", 0.5).unwrap(),
            std::f64::consts::PI.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn eval_domain_errors() {
        assert!(matches!(eval("ln(x)", 0.0), Err(Error::Evaluation { ref node, .. }) if node == "ln"));
        assert!(matches!(eval("sqrt(x)", -1.0), Err(Error::Evaluation { .. })));
        assert!(matches!(eval("1/x", 0.0), Err(Error::Evaluation { .. })));
        assert!(matches!(eval("x^0.5", -4.0), Err(Error::Evaluation { .. })));
        assert!(matches!(eval("gamma(x)", -2.0), Err(Error::Evaluation { .. })));
        assert!(matches!(eval("exp(x)", 1000.0), Err(Error::Evaluation { .. })));
    }

    #[test]
    fn precedence() {
        assert_eq!(eval("-x^2", 3.0).unwrap(), -9.0);
        assert_eq!(eval("2^3^2", 0.0).unwrap(), 512.0);
        assert_eq!(eval("2^-x*3", 1.0).unwrap(), 1.5);
        assert_eq!(eval("1-2-3", 0.0).unwrap(), -4.0);
        assert_eq!(eval("8/4/2", 0.0).unwrap(), 1.0);
        assert_eq!(eval("1+2*3^2", 0.0).unwrap(), 19.0);
        assert_eq!(eval("pow(x, 3) - -x", 2.0).unwrap(), 10.0);
        assert_relative_eq!(
            eval("e^x + pi", 1.0).unwrap(),
            std::f64::consts::E + std::f64::consts::PI
        );
    }

    #[test]
    fn display_round_trip_samples() {
        for src in [
            "x^2",
            "-x^2",
            "2^3^x",
            "exp(-x^2/2)",
            "pow(x, 1.5e-3) * ln(abs(x))",
            "1-(2-x)",
        ] {
            let e = parse(src).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{src} -> {e}");
        }
    }

    #[test]
    fn substitute_composes() {
        let e = parse("x^2 + 1").unwrap();
        let g = e.substitute(&parse("2*x - 1").unwrap());
        assert_eq!(g.eval(2.0).unwrap(), 10.0);
    }
}
