//! Structural symbolic differentiation with light constant folding.

use super::{BinOp, Builtin, Expr};
use crate::error::{Error, Result};

/// Derivative of `expr` with respect to `x`.
///
/// `a^b` with `x` in the exponent is differentiated as `exp(b ln a)`, so its
/// derivative requires `a > 0`. `gamma` and `abs` have no rule.
pub fn differentiate(expr: &Expr) -> Result<Expr> {
    Ok(match expr {
        Expr::Number(_) => num(0.0),
        Expr::Var => num(1.0),
        Expr::Neg(a) => neg(differentiate(a)?),
        Expr::Binary(op, a, b) => {
            let (a, b) = (a.as_ref(), b.as_ref());
            match op {
                BinOp::Add => add(differentiate(a)?, differentiate(b)?),
                BinOp::Sub => sub(differentiate(a)?, differentiate(b)?),
                BinOp::Mul => add(mul(differentiate(a)?, b.clone()), mul(a.clone(), differentiate(b)?)),
                BinOp::Div => div(
                    sub(mul(differentiate(a)?, b.clone()), mul(a.clone(), differentiate(b)?)),
                    pow(b.clone(), num(2.0)),
                ),
                BinOp::Pow => power_rule(a, b)?,
            }
        }
        Expr::Call(f, args) => {
            let a = &args[0];
            let da = differentiate(a)?;
            match f {
                Builtin::Exp => mul(expr.clone(), da),
                Builtin::Ln => div(da, a.clone()),
                Builtin::Sin => mul(Expr::call(Builtin::Cos, a.clone()), da),
                Builtin::Cos => neg(mul(Expr::call(Builtin::Sin, a.clone()), da)),
                Builtin::Sqrt => div(da, mul(num(2.0), expr.clone())),
                Builtin::Pow => power_rule(a, &args[1])?,
                Builtin::Gamma | Builtin::Abs => return Err(Error::UnsupportedDerivative(f.name().to_string())),
            }
        }
    })
}

fn power_rule(base: &Expr, exponent: &Expr) -> Result<Expr> {
    let whole = pow(base.clone(), exponent.clone());
    if !exponent.contains_var() {
        let lowered = match exponent {
            Expr::Number(v) => num(v - 1.0),
            _ => sub(exponent.clone(), num(1.0)),
        };
        return Ok(mul(
            mul(exponent.clone(), pow(base.clone(), lowered)),
            differentiate(base)?,
        ));
    }
    let ln_base = Expr::call(Builtin::Ln, base.clone());
    if !base.contains_var() {
        return Ok(mul(mul(whole, ln_base), differentiate(exponent)?));
    }
    // d/dx exp(b ln a) = a^b (b' ln a + b a'/a)
    Ok(mul(
        whole,
        add(
            mul(differentiate(exponent)?, ln_base),
            div(mul(exponent.clone(), differentiate(base)?), base.clone()),
        ),
    ))
}

fn num(v: f64) -> Expr {
    Expr::Number(v)
}

fn is(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Number(n) if *n == v)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Number(v) => num(-v),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Number(x), Expr::Number(y)) => num(x + y),
        _ if is(&a, 0.0) => b,
        _ if is(&b, 0.0) => a,
        _ => Expr::binary(BinOp::Add, a, b),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Number(x), Expr::Number(y)) => num(x - y),
        _ if is(&b, 0.0) => a,
        _ if is(&a, 0.0) => neg(b),
        _ => Expr::binary(BinOp::Sub, a, b),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Number(x), Expr::Number(y)) => num(x * y),
        _ if is(&a, 0.0) || is(&b, 0.0) => num(0.0),
        _ if is(&a, 1.0) => b,
        _ if is(&b, 1.0) => a,
        _ => Expr::binary(BinOp::Mul, a, b),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is(&a, 0.0) && !is(&b, 0.0) {
        return num(0.0);
    }
    if is(&b, 1.0) {
        return a;
    }
    Expr::binary(BinOp::Div, a, b)
}

fn pow(a: Expr, b: Expr) -> Expr {
    if is(&b, 1.0) {
        return a;
    }
    if is(&b, 0.0) {
        return num(1.0);
    }
    Expr::binary(BinOp::Pow, a, b)
}
