use std::f64::consts::{E, PI};

use super::lexer::{tokenize, Tok, Token};
use super::{BinOp, Builtin, Expr};
use crate::error::ParseError;

/// Maximum depth of a parsed expression tree.
pub const MAX_DEPTH: usize = 64;

// Recursion guard; parentheses nest without deepening the tree.
const MAX_NESTING: usize = 512;

const BP_ADD: u8 = 1;
const BP_MUL: u8 = 3;
const BP_UNARY: u8 = 5;
const BP_POW_LEFT: u8 = 8;
const BP_POW_RIGHT: u8 = 7;

/// Parses an expression in `x`.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(source)?;
    let mut p = Parser {
        tokens,
        at: 0,
        nesting: 0,
    };
    if matches!(p.peek().tok, Tok::Eof) {
        return Err(p.unexpected("expression"));
    }
    let (expr, _) = p.expr(0)?;
    if !matches!(p.peek().tok, Tok::Eof) {
        return Err(p.unexpected("operator or end of input"));
    }
    Ok(expr)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    nesting: usize,
}

type Parsed = Result<(Expr, usize), ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if !matches!(t.tok, Tok::Eof) {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError {
            position: t.pos,
            expected: expected.to_string(),
            found: t.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn too_deep(pos: usize) -> ParseError {
        ParseError {
            position: pos,
            expected: format!("expression nested at most {MAX_DEPTH} levels deep"),
            found: "deeper nesting".into(),
        }
    }

    fn node(pos: usize, expr: Expr, depth: usize) -> Parsed {
        if depth > MAX_DEPTH {
            return Err(Self::too_deep(pos));
        }
        Ok((expr, depth))
    }

    fn expr(&mut self, min_bp: u8) -> Parsed {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            return Err(Self::too_deep(self.peek().pos));
        }
        let result = self.expr_inner(min_bp);
        self.nesting -= 1;
        result
    }

    fn expr_inner(&mut self, min_bp: u8) -> Parsed {
        let (mut lhs, mut depth) = self.prefix()?;
        loop {
            let t = self.peek();
            let pos = t.pos;
            let (op, left_bp, right_bp) = match t.tok {
                Tok::Plus => (BinOp::Add, BP_ADD, BP_ADD + 1),
                Tok::Minus => (BinOp::Sub, BP_ADD, BP_ADD + 1),
                Tok::Star => (BinOp::Mul, BP_MUL, BP_MUL + 1),
                Tok::Slash => (BinOp::Div, BP_MUL, BP_MUL + 1),
                Tok::Caret => (BinOp::Pow, BP_POW_LEFT, BP_POW_RIGHT),
                _ => break,
            };
            if left_bp < min_bp {
                break;
            }
            self.bump();
            let (rhs, rdepth) = self.expr(right_bp)?;
            let d = 1 + depth.max(rdepth);
            (lhs, depth) = Self::node(pos, Expr::binary(op, lhs, rhs), d)?;
        }
        Ok((lhs, depth))
    }

    fn prefix(&mut self) -> Parsed {
        let t = self.bump();
        match t.tok {
            Tok::Num(v) => Ok((Expr::Number(v), 1)),
            Tok::Minus => {
                let (inner, d) = self.expr(BP_UNARY)?;
                Self::node(t.pos, Expr::Neg(Box::new(inner)), d + 1)
            }
            Tok::LParen => {
                let inner = self.expr(0)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(&name, t.pos),
            _ => {
                self.at -= usize::from(!matches!(t.tok, Tok::Eof));
                Err(self.unexpected("operand"))
            }
        }
    }

    fn identifier(&mut self, name: &str, pos: usize) -> Parsed {
        if let Some(func) = Builtin::from_name(name) {
            self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
            let mut args = Vec::new();
            let mut depth = 0;
            loop {
                let (a, d) = self.expr(0)?;
                depth = depth.max(d);
                args.push(a);
                if self.peek().tok == Tok::Comma {
                    self.bump();
                    continue;
                }
                self.expect(Tok::RParen, "`,` or `)`")?;
                break;
            }
            if args.len() != func.arity() {
                return Err(ParseError {
                    position: pos,
                    expected: format!("{} argument(s) for `{name}`", func.arity()),
                    found: format!("{} argument(s)", args.len()),
                });
            }
            return Self::node(pos, Expr::Call(func, args), depth + 1);
        }
        match name {
            "x" => Ok((Expr::Var, 1)),
            "pi" => Ok((Expr::Number(PI), 1)),
            "e" => Ok((Expr::Number(E), 1)),
            _ => {
                self.at -= 1;
                Err(self.unexpected("variable `x`, constant `pi`/`e`, or a builtin function"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_operator() {
        let err = parse("2*").unwrap_err();
        assert_eq!(err.position, 2);
        assert_eq!(err.expected, "operand");
        assert_eq!(err.found, "end of input");
    }

    #[test]
    fn error_positions() {
        assert_eq!(parse("").unwrap_err().position, 0);
        assert_eq!(parse("(x + 1").unwrap_err().position, 6);
        assert_eq!(parse("x 2").unwrap_err().position, 2);
        assert_eq!(parse("y + 1").unwrap_err().position, 0);
        assert_eq!(parse("1 + foo(x)").unwrap_err().position, 4);
        assert_eq!(parse("sin x").unwrap_err().position, 4);
        assert_eq!(parse("sin(x, 2)").unwrap_err().position, 0);
        assert_eq!(parse("pow(x)").unwrap_err().position, 0);
        assert_eq!(parse("*x").unwrap_err().position, 0);
        assert_eq!(parse("x + )").unwrap_err().position, 4);
    }

    #[test]
    fn depth_limit() {
        let ok = format!(
            "{}x{}",
            "(".repeat(600).chars().take(100).collect::<String>(),
            ")".repeat(100)
        );
        assert!(parse(&ok).is_ok());
        let chain = vec!["x"; 70].join("+");
        let err = parse(&chain).unwrap_err();
        assert!(err.expected.contains("64"));
        let nested = format!("{}x{}", "(".repeat(5000), ")".repeat(5000));
        assert!(parse(&nested).is_err());
        let negs = format!("{}x", "-".repeat(5000));
        assert!(parse(&negs).is_err());
        let within = vec!["x"; 64].join("+");
        assert!(parse(&within).unwrap().depth() <= MAX_DEPTH);
    }
}
