//! Recursive-descent parser for the vector-potential DSL.
//!
//! Grammar, lowest to highest precedence:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          right associative
//! primary := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```

use thiserror::Error;

use super::expr::{Axis, BinOp, Expr, Func};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::UnknownFunction { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lit = &text[start..i];
                let value = lit.parse::<f64>().map_err(|_| ParseError::Syntax {
                    offset: start,
                    expected: vec!["number"],
                    found: format!("`{lit}`"),
                })?;
                out.push((start, Tok::Num(value)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    expected: vec!["expression"],
                    found: format!("character `{ch}`"),
                });
            }
        }
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    params: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected,
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::pow(base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let offset = self.offset();
                self.bump();
                if *self.peek() == Tok::LParen {
                    let func = Func::from_name(&name)
                        .ok_or(ParseError::UnknownFunction { offset, name })?;
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::call(func, arg));
                }
                if Func::from_name(&name).is_some() {
                    return Err(self.unexpected(vec!["`(`"]));
                }
                match name.as_str() {
                    "x" => Ok(Expr::Var(Axis::X)),
                    "y" => Ok(Expr::Var(Axis::Y)),
                    "z" => Ok(Expr::Var(Axis::Z)),
                    _ if self.params.contains(&name) => Ok(Expr::Param(name)),
                    _ => Err(ParseError::UnknownIdentifier { offset, name }),
                }
            }
            _ => Err(self.unexpected(vec!["number", "identifier", "`(`", "`-`"])),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(vec!["`)`", "operator"]))
        }
    }
}

/// Parses an expression in `x, y, z` only.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_with_params(text, &[])
}

/// Parses an expression that may also reference the given parameter names.
pub fn parse_with_params(text: &str, params: &[String]) -> Result<Expr, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, params };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected(vec!["operator", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ops::{Add, Mul, Neg, Sub};
    use crate::field::expr::Axis::{X, Y};

    #[test]
    fn product_with_power() {
        let e = parse("x^2*y").unwrap();
        assert_eq!(e, Expr::mul(Expr::pow(Expr::var(X), Expr::constant(2.0)), Expr::var(Y)));
    }

    #[test]
    fn negated_log() {
        let e = parse("-ln(x^2+y^2)").unwrap();
        let sum = Expr::add(
            Expr::pow(Expr::var(X), Expr::constant(2.0)),
            Expr::pow(Expr::var(Y), Expr::constant(2.0)),
        );
        assert_eq!(e, Expr::neg(Expr::call(Func::Ln, sum)));
    }

    #[test]
    fn misplaced_operator_reports_offset() {
        let err = parse("x + * y").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 4, .. }), "{err:?}");
    }

    #[test]
    fn precedence_and_associativity() {
        // unary minus binds looser than ^
        assert_eq!(parse("-x^2").unwrap(), Expr::neg(Expr::pow(Expr::var(X), Expr::constant(2.0))));
        // ^ is right associative
        assert_eq!(
            parse("2^3^2").unwrap(),
            Expr::pow(Expr::constant(2.0), Expr::pow(Expr::constant(3.0), Expr::constant(2.0)))
        );
        // - and / are left associative
        assert_eq!(
            parse("x-y-1").unwrap(),
            Expr::sub(Expr::sub(Expr::var(X), Expr::var(Y)), Expr::constant(1.0))
        );
        assert_eq!(parse("x^-2").unwrap(), Expr::pow(Expr::var(X), Expr::neg(Expr::constant(2.0))));
        assert_eq!(parse("1.5e-3").unwrap(), Expr::constant(1.5e-3));
        assert_eq!(parse("2E+2").unwrap(), Expr::constant(200.0));
    }

    #[test]
    fn identifiers_and_functions() {
        assert!(matches!(
            parse("x + w").unwrap_err(),
            ParseError::UnknownIdentifier { offset: 4, .. }
        ));
        assert!(matches!(
            parse("tanh(x)").unwrap_err(),
            ParseError::UnknownFunction { offset: 0, .. }
        ));
        assert!(matches!(parse("sin + 1").unwrap_err(), ParseError::Syntax { offset: 4, .. }));
        let params = vec!["w".to_string()];
        assert_eq!(
            parse_with_params("x*w", &params).unwrap(),
            Expr::mul(Expr::var(X), Expr::param("w"))
        );
    }

    #[test]
    fn unbalanced_input() {
        assert!(matches!(parse("(x + 1").unwrap_err(), ParseError::Syntax { offset: 6, .. }));
        assert!(matches!(parse("x)").unwrap_err(), ParseError::Syntax { offset: 1, .. }));
        assert!(matches!(parse("").unwrap_err(), ParseError::Syntax { offset: 0, .. }));
        assert!(matches!(parse("x # y").unwrap_err(), ParseError::Syntax { offset: 2, .. }));
    }
}
