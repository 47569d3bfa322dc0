use std::collections::BTreeMap;

use thiserror::Error;

use super::expr::{BinOp, Expr, Func};

/// Exponents up to this magnitude with zero fractional part are evaluated by
/// repeated multiplication.
const MAX_INTEGER_EXPONENT: f64 = 1024.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error in `{expr}`: {reason}")]
    Domain { expr: String, reason: &'static str },
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),
}

fn domain(e: &Expr, reason: &'static str) -> EvalError {
    EvalError::Domain {
        expr: e.to_string(),
        reason,
    }
}

fn integer_power(base: f64, n: u64) -> f64 {
    let mut acc = 1.0;
    let mut b = base;
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc *= b;
        }
        b *= b;
        k >>= 1;
    }
    acc
}

impl Expr {
    /// Evaluates the expression at `point = (x, y, z)`.
    pub fn eval(&self, point: [f64; 3], params: &BTreeMap<String, f64>) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var(a) => point[a.index()],
            Expr::Param(name) => *params
                .get(name)
                .ok_or_else(|| EvalError::UnboundParameter(name.clone()))?,
            Expr::Neg(e) => -e.eval(point, params)?,
            Expr::Call(f, arg) => {
                let a = arg.eval(point, params)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Abs => a.abs(),
                    Func::Ln if a <= 0.0 => return Err(domain(self, "logarithm of a non-positive value")),
                    Func::Ln => a.ln(),
                    Func::Sqrt if a < 0.0 => return Err(domain(self, "square root of a negative value")),
                    Func::Sqrt => a.sqrt(),
                }
            }
            Expr::Binary(op, l, r) => {
                let a = l.eval(point, params)?;
                let b = r.eval(point, params)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if b == 0.0 => return Err(domain(self, "division by zero")),
                    BinOp::Div => a / b,
                    BinOp::Pow => {
                        if b.fract() == 0.0 && b.abs() <= MAX_INTEGER_EXPONENT {
                            let p = integer_power(a, b.abs() as u64);
                            if b < 0.0 {
                                if p == 0.0 {
                                    return Err(domain(self, "zero raised to a negative power"));
                                }
                                1.0 / p
                            } else {
                                p
                            }
                        } else if a > 0.0 {
                            a.powf(b)
                        } else {
                            return Err(domain(self, "non-integer power of a non-positive base"));
                        }
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain(self, "non-finite result"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse;

    fn at(text: &str, p: [f64; 3]) -> Result<f64, EvalError> {
        parse(text).unwrap().eval(p, &BTreeMap::new())
    }

    #[test]
    fn arithmetic() {
        assert_eq!(at("x^2*y", [2.0, 3.0, 0.0]).unwrap(), 12.0);
        assert_eq!(at("ln(x^2+y^2)", [1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(at("x^-2", [2.0, 0.0, 0.0]).unwrap(), 0.25);
        assert_eq!(at("(-x)^3", [2.0, 0.0, 0.0]).unwrap(), -8.0);
        assert!((at("x^0.5", [4.0, 0.0, 0.0]).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(at("abs(y) + sqrt(z)", [0.0, -2.0, 9.0]).unwrap(), 5.0);
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        match at("1/x", [0.0, 1.0, 1.0]) {
            Err(EvalError::Domain { expr, .. }) => assert_eq!(expr, "1 / x"),
            other => panic!("{other:?}"),
        }
        match at("y + ln(x)", [-1.0, 0.0, 0.0]) {
            Err(EvalError::Domain { expr, .. }) => assert_eq!(expr, "ln(x)"),
            other => panic!("{other:?}"),
        }
        assert!(at("sqrt(x - 1)", [0.0, 0.0, 0.0]).is_err());
        assert!(at("x^1.5", [-1.0, 0.0, 0.0]).is_err());
        assert!(at("x^-1", [0.0, 0.0, 0.0]).is_err());
        assert!(at("exp(x)", [1000.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn even_integer_powers_are_sign_symmetric() {
        for &v in &[0.3, 1.7, 2.9e-3, 123.456] {
            assert_eq!(at("x^6", [v, 0.0, 0.0]).unwrap(), at("x^6", [-v, 0.0, 0.0]).unwrap());
            assert_eq!(at("x^5", [v, 0.0, 0.0]).unwrap(), -at("x^5", [-v, 0.0, 0.0]).unwrap());
        }
    }

    #[test]
    fn unbound_parameter() {
        let e = crate::field::parse_with_params("b*x", &["b".to_string()]).unwrap();
        assert_eq!(
            e.eval([1.0, 0.0, 0.0], &BTreeMap::new()),
            Err(EvalError::UnboundParameter("b".into()))
        );
        let params = BTreeMap::from([("b".to_string(), 3.0)]);
        assert_eq!(e.eval([2.0, 0.0, 0.0], &params).unwrap(), 6.0);
    }
}
