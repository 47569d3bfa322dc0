use std::collections::BTreeMap;
use std::fmt;
use std::ops;

use serde::{Deserialize, Serialize};

/// Coordinate axis. Also used to label spin components and orbital symmetries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Axis> {
        Axis::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sin, Func::Cos, Func::Exp, Func::Ln, Func::Sqrt, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

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

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

/// Real-valued scalar expression in `x, y, z` and named parameters.
///
/// Constants produced by the parser are always non-negative; a leading minus
/// sign becomes a [`Expr::Neg`] node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Axis),
    Param(String),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn var(axis: Axis) -> Expr {
        Expr::Var(axis)
    }

    pub fn param(name: impl Into<String>) -> Expr {
        Expr::Param(name.into())
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn pow(base: Expr, exponent: Expr) -> Expr {
        Expr::binary(BinOp::Pow, base, exponent)
    }

    /// True for the literal `0` (what the catalog uses for absent components).
    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == 0.0)
    }

    /// Replaces every parameter that has a binding with its numeric value.
    pub fn substitute(&self, params: &BTreeMap<String, f64>) -> Expr {
        match self {
            Expr::Param(name) => match params.get(name) {
                Some(v) => Expr::Const(*v),
                None => self.clone(),
            },
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Neg(e) => -e.substitute(params),
            Expr::Call(f, e) => Expr::call(*f, e.substitute(params)),
            Expr::Binary(op, l, r) => Expr::binary(*op, l.substitute(params), r.substitute(params)),
        }
    }

    /// Names of all parameters referenced by the expression, sorted.
    pub fn parameters(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Param(n) => {
                    if !out.contains(n) {
                        out.push(n.clone());
                    }
                }
                Expr::Const(_) | Expr::Var(_) => {}
                Expr::Neg(a) | Expr::Call(_, a) => walk(a, out),
                Expr::Binary(_, l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, _, _) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Const(c) if c.is_sign_negative() => 3,
            Expr::Const(_) | Expr::Var(_) | Expr::Param(_) | Expr::Call(_, _) => 5,
        }
    }

    fn fmt_with_min(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_bare(f)?;
            f.write_str(")")
        } else {
            self.fmt_bare(f)
        }
    }

    fn fmt_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{}` on f64 prints the shortest string that parses back exactly.
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(a) => write!(f, "{a}"),
            Expr::Param(n) => f.write_str(n),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.fmt_with_min(f, 3)
            }
            Expr::Call(func, e) => {
                write!(f, "{}(", func.name())?;
                e.fmt_with_min(f, 0)?;
                f.write_str(")")
            }
            Expr::Binary(BinOp::Pow, base, exp) => {
                base.fmt_with_min(f, 5)?;
                f.write_str("^")?;
                exp.fmt_with_min(f, 3)
            }
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                l.fmt_with_min(f, p)?;
                write!(f, " {} ", op.symbol())?;
                r.fmt_with_min(f, p + 1)
            }
        }
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:expr) => {
        impl ops::$trait for Expr {
            type Output = Expr;

            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary($op, self, rhs)
            }
        }
    };
}

binary_op!(Add, add, BinOp::Add);
binary_op!(Sub, sub, BinOp::Sub);
binary_op!(Mul, mul, BinOp::Mul);
binary_op!(Div, div, BinOp::Div);

impl ops::Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_min(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ops::{Add, Mul, Neg, Sub};

    #[test]
    fn display_uses_minimal_parentheses() {
        let e = Expr::mul(
            Expr::add(Expr::var(Axis::X), Expr::constant(1.0)),
            Expr::pow(Expr::neg(Expr::var(Axis::Y)), Expr::constant(2.0)),
        );
        assert_eq!(e.to_string(), "(x + 1) * (-y)^2");
        let e = Expr::sub(Expr::var(Axis::X), Expr::sub(Expr::var(Axis::Y), Expr::var(Axis::Z)));
        assert_eq!(e.to_string(), "x - (y - z)");
        let e = Expr::neg(Expr::pow(Expr::var(Axis::X), Expr::constant(2.0)));
        assert_eq!(e.to_string(), "-x^2");
        let e = Expr::pow(Expr::constant(-1.0), Expr::constant(2.0));
        assert_eq!(e.to_string(), "(-1)^2");
    }

    #[test]
    fn substitute_binds_parameters() {
        let e = Expr::mul(Expr::param("b"), Expr::var(Axis::X));
        let params = BTreeMap::from([("b".to_string(), 2.5)]);
        assert_eq!(e.substitute(&params), Expr::mul(Expr::constant(2.5), Expr::var(Axis::X)));
        assert_eq!(e.parameters(), vec!["b".to_string()]);
    }
}
