use std::f64::consts::PI;

use super::{BinOp, ExprError, Func, Node};

fn domain(op: &'static str, s: f64) -> ExprError {
    ExprError::Domain { op, s }
}

fn finite(value: f64, op: &'static str, s: f64) -> Result<f64, ExprError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(domain(op, s))
    }
}

/// Exponent literal eligible for the `powi` fast path.
pub(super) fn integer_literal(node: &Node) -> Option<i32> {
    let v = match node {
        Node::Num(v) => *v,
        Node::Neg(inner) => match inner.as_ref() {
            Node::Num(v) => -*v,
            _ => return None,
        },
        _ => return None,
    };
    (v.fract() == 0.0 && v.abs() <= i32::MAX as f64).then_some(v as i32)
}

pub(super) fn eval_node(node: &Node, s: f64) -> Result<f64, ExprError> {
    match node {
        Node::Num(v) => Ok(*v),
        Node::Var => Ok(s),
        Node::Pi => Ok(PI),
        Node::Neg(a) => Ok(-eval_node(a, s)?),
        Node::Binary(op, a, b) => {
            let x = eval_node(a, s)?;
            match op {
                BinOp::Add => finite(x + eval_node(b, s)?, "+", s),
                BinOp::Sub => finite(x - eval_node(b, s)?, "-", s),
                BinOp::Mul => finite(x * eval_node(b, s)?, "*", s),
                BinOp::Div => {
                    let y = eval_node(b, s)?;
                    if y == 0.0 {
                        return Err(domain("/", s));
                    }
                    finite(x / y, "/", s)
                }
                BinOp::Pow => {
                    if let Some(k) = integer_literal(b) {
                        if x == 0.0 && k < 0 {
                            return Err(domain("^", s));
                        }
                        return finite(x.powi(k), "^", s);
                    }
                    let y = eval_node(b, s)?;
                    if x > 0.0 {
                        finite(x.powf(y), "^", s)
                    } else if x == 0.0 && y > 0.0 {
                        Ok(0.0)
                    } else {
                        Err(domain("^", s))
                    }
                }
            }
        }
        Node::Call(func, a) => {
            let x = eval_node(a, s)?;
            let name = func.name();
            let y = match func {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => x.tan(),
                Func::Asin | Func::Acos if !(-1.0..=1.0).contains(&x) => {
                    return Err(domain(name, s))
                }
                Func::Asin => x.asin(),
                Func::Acos => x.acos(),
                Func::Atan => x.atan(),
                Func::Sqrt if x < 0.0 => return Err(domain(name, s)),
                Func::Sqrt => x.sqrt(),
                Func::Exp => x.exp(),
                Func::Log if x <= 0.0 => return Err(domain(name, s)),
                Func::Log => x.ln(),
                Func::Abs => x.abs(),
            };
            finite(y, name, s)
        }
    }
}
