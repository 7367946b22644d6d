//! Symbolic differentiation with constant folding through smart constructors.

use super::eval::integer_literal;
use super::{BinOp, Func, Node};

fn num(v: f64) -> Node {
    Node::Num(v)
}

fn as_num(n: &Node) -> Option<f64> {
    match n {
        Node::Num(v) => Some(*v),
        _ => None,
    }
}

fn fold(v: f64, fallback: impl FnOnce() -> Node) -> Node {
    if v.is_finite() {
        num(v)
    } else {
        fallback()
    }
}

fn neg(a: Node) -> Node {
    match a {
        Node::Num(v) => num(-v),
        Node::Neg(inner) => *inner,
        other => Node::Neg(Box::new(other)),
    }
}

fn add(a: Node, b: Node) -> Node {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => fold(x + y, || bin(BinOp::Add, num(x), num(y))),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => bin(BinOp::Add, a, b),
    }
}

fn sub(a: Node, b: Node) -> Node {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => fold(x - y, || bin(BinOp::Sub, num(x), num(y))),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => bin(BinOp::Sub, a, b),
    }
}

fn mul(a: Node, b: Node) -> Node {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => fold(x * y, || bin(BinOp::Mul, num(x), num(y))),
        (Some(0.0), _) | (_, Some(0.0)) => num(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        (Some(-1.0), _) => neg(b),
        (_, Some(-1.0)) => neg(a),
        _ => bin(BinOp::Mul, a, b),
    }
}

fn div(a: Node, b: Node) -> Node {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) if y != 0.0 => fold(x / y, || bin(BinOp::Div, num(x), num(y))),
        (Some(0.0), _) => num(0.0),
        (_, Some(1.0)) => a,
        _ => bin(BinOp::Div, a, b),
    }
}

fn pow(a: Node, b: Node) -> Node {
    match as_num(&b) {
        Some(1.0) => a,
        Some(0.0) => num(1.0),
        _ => bin(BinOp::Pow, a, b),
    }
}

fn bin(op: BinOp, a: Node, b: Node) -> Node {
    Node::Binary(op, Box::new(a), Box::new(b))
}

fn call(f: Func, a: Node) -> Node {
    Node::Call(f, Box::new(a))
}

pub(super) fn derive_node(node: &Node) -> Node {
    match node {
        Node::Num(_) | Node::Pi => num(0.0),
        Node::Var => num(1.0),
        Node::Neg(a) => neg(derive_node(a)),
        Node::Binary(op, a, b) => {
            let (u, v) = (a.as_ref().clone(), b.as_ref().clone());
            let (du, dv) = (derive_node(a), derive_node(b));
            match op {
                BinOp::Add => add(du, dv),
                BinOp::Sub => sub(du, dv),
                BinOp::Mul => add(mul(du, v), mul(u, dv)),
                BinOp::Div => div(sub(mul(du, v.clone()), mul(u, dv)), pow(v, num(2.0))),
                BinOp::Pow => {
                    if let Some(k) = integer_literal(b) {
                        // d(u^k) = k u^(k-1) u'
                        let k = k as f64;
                        mul(mul(num(k), pow(u, num(k - 1.0))), du)
                    } else {
                        // d(u^v) = u^v (v' ln u + v u'/u)
                        let power = bin(BinOp::Pow, u.clone(), v.clone());
                        let inner =
                            add(mul(dv, call(Func::Log, u.clone())), div(mul(v, du), u));
                        mul(power, inner)
                    }
                }
            }
        }
        Node::Call(f, a) => {
            let u = a.as_ref().clone();
            let du = derive_node(a);
            let outer = match f {
                Func::Sin => call(Func::Cos, u),
                Func::Cos => neg(call(Func::Sin, u)),
                Func::Tan => div(num(1.0), pow(call(Func::Cos, u), num(2.0))),
                Func::Asin => div(
                    num(1.0),
                    call(Func::Sqrt, sub(num(1.0), pow(u, num(2.0)))),
                ),
                Func::Acos => div(
                    num(-1.0),
                    call(Func::Sqrt, sub(num(1.0), pow(u, num(2.0)))),
                ),
                Func::Atan => div(num(1.0), add(num(1.0), pow(u, num(2.0)))),
                Func::Sqrt => div(num(0.5), call(Func::Sqrt, u)),
                Func::Exp => call(Func::Exp, u),
                Func::Log => div(num(1.0), u),
                // sign(u), undefined at the kink
                Func::Abs => div(u.clone(), call(Func::Abs, u)),
            };
            mul(outer, du)
        }
    }
}
