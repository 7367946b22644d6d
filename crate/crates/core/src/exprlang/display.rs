use std::fmt::{self, Write};

use super::{BinOp, Node};

fn prec(node: &Node) -> u8 {
    match node {
        Node::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        Node::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        Node::Neg(_) => 3,
        Node::Binary(BinOp::Pow, ..) => 4,
        Node::Num(v) if *v < 0.0 || v.is_sign_negative() => 3,
        _ => 5,
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, node: &Node, wrap: bool) -> fmt::Result {
    if wrap {
        f.write_char('(')?;
        write_node(f, node)?;
        f.write_char(')')
    } else {
        write_node(f, node)
    }
}

/// Writes a re-parseable rendering with the minimal parentheses the grammar needs.
pub(super) fn write_node(f: &mut fmt::Formatter<'_>, node: &Node) -> fmt::Result {
    match node {
        // `{:?}` is the shortest string that round-trips to the same f64
        Node::Num(v) => write!(f, "{v:?}"),
        Node::Var => f.write_char('s'),
        Node::Pi => f.write_str("pi"),
        Node::Neg(a) => {
            f.write_char('-')?;
            write_wrapped(f, a, prec(a) < 3)
        }
        Node::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_node(f, a)?;
            f.write_char(')')
        }
        Node::Binary(op, a, b) => {
            let p = prec(node);
            let (wrap_l, wrap_r) = match op {
                // right associative: left operand must bind tighter
                BinOp::Pow => (prec(a) <= p, prec(b) < 3),
                _ => (prec(a) < p, prec(b) <= p),
            };
            write_wrapped(f, a, wrap_l)?;
            write!(f, " {} ", op.symbol())?;
            write_wrapped(f, b, wrap_r)
        }
    }
}
