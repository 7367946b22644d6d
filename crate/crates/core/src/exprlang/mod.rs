//! A small expression language for real functions of arc length `s`.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          // right associative
//! primary := number | 's' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | tan | asin | acos | atan | sqrt | exp | log | abs
//! ```
//!
//! Expressions are immutable trees; evaluation and differentiation are pure,
//! so a [`ScalarExpr`] can be shared freely across threads.

mod derive;
mod display;
mod eval;
mod parser;

use std::fmt;

pub use parser::parse;

/// Errors produced while parsing or evaluating expressions.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("domain error in {op} at s = {s}")]
    Domain { op: &'static str, s: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Asin,
    Acos,
    Atan,
    Sqrt,
    Exp,
    Log,
    Abs,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Asin,
        Func::Acos,
        Func::Atan,
        Func::Sqrt,
        Func::Exp,
        Func::Log,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Asin => "asin",
            Func::Acos => "acos",
            Func::Atan => "atan",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
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
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Expression tree node.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var,
    Pi,
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed scalar function of the arc-length variable `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarExpr {
    root: Node,
}

impl ScalarExpr {
    pub fn new(root: Node) -> Self {
        Self { root }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(Node::Num(value))
    }

    pub fn var() -> Self {
        Self::new(Node::Var)
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn into_root(self) -> Node {
        self.root
    }

    /// Evaluates the expression at `s`.
    pub fn eval(&self, s: f64) -> Result<f64, ExprError> {
        eval::eval_node(&self.root, s)
    }

    /// Symbolic derivative with respect to `s`, constant-folded.
    pub fn derive(&self) -> ScalarExpr {
        ScalarExpr::new(derive::derive_node(&self.root))
    }

    /// True when the expression does not reference `s`.
    pub fn is_constant(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Num(_) | Node::Pi => true,
                Node::Var => false,
                Node::Neg(a) | Node::Call(_, a) => walk(a),
                Node::Binary(_, a, b) => walk(a) && walk(b),
            }
        }
        walk(&self.root)
    }

    /// Substitutes `inner` for every occurrence of `s`.
    pub fn compose(&self, inner: &ScalarExpr) -> ScalarExpr {
        fn walk(n: &Node, inner: &Node) -> Node {
            match n {
                Node::Var => inner.clone(),
                Node::Num(_) | Node::Pi => n.clone(),
                Node::Neg(a) => Node::Neg(Box::new(walk(a, inner))),
                Node::Call(f, a) => Node::Call(*f, Box::new(walk(a, inner))),
                Node::Binary(op, a, b) => {
                    Node::Binary(*op, Box::new(walk(a, inner)), Box::new(walk(b, inner)))
                }
            }
        }
        ScalarExpr::new(walk(&self.root, &inner.root))
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        display::write_node(f, &self.root)
    }
}

impl std::str::FromStr for ScalarExpr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
