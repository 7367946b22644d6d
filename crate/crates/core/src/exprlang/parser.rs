use super::{BinOp, ExprError, Func, Node, ScalarExpr};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone, Copy)]
struct Token {
    kind: Tok,
    start: usize,
    end: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax { offset, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
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
                let lexeme = &text[start..i];
                let value: f64 = lexeme.parse().map_err(|_| {
                    let bad = lexeme
                        .char_indices()
                        .filter(|&(_, ch)| ch == '.')
                        .nth(1)
                        .map_or(start, |(k, _)| start + k);
                    syntax(bad, format!("malformed number `{lexeme}`"))
                })?;
                out.push(Token { kind: Tok::Num(value), start, end: i });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token { kind: Tok::Ident, start, end: i });
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push(Token { kind, start, end: i });
    }
    out.push(Token { kind: Tok::End, start: text.len(), end: text.len() });
    Ok(out)
}

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Token {
        self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos];
        if t.kind != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().kind {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().kind {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        match self.peek().kind {
            Tok::Minus => {
                self.bump();
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.primary()?;
        if self.peek().kind == Tok::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Node::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        let tok = self.bump();
        match tok.kind {
            Tok::Num(v) => Ok(Node::Num(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident => {
                let name = &self.text[tok.start..tok.end];
                match name {
                    "s" => Ok(Node::Var),
                    "pi" => Ok(Node::Pi),
                    _ => match Func::from_name(name) {
                        Some(func) => {
                            let next = self.peek();
                            if next.kind != Tok::LParen {
                                return Err(syntax(
                                    next.start,
                                    format!("expected `(` after `{name}`"),
                                ));
                            }
                            self.bump();
                            let arg = self.expr()?;
                            self.expect_rparen()?;
                            Ok(Node::Call(func, Box::new(arg)))
                        }
                        None => Err(ExprError::UnknownIdentifier {
                            name: name.to_string(),
                            offset: tok.start,
                        }),
                    },
                }
            }
            Tok::End => Err(syntax(tok.start, "unexpected end of input")),
            _ => Err(syntax(
                tok.start,
                format!("unexpected `{}`", &self.text[tok.start..tok.end]),
            )),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        let t = self.peek();
        if t.kind == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(syntax(t.start, "expected `)`"))
        }
    }
}

/// Parses an expression in `s`.
pub fn parse(text: &str) -> Result<ScalarExpr, ExprError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { text, tokens, pos: 0 };
    let root = p.expr()?;
    let t = p.peek();
    if t.kind != Tok::End {
        return Err(syntax(
            t.start,
            format!("unexpected `{}` after expression", &text[t.start..t.end]),
        ));
    }
    Ok(ScalarExpr::new(root))
}
