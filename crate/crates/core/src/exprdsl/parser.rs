//! Tokenizer and Pratt parser for Lagrangian expressions.
//!
//! Binding strength, loosest first: `+ -`, `* /`, unary minus, `^`
//! (right-associative). Function calls take one parenthesized argument.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{BinOp, Expr, Func, ParseError, ParseErrorKind};

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
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => alloc::format!("number {v}"),
            Tok::Ident(s) => alloc::format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

/// Token plus its 0-based byte offset.
type Spanned = (Tok, usize);

fn syntax(offset: usize, expected: impl Into<String>, found: &Tok) -> ParseError {
    ParseError {
        position: offset + 1,
        kind: ParseErrorKind::Syntax { expected: expected.into(), found: found.describe() },
    }
}

fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((tok, start));
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
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
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| ParseError {
                position: start + 1,
                kind: ParseErrorKind::Syntax { expected: "a number".into(), found: alloc::format!("'{text}'") },
            })?;
            out.push((Tok::Num(value), start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else {
            let ch = src[start..].chars().next().unwrap_or('?');
            return Err(ParseError {
                position: start + 1,
                kind: ParseErrorKind::Syntax {
                    expected: "an operator, number, identifier or parenthesis".into(),
                    found: alloc::format!("'{ch}'"),
                },
            });
        }
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

const BP_ADD: u8 = 10;
const BP_MUL: u8 = 20;
const BP_NEG: u8 = 30;
const BP_POW: u8 = 40;

pub(super) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    /// Variable names in order of first appearance.
    pub(super) names: Vec<String>,
}

impl Parser {
    pub(super) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Self { toks: tokenize(src)?, pos: 0, names: Vec::new() })
    }

    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(super) fn parse_all(&mut self) -> Result<Expr, ParseError> {
        if self.toks.len() == 1 {
            return Err(syntax(0, "an expression", &Tok::Eof));
        }
        let e = self.expr(0)?;
        let (tok, at) = self.peek().clone();
        if tok != Tok::Eof {
            return Err(syntax(at, "an operator or end of input", &tok));
        }
        Ok(e)
    }

    fn var_index(&mut self, name: String) -> usize {
        match self.names.iter().position(|n| *n == name) {
            Some(i) => i,
            None => {
                self.names.push(name);
                self.names.len() - 1
            }
        }
    }

    fn expect_rparen(&mut self, opened_at: usize) -> Result<(), ParseError> {
        let (tok, at) = self.peek().clone();
        match tok {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Err(ParseError {
                position: at + 1,
                kind: ParseErrorKind::Syntax {
                    expected: alloc::format!("')' to close the parenthesis opened at {}", opened_at + 1),
                    found: tok.describe(),
                },
            }),
            other => Err(syntax(at, "')'", &other)),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        let (tok, at) = self.bump();
        let mut lhs = match tok {
            Tok::Num(v) => Expr::Num(v),
            Tok::Minus => Expr::Neg(Box::new(self.expr(BP_NEG)?)),
            Tok::LParen => {
                let inner = self.expr(0)?;
                self.expect_rparen(at)?;
                inner
            }
            Tok::Ident(name) => {
                if self.peek().0 == Tok::LParen {
                    let func = Func::from_name(&name).ok_or_else(|| ParseError {
                        position: at + 1,
                        kind: ParseErrorKind::UnknownFunction(name.clone()),
                    })?;
                    let (_, open) = self.bump();
                    let arg = self.expr(0)?;
                    self.expect_rparen(open)?;
                    Expr::Call(func, Box::new(arg))
                } else if Func::from_name(&name).is_some() {
                    let (next, next_at) = self.peek().clone();
                    return Err(syntax(next_at, alloc::format!("'(' after function '{name}'"), &next));
                } else {
                    Expr::Var(self.var_index(name))
                }
            }
            other => return Err(syntax(at, "a number, identifier, '-' or '('", &other)),
        };

        loop {
            let (tok, _) = self.peek().clone();
            let (op, lbp, rbp) = match tok {
                Tok::Plus => (BinOp::Add, BP_ADD, BP_ADD + 1),
                Tok::Minus => (BinOp::Sub, BP_ADD, BP_ADD + 1),
                Tok::Star => (BinOp::Mul, BP_MUL, BP_MUL + 1),
                Tok::Slash => (BinOp::Div, BP_MUL, BP_MUL + 1),
                // right-associative; the exponent may start with unary minus
                Tok::Caret => (BinOp::Pow, BP_POW, BP_POW - 1),
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            self.bump();
            let rhs = self.expr(rbp)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }
}
