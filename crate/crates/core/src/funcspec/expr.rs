//! Recursive-descent parser for component expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := number | 'x' INDEX | '(' expr ')' | FUNC '(' expr (',' expr)? ')' | '-' factor
//! FUNC   := abs | min | max | sin | cos
//! ```
//!
//! Numbers are decimals or `p/q` rationals and are kept exact.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Abs,
    Min,
    Max,
    Sin,
    Cos,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            _ => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    pub fn eval<S: Scalar>(&self, x: &[S]) -> Result<S> {
        Ok(match self {
            Expr::Num(r) => S::from_rational(r),
            Expr::Var(i) => x[*i].clone(),
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Call(f, args) => {
                let a = args[0].eval(x)?;
                match f {
                    Func::Abs => a.abs(),
                    Func::Min => a.min_of(args[1].eval(x)?),
                    Func::Max => a.max_of(args[1].eval(x)?),
                    Func::Sin => a.sin().ok_or(Error::RequiresFloat("sin"))?,
                    Func::Cos => a.cos().ok_or(Error::RequiresFloat("cos"))?,
                }
            }
        })
    }

    /// True when the expression uses `sin` or `cos`.
    pub fn is_transcendental(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var(_) => false,
            Expr::Neg(e) => e.is_transcendental(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.is_transcendental() || b.is_transcendental()
            }
            Expr::Call(f, args) => {
                matches!(f, Func::Sin | Func::Cos) || args.iter().any(Expr::is_transcendental)
            }
        }
    }

    /// Largest variable index plus one.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(e) => e.arity(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.arity().max(b.arity()),
            Expr::Call(_, args) => args.iter().map(Expr::arity).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => {
                if r < &Rational::from_integer(0.into()) {
                    write!(f, "({})", r.render())
                } else {
                    f.write_str(&r.render())
                }
            }
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Add(a, b) => write!(f, "{a} + {b}"),
            Expr::Sub(a, b) => write!(f, "{a} - ({b})"),
            Expr::Mul(a, b) => write!(f, "({a})*({b})"),
            Expr::Call(func, args) => {
                let args: Vec<String> = args.iter().map(ToString::to_string).collect();
                write!(f, "{}({})", func.name(), args.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Var(usize),
    Ident(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, start)),
            '-' => out.push((Tok::Minus, start)),
            '*' => out.push((Tok::Star, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            ',' => out.push((Tok::Comma, start)),
            '0'..='9' | '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // p/q literal: a slash directly followed by digits
                if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let lit = &text[start..i];
                let value = parse_rational(lit).ok_or_else(|| Error::Syntax {
                    pos: start,
                    msg: format!("bad number '{lit}'"),
                })?;
                out.push((Tok::Num(value), start));
                continue;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word.strip_prefix('x') {
                    Some(idx) if !idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit()) => {
                        Tok::Var(idx.parse().map_err(|_| Error::Syntax {
                            pos: start,
                            msg: format!("bad variable '{word}'"),
                        })?)
                    }
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((tok, start));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        }
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(r) => Ok(Expr::Num(r)),
            Tok::Var(i) => {
                if i >= self.dim {
                    return Err(Error::Syntax {
                        pos,
                        msg: format!("x{i} out of range for dimension {}", self.dim),
                    });
                }
                Ok(Expr::Var(i))
            }
            Tok::Minus => Ok(Expr::Neg(Box::new(self.factor()?))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let func = Func::from_name(&name).ok_or_else(|| Error::Syntax {
                    pos,
                    msg: format!("unknown function '{name}'"),
                })?;
                self.expect(Tok::LParen, "'(' after function name")?;
                let mut args = vec![self.expr()?];
                if *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(Tok::RParen, "')'")?;
                if args.len() != func.arity() {
                    return Err(Error::Syntax {
                        pos,
                        msg: format!("{} takes {} argument(s)", func.name(), func.arity()),
                    });
                }
                Ok(Expr::Call(func, args))
            }
            Tok::End => Err(Error::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            other => Err(Error::Syntax {
                pos,
                msg: format!("unexpected token {other:?}"),
            }),
        }
    }
}

/// Parses one component expression over `dim` variables.
pub fn parse_expr(text: &str, dim: usize) -> Result<Expr> {
    parse_at(text, dim, 0)
}

/// Parses semicolon-separated components. Error positions refer to `text`.
pub fn parse_components(text: &str, dim: usize) -> Result<Vec<Expr>> {
    let mut offset = 0;
    let mut out = Vec::new();
    for part in text.split(';') {
        out.push(parse_at(part, dim, offset)?);
        offset += part.len() + 1;
    }
    Ok(out)
}

fn parse_at(text: &str, dim: usize, offset: usize) -> Result<Expr> {
    let shift = |e: Error| match e {
        Error::Syntax { pos, msg } => Error::Syntax {
            pos: pos + offset,
            msg,
        },
        other => other,
    };
    let toks = lex(text).map_err(shift)?;
    let mut p = Parser { toks, at: 0, dim };
    let e = p.expr().map_err(shift)?;
    if *p.peek() != Tok::End {
        return Err(shift(Error::Syntax {
            pos: p.pos(),
            msg: "trailing input".into(),
        }));
    }
    Ok(e)
}
