//! Tiny expression language for parameters such as `1/(250*sqrt(pi))`, so
//! irrational inputs are formed at working precision.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | primary
//! primary := number | 'pi' | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Decimal literals (optionally with an exponent) are exact rationals.

use std::fmt;

use rug::{Float, Integer, Rational};

use crate::error::{GaussError, Result};
use crate::precision::PrecisionContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NumberExpr {
    /// Exact literal with its source spelling.
    Literal { value: Rational, text: String },
    Pi,
    Sqrt(Box<NumberExpr>),
    Neg(Box<NumberExpr>),
    Binary(BinOp, Box<NumberExpr>, Box<NumberExpr>),
}

impl fmt::Display for NumberExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberExpr::Literal { text, .. } => f.write_str(text),
            NumberExpr::Pi => f.write_str("pi"),
            NumberExpr::Sqrt(e) => write!(f, "sqrt({e})"),
            NumberExpr::Neg(e) => write!(f, "-({e})"),
            NumberExpr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational, String),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn syntax(offset: usize, message: impl Into<String>) -> GaussError {
    GaussError::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' | b'-' | b'*' | b'/' => {
                out.push((i, Tok::Op(c as char)));
                i += 1;
            }
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let (tok, len) = number(src, i)?;
                out.push((i, tok));
                i += len;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(syntax(i, format!("unexpected character {ch:?}")));
            }
        }
    }
    Ok(out)
}

/// Scans `digits [. digits] [e [+-] digits]` starting at `start`.
fn number(src: &str, start: usize) -> Result<(Tok, usize)> {
    let b = src.as_bytes();
    let mut i = start;
    let mut mantissa = String::new();
    let mut frac_digits: i64 = 0;
    let mut seen_dot = false;
    while i < b.len() && (b[i].is_ascii_digit() || (b[i] == b'.' && !seen_dot)) {
        if b[i] == b'.' {
            seen_dot = true;
        } else {
            mantissa.push(b[i] as char);
            if seen_dot {
                frac_digits += 1;
            }
        }
        i += 1;
    }
    if mantissa.is_empty() {
        return Err(syntax(start, "malformed number"));
    }
    let mut exp: i64 = 0;
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        let mut neg = false;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            neg = b[j] == b'-';
            j += 1;
        }
        let ds = j;
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        if ds == j {
            return Err(syntax(i, "exponent has no digits"));
        }
        exp = src[ds..j]
            .parse::<i64>()
            .ok()
            .filter(|e| *e <= 100_000)
            .ok_or_else(|| syntax(ds, "exponent out of range"))?;
        if neg {
            exp = -exp;
        }
        i = j;
    }
    let m: Integer = mantissa.parse().map_err(|_| syntax(start, "malformed number"))?;
    let scale = exp - frac_digits;
    let pow10 = |k: i64| Integer::from(Integer::u_pow_u(10, k as u32));
    let value = if scale >= 0 {
        Rational::from(m * pow10(scale))
    } else {
        Rational::from((m, pow10(-scale)))
    };
    Ok((Tok::Num(value, src[start..i].to_string()), i - start))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn expr(&mut self) -> Result<NumberExpr> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = NumberExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<NumberExpr> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = NumberExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<NumberExpr> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(NumberExpr::Neg(Box::new(self.factor()?)));
        }
        self.primary()
    }

    fn expect_rparen(&mut self) -> Result<()> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(syntax(self.offset(), "expected ')'")),
        }
    }

    fn primary(&mut self) -> Result<NumberExpr> {
        let at = self.offset();
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Num(value, text)) => {
                self.pos += 1;
                Ok(NumberExpr::Literal { value, text })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "pi" => Ok(NumberExpr::Pi),
                    "sqrt" => {
                        if self.peek() != Some(&Tok::LParen) {
                            return Err(syntax(self.offset(), "expected '(' after sqrt"));
                        }
                        self.pos += 1;
                        let e = self.expr()?;
                        self.expect_rparen()?;
                        Ok(NumberExpr::Sqrt(Box::new(e)))
                    }
                    _ => Err(GaussError::UnknownIdentifier { offset: at, name }),
                }
            }
            Some(_) => Err(syntax(at, "expected a number, 'pi', 'sqrt' or '('")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

pub fn parse_number_expr(src: &str) -> Result<NumberExpr> {
    if !src.is_ascii() {
        let off = src.char_indices().find(|(_, c)| !c.is_ascii()).map_or(0, |(i, _)| i);
        return Err(syntax(off, "non-ASCII input"));
    }
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Evaluates with correctly rounded operations at the context precision.
pub fn eval_number_expr(e: &NumberExpr, ctx: &PrecisionContext) -> Result<Float> {
    let bits = ctx.bits();
    Ok(match e {
        NumberExpr::Literal { value, .. } => Float::with_val(bits, value),
        NumberExpr::Pi => ctx.pi(),
        NumberExpr::Sqrt(a) => {
            let v = eval_number_expr(a, ctx)?;
            if v < 0 {
                return Err(GaussError::domain(format!("sqrt of negative value in {e}")));
            }
            v.sqrt()
        }
        NumberExpr::Neg(a) => -eval_number_expr(a, ctx)?,
        NumberExpr::Binary(op, a, b) => {
            let a = eval_number_expr(a, ctx)?;
            let b = eval_number_expr(b, ctx)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.is_zero() {
                        return Err(GaussError::domain(format!("division by zero in {e}")));
                    }
                    a / b
                }
            }
        }
    })
}

/// Parse and evaluate in one step.
pub fn eval_str(src: &str, ctx: &PrecisionContext) -> Result<Float> {
    eval_number_expr(&parse_number_expr(src)?, ctx)
}
