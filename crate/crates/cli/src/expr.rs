//! Entry rules over `(n, k)`: `+ - * /`, integer powers, `n`, `k`, integer
//! and decimal constants, parentheses. `×`, `÷` and `−` are accepted as
//! spellings of `*`, `/` and `-`.
//!
//! Evaluation is exact. A power's exponent may be any subexpression as long
//! as it evaluates to an integer.

use std::fmt;

use num::{One, Signed, ToPrimitive};
use sumkit_core::scalar::parse_exact;
use sumkit_core::{Exact, Scalar};

use crate::error::{usage, CliError};
use crate::literal::decimal;

const MAX_EXPONENT: i64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(Exact),
    N,
    K,
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Var(char),
    Op(char),
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<Tok>, CliError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' | '.' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() || d == '.' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Num(s));
            }
            'n' | 'k' => {
                out.push(Tok::Var(c));
                chars.next();
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push(Tok::Op(c));
                chars.next();
            }
            '−' => {
                out.push(Tok::Op('-'));
                chars.next();
            }
            '×' => {
                out.push(Tok::Op('*'));
                chars.next();
            }
            '÷' => {
                out.push(Tok::Op('/'));
                chars.next();
            }
            '(' => {
                out.push(Tok::Open);
                chars.next();
            }
            ')' => {
                out.push(Tok::Close);
                chars.next();
            }
            other => return Err(usage(format!("unexpected {other:?} in expression {src:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err(&self, what: &str) -> CliError {
        usage(format!("{what} at token {} of expression {:?}", self.pos + 1, self.src))
    }

    fn sum(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.product()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.bump();
            let op = if c == '+' { Op::Add } else { Op::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.product()?));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.bump();
            let op = if c == '*' { Op::Mul } else { Op::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, CliError> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, CliError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Bin(Op::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, CliError> {
        match self.bump() {
            Some(Tok::Num(s)) => parse_exact(&s)
                .map(Expr::Num)
                .ok_or_else(|| usage(format!("bad number {s:?} in expression {:?}", self.src))),
            Some(Tok::Var('n')) => Ok(Expr::N),
            Some(Tok::Var(_)) => Ok(Expr::K),
            Some(Tok::Open) => {
                let e = self.sum()?;
                match self.bump() {
                    Some(Tok::Close) => Ok(e),
                    _ => Err(self.err("expected ')'")),
                }
            }
            _ => Err(self.err("expected a number, n, k or '('")),
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, CliError> {
        let mut p = Parser { toks: lex(src)?, pos: 0, src };
        if p.toks.is_empty() {
            return Err(usage("empty expression"));
        }
        let e = p.sum()?;
        if p.pos < p.toks.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, n: usize, k: usize) -> Result<Exact, String> {
        Ok(match self {
            Expr::Num(v) => v.clone(),
            Expr::N => Exact::from_usize(n),
            Expr::K => Exact::from_usize(k),
            Expr::Neg(e) => -e.eval(n, k)?,
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(n, k)?, b.eval(n, k)?);
                match op {
                    Op::Add => x + y,
                    Op::Sub => x - y,
                    Op::Mul => x * y,
                    Op::Div => {
                        if y.is_zero() {
                            return Err(format!("division by zero at (n,k) = ({n},{k})"));
                        }
                        x / y
                    }
                    Op::Pow => {
                        if !y.is_int() {
                            return Err(format!("non-integer exponent {y} at (n,k) = ({n},{k})"));
                        }
                        let e = y.to_i64().filter(|e| e.abs() <= MAX_EXPONENT).ok_or_else(|| {
                            format!("exponent {y} out of range at (n,k) = ({n},{k})")
                        })?;
                        if x.is_zero() && e < 0 {
                            return Err(format!("zero to a negative power at (n,k) = ({n},{k})"));
                        }
                        if e == 0 {
                            Exact::one()
                        } else {
                            x.pow_int(e)
                        }
                    }
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(Op::Add | Op::Sub, ..) => 1,
            Expr::Bin(Op::Mul | Op::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(Op::Pow, ..) => 4,
            Expr::Num(v) if v.is_negative() => 3,
            _ => 5,
        }
    }
}

fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => f.write_str(&decimal(v)),
            Expr::N => f.write_str("n"),
            Expr::K => f.write_str("k"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                child(f, e, 3)
            }
            Expr::Bin(op, a, b) => {
                let (sym, p) = match op {
                    Op::Add => ("+", 1),
                    Op::Sub => ("-", 1),
                    Op::Mul => ("*", 2),
                    Op::Div => ("/", 2),
                    Op::Pow => ("^", 4),
                };
                if *op == Op::Pow {
                    child(f, a, 5)?;
                    f.write_str(sym)?;
                    return child(f, b, 3);
                }
                child(f, a, p)?;
                f.write_str(sym)?;
                child(f, b, p + 1)
            }
        }
    }
}
