//! Arithmetic expressions `+ - * / ^ ( )` over rationals and symbols,
//! expanded into a single rational function.

use splitnet_milp::Rational;

use super::poly::{RationalFunction, SparsePolynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("unexpected `{0}`")]
    Unexpected(String),
    #[error("unexpected end of expression")]
    Eof,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent must be a small nonnegative integer")]
    BadExponent,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Sym(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, ExprError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(lit.parse().map_err(|_| ExprError::Unexpected(lit))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Sym(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) || c == '−' || c == '·' {
            out.push(Tok::Op(match c {
                '−' => '-',
                '·' => '*',
                c => c,
            }));
            i += 1;
        } else {
            return Err(ExprError::Unexpected(c.to_string()));
        }
    }
    Ok(out)
}

struct Parser<'a, F> {
    toks: Vec<Tok>,
    pos: usize,
    nvars: usize,
    resolve: &'a F,
}

impl<F: Fn(&str) -> Option<usize>> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?).map_err(|_| ExprError::DivisionByZero)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction, ExprError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) if n.is_integer() && n.to_i64().is_some_and(|e| (0..=64).contains(&e)) => {
                    self.pos += 1;
                    return Ok(base.pow(n.to_i64().unwrap() as u32));
                }
                _ => return Err(ExprError::BadExponent),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction, ExprError> {
        let tok = self.toks.get(self.pos).cloned().ok_or(ExprError::Eof)?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(RationalFunction::from_poly(SparsePolynomial::constant(self.nvars, v))),
            Tok::Sym(s) => {
                let i = (self.resolve)(&s).ok_or(ExprError::UnknownSymbol(s))?;
                Ok(RationalFunction::from_poly(SparsePolynomial::var(self.nvars, i)))
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.peek().map_or(ExprError::Eof, |t| ExprError::Unexpected(format!("{t:?}"))));
                }
                Ok(e)
            }
            Tok::Op(c) => Err(ExprError::Unexpected(c.to_string())),
        }
    }
}

/// Parses `text` into a rational function over `nvars` symbols, resolving
/// identifiers through `resolve`.
pub fn parse_expression<F: Fn(&str) -> Option<usize>>(
    text: &str,
    nvars: usize,
    resolve: &F,
) -> Result<RationalFunction, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, nvars, resolve };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(t) => Err(ExprError::Unexpected(format!("{t:?}"))),
    }
}
