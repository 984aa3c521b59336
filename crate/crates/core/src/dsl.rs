//! Line-oriented text format for index maps.
//!
//! ```text
//! # comments run to end of line
//! piece n>=1: n+1
//! piece n==0: 0
//! piece n<=-1: n-1
//! except 7 -> 3
//! ```
//!
//! Statements are separated by newlines or `;`. Conditions are `all`,
//! `n>=a`, `n>a`, `n<=a`, `n<a`, `n==a` and `a<=n<=b`; polynomials use
//! `+ - * ^`, parentheses, integer literals and the variable `n`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::error::{MapError, PartitionError};
use crate::index_map::{IndexMap, Piece, DEFAULT_MAX_DEGREE};
use crate::interval::Interval;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {at}: {message}")]
    Syntax { at: Location, message: String },
    #[error("degree {degree} at {at} exceeds the maximum {max}")]
    Degree {
        at: Location,
        degree: usize,
        max: usize,
    },
    #[error("pieces do not partition the integers: {0}")]
    Partition(#[from] PartitionError),
    #[error("arithmetic error at {at}: {source}")]
    Arithmetic { at: Location, source: MapError },
}

/// A source line handed to the statement parser.
#[derive(Debug, Clone, Copy)]
pub struct SourceLine<'a> {
    pub number: usize,
    pub text: &'a str,
}

pub fn parse_map(text: &str) -> Result<IndexMap, DslError> {
    parse_map_with(text, DEFAULT_MAX_DEGREE)
}

pub fn parse_map_with(text: &str, max_degree: usize) -> Result<IndexMap, DslError> {
    let lines: Vec<SourceLine> = text
        .lines()
        .enumerate()
        .map(|(i, text)| SourceLine {
            number: i + 1,
            text,
        })
        .collect();
    parse_lines(&lines, max_degree)
}

/// Parses map statements drawn from an enclosing document.
pub fn parse_lines(lines: &[SourceLine], max_degree: usize) -> Result<IndexMap, DslError> {
    let mut pieces = Vec::new();
    let mut exceptions = BTreeMap::new();
    for line in lines {
        let body = line.text.split('#').next().unwrap_or("");
        let mut offset = 0;
        for stmt in body.split(';') {
            let col = offset + 1;
            offset += stmt.len() + 1;
            if stmt.trim().is_empty() {
                continue;
            }
            let mut p = Parser::new(stmt, line.number, col);
            match p.statement(max_degree)? {
                Statement::Piece(piece) => pieces.push(piece),
                Statement::Except(k, v) => {
                    if exceptions.insert(k, v).is_some() {
                        return Err(p.error_at(0, format!("duplicate exception for {k}")));
                    }
                }
            }
        }
    }
    Ok(IndexMap::new(pieces, exceptions)?)
}

pub fn parse_poly(text: &str) -> Result<Poly, DslError> {
    let mut p = Parser::new(text, 1, 1);
    let poly = p.expr()?;
    p.expect_end()?;
    Ok(poly)
}

enum Statement {
    Piece(Piece),
    Except(i64, i64),
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, line: usize, col0: usize) -> Self {
        Parser {
            src: text.as_bytes(),
            text,
            pos: 0,
            line,
            col0,
        }
    }

    fn loc(&self, pos: usize) -> Location {
        Location {
            line: self.line,
            column: self.col0 + pos,
        }
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> DslError {
        DslError::Syntax {
            at: self.loc(pos),
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> DslError {
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), DslError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{tok}`")))
        }
    }

    fn expect_end(&mut self) -> Result<(), DslError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
        }
    }

    fn keyword(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.text[start..self.pos])
    }

    fn integer(&mut self) -> Result<i64, DslError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
            self.skip_ws();
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits == self.pos {
            return Err(self.error_at(start, "expected an integer"));
        }
        let lit: String = self.text[start..self.pos]
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        lit.parse()
            .map_err(|_| self.error_at(start, format!("integer `{lit}` out of range")))
    }

    fn unsigned(&mut self) -> Result<u128, DslError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error_at(start, "expected a number"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error_at(start, "number out of range"))
    }

    fn statement(&mut self, max_degree: usize) -> Result<Statement, DslError> {
        let start = self.pos;
        match self.keyword() {
            Some("piece") => {
                let domain = self.condition()?;
                self.expect(":")?;
                let poly_at = self.pos;
                let poly = self.expr()?;
                self.expect_end()?;
                if poly.degree() > max_degree {
                    return Err(DslError::Degree {
                        at: self.loc(poly_at),
                        degree: poly.degree(),
                        max: max_degree,
                    });
                }
                Ok(Statement::Piece(Piece::new(domain, poly)))
            }
            Some("except") => {
                let k = self.integer()?;
                self.expect("->")?;
                let v = self.integer()?;
                self.expect_end()?;
                Ok(Statement::Except(k, v))
            }
            _ => Err(self.error_at(start, "expected `piece` or `except`")),
        }
    }

    fn condition(&mut self) -> Result<Interval, DslError> {
        self.skip_ws();
        let save = self.pos;
        if let Some(word) = self.keyword() {
            match word {
                "all" => return Ok(Interval::ALL),
                "n" => return self.comparison_after_var(),
                _ => return Err(self.error_at(save, format!("unknown condition `{word}`"))),
            }
        }
        // a <= n <= b, with `<` also accepted
        let a = self.integer()?;
        let lo = if self.eat("<=") {
            a
        } else if self.eat("<") {
            a.checked_add(1)
                .ok_or_else(|| self.error("bound out of range"))?
        } else {
            return Err(self.error("expected `<=` or `<`"));
        };
        self.expect("n")?;
        let hi = if self.eat("<=") {
            self.integer()?
        } else if self.eat("<") {
            self.integer()? - 1
        } else {
            return Ok(Interval::at_least(lo));
        };
        Ok(Interval::bounded(lo, hi))
    }

    fn comparison_after_var(&mut self) -> Result<Interval, DslError> {
        let iv = if self.eat(">=") {
            Interval::at_least(self.integer()?)
        } else if self.eat("<=") {
            Interval::at_most(self.integer()?)
        } else if self.eat("==") {
            Interval::point(self.integer()?)
        } else if self.eat(">") {
            Interval::at_least(self.integer()? + 1)
        } else if self.eat("<") {
            Interval::at_most(self.integer()? - 1)
        } else {
            return Err(self.error("expected a comparison"));
        };
        Ok(iv)
    }

    fn arith(&self, at: usize, r: Result<Poly, MapError>) -> Result<Poly, DslError> {
        r.map_err(|source| DslError::Arithmetic {
            at: self.loc(at),
            source,
        })
    }

    fn expr(&mut self) -> Result<Poly, DslError> {
        let mut acc = self.term()?;
        loop {
            let at = self.pos;
            if self.eat("+") {
                let rhs = self.term()?;
                acc = self.arith(at, acc.checked_add(&rhs))?;
            } else if self.peek() == Some(b'-') && !self.text[self.pos..].starts_with("->") {
                self.pos += 1;
                let rhs = self.term()?;
                acc = self.arith(at, acc.checked_sub(&rhs))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, DslError> {
        let mut acc = self.unary()?;
        loop {
            let at = self.pos;
            if self.eat("*") {
                let rhs = self.unary()?;
                acc = self.arith(at, acc.checked_mul(&rhs))?;
            } else if matches!(self.peek(), Some(b'n') | Some(b'(')) {
                // implicit product such as `3n` or `2(n+1)`
                let rhs = self.unary()?;
                acc = self.arith(at, acc.checked_mul(&rhs))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, DslError> {
        let at = self.pos;
        if self.eat("-") {
            let inner = self.unary()?;
            return self.arith(at, inner.checked_scale(-1));
        }
        if self.eat("+") {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, DslError> {
        let base = self.atom()?;
        let at = self.pos;
        if self.eat("^") {
            let e = self.unsigned()?;
            let e = u32::try_from(e)
                .ok()
                .filter(|&e| e <= 64)
                .ok_or_else(|| self.error_at(at, "exponent too large"))?;
            return self.arith(at, base.checked_pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, DslError> {
        match self.peek() {
            Some(b'n') => {
                self.pos += 1;
                Ok(Poly::var())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(")")?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(Poly::constant(self.unsigned()? as i128)),
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
