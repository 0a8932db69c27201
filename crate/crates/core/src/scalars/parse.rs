//! Recursive-descent parser for scalar expressions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' ['-'] digits)?
//! atom  := digits | ident | '(' expr ')'
//! ```
//! Identifiers are `zeta` or a declared parameter name.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Field, Scalar};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at position {pos}")]
    UnexpectedChar { pos: usize, ch: char },
    #[error("unexpected end of input at position {pos}")]
    UnexpectedEnd { pos: usize },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdent { pos: usize, name: String },
    #[error("exponent out of range at position {pos}")]
    BadExponent { pos: usize },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
    #[error("zero raised to a negative power at position {pos}")]
    ZeroNegativePower { pos: usize },
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    idx: usize,
    len: usize,
    field: &'a Field,
}

pub(super) fn parse_scalar(text: &str, field: &Field) -> Result<Scalar, ParseError> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        idx: 0,
        len: text.len(),
        field,
    };
    let v = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(v),
        Some((pos, ch)) => Err(ParseError::UnexpectedChar { pos, ch }),
    }
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.idx < self.chars.len() && self.chars[self.idx].1.is_whitespace() {
            self.idx += 1;
        }
    }

    fn peek(&mut self) -> Option<(usize, char)> {
        self.skip_ws();
        self.chars.get(self.idx).copied()
    }

    fn pos(&self) -> usize {
        self.chars.get(self.idx).map_or(self.len, |c| c.0)
    }

    fn bump(&mut self) {
        self.idx += 1;
    }

    fn expr(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.term()?;
        while let Some((_, c)) = self.peek() {
            match c {
                '+' => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.unary()?;
        while let Some((pos, c)) = self.peek() {
            match c {
                '*' => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                '/' => {
                    self.bump();
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(ParseError::DivisionByZero { pos });
                    }
                    acc = &acc / &d;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar, ParseError> {
        if let Some((_, '-')) = self.peek() {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, ParseError> {
        let base = self.atom()?;
        if let Some((pos, '^')) = self.peek() {
            self.bump();
            let neg = if let Some((_, '-')) = self.peek() {
                self.bump();
                true
            } else {
                false
            };
            self.skip_ws();
            let start = self.pos();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.unexpected());
            }
            let e: i64 = digits
                .parse::<i32>()
                .map_err(|_| ParseError::BadExponent { pos: start })?
                .into();
            let e = if neg { -e } else { e };
            if e < 0 && base.is_zero() {
                return Err(ParseError::ZeroNegativePower { pos });
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.get(self.idx) {
            if c.is_ascii_digit() {
                s.push(c);
                self.idx += 1;
            } else {
                break;
            }
        }
        s
    }

    fn unexpected(&mut self) -> ParseError {
        match self.peek() {
            Some((pos, ch)) => ParseError::UnexpectedChar { pos, ch },
            None => ParseError::UnexpectedEnd { pos: self.len },
        }
    }

    fn atom(&mut self) -> Result<Scalar, ParseError> {
        let Some((pos, c)) = self.peek() else {
            return Err(ParseError::UnexpectedEnd { pos: self.len });
        };
        if c.is_ascii_digit() {
            let d = self.digits();
            let n: BigInt = d.parse().expect("digit string");
            return Ok(self.field.from_rational(BigRational::from_integer(n)));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&(_, ch)) = self.chars.get(self.idx) {
                if ch.is_ascii_alphanumeric() || ch == '_' {
                    name.push(ch);
                    self.idx += 1;
                } else {
                    break;
                }
            }
            if name == "zeta" {
                return Ok(self.field.zeta_pow(1));
            }
            return self
                .field
                .param(&name)
                .ok_or(ParseError::UnknownIdent { pos, name });
        }
        if c == '(' {
            self.bump();
            let v = self.expr()?;
            match self.peek() {
                Some((_, ')')) => {
                    self.bump();
                    return Ok(v);
                }
                _ => return Err(self.unexpected()),
            }
        }
        Err(ParseError::UnexpectedChar { pos, ch: c })
    }
}
