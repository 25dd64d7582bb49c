//! Text grammar for integer bivariate polynomials.
//!
//! ```text
//! poly   := term (("+"|"-") term)*
//! term   := sign? integer? factor (("*"|"/")? factor)*
//! factor := ("x"|"y") ("^" integer)? | "(" poly ")" ("^" integer)? | integer
//! ```
//!
//! Whitespace is ignored and juxtaposition multiplies. A `/` divides the
//! product so far by the next factor and must be exact over ℤ[x, y].

use num_bigint::BigInt;
use num_traits::Zero;

use super::bipoly::BiPoly;
use crate::error::{Error, Result};

/// Parses `text` into an exact polynomial. The zero polynomial is rejected.
pub fn parse_poly(text: &str) -> Result<BiPoly> {
    let mut p = Parser::new(text);
    let poly = p.poly()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.err(format!("unexpected `{c}`")));
    }
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(poly)
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    idx: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.char_indices().collect(),
            idx: 0,
            src,
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.idx).map_or(self.src.len(), |c| c.0)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.idx).is_some_and(|c| c.1.is_whitespace()) {
            self.idx += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.idx).map(|c| c.1)
    }

    fn bump(&mut self) {
        self.idx += 1;
    }

    fn poly(&mut self) -> Result<BiPoly> {
        let mut acc = BiPoly::zero_unchecked();
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some('+') => {
                    self.bump();
                    false
                }
                Some('-') => {
                    self.bump();
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly> {
        let start = self.pos();
        let mut acc = match self.peek() {
            Some(c) if starts_factor(c) => self.factor()?,
            _ => return Err(self.err("expected a term")),
        };
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some('/') => {
                    self.bump();
                    let at = self.pos();
                    let f = self.factor()?;
                    acc = acc.div_exact(&f).ok_or(Error::Syntax {
                        pos: at,
                        msg: "division is not exact over the integers".into(),
                    })?;
                }
                Some(c) if starts_factor(c) => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => break,
            }
        }
        debug_assert!(self.pos() > start);
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BiPoly> {
        let base = match self.peek() {
            Some('x') => {
                self.bump();
                BiPoly::x()
            }
            Some('y') => {
                self.bump();
                BiPoly::y()
            }
            Some('(') => {
                self.bump();
                let inner = self.poly()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.bump();
                inner
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                // no exponent on integer literals
                return Ok(BiPoly::constant_unchecked(n));
            }
            Some(c) => return Err(self.err(format!("unexpected `{c}`"))),
            None => return Err(self.err("unexpected end of input")),
        };
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            if !self.chars.get(self.idx).is_some_and(|c| c.1.is_ascii_digit()) {
                return Err(self.err("exponent must be a nonnegative integer"));
            }
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.idx;
        let mut n = BigInt::zero();
        while let Some(&(_, c)) = self.chars.get(self.idx) {
            let Some(d) = c.to_digit(10) else { break };
            n = n * 10u32 + d;
            self.idx += 1;
        }
        if self.idx == start {
            return Err(self.err("expected an integer"));
        }
        if let Some(&(_, c)) = self.chars.get(self.idx) {
            if c == '.' || c == 'e' || c == 'E' {
                let from = self.chars[start].0;
                let mut end = self.idx + 1;
                while self
                    .chars
                    .get(end)
                    .is_some_and(|c| c.1.is_ascii_digit() || c.1 == '.')
                {
                    end += 1;
                }
                let to = self.chars.get(end).map_or(self.src.len(), |c| c.0);
                return Err(Error::NonInteger(self.src[from..to].to_string()));
            }
        }
        Ok(n)
    }
}

fn starts_factor(c: char) -> bool {
    c == 'x' || c == 'y' || c == '(' || c.is_ascii_digit()
}
