//! Reader for the textual form of field elements.
//!
//! Accepts integers, `u`, `q` (= u^2), `+ - * /`, integer powers `^n`
//! (negative allowed) and parentheses, so every string produced by
//! `Display` reads back to the same element.

use std::str::FromStr;

use super::field::FieldElement;
use crate::error::{Error, Result};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{} at offset {} in `{}`",
            msg,
            self.pos,
            String::from_utf8_lossy(self.s)
        ))
    }

    fn expr(&mut self) -> Result<FieldElement> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElement> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.checked_div(&d)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FieldElement> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<FieldElement> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.signed_int()?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i64> {
        let mut neg = false;
        loop {
            match self.peek() {
                Some(b'-') => {
                    neg = !neg;
                    self.pos += 1;
                }
                Some(b'+') => self.pos += 1,
                _ => break,
            }
        }
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let v = self.signed_int()?;
            if self.peek() != Some(b')') {
                return Err(self.err("expected `)`"));
            }
            self.pos += 1;
            return Ok(if neg { -v } else { v });
        }
        let digits = self.digits()?;
        let v: i64 = digits
            .parse()
            .map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<FieldElement> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'u') => {
                self.pos += 1;
                Ok(FieldElement::upow(1))
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(FieldElement::q())
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                let n: num_bigint::BigInt = d.parse().map_err(|_| self.err("bad integer"))?;
                Ok(FieldElement::from_rational(
                    num_rational::BigRational::from_integer(n),
                ))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub fn parse_field(s: &str) -> Result<FieldElement> {
    let mut p = Parser {
        s: s.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

impl FromStr for FieldElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_field(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_simple_forms() {
        assert_eq!(parse_field("q").unwrap(), FieldElement::q());
        assert_eq!(parse_field("u^-3").unwrap(), FieldElement::upow(-3));
        assert_eq!(parse_field("3/2").unwrap(), FieldElement::ratio(3, 2));
        assert_eq!(parse_field("-1").unwrap(), FieldElement::from_int(-1));
        assert_eq!(
            parse_field("(1 - q^2)/(1 - q)").unwrap(),
            parse_field("1 + u^2").unwrap()
        );
    }

    #[test]
    fn round_trips_display() {
        for s in [
            "(-3/2*u^-4 + 1)/(1 + u^2)",
            "-1/2*u^-3 + 7",
            "0",
            "(u^5)/(1 - 2*u + u^3)",
        ] {
            let x = parse_field(s).unwrap();
            assert_eq!(parse_field(&x.to_string()).unwrap(), x);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_field("1 +").is_err());
        assert!(parse_field("x").is_err());
        assert!(parse_field("1/(q - q)").is_err());
    }
}
