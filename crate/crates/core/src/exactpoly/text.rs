//! Text form of polynomials: `x^7 + 7/2x^5y + 7/2xy + 7/2xy^5 + y^7`.
//!
//! A term is `[coef]["x"["^"int]]["y"["^"int]]` where `coef` is `int` or
//! `int/int` and defaults to 1. Terms are joined by ` + ` or ` - `. Terms are
//! printed by descending power of `x`, then ascending power of `y`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{BivariatePoly, Monomial};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse polynomial at byte {position}: {message}")]
pub struct ParsePolyError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|(a, _), (b, _)| b.j.cmp(&a.j).then(a.k.cmp(&b.k)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if *m == Monomial::ONE {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{magnitude}{m}")?;
            }
        }
        Ok(())
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> ParsePolyError {
        ParsePolyError { position: self.pos, message: message.into() }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn exponent(&mut self) -> Result<u32, ParsePolyError> {
        self.skip_ws();
        if !self.eat(b'^') {
            return Ok(1);
        }
        self.skip_ws();
        let digits = self.digits().ok_or_else(|| self.error("expected exponent"))?;
        digits.parse().map_err(|_| self.error("exponent out of range"))
    }

    fn term(&mut self) -> Result<(Monomial, Rational), ParsePolyError> {
        self.skip_ws();
        let mut coef: Option<Rational> = None;
        if let Some(num) = self.digits() {
            let num: BigInt = num.parse().expect("digits");
            self.skip_ws();
            let den: BigInt = if self.eat(b'/') {
                self.skip_ws();
                let den = self.digits().ok_or_else(|| self.error("expected denominator"))?;
                den.parse().expect("digits")
            } else {
                BigInt::from(1)
            };
            if den == BigInt::from(0) {
                return Err(self.error("zero denominator"));
            }
            coef = Some(Rational::from_ratio(num, den));
        }
        self.skip_ws();
        let mut m = Monomial::ONE;
        let mut has_var = false;
        if self.eat(b'x') {
            m.j = self.exponent()?;
            has_var = true;
            self.skip_ws();
        }
        if self.eat(b'y') {
            m.k = self.exponent()?;
            has_var = true;
        }
        if coef.is_none() && !has_var {
            return Err(self.error("expected a term"));
        }
        Ok((m, coef.unwrap_or_else(Rational::one)))
    }
}

impl FromStr for BivariatePoly {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor { bytes: s.as_bytes(), pos: 0 };
        let mut terms = Vec::new();
        cur.skip_ws();
        let mut negative = cur.eat(b'-');
        if !negative {
            cur.eat(b'+');
        }
        loop {
            let (m, c) = cur.term()?;
            terms.push((m, if negative { -c } else { c }));
            cur.skip_ws();
            match cur.peek() {
                None => break,
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(_) => return Err(cur.error("expected '+' or '-'")),
            }
            cur.pos += 1;
        }
        Ok(BivariatePoly::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn table_row_roundtrip() {
        let s = "x^7 + 7/2x^5y + 7/2xy + 7/2xy^5 + y^7";
        let p: BivariatePoly = s.parse().unwrap();
        assert_eq!(p.term_count(), 5);
        assert_eq!(p.coeff(Monomial::new(1, 1)), Rational::new(7, 2));
        assert_eq!(p.to_string(), s);
    }

    #[test]
    fn signs_and_constants() {
        let p: BivariatePoly = "x^2 + 2y - y^2".parse().unwrap();
        assert_eq!(p.coeff(Monomial::new(0, 2)), -Rational::one());
        assert_eq!(p.to_string(), "x^2 + 2y - y^2");
        let q: BivariatePoly = "-1 + x".parse().unwrap();
        assert_eq!(q.to_string(), "x - 1");
        assert_eq!("x + x".parse::<BivariatePoly>().unwrap().to_string(), "2x");
        assert_eq!("x - x".parse::<BivariatePoly>().unwrap().to_string(), "0");
        assert_eq!("3 x^2 y".parse::<BivariatePoly>().unwrap().to_string(), "3x^2y");
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x +", "yx", "2/0x", "x^", "z", "x ++ y", "1/x"] {
            assert!(bad.parse::<BivariatePoly>().is_err(), "{bad:?} parsed");
        }
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(terms in prop::collection::vec((0u32..6, 0u32..6, -50i64..50, 1i64..9), 0..8)) {
            let p = BivariatePoly::from_terms(
                terms.into_iter().map(|(j, k, n, d)| (Monomial::new(j, k), Rational::new(n, d))),
            );
            let back: BivariatePoly = p.to_string().parse().unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
