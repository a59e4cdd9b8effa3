//! Polynomial text input.
//!
//! Two forms are accepted:
//!
//! * an ascending coefficient list, `[-1, 0, 1]`, entries integers or `a/b`;
//! * an expression in `x`, e.g. `x^2 - 1`, `1/3*x^2 + 1`, `2x(x+1)^3`.
//!
//! Whitespace is ignored. Expressions support `+ - * /` (division only by
//! nonzero constants), non-negative integer powers, parentheses and
//! implicit multiplication by juxtaposition.

use num_bigint::BigInt;
use num_rational::BigRational;


use super::poly::UniPoly;
use super::rational::parse_rational;
use crate::error::{Error, Result};

const MAX_PARSED_DEGREE: usize = 1 << 16;

pub fn parse_poly(input: &str) -> Result<UniPoly> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('[') {
        parse_list(input)
    } else {
        let mut p = Parser::new(input);
        let poly = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(poly)
    }
}

fn parse_list(input: &str) -> Result<UniPoly> {
    let open = input.find('[').unwrap_or(0);
    let Some(close) = input.rfind(']') else {
        return Err(Error::Parse {
            offset: input.len(),
            message: "missing closing ']'".into(),
        });
    };
    if !input[close + 1..].trim().is_empty() {
        return Err(Error::Parse {
            offset: close + 1,
            message: "unexpected trailing input".into(),
        });
    }
    let body = &input[open + 1..close];
    if body.trim().is_empty() {
        return Ok(UniPoly::zero());
    }
    let mut offset = open + 1;
    let mut coeffs = Vec::new();
    for entry in body.split(',') {
        let c = parse_rational(entry).map_err(|_| Error::Parse {
            offset,
            message: format!("bad coefficient {:?}", entry.trim()),
        })?;
        coeffs.push(c);
        offset += entry.len() + 1;
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { src: s.as_bytes(), pos: 0 }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: msg.to_string(),
        }
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

    fn expr(&mut self) -> Result<UniPoly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<UniPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if d.deg() > 0 {
                        return Err(self.error("division by a non-constant"));
                    }
                    if d.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    acc = acc.scale(&d.coeff(0).recip());
                }
                Some(c) if c == b'x' || c == b'X' || c == b'(' || c.is_ascii_digit() => {
                    acc = &acc * &self.power()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<UniPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<UniPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                self.pos = start;
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let e: usize = digits
                .parse()
                .ok()
                .filter(|&e| base.deg().saturating_mul(e) <= MAX_PARSED_DEGREE)
                .ok_or_else(|| self.error("exponent too large"))?;
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<UniPoly> {
        match self.peek() {
            Some(b'x') | Some(b'X') => {
                self.pos += 1;
                Ok(UniPoly::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().map_err(|_| self.error("bad integer"))?;
                Ok(UniPoly::constant(BigRational::from_integer(n)))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses a comma-separated list of positive integers, e.g. `2,3,5`.
pub fn parse_int_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim().parse::<u64>().map_err(|_| Error::Parse {
                offset: 0,
                message: format!("not a non-negative integer: {:?}", t.trim()),
            })
        })
        .collect()
}


#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> UniPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn list_and_expression_agree() {
        assert_eq!(p("[-1, 0, 1]"), p("x^2 - 1"));
        assert_eq!(p("[ 1/2 , -3/4 ]"), p("-3/4 x + 1/2"));
        assert_eq!(p("x^2/3 + 1"), p("[1, 0, 1/3]"));
        assert_eq!(p("  x ^ 2-1 "), p("x^2-1"));
        assert_eq!(p("2x(x+1)"), p("2x^2 + 2x"));
        assert_eq!(p("(x-1)^3"), p("x^3 - 3x^2 + 3x - 1"));
        assert_eq!(p("-x^2"), p("[0, 0, -1]"));
        assert_eq!(p("[]"), UniPoly::zero());
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["x^2 -", "x^", "x^2 + y", "(x+1", "x/(x+1)", "1/0", "[1, 2", "[1, a]", ""] {
            let err = parse_poly(bad).unwrap_err();
            assert!(matches!(err, Error::Parse { .. }), "{bad:?} gave {err:?}");
        }
    }

    #[test]
    fn int_lists() {
        assert_eq!(parse_int_list("2, 3,5").unwrap(), vec![2, 3, 5]);
        assert!(parse_int_list("2,,3").is_err());
    }
}
