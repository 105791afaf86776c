//! Polynomial text grammar:
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') ['-'] term)*
//! term   := factor (('*' factor) | ('/' nat))*
//! factor := base ('^' nat)?
//! base   := nat | var | '(' expr ')'
//! ```
//!
//! `'/' nat` divides by a nonzero field constant; it is what the printer emits
//! for non-integral rationals.

use num_bigint::BigInt;

use super::field::Field;
use super::poly::{Poly, Ring};
use super::RingError;

pub fn default_names(n: usize) -> Vec<String> {
    const SHORT: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
    if n <= SHORT.len() {
        SHORT[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

pub fn parse_poly(text: &str, vars: &[String], field: Field) -> Result<Poly, RingError> {
    let ring = Ring::new(field, vars.len());
    let mut p = Parser { s: text.as_bytes(), pos: 0, vars, ring };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a [String],
    ring: Ring,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> RingError {
        RingError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, RingError> {
        let neg = self.eat(b'-');
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            let sign = match self.peek() {
                Some(b'+') => 1,
                Some(b'-') => -1,
                _ => break,
            };
            self.pos += 1;
            let inner_neg = self.eat(b'-');
            let mut t = self.term()?;
            if (sign < 0) != inner_neg {
                t = t.neg();
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, RingError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = acc.mul(&f);
            } else if self.eat(b'/') {
                let at = self.pos;
                let n = self.nat()?;
                let c = self.ring.field.from_bigint(&n);
                match self.ring.field.inv(&c) {
                    Some(i) => acc = acc.scale(&i),
                    None => return Err(RingError::DivisionInCoefficient { pos: at, literal: n.to_string() }),
                }
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, RingError> {
        let b = self.base()?;
        if self.eat(b'^') {
            let e = self.nat()?;
            let e: u32 = e.try_into().map_err(|_| self.syntax("exponent too large"))?;
            if e > u16::MAX as u32 {
                return Err(self.syntax("exponent too large"));
            }
            return Ok(b.pow(e));
        }
        Ok(b)
    }

    fn base(&mut self) -> Result<Poly, RingError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                Ok(self.ring.constant(self.ring.field.from_bigint(&n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => Err(RingError::UnknownVariable(name.to_string())),
                }
            }
            Some(_) => Err(self.syntax("expected number, variable or '('")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn nat(&mut self) -> Result<BigInt, RingError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        Ok(digits.parse().expect("digits"))
    }
}

/// Canonical text form, e.g. `x^2 + 2*x*y - 1`.
pub fn format_poly(p: &Poly, vars: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let field = p.ring().field;
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let (neg, mag) = field.signed_parts(c);
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        for (v, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(vars[v].clone()),
                _ => factors.push(format!("{}^{}", vars[v], e)),
            }
        }
        if factors.is_empty() {
            out.push_str(&mag);
        } else {
            if mag != "1" {
                out.push_str(&mag);
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(s: &[&str]) -> Vec<String> {
        s.iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn basic_parse() {
        let v = vars(&["x", "y"]);
        let p = parse_poly("x^2 + 2*x*y - 1", &v, Field::Prime(101)).unwrap();
        assert_eq!(p.terms().len(), 3);
        assert_eq!(format_poly(&p, &v), "x^2 + 2*x*y - 1");
        assert!(parse_poly("0", &v, Field::Prime(101)).unwrap().is_zero());
    }

    #[test]
    fn binomial_square_matches_expansion() {
        let v = vars(&["x", "y"]);
        let k = Field::Prime(101);
        let p = parse_poly("(x+y)^2", &v, k).unwrap();
        let q = parse_poly("x^2 + 2*x*y + y^2", &v, k).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn errors() {
        let v = vars(&["x", "y"]);
        let k = Field::Prime(101);
        assert!(matches!(parse_poly("x + t", &v, k), Err(RingError::UnknownVariable(_))));
        assert!(matches!(parse_poly("x + ", &v, k), Err(RingError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_poly("x/101", &v, k), Err(RingError::DivisionInCoefficient { .. })));
        assert!(matches!(parse_poly("(x", &v, k), Err(RingError::Syntax { .. })));
    }

    #[test]
    fn rationals_print_and_parse() {
        let v = vars(&["x"]);
        let p = parse_poly("x/2 - 3/4", &v, Field::Rational).unwrap();
        let s = format_poly(&p, &v);
        assert_eq!(s, "1/2*x - 3/4");
        assert_eq!(parse_poly(&s, &v, Field::Rational).unwrap(), p);
    }
}
