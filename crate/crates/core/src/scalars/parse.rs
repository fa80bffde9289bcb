use num_bigint::BigInt;

use super::monomial::{Monomial, Symbol};
use super::poly::{Coeff, LaurentPoly};
use super::ratfn::RationalFn;
use super::ScalarError;

/// Parse an expression such as `1 + q*z2/z1`, `(1-q1)^-1*t1`, `q1^(1/2)`.
///
/// `q` is read as `q1*q2`; `z`/`u` alone mean `z1`. Only `q1` may be raised to
/// a half-integral power.
pub fn parse_ratfn(src: &str) -> Result<RationalFn, ScalarError> {
    let mut p = Parser {
        chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Parse an expression that must be a Laurent polynomial.
pub fn parse_poly(src: &str) -> Result<LaurentPoly, ScalarError> {
    let r = parse_ratfn(src)?.reduce();
    r.as_poly()
        .cloned()
        .ok_or_else(|| ScalarError::Parse(format!("`{src}` is not a Laurent polynomial")))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFn, ScalarError> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
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

    fn term(&mut self) -> Result<RationalFn, ScalarError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                acc = acc.div(&self.power()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<RationalFn, ScalarError> {
        let (base, sym) = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let (num, den) = self.exponent()?;
        if den == 1 {
            return base.pow(num as i32);
        }
        // Half-integral powers exist only for q1 itself.
        if den == 2 && sym == Some(Symbol::Q1) {
            return Ok(RationalFn::mono(Monomial::q1_half(num as i32)));
        }
        Err(ScalarError::HalfExponent)
    }

    fn exponent(&mut self) -> Result<(i64, i64), ScalarError> {
        if self.eat('(') {
            let neg = self.eat('-');
            let n = self.integer()?;
            let d = if self.eat('/') { self.integer()? } else { 1 };
            if !self.eat(')') {
                return Err(self.err("expected `)`"));
            }
            if d == 0 {
                return Err(self.err("zero denominator in exponent"));
            }
            let n = if neg { -n } else { n };
            let g = num_integer::gcd(n, d);
            return Ok((n / g, d / g));
        }
        let neg = self.eat('-');
        let n = self.integer()?;
        Ok((if neg { -n } else { n }, 1))
    }

    fn integer(&mut self) -> Result<i64, ScalarError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<(RationalFn, Option<Symbol>), ScalarError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok((v, None))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let n: BigInt = s.parse().map_err(|_| self.err("bad integer"))?;
                Ok((RationalFn::constant(Coeff::from_integer(n)), None))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if name == "q" {
                    return Ok((RationalFn::mono(super::q()), None));
                }
                let s = Symbol::parse(&name)?;
                Ok((RationalFn::var(s), Some(s)))
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}
