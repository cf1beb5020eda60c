//! Rational functions in `t` from strings such as `(t^2-1)/(t+3)`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? int)?
//! atom  := int | 't' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::QPoly;
use super::GerstenError;

/// Exponents beyond this are rejected to keep inputs desk-sized.
const MAX_EXPONENT: u32 = 64;

/// A fraction `num/den` with `den ≠ 0`, not necessarily reduced.
#[derive(Clone)]
struct Frac(QPoly, QPoly);

impl Frac {
    fn add(&self, o: &Frac) -> Frac {
        Frac(&(&self.0 * &o.1) + &(&o.0 * &self.1), &self.1 * &o.1)
    }
    fn neg(&self) -> Frac {
        Frac(-&self.0, self.1.clone())
    }
    fn mul(&self, o: &Frac) -> Frac {
        let f = Frac(&self.0 * &o.0, &self.1 * &o.1);
        f.reduce()
    }
    fn reduce(self) -> Frac {
        if self.0.is_zero() {
            return Frac(QPoly::zero(), QPoly::one());
        }
        let g = QPoly::gcd(&self.0, &self.1);
        Frac(self.0.exact_div(&g), self.1.exact_div(&g))
    }
}

struct Parser<'a> {
    s: &'a [u8],
    at: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, GerstenError> {
        Err(GerstenError::Parse { pos: self.at, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.at < self.s.len() && self.s[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.at) == Some(&c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.at;
        while self.at < self.s.len() && self.s[self.at].is_ascii_digit() {
            self.at += 1;
        }
        if start == self.at {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.at]).ok()?.parse().ok()
    }

    fn expr(&mut self) -> Result<Frac, GerstenError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?).reduce();
            } else if self.eat(b'-') {
                acc = acc.add(&self.term()?.neg()).reduce();
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Frac, GerstenError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let d = self.unary()?;
                if d.0.is_zero() {
                    return self.err("division by zero");
                }
                acc = acc.mul(&Frac(d.1, d.0));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Frac, GerstenError> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Frac, GerstenError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        let e = match self.int().and_then(|e| u32::try_from(e).ok()) {
            Some(e) if e <= MAX_EXPONENT => e,
            _ => return self.err("expected a small integer exponent"),
        };
        let (n, d) = (base.0.pow(e), base.1.pow(e));
        if neg {
            if n.is_zero() {
                return self.err("negative power of zero");
            }
            Ok(Frac(d, n))
        } else {
            Ok(Frac(n, d))
        }
    }

    fn atom(&mut self) -> Result<Frac, GerstenError> {
        if self.eat(b'(') {
            let e = self.expr()?;
            if !self.eat(b')') {
                return self.err("expected ')'");
            }
            return Ok(e);
        }
        if self.eat(b't') {
            return Ok(Frac(QPoly::t(), QPoly::one()));
        }
        match self.int() {
            Some(n) => Ok(Frac(QPoly::constant(BigRational::from_integer(n)), QPoly::one())),
            None => self.err("expected a number, 't' or '('"),
        }
    }
}

/// Parses to `(numerator, denominator)` in lowest terms.
pub fn parse_fraction(s: &str) -> Result<(QPoly, QPoly), GerstenError> {
    let mut p = Parser { s: s.as_bytes(), at: 0 };
    let f = p.expr()?;
    p.skip_ws();
    if p.at != p.s.len() {
        return p.err("trailing input");
    }
    let f = f.reduce();
    Ok((f.0, f.1))
}
