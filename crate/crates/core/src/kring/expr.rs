//! Element expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' int)?
//! atom   := int | var | 'O(' ints ')' | '(' expr ')'
//!         | ('psi' | 'lambda' | 'gamma' | 'eigen') '(' int ',' expr ')'
//!         | ('rank' | 'fildeg') '(' expr ')'
//! ```
//!
//! Variables are `x` on a single factor and `x1, x2, …` otherwise. Division
//! is by elements of nonzero rank. Printed elements parse back to themselves.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{
    adams, adams_eigenspace, gamma_filtration_degree, gamma_op, lambda_op, twisting_sheaf, FilDegree, KElement,
    KError, KRing,
};

/// Bounds applied while evaluating.
#[derive(Debug, Clone, Copy)]
pub struct EvalLimits {
    /// Largest k accepted by psi, lambda and gamma.
    pub max_index: i64,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits { max_index: 24 }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, KError> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Int(text.parse().unwrap())));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|(_, c)| c).collect())));
        } else if "+-*/^(),".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(KError::Parse { pos, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a KRing,
    limits: EvalLimits,
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, KError> {
        Err(KError::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), KError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn small_int(&mut self) -> Result<i64, KError> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                let n = if neg { -n } else { n };
                i64::try_from(n).or_else(|_| self.err("integer out of range"))
            }
            _ => self.err("expected an integer"),
        }
    }

    fn index(&mut self, name: &str) -> Result<i64, KError> {
        let k = self.small_int()?;
        if k > self.limits.max_index {
            return self.err(format!("{name} index {k} exceeds the limit {}", self.limits.max_index));
        }
        Ok(k)
    }

    fn expr(&mut self) -> Result<KElement, KError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<KElement, KError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let pos = self.pos();
                let d = self.unary()?;
                let inv = d.inverse().map_err(|_| KError::Parse { pos, msg: "division by an element of rank 0".into() })?;
                acc = &acc * &inv;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<KElement, KError> {
        if self.eat('-') {
            Ok(-&self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<KElement, KError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.small_int()?;
            if e < 0 {
                return match base.inverse() {
                    Ok(inv) => Ok(inv.pow(e.unsigned_abs())),
                    Err(_) => self.err("negative power of an element of rank 0"),
                };
            }
            return Ok(base.pow(e as u64));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<KElement, KError> {
        let tok = match self.peek().cloned() {
            Some(t) => t,
            None => return self.err("unexpected end of input"),
        };
        match tok {
            Tok::Int(n) => {
                self.at += 1;
                Ok(KElement::constant(self.ring, BigRational::from_integer(n)))
            }
            Tok::Sym('(') => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.at += 1;
                self.named(&name)
            }
            Tok::Sym(c) => self.err(format!("unexpected '{c}'")),
        }
    }

    fn named(&mut self, name: &str) -> Result<KElement, KError> {
        let ring = self.ring;
        match name {
            "O" => {
                self.expect('(')?;
                let mut twists = Vec::new();
                if !self.eat(')') {
                    loop {
                        twists.push(self.small_int()?);
                        if self.eat(')') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                if twists.len() != ring.num_factors() {
                    return self.err(format!("O(...) needs {} twists on {ring}", ring.num_factors()));
                }
                twisting_sheaf(ring, &twists)
            }
            "psi" | "lambda" | "gamma" | "eigen" => {
                self.expect('(')?;
                let k = if name == "eigen" { self.small_int()? } else { self.index(name)? };
                self.expect(',')?;
                let u = self.expr()?;
                self.expect(')')?;
                match name {
                    "psi" => adams(k, &u),
                    "lambda" => lambda_op(k, &u),
                    "gamma" => gamma_op(k, &u),
                    _ => adams_eigenspace(&u, k),
                }
            }
            "rank" | "fildeg" => {
                self.expect('(')?;
                let u = self.expr()?;
                self.expect(')')?;
                if name == "rank" {
                    return Ok(KElement::constant(ring, u.rank()));
                }
                match gamma_filtration_degree(&u) {
                    FilDegree::Finite(d) => Ok(KElement::int(ring, d as i64)),
                    FilDegree::Infinite => Err(KError::Eval("fildeg of 0 is infinite".into())),
                }
            }
            var => {
                let m = ring.num_factors();
                let i = if var == "x" && m == 1 {
                    0
                } else if let Some(i) = var.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
                    if i == 0 || i > m {
                        return self.err(format!("no variable {var} on {ring}"));
                    }
                    i - 1
                } else {
                    return self.err(format!("unknown name {var:?}"));
                };
                Ok(KElement::var(ring, i))
            }
        }
    }
}

/// Parses and evaluates an element expression on `ring`.
pub fn parse_element(ring: &KRing, s: &str, limits: EvalLimits) -> Result<KElement, KError> {
    let toks = lex(s)?;
    let mut p = Parser { ring, limits, toks, at: 0, end: s.len() };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
