//! Divisors, tame symbols and 0-cycles on ℙ¹ over ℚ.
//!
//! Closed points are `∞` and monic irreducible polynomials in `t`. A
//! rational function is kept fully factored, so orders of vanishing are
//! exponent lookups. The tame symbol at `p` is the residue of
//! `(−1)^{ab} f^b / g^a` with `a = ord_p f`, `b = ord_p g`; norms from
//! `ℚ[t]/(p)` are resultants.

mod factor;
mod parse;
mod poly;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::format_rational;

pub use factor::{factor, is_irreducible, is_prime, MAX_FACTOR_DEGREE};
pub use parse::parse_fraction;
pub use poly::{resultant, QPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GerstenError {
    #[error("the zero function has no divisor")]
    ZeroFunction,
    #[error("{0} is not irreducible over Q")]
    NotIrreducible(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    TooLarge(String),
}

/// A closed point of ℙ¹_ℚ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Finite(QPoly),
}

impl Place {
    /// The place of an irreducible polynomial, normalized to be monic.
    pub fn finite(p: &QPoly) -> Result<Place, GerstenError> {
        if !is_irreducible(p)? {
            return Err(GerstenError::NotIrreducible(p.to_string()));
        }
        Ok(Place::Finite(p.monic()))
    }

    /// `inf` or a polynomial expression.
    pub fn parse(s: &str) -> Result<Place, GerstenError> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Place::Infinity);
        }
        let (num, den) = parse_fraction(s)?;
        if !den.is_constant() {
            return Err(GerstenError::Parse { pos: 0, msg: "a place is a polynomial, not a fraction".into() });
        }
        Place::finite(&num)
    }

    /// Degree of the residue field.
    pub fn degree(&self) -> usize {
        match self {
            Place::Infinity => 1,
            Place::Finite(p) => p.deg(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// A nonzero rational function `c · Π q^e` with monic irreducible `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    content: BigRational,
    factors: BTreeMap<QPoly, i64>,
}

impl RatFn {
    pub fn constant(c: BigRational) -> Result<Self, GerstenError> {
        if c.is_zero() {
            return Err(GerstenError::ZeroFunction);
        }
        Ok(RatFn { content: c, factors: BTreeMap::new() })
    }

    pub fn one() -> Self {
        RatFn { content: BigRational::one(), factors: BTreeMap::new() }
    }

    pub fn from_poly(p: &QPoly) -> Result<Self, GerstenError> {
        let (c, fs) = factor(p)?;
        Ok(RatFn { content: c, factors: fs.into_iter().map(|(q, e)| (q, e as i64)).collect() })
    }

    pub fn from_fraction(num: &QPoly, den: &QPoly) -> Result<Self, GerstenError> {
        if den.is_zero() {
            return Err(GerstenError::Parse { pos: 0, msg: "division by zero".into() });
        }
        Ok(Self::from_poly(num)?.div(&Self::from_poly(den)?))
    }

    pub fn parse(s: &str) -> Result<Self, GerstenError> {
        let (num, den) = parse_fraction(s)?;
        Self::from_fraction(&num, &den)
    }

    /// Builds `c · Π q^e` from factors already known to be monic irreducible.
    pub fn from_factors(content: BigRational, factors: impl IntoIterator<Item = (QPoly, i64)>) -> Result<Self, GerstenError> {
        let mut f = Self::constant(content)?;
        for (q, e) in factors {
            f.bump(q, e);
        }
        Ok(f)
    }

    fn bump(&mut self, q: QPoly, e: i64) {
        let slot = self.factors.entry(q).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.retain(|_, e| *e != 0);
        }
    }

    pub fn content(&self) -> &BigRational {
        &self.content
    }

    pub fn factors(&self) -> &BTreeMap<QPoly, i64> {
        &self.factors
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        let mut out = RatFn { content: &self.content * &other.content, factors: self.factors.clone() };
        for (q, &e) in &other.factors {
            out.bump(q.clone(), e);
        }
        out
    }

    pub fn inv(&self) -> RatFn {
        RatFn { content: self.content.recip(), factors: self.factors.iter().map(|(q, e)| (q.clone(), -e)).collect() }
    }

    pub fn div(&self, other: &RatFn) -> RatFn {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: i64) -> RatFn {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let k = e.unsigned_abs();
        RatFn {
            content: num_traits::pow(base.content.clone(), k as usize),
            factors: base.factors.iter().map(|(q, x)| (q.clone(), x * k as i64)).collect(),
        }
    }

    pub fn neg(&self) -> RatFn {
        RatFn { content: -&self.content, factors: self.factors.clone() }
    }

    /// Numerator and denominator with the content on the numerator.
    pub fn expand(&self) -> (QPoly, QPoly) {
        let mut num = QPoly::constant(self.content.clone());
        let mut den = QPoly::one();
        for (q, &e) in &self.factors {
            if e > 0 {
                num = &num * &q.pow(e as u32);
            } else {
                den = &den * &q.pow((-e) as u32);
            }
        }
        (num, den)
    }

    /// `self + other`, or `None` when the sum vanishes.
    pub fn add(&self, other: &RatFn) -> Result<Option<RatFn>, GerstenError> {
        let (n1, d1) = self.expand();
        let (n2, d2) = other.expand();
        let num = &(&n1 * &d2) + &(&n2 * &d1);
        if num.is_zero() {
            return Ok(None);
        }
        Ok(Some(Self::from_fraction(&num, &(&d1 * &d2))?))
    }

    /// `1 − self`, or `None` when `self = 1`.
    pub fn one_minus(&self) -> Result<Option<RatFn>, GerstenError> {
        RatFn::one().add(&self.neg())
    }

    pub fn ord(&self, p: &Place) -> i64 {
        match p {
            Place::Infinity => -self.factors.iter().map(|(q, e)| e * q.deg() as i64).sum::<i64>(),
            Place::Finite(q) => self.factors.get(q).copied().unwrap_or(0),
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.expand();
        if den.is_constant() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/({den})")
        }
    }
}

/// A 0-cycle `Σ n_p [p]`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Cycle0(BTreeMap<Place, i64>);

impl Cycle0 {
    pub fn zero() -> Self {
        Cycle0(BTreeMap::new())
    }

    pub fn point(p: Place, n: i64) -> Self {
        let mut z = Self::zero();
        z.bump(p, n);
        z
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Place, i64)>) -> Self {
        let mut z = Self::zero();
        for (p, n) in terms {
            z.bump(p, n);
        }
        z
    }

    fn bump(&mut self, p: Place, n: i64) {
        let slot = self.0.entry(p).or_insert(0);
        *slot += n;
        if *slot == 0 {
            self.0.retain(|_, n| *n != 0);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Place, i64> {
        &self.0
    }

    pub fn coeff(&self, p: &Place) -> i64 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Cycle0) -> Cycle0 {
        let mut out = self.clone();
        for (p, &n) in &other.0 {
            out.bump(p.clone(), n);
        }
        out
    }

    pub fn neg(&self) -> Cycle0 {
        Cycle0(self.0.iter().map(|(p, n)| (p.clone(), -n)).collect())
    }

    pub fn sub(&self, other: &Cycle0) -> Cycle0 {
        self.add(&other.neg())
    }
}

impl fmt::Display for Cycle0 {
    /// `n1*[p1] + n2*[p2] - …`, places sorted by their printed form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(String, i64)> = self.0.iter().map(|(p, &n)| (p.to_string(), n)).collect();
        terms.sort();
        for (i, (p, n)) in terms.iter().enumerate() {
            match (i, *n < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}*[{p}]", n.abs())?;
        }
        Ok(())
    }
}

/// `div f = Σ ord_p(f) [p]`.
pub fn divisor(f: &RatFn) -> Cycle0 {
    let mut z = Cycle0::from_terms(f.factors.iter().map(|(q, &e)| (Place::Finite(q.clone()), e)));
    z.bump(Place::Infinity, f.ord(&Place::Infinity));
    z
}

/// `Σ n_p · deg p`.
pub fn degree(z: &Cycle0) -> i64 {
    z.0.iter().map(|(p, n)| n * p.degree() as i64).sum()
}

/// A function with `div f = z′ − z`, if the degrees agree.
pub fn hom_witness(z: &Cycle0, z2: &Cycle0) -> Option<RatFn> {
    if degree(z) != degree(z2) {
        return None;
    }
    let diff = z2.sub(z);
    let mut f = RatFn::one();
    for (p, &n) in &diff.0 {
        if let Place::Finite(q) = p {
            f.bump(q.clone(), n);
        }
    }
    Some(f)
}

/// A nonzero element of the residue field at a place, reduced modulo the
/// place (a constant at `∞`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueUnit {
    pub place: Place,
    pub value: QPoly,
}

impl ResidueUnit {
    /// `N_{k(p)/ℚ}`. The modulus is monic, so this is `Res(p, value)`.
    pub fn norm(&self) -> BigRational {
        match &self.place {
            Place::Infinity => self.value.coeff(0),
            Place::Finite(p) => resultant(p, &self.value),
        }
    }
}

impl fmt::Display for ResidueUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.place {
            Place::Finite(p) if p.deg() > 1 => write!(f, "{} mod {p}", self.value),
            _ => write!(f, "{}", format_rational(&self.value.coeff(0))),
        }
    }
}

/// Residue of a function with `ord_p = 0`.
fn residue(h: &RatFn, p: &Place) -> ResidueUnit {
    match p {
        // Each monic q of degree n is t^n · q̃(1/t) with q̃(0) = 1, and the
        // t-powers cancel since ord_∞ h = 0; only the content survives.
        Place::Infinity => ResidueUnit { place: p.clone(), value: QPoly::constant(h.content.clone()) },
        Place::Finite(m) => {
            let mut acc = QPoly::constant(h.content.clone());
            for (q, &e) in &h.factors {
                let r = q.rem(m);
                let r = if e < 0 { r.inverse_mod(m).expect("distinct irreducibles are coprime") } else { r };
                acc = (&acc * &r.pow(e.unsigned_abs() as u32)).rem(m);
            }
            ResidueUnit { place: p.clone(), value: acc }
        }
    }
}

/// `∂_p(f, g)`.
pub fn tame_symbol(f: &RatFn, g: &RatFn, p: &Place) -> ResidueUnit {
    let (a, b) = (f.ord(p), g.ord(p));
    let mut h = f.pow(b).div(&g.pow(a));
    if (a * b) % 2 != 0 {
        h = h.neg();
    }
    residue(&h, p)
}

/// Places where `f` or `g` has a zero or pole, plus `∞`.
pub fn support(f: &RatFn, g: &RatFn) -> Vec<Place> {
    let mut places: Vec<Place> = f.factors.keys().chain(g.factors.keys()).map(|q| Place::Finite(q.clone())).collect();
    places.push(Place::Infinity);
    places.sort();
    places.dedup();
    places
}

/// `Π_p N(∂_p(f, g))`, which Weil reciprocity says is 1.
pub fn weil_product(f: &RatFn, g: &RatFn) -> BigRational {
    support(f, g).iter().map(|p| tame_symbol(f, g, p).norm()).product()
}

pub fn weil_reciprocity_check(f: &RatFn, g: &RatFn) -> bool {
    weil_product(f, g).is_one()
}

/// `c_1(O(d)) ∩ [ℙ¹]` via the rational section `s`: `div s + d·[∞]`.
pub fn c1_cap(d: i64, s: &RatFn) -> Cycle0 {
    divisor(s).add(&Cycle0::point(Place::Infinity, d))
}

pub fn c1_additivity_check(d: i64, e: i64, s: &RatFn, s2: &RatFn) -> bool {
    c1_cap(d + e, &s.mul(s2)) == c1_cap(d, s).add(&c1_cap(e, s2))
}

/// Degree map to the point.
pub fn pushforward_point(z: &Cycle0) -> i64 {
    degree(z)
}
