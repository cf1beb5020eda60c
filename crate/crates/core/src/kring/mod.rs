//! Rational K₀ of points, projective spaces and their products.
//!
//! The ring with factors `d_1..d_m` is `ℚ[x_1..x_m] / (x_i^{d_i+1})`, where
//! `x_i = 1 − ℓ_i` and `ℓ_i` is the class of `O(−1)` pulled back from the
//! i-th factor. Elements are stored densely in this normal form.

mod expr;

use std::fmt;
use std::ops;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{binomial, format_rational};
use crate::lambda::{self, CommRing, RationalAlgebra, TruncSeries};

pub use expr::{parse_element, EvalLimits};

/// Upper bound on the number of stored coefficients of a presentation.
pub const MAX_MONOMIALS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KError {
    #[error("bad ring selector {0:?}; expected pt, P<n> or P<n>xP<m>...")]
    BadRing(String),
    #[error("ring too large: {0}")]
    TooLarge(String),
    #[error("{0}")]
    BadIndex(String),
    #[error("expected {expected} exponents, got {got}")]
    ExponentLength { expected: usize, got: usize },
    #[error("element must have rank 0, has rank {0}")]
    RankNotZero(String),
    #[error("split element has a negative part")]
    NegativePart,
    #[error("Koszul class needs at least one line")]
    EmptyKoszul,
    #[error("{lines} lines exceed the dimension {dim}")]
    TooManyLines { lines: usize, dim: usize },
    #[error("element of rank 0 is not invertible")]
    NotInvertible,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Eval(String),
}

/// `ℚ[x_1..x_m] / (x_i^{d_i+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KRingPresentation {
    factors: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

/// Shared handle to a presentation; also the [`CommRing`] context.
pub type KRing = Arc<KRingPresentation>;

impl KRingPresentation {
    pub fn new(factors: Vec<usize>) -> Result<KRing, KError> {
        let mut size: usize = 1;
        let mut strides = vec![0; factors.len()];
        for i in (0..factors.len()).rev() {
            strides[i] = size;
            size = size
                .checked_mul(factors[i] + 1)
                .filter(|&s| s <= MAX_MONOMIALS)
                .ok_or_else(|| KError::TooLarge(format!("more than {MAX_MONOMIALS} monomials")))?;
        }
        Ok(Arc::new(KRingPresentation { factors, strides, size }))
    }

    /// `pt`, `P<n>`, or `P<n>xP<m>x…`.
    pub fn parse(s: &str) -> Result<KRing, KError> {
        let s = s.trim();
        if s == "pt" {
            return Self::new(vec![]);
        }
        let bad = || KError::BadRing(s.to_string());
        let factors = s
            .split('x')
            .map(|part| {
                let n = part.strip_prefix('P').ok_or_else(bad)?;
                if n.is_empty() || !n.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                n.parse::<usize>().map_err(|_| bad())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(factors)
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// Σ d_i, the dimension of the modelled variety.
    pub fn dimension(&self) -> usize {
        self.factors.iter().sum()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn exponents(&self, index: usize) -> Vec<usize> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| (index / s) % (d + 1))
            .collect()
    }

    pub fn index(&self, exps: &[usize]) -> Option<usize> {
        if exps.len() != self.factors.len() {
            return None;
        }
        let mut idx = 0;
        for ((&e, &d), &s) in exps.iter().zip(&self.factors).zip(&self.strides) {
            if e > d {
                return None;
            }
            idx += e * s;
        }
        Some(idx)
    }

    fn total_degree(&self, index: usize) -> usize {
        self.exponents(index).iter().sum()
    }

    /// Variable names used for display and parsing.
    pub fn var_name(&self, i: usize) -> String {
        self.named_var("x", i)
    }

    /// `base` on a single factor, `base1, base2, …` otherwise.
    pub fn named_var(&self, base: &str, i: usize) -> String {
        if self.factors.len() == 1 {
            base.to_string()
        } else {
            format!("{base}{}", i + 1)
        }
    }
}

impl fmt::Display for KRingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "pt");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("P{d}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// An element of a [`KRingPresentation`] in normal form.
///
/// Arithmetic between elements of different presentations panics.
#[derive(Clone)]
pub struct KElement {
    ring: KRing,
    coeffs: Vec<BigRational>,
}

impl PartialEq for KElement {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KElement[{}]({})", self.ring, self)
    }
}

impl KElement {
    pub fn zero(ring: &KRing) -> Self {
        KElement { ring: ring.clone(), coeffs: vec![BigRational::zero(); ring.size] }
    }

    pub fn constant(ring: &KRing, c: BigRational) -> Self {
        let mut e = Self::zero(ring);
        e.coeffs[0] = c;
        e
    }

    pub fn int(ring: &KRing, n: i64) -> Self {
        Self::constant(ring, BigRational::from_integer(n.into()))
    }

    pub fn one(ring: &KRing) -> Self {
        Self::int(ring, 1)
    }

    /// Coefficients indexed as in [`KRingPresentation::exponents`].
    pub fn from_coeffs(ring: &KRing, coeffs: Vec<BigRational>) -> Self {
        assert_eq!(coeffs.len(), ring.size, "coefficient vector has the wrong length");
        KElement { ring: ring.clone(), coeffs }
    }

    /// The generator `x_i = 1 − ℓ_i` (zero on a ℙ⁰ factor).
    pub fn var(ring: &KRing, i: usize) -> Self {
        let mut exps = vec![0; ring.num_factors()];
        exps[i] = 1;
        Self::monomial(ring, &exps, BigRational::one())
    }

    /// `c · x^exps`, or zero if the monomial is truncated away.
    pub fn monomial(ring: &KRing, exps: &[usize], c: BigRational) -> Self {
        let mut e = Self::zero(ring);
        if let Some(i) = ring.index(exps) {
            e.coeffs[i] = c;
        }
        e
    }

    pub fn ring(&self) -> &KRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, exps: &[usize]) -> BigRational {
        self.ring.index(exps).map(|i| self.coeffs[i].clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The augmentation `x_i ↦ 0`.
    pub fn rank(&self) -> BigRational {
        self.coeffs[0].clone()
    }

    fn check_ring(&self, other: &Self) {
        assert!(*self.ring == *other.ring, "elements of {} and {} cannot be combined", self.ring, other.ring);
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        KElement { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        acc
    }

    /// Inverse of an element of nonzero rank: `r⁻¹ Σ (−n/r)^j` with `n` nilpotent.
    pub fn inverse(&self) -> Result<Self, KError> {
        let r = self.rank();
        if r.is_zero() {
            return Err(KError::NotInvertible);
        }
        let rinv = r.recip();
        let mut n = self.clone();
        n.coeffs[0] = BigRational::zero();
        let q = n.scale(&-rinv.clone());
        let mut acc = Self::one(&self.ring);
        let mut term = Self::one(&self.ring);
        for _ in 0..self.ring.dimension() {
            term = &term * &q;
            acc = &acc + &term;
        }
        Ok(acc.scale(&rinv))
    }

    /// Drops all monomials of total degree above `d`.
    pub fn truncate_degree(&self, d: usize) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if self.ring.total_degree(i) > d {
                *c = BigRational::zero();
            }
        }
        out
    }

    /// Smallest total degree of a nonzero monomial, `None` for zero.
    pub fn min_degree(&self) -> Option<usize> {
        (0..self.ring.size).filter(|&i| !self.coeffs[i].is_zero()).map(|i| self.ring.total_degree(i)).min()
    }

    /// Applies the ring map `x_i ↦ images[i]` into the ring of the images.
    ///
    /// The caller guarantees `images[i]^{d_i+1} = 0`, so the map is well
    /// defined on the quotient.
    pub fn substitute(&self, target: &KRing, images: &[KElement]) -> Self {
        let ring = &self.ring;
        assert_eq!(images.len(), ring.num_factors());
        let powers: Vec<Vec<KElement>> = images
            .iter()
            .zip(&ring.factors)
            .map(|(img, &d)| {
                let mut ps = vec![KElement::one(target)];
                for j in 1..=d {
                    let next = &ps[j - 1] * img;
                    ps.push(next);
                }
                ps
            })
            .collect();
        let mut out = KElement::zero(target);
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let exps = ring.exponents(idx);
            let mut term = KElement::constant(target, c.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = &term * &powers[i][e];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Nonzero terms in display order: ascending total degree, then
    /// descending exponent vectors.
    pub fn terms(&self) -> Vec<(Vec<usize>, BigRational)> {
        let mut terms: Vec<(Vec<usize>, BigRational)> = (0..self.ring.size)
            .filter(|&i| !self.coeffs[i].is_zero())
            .map(|i| (self.ring.exponents(i), self.coeffs[i].clone()))
            .collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db): (usize, usize) = (a.iter().sum(), b.iter().sum());
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        terms
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, "x")
    }
}

impl KElement {
    /// Writes the normal form with variables named after `base`.
    pub fn write_with(&self, f: &mut impl fmt::Write, base: &str) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (exps, c)) in terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = self.ring.named_var(base, i);
                    if e == 1 { name } else { format!("{name}^{e}") }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl ops::Add for &KElement {
    type Output = KElement;
    fn add(self, rhs: &KElement) -> KElement {
        self.check_ring(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        KElement { ring: self.ring.clone(), coeffs }
    }
}

impl ops::Sub for &KElement {
    type Output = KElement;
    fn sub(self, rhs: &KElement) -> KElement {
        self.check_ring(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        KElement { ring: self.ring.clone(), coeffs }
    }
}

impl ops::Neg for &KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        KElement { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl ops::Mul for &KElement {
    type Output = KElement;
    fn mul(self, rhs: &KElement) -> KElement {
        self.check_ring(rhs);
        let ring = &self.ring;
        let mut out = KElement::zero(ring);
        let lhs_terms: Vec<(Vec<usize>, &BigRational)> = (0..ring.size)
            .filter(|&i| !self.coeffs[i].is_zero())
            .map(|i| (ring.exponents(i), &self.coeffs[i]))
            .collect();
        let rhs_terms: Vec<(Vec<usize>, &BigRational)> = (0..ring.size)
            .filter(|&i| !rhs.coeffs[i].is_zero())
            .map(|i| (ring.exponents(i), &rhs.coeffs[i]))
            .collect();
        let mut exps = vec![0; ring.num_factors()];
        for (ea, ca) in &lhs_terms {
            'term: for (eb, cb) in &rhs_terms {
                for i in 0..exps.len() {
                    exps[i] = ea[i] + eb[i];
                    if exps[i] > ring.factors[i] {
                        continue 'term;
                    }
                }
                let idx = ring.index(&exps).unwrap();
                out.coeffs[idx] += *ca * *cb;
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl ops::$tr for KElement {
            type Output = KElement;
            fn $m(self, rhs: KElement) -> KElement {
                ops::$tr::$m(&self, &rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl ops::Neg for KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        -&self
    }
}

impl CommRing for KRing {
    type Elem = KElement;
    fn zero(&self) -> KElement {
        KElement::zero(self)
    }
    fn one(&self) -> KElement {
        KElement::one(self)
    }
    fn from_int(&self, n: i64) -> KElement {
        KElement::int(self, n)
    }
    fn add(&self, a: &KElement, b: &KElement) -> KElement {
        a + b
    }
    fn neg(&self, a: &KElement) -> KElement {
        -a
    }
    fn mul(&self, a: &KElement, b: &KElement) -> KElement {
        a * b
    }
}

impl RationalAlgebra for KRing {
    fn div_int(&self, a: &KElement, n: i64) -> KElement {
        a.scale(&BigRational::new(BigInt::one(), n.into()))
    }
}

fn check_exponents(ring: &KRing, exps: &[i64]) -> Result<(), KError> {
    if exps.len() != ring.num_factors() {
        return Err(KError::ExponentLength { expected: ring.num_factors(), got: exps.len() });
    }
    Ok(())
}

/// The Laurent monomial `Π ℓ_i^{a_i} = Π (1 − x_i)^{a_i}`, using the
/// binomial series for negative exponents.
pub fn line(ring: &KRing, exps: &[i64]) -> Result<KElement, KError> {
    check_exponents(ring, exps)?;
    // Coefficient of x^m is Π C(a_i, m_i) (−1)^{m_i}.
    let per_factor: Vec<Vec<BigInt>> = exps
        .iter()
        .zip(ring.factors())
        .map(|(&a, &d)| {
            (0..=d as i64)
                .map(|m| {
                    let b = binomial(a, m);
                    if m % 2 == 1 { -b } else { b }
                })
                .collect()
        })
        .collect();
    let coeffs = (0..ring.size())
        .map(|idx| {
            let c: BigInt = ring.exponents(idx).iter().enumerate().map(|(i, &m)| per_factor[i][m].clone()).product();
            BigRational::from_integer(c)
        })
        .collect();
    Ok(KElement::from_coeffs(ring, coeffs))
}

/// The class of `O(a_1, …, a_m)`, i.e. `Π ℓ_i^{−a_i}`.
pub fn twisting_sheaf(ring: &KRing, twists: &[i64]) -> Result<KElement, KError> {
    let exps: Vec<i64> = twists.iter().map(|a| -a).collect();
    line(ring, &exps)
}

/// Ψ^k: the ring endomorphism with `ℓ_i ↦ ℓ_i^k`.
pub fn adams(k: i64, u: &KElement) -> Result<KElement, KError> {
    if k < 1 {
        return Err(KError::BadIndex(format!("Adams operations need k >= 1, got {k}")));
    }
    let ring = u.ring();
    let images = (0..ring.num_factors())
        .map(|i| {
            let mut exps = vec![0; ring.num_factors()];
            exps[i] = k;
            Ok(&KElement::one(ring) - &line(ring, &exps)?)
        })
        .collect::<Result<Vec<_>, KError>>()?;
    Ok(u.substitute(ring, &images))
}

pub fn adams_compose_check(k: i64, k2: i64, u: &KElement) -> Result<bool, KError> {
    Ok(adams(k, &adams(k2, u)?)? == adams(k * k2, u)?)
}

pub fn adams_mult_check(k: i64, u: &KElement, v: &KElement) -> Result<bool, KError> {
    Ok(adams(k, &(u * v))? == &adams(k, u)? * &adams(k, v)?)
}

/// Adams coefficients `Ψ^1(u) … Ψ^n(u)`.
fn adams_sequence(u: &KElement, n: usize) -> Result<Vec<KElement>, KError> {
    (1..=n as i64).map(|j| adams(j, u)).collect()
}

/// `λ_t(u)` up to order `n`, from the Adams operations by Newton.
pub fn lambda_series(u: &KElement, n: usize) -> Result<TruncSeries<KElement>, KError> {
    Ok(lambda::adams_to_lambda(u.ring(), &adams_sequence(u, n)?))
}

/// λ^k(u), with λ⁰ = 1.
pub fn lambda_op(k: i64, u: &KElement) -> Result<KElement, KError> {
    if k < 0 {
        return Err(KError::BadIndex(format!("λ needs k >= 0, got {k}")));
    }
    Ok(lambda_series(u, k as usize)?.coeffs()[k as usize].clone())
}

/// γ^k(u) = Σ_{i=0..k} λ^i(u) C(k−1, k−i).
pub fn gamma_op(k: i64, u: &KElement) -> Result<KElement, KError> {
    if k < 1 {
        return Err(KError::BadIndex(format!("γ needs k >= 1, got {k}")));
    }
    let lam = lambda_series(u, k as usize)?;
    let mut acc = KElement::zero(u.ring());
    for (i, l) in lam.coeffs().iter().enumerate() {
        let c = binomial(k - 1, k - i as i64);
        if !c.is_zero() {
            acc = &acc + &l.scale(&BigRational::from_integer(c));
        }
    }
    Ok(acc)
}

/// Level of an element in the γ-filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FilDegree {
    Finite(usize),
    Infinite,
}

impl fmt::Display for FilDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilDegree::Finite(n) => write!(f, "{n}"),
            FilDegree::Infinite => write!(f, "inf"),
        }
    }
}

/// 0 for nonzero rank, ∞ for zero, else the lowest monomial degree.
pub fn gamma_filtration_degree(u: &KElement) -> FilDegree {
    match u.min_degree() {
        None => FilDegree::Infinite,
        Some(d) => FilDegree::Finite(d),
    }
}

/// The weight-i part of u: `Π_{j≠i} (Ψ² − 2^j)/(2^i − 2^j)` for `0 ≤ j ≤ D`.
/// The result is verified to be a Ψ³-eigenvector of eigenvalue 3^i.
pub fn adams_eigenspace(u: &KElement, i: i64) -> Result<KElement, KError> {
    let dim = u.ring().dimension() as i64;
    if i < 0 || i > dim {
        return Err(KError::BadIndex(format!("weight must be in 0..={dim}, got {i}")));
    }
    let two = |e: i64| BigInt::one() << (e as usize);
    let mut v = u.clone();
    for j in 0..=dim {
        if j == i {
            continue;
        }
        let shifted = &adams(2, &v)? - &v.scale(&BigRational::from_integer(two(j)));
        v = shifted.scale(&BigRational::new(BigInt::one(), two(i) - two(j)));
    }
    let three = BigRational::from_integer(num_traits::pow(BigInt::from(3), i as usize));
    if adams(3, &v)? != v.scale(&three) {
        return Err(KError::Eval(format!("weight {i} projection is not a Ψ³-eigenvector")));
    }
    Ok(v)
}

/// All weight components `u^{(0)} … u^{(D)}`.
pub fn adams_decomposition(u: &KElement) -> Result<Vec<KElement>, KError> {
    (0..=u.ring().dimension() as i64).map(|i| adams_eigenspace(u, i)).collect()
}

/// γ^{D+k}(u) = 0 for rank-0 `u` and `k ≥ 2`.
pub fn nilpotence_check(u: &KElement, k: i64) -> Result<bool, KError> {
    if !u.rank().is_zero() {
        return Err(KError::RankNotZero(format_rational(&u.rank())));
    }
    if k < 2 {
        return Err(KError::BadIndex(format!("nilpotence needs k >= 2, got {k}")));
    }
    Ok(gamma_op(u.ring().dimension() as i64 + k, u)?.is_zero())
}

/// A virtual sum of Laurent monomials `Σ pos − Σ neg`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitElement {
    pub positive: Vec<Vec<i64>>,
    pub negative: Vec<Vec<i64>>,
}

impl SplitElement {
    pub fn effective(lines: Vec<Vec<i64>>) -> Self {
        SplitElement { positive: lines, negative: Vec::new() }
    }

    pub fn to_element(&self, ring: &KRing) -> Result<KElement, KError> {
        let mut acc = KElement::zero(ring);
        for e in &self.positive {
            acc = &acc + &line(ring, e)?;
        }
        for e in &self.negative {
            acc = &acc - &line(ring, e)?;
        }
        Ok(acc)
    }
}

/// λ₋₁(E) = Π (1 − ℓ^a) over the lines of an effective E.
pub fn lambda_minus_one(ring: &KRing, e: &SplitElement) -> Result<KElement, KError> {
    if !e.negative.is_empty() {
        return Err(KError::NegativePart);
    }
    let one = KElement::one(ring);
    e.positive.iter().try_fold(one.clone(), |acc, a| Ok(&acc * &(&one - &line(ring, a)?)))
}

/// Class of the Koszul complex on divisors of the given twists:
/// `Π (1 − ℓ^{−a})`.
pub fn koszul_class(ring: &KRing, lines: &[Vec<i64>]) -> Result<KElement, KError> {
    if lines.is_empty() {
        return Err(KError::EmptyKoszul);
    }
    if lines.len() > ring.dimension() {
        return Err(KError::TooManyLines { lines: lines.len(), dim: ring.dimension() });
    }
    let one = KElement::one(ring);
    lines.iter().try_fold(one.clone(), |acc, a| {
        let inv: Vec<i64> = a.iter().map(|x| -x).collect();
        Ok(&acc * &(&one - &line(ring, &inv)?))
    })
}

/// Ψ^k(K) ≡ k^d K modulo monomials of total degree > d.
pub fn koszul_adams_check(ring: &KRing, lines: &[Vec<i64>], k: i64) -> Result<bool, KError> {
    let class = koszul_class(ring, lines)?;
    let d = lines.len();
    let kd = BigRational::from_integer(num_traits::pow(BigInt::from(k), d));
    let diff = &adams(k, &class)? - &class.scale(&kd);
    Ok(diff.truncate_degree(d).is_zero())
}

impl FilDegree {
    pub fn at_least(self, k: usize) -> bool {
        self >= FilDegree::Finite(k)
    }
}
