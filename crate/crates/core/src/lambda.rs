//! λ-ring calculus on truncated power series.
//!
//! A series `c_0 + c_1 t + … + c_N t^N` carries its order `N`; every
//! operation truncates, and mixing orders truncates to the smaller one.
//! Coefficients live in any [`CommRing`]; the Newton inversion
//! ψ ↦ λ needs division by integers and therefore a [`RationalAlgebra`].

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::field::{Field, PrimeField, Rationals};

/// A commutative ring given by a context object, so that elements need not
/// know which presentation they belong to.
pub trait CommRing {
    type Elem: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn scale_int(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.from_int(n))
    }
}

/// Rings in which nonzero integers are invertible.
pub trait RationalAlgebra: CommRing {
    /// `a / n`; `n` is never zero.
    fn div_int(&self, a: &Self::Elem, n: i64) -> Self::Elem;
}

impl CommRing for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        Field::one(self)
    }
    fn from_int(&self, n: i64) -> BigRational {
        self.from_i64(n)
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
}

impl RationalAlgebra for Rationals {
    fn div_int(&self, a: &BigRational, n: i64) -> BigRational {
        a / BigRational::from_integer(n.into())
    }
}

// 𝔽_p is a ring but not a ℚ-algebra: ψ → λ is unavailable there.
impl CommRing for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        Field::one(self)
    }
    fn from_int(&self, n: i64) -> u64 {
        self.elem(n)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        Field::add(self, a, b)
    }
    fn neg(&self, a: &u64) -> u64 {
        Field::neg(self, a)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        Field::mul(self, a, b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LambdaError {
    #[error("series must start with constant term 1")]
    NotGrouplike,
    #[error("index must be at least 1, got {0}")]
    BadIndex(i64),
}

/// `c_0 + c_1 t + … + c_N t^N` modulo `t^{N+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncSeries<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq + fmt::Debug> TruncSeries<E> {
    /// Pads with zeros or drops terms beyond `order`.
    pub fn new<R: CommRing<Elem = E>>(ring: &R, mut coeffs: Vec<E>, order: usize) -> Self {
        coeffs.truncate(order + 1);
        while coeffs.len() < order + 1 {
            coeffs.push(ring.zero());
        }
        TruncSeries { coeffs }
    }

    pub fn one<R: CommRing<Elem = E>>(ring: &R, order: usize) -> Self {
        Self::new(ring, vec![ring.one()], order)
    }

    /// `1 + a t`.
    pub fn linear<R: CommRing<Elem = E>>(ring: &R, a: E, order: usize) -> Self {
        Self::new(ring, vec![ring.one(), a], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        TruncSeries { coeffs }
    }

    pub fn add<R: CommRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|i| ring.add(&self.coeffs[i], &other.coeffs[i])).collect();
        TruncSeries { coeffs }
    }

    pub fn mul<R: CommRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = vec![ring.zero(); n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                let term = ring.mul(&self.coeffs[i], &other.coeffs[j]);
                coeffs[i + j] = ring.add(&coeffs[i + j], &term);
            }
        }
        TruncSeries { coeffs }
    }

    /// Substitutes `t ↦ t/(1−t)`.
    pub fn compose_geometric<R: CommRing<Elem = E>>(&self, ring: &R) -> Self {
        let n = self.order();
        // s = t + t² + … + t^N
        let s = TruncSeries::new(ring, (0..=n).map(|i| if i == 0 { ring.zero() } else { ring.one() }).collect(), n);
        // Horner: c_0 + s(c_1 + s(c_2 + …))
        let mut acc = TruncSeries::new(ring, vec![self.coeffs[n].clone()], n);
        for i in (0..n).rev() {
            acc = acc.mul(ring, &s);
            acc.coeffs[0] = ring.add(&acc.coeffs[0], &self.coeffs[i]);
        }
        acc
    }
}

/// Adams coefficients ψ_1..ψ_N of a λ-series, by the Newton recursion
/// ψ_k = λ¹ψ_{k−1} − λ²ψ_{k−2} + … + (−1)^{k+1} k λ^k.
pub fn lambda_to_adams<R: CommRing>(ring: &R, lam: &TruncSeries<R::Elem>) -> Result<Vec<R::Elem>, LambdaError> {
    let c = lam.coeffs();
    if c[0] != ring.one() {
        return Err(LambdaError::NotGrouplike);
    }
    let n = lam.order();
    let mut psi: Vec<R::Elem> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = ring.scale_int(&c[k], k as i64);
        if k % 2 == 0 {
            acc = ring.neg(&acc);
        }
        for i in 1..k {
            let term = ring.mul(&c[i], &psi[k - i - 1]);
            acc = if i % 2 == 1 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
        }
        psi.push(acc);
    }
    Ok(psi)
}

/// λ-series of order `psi.len()` from ψ_1..ψ_N:
/// λ^k = (1/k) Σ_{j=1..k} (−1)^{j−1} ψ_j λ^{k−j}.
pub fn adams_to_lambda<R: RationalAlgebra>(ring: &R, psi: &[R::Elem]) -> TruncSeries<R::Elem> {
    let n = psi.len();
    let mut lam = vec![ring.one()];
    for k in 1..=n {
        let mut acc = ring.zero();
        for j in 1..=k {
            let term = ring.mul(&psi[j - 1], &lam[k - j]);
            acc = if j % 2 == 1 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
        }
        lam.push(ring.div_int(&acc, k as i64));
    }
    TruncSeries { coeffs: lam }
}

/// γ_t from λ_t by `t ↦ t/(1−t)`.
pub fn lambda_to_gamma<R: CommRing>(ring: &R, lam: &TruncSeries<R::Elem>) -> Result<TruncSeries<R::Elem>, LambdaError> {
    if lam.coeffs()[0] != ring.one() {
        return Err(LambdaError::NotGrouplike);
    }
    Ok(lam.compose_geometric(ring))
}

/// γ^k(u) = λ^k(u + k − 1), given any way `lambda_of(k, v)` of computing λ^k.
pub fn gamma_via_shift<R: CommRing>(
    ring: &R,
    k: i64,
    u: &R::Elem,
    lambda_of: impl Fn(usize, &R::Elem) -> R::Elem,
) -> Result<R::Elem, LambdaError> {
    if k < 1 {
        return Err(LambdaError::BadIndex(k));
    }
    let shifted = ring.add(u, &ring.from_int(k - 1));
    Ok(lambda_of(k as usize, &shifted))
}
