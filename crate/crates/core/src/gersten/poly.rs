//! Dense univariate polynomials over ℚ in the variable `t`.

use std::cmp::Ordering;
use std::fmt;
use std::ops;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::format_rational;

/// Coefficients from the constant term up; never has a zero leading
/// coefficient, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = 0`; callers check for zero separately.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `t^{deg} · f(1/t)`.
    pub fn reversed(&self) -> Self {
        let mut cs = self.coeffs.clone();
        cs.reverse();
        Self::new(cs)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dd = d.deg();
        if r.len() < d.coeffs.len() {
            return (QPoly::zero(), self.clone());
        }
        let inv = d.lc().recip();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    /// Exact quotient; panics if `d` does not divide.
    pub fn exact_div(&self, d: &QPoly) -> QPoly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero only if both are zero).
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self⁻¹ mod m` when the two are coprime.
    pub fn inverse_mod(&self, m: &QPoly) -> Option<QPoly> {
        // Invariant: r_i ≡ s_i · self (mod m).
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.deg() != 0 || r0.is_zero() {
            return None;
        }
        Some(s0.scale(&r0.lc().recip()).rem(m))
    }

    /// Multiplies by the lcm of the denominators and divides by the content,
    /// with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        use num_integer::Integer;
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if self.lc().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    pub fn from_bigints(cs: &[BigInt]) -> Self {
        Self::new(cs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }
}

impl Ord for QPoly {
    /// By degree, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for QPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QPoly {
    /// Compact form, highest degree first: `t^2+1/2*t-3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let a = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            if mono.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

impl ops::Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl ops::Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl ops::Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl ops::Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

/// Resultant via the Sylvester determinant.
pub fn resultant(a: &QPoly, b: &QPoly) -> BigRational {
    use crate::field::{Matrix, Rationals};
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    let (m, n) = (a.deg(), b.deg());
    let size = m + n;
    if size == 0 {
        return BigRational::one();
    }
    let mut s = Matrix::zeros(&Rationals, size, size);
    for r in 0..n {
        for (k, c) in a.coeffs().iter().rev().enumerate() {
            s.set(r, r + k, c.clone());
        }
    }
    for r in 0..m {
        for (k, c) in b.coeffs().iter().rev().enumerate() {
            s.set(n + r, r + k, c.clone());
        }
    }
    s.det(&Rationals)
}
