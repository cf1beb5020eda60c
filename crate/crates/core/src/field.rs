//! Exact ground fields (ℚ and 𝔽_p) and the dense matrix routines the
//! determinant engine needs.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Largest admissible prime modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not a prime below 2^31")]
    BadModulus(u64),
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(String, String),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

/// A commutative field with exactly representable elements.
///
/// Field values are small descriptors (the modulus for 𝔽_p); elements are
/// manipulated through them so a complex over 𝔽₅ can never silently mix
/// with one over 𝔽₇.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn characteristic(&self) -> u64;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;
    fn name(&self) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `a^e` for any integer `e`; `None` when `a = 0` and `e < 0`.
    fn pow(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            exp >>= 1;
        }
        Some(acc)
    }

    /// The image of `(-1)^e`.
    fn sign(&self, e: i64) -> Self::Elem {
        if e.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.neg(&self.one())
        }
    }
}

/// The rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
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
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn parse(&self, s: &str) -> Result<BigRational, FieldError> {
        parse_rational(s).ok_or_else(|| FieldError::Parse(s.to_string()))
    }
    fn name(&self) -> String {
        "Q".to_string()
    }
}

/// The prime field 𝔽_p, `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p < MAX_PRIME && is_prime_u64(p) {
            Ok(PrimeField { p })
        } else {
            Err(FieldError::BadModulus(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.elem(n)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a % self.p == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut acc = 1u64;
        let mut base = *a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Some(acc)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a % self.p == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64, FieldError> {
        let n: i64 = s
            .trim()
            .parse()
            .map_err(|_| FieldError::Parse(s.to_string()))?;
        Ok(self.elem(n))
    }
    fn name(&self) -> String {
        format!("F{}", self.p)
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Lowest terms with positive denominator; integers print without `/1`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `a` or `a/b` with optional sign.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient `C(n, k)` as an exact integer; zero when `k < 0` or
/// `k > n` for `n ≥ 0`, and the generalized binomial for negative `n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc = acc.div_floor(&BigInt::from(i + 1));
    }
    // The running product C(n, i+1) is always integral, so floor division is exact.
    acc
}

/// Sign of a permutation given as images of `0..n`.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i64;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Dense row-major matrix over a field.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<E>]) -> Self
    where
        E: Default,
    {
        let cols = columns.len();
        let mut m = Matrix::filled(rows, cols, E::default());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }
}

impl<E: Clone> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, field.zero())
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.data.iter().all(|x| field.is_zero(x))
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Matrix::zeros(field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = field.mul(a, rhs.get(k, j));
                    let cur = field.add(out.get(i, j), &prod);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn scale<F: Field<Elem = E>>(&self, field: &F, s: &E) -> Matrix<E> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| field.mul(x, s)).collect(),
        }
    }

    pub fn neg<F: Field<Elem = E>>(&self, field: &F) -> Matrix<E> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| field.neg(x)).collect(),
        }
    }

    /// Row-reduces a copy and returns the pivot columns, scanning columns
    /// left to right and taking the first unused row with a nonzero entry.
    pub fn pivot_columns<F: Field<Elem = E>>(&self, field: &F) -> Vec<usize> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for c in 0..m.cols {
            if next_row == m.rows {
                break;
            }
            let Some(r) = (next_row..m.rows).find(|&r| !field.is_zero(m.get(r, c))) else {
                continue;
            };
            m.swap_rows(r, next_row);
            let inv = field.inv(m.get(next_row, c)).expect("nonzero pivot");
            for rr in next_row + 1..m.rows {
                let factor = field.mul(m.get(rr, c), &inv);
                if field.is_zero(&factor) {
                    continue;
                }
                for cc in c..m.cols {
                    let v = field.sub(m.get(rr, cc), &field.mul(&factor, m.get(next_row, cc)));
                    m.set(rr, cc, v);
                }
            }
            pivots.push(c);
            next_row += 1;
        }
        pivots
    }

    pub fn rank<F: Field<Elem = E>>(&self, field: &F) -> usize {
        self.pivot_columns(field).len()
    }

    /// Determinant by Gaussian elimination with the same pivot rule.
    pub fn det<F: Field<Elem = E>>(&self, field: &F) -> E {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = field.one();
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| !field.is_zero(m.get(r, c))) else {
                return field.zero();
            };
            if r != c {
                m.swap_rows(r, c);
                det = field.neg(&det);
            }
            let pivot = m.get(c, c).clone();
            det = field.mul(&det, &pivot);
            let inv = field.inv(&pivot).expect("nonzero pivot");
            for rr in c + 1..n {
                let factor = field.mul(m.get(rr, c), &inv);
                if field.is_zero(&factor) {
                    continue;
                }
                for cc in c..n {
                    let v = field.sub(m.get(rr, cc), &field.mul(&factor, m.get(c, cc)));
                    m.set(rr, cc, v);
                }
            }
        }
        det
    }

    /// Inverse via Gauss–Jordan; `None` for singular input.
    pub fn inverse<F: Field<Elem = E>>(&self, field: &F) -> Option<Matrix<E>> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(field, n);
        for c in 0..n {
            let r = (c..n).find(|&r| !field.is_zero(a.get(r, c)))?;
            a.swap_rows(r, c);
            inv.swap_rows(r, c);
            let p = field.inv(a.get(c, c)).expect("nonzero pivot");
            for cc in 0..n {
                a.set(c, cc, field.mul(a.get(c, cc), &p));
                inv.set(c, cc, field.mul(inv.get(c, cc), &p));
            }
            for rr in 0..n {
                if rr == c {
                    continue;
                }
                let factor = a.get(rr, c).clone();
                if field.is_zero(&factor) {
                    continue;
                }
                for cc in 0..n {
                    let v = field.sub(a.get(rr, cc), &field.mul(&factor, a.get(c, cc)));
                    a.set(rr, cc, v);
                    let w = field.sub(inv.get(rr, cc), &field.mul(&factor, inv.get(c, cc)));
                    inv.set(rr, cc, w);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block<F: Field<Elem = E>>(
        field: &F,
        a: &Matrix<E>,
        b: &Matrix<E>,
        c: &Matrix<E>,
        d: &Matrix<E>,
    ) -> Matrix<E> {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut m = Matrix::zeros(field, rows, cols);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for r in 0..blk.rows {
                for cc in 0..blk.cols {
                    m.set(r0 + r, c0 + cc, blk.get(r, cc).clone());
                }
            }
        }
        m
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<E> {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }
}
