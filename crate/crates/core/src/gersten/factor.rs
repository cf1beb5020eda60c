//! Factorization over ℚ: squarefree decomposition, then Cantor–Zassenhaus
//! modulo a prime larger than twice the Mignotte bound and recombination
//! by trial division over ℤ (so no Hensel lifting is needed).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::QPoly;
use super::GerstenError;

/// Largest degree of a squarefree part we attempt to factor.
pub const MAX_FACTOR_DEGREE: usize = 40;

/// `f = c · Π q_i^{e_i}` with distinct monic irreducible `q_i`, sorted.
pub fn factor(f: &QPoly) -> Result<(BigRational, Vec<(QPoly, u32)>), GerstenError> {
    if f.is_zero() {
        return Err(GerstenError::ZeroFunction);
    }
    let c = f.lc();
    let mut out = Vec::new();
    for (s, e) in squarefree(&f.monic()) {
        for q in factor_squarefree(&s)? {
            out.push((q, e));
        }
    }
    out.sort();
    Ok((c, out))
}

/// True iff `f` is nonconstant and irreducible over ℚ.
pub fn is_irreducible(f: &QPoly) -> Result<bool, GerstenError> {
    if f.is_constant() {
        return Ok(false);
    }
    let (_, fs) = factor(f)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

/// Yun's algorithm on a monic polynomial: pairs (squarefree part, multiplicity).
fn squarefree(f: &QPoly) -> Vec<(QPoly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    let a = QPoly::gcd(f, &df);
    let mut b = f.exact_div(&a);
    let mut c = &df.exact_div(&a) - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let g = QPoly::gcd(&b, &c);
        b = b.exact_div(&g);
        c = &c.exact_div(&g) - &b.derivative();
        if !g.is_constant() {
            out.push((g, i));
        }
        i += 1;
    }
    out
}

fn factor_squarefree(s: &QPoly) -> Result<Vec<QPoly>, GerstenError> {
    let n = s.deg();
    if n <= 1 {
        return Ok(vec![s.monic()]);
    }
    if n > MAX_FACTOR_DEGREE {
        return Err(GerstenError::TooLarge(format!("degree {n} exceeds {MAX_FACTOR_DEGREE}")));
    }
    let g = s.primitive_integer();
    let lc = g.last().unwrap().abs();
    let norm2: BigInt = g.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound: BigInt = BigInt::from(2) * &lc * (BigInt::one() << n) * norm2;
    let start = bound.to_u64().filter(|&b| b < (1 << 61)).ok_or_else(|| {
        GerstenError::TooLarge(format!("coefficient bound {bound} is beyond the supported prime range"))
    })?;
    let mut p = start | 1;
    let modular = loop {
        p += 2;
        if !is_prime(p) {
            continue;
        }
        let gp = ModPoly::from_ints(&g, p);
        let monic = gp.monic(p);
        if ModPoly::gcd(&monic, &monic.derivative(p), p).deg() == 0 {
            break monic;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut factors = Vec::new();
    for (d, part) in distinct_degree(&modular, p) {
        equal_degree(&part, d, p, &mut rng, &mut factors);
    }
    Ok(recombine(&g, factors, p))
}

/// Tries products of modular factors of increasing size against `g` over ℤ.
fn recombine(g: &[BigInt], mut factors: Vec<ModPoly>, p: u64) -> Vec<QPoly> {
    let mut rest = QPoly::from_bigints(g);
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= factors.len() {
        let mut hit = None;
        for subset in combinations(factors.len(), size) {
            let lc = rest.lc().to_integer();
            let lc_mod = ModPoly::from_ints(&[lc], p);
            let prod = subset.iter().fold(lc_mod, |acc, &i| acc.mul(&factors[i], p));
            let candidate = QPoly::from_bigints(&prod.symmetric(p));
            let h = QPoly::from_bigints(&candidate.primitive_integer());
            let (q, r) = rest.divrem(&h);
            if r.is_zero() {
                hit = Some((subset, h, q));
                break;
            }
        }
        match hit {
            Some((subset, h, q)) => {
                found.push(h.monic());
                rest = QPoly::from_bigints(&q.primitive_integer());
                factors = factors.into_iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, f)| f).collect();
            }
            None => size += 1,
        }
    }
    if !rest.is_constant() {
        found.push(rest.monic());
    }
    found
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Polynomial over 𝔽_p, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ModPoly(Vec<u64>);

impl ModPoly {
    fn new(mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly(c)
    }

    fn from_ints(cs: &[BigInt], p: u64) -> Self {
        let pb = BigInt::from(p);
        Self::new(cs.iter().map(|c| ((c % &pb + &pb) % &pb).to_u64().unwrap()).collect())
    }

    fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn lc(&self) -> u64 {
        *self.0.last().unwrap_or(&0)
    }

    fn monic(&self, p: u64) -> Self {
        let inv = pow_mod(self.lc(), p - 2, p);
        Self::new(self.0.iter().map(|&c| mul_mod(c, inv, p)).collect())
    }

    fn derivative(&self, p: u64) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % p, p)).collect())
    }

    fn sub(&self, o: &Self, p: u64) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = *self.0.get(i).unwrap_or(&0);
                    let b = *o.0.get(i).unwrap_or(&0);
                    (a + p - b) % p
                })
                .collect(),
        )
    }

    fn mul(&self, o: &Self, p: u64) -> Self {
        if self.is_zero() || o.is_zero() {
            return ModPoly(vec![]);
        }
        let mut out = vec![0u64; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in o.0.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Self::new(out)
    }

    fn divrem(&self, d: &Self, p: u64) -> (Self, Self) {
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return (ModPoly(vec![]), self.clone());
        }
        let dd = d.deg();
        let inv = pow_mod(d.lc(), p - 2, p);
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = mul_mod(r[i + dd], inv, p);
            if c != 0 {
                for (j, &dc) in d.0.iter().enumerate() {
                    r[i + j] = (r[i + j] + p - mul_mod(c, dc, p)) % p;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    fn rem(&self, d: &Self, p: u64) -> Self {
        self.divrem(d, p).1
    }

    fn gcd(a: &Self, b: &Self, p: u64) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        if a.is_zero() { a } else { a.monic(p) }
    }

    fn pow_mod(&self, e: &BigUint, m: &Self, p: u64) -> Self {
        let mut acc = ModPoly(vec![1]);
        let base = self.rem(m, p);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc, p).rem(m, p);
            if e.bit(i) {
                acc = acc.mul(&base, p).rem(m, p);
            }
        }
        acc
    }

    /// Coefficients lifted to `(−p/2, p/2]`.
    fn symmetric(&self, p: u64) -> Vec<BigInt> {
        self.0.iter().map(|&c| if c > p / 2 { BigInt::from(c) - BigInt::from(p) } else { BigInt::from(c) }).collect()
    }
}

/// Splits a monic squarefree polynomial into products of irreducibles of
/// equal degree.
fn distinct_degree(f: &ModPoly, p: u64) -> Vec<(usize, ModPoly)> {
    let x = ModPoly(vec![0, 1]);
    let pe = BigUint::from(p);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.pow_mod(&pe, &rest, p);
        let g = ModPoly::gcd(&h.sub(&x, p), &rest, p);
        if g.deg() > 0 {
            rest = rest.divrem(&g, p).0;
            h = h.rem(&rest, p);
            out.push((d, g));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        out.push((rest.deg(), rest));
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of degree-`d` irreducibles.
fn equal_degree(f: &ModPoly, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<ModPoly>) {
    if f.deg() == d {
        out.push(f.clone());
        return;
    }
    let e: BigUint = (num_traits::pow(BigUint::from(p), d) - 1u32) / 2u32;
    loop {
        let a = ModPoly::new((0..f.deg()).map(|_| rng.gen_range(0..p)).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = a.pow_mod(&e, f, p).sub(&ModPoly(vec![1]), p);
        let g = ModPoly::gcd(&b, f, p);
        if g.deg() > 0 && g.deg() < f.deg() {
            let other = f.divrem(&g, p).0.monic(p);
            equal_degree(&g, d, p, rng, out);
            equal_degree(&other, d, p, rng, out);
            return;
        }
    }
}
