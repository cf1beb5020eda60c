//! Pullback and pushforward along projections `B × ℙⁿ → B`, Chern
//! character, Todd class, and a Riemann–Roch checker.
//!
//! Pushforward rewrites an element in the basis `ℓ⁰, …, ℓⁿ` over the base
//! and keeps the `ℓ⁰` coefficient: `p_*O = O` and `p_*O(−i) = 0` for
//! `1 ≤ i ≤ n`. Cohomology lives in `ℚ[h_i]/(h_i^{d_i+1})`, with
//! `h_i = c_1(O(1))` and `ch(ℓ_i) = e^{−h_i}`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::binomial;
use crate::kring::{line, KElement, KError, KRing, KRingPresentation, SplitElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PushError {
    #[error("image of generator {0} does not satisfy its relation")]
    Relation(usize),
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image ring mismatch: expected {expected}, got {got}")]
    RingMismatch { expected: String, got: String },
    #[error("no factor {0} in {1}")]
    BadFactor(usize, String),
    #[error("{0}")]
    Guard(String),
    #[error(transparent)]
    K(#[from] KError),
}

/// A ring homomorphism `f*: K(source) → K(target)` given by the images of
/// the line generators.
#[derive(Debug, Clone, PartialEq)]
pub struct RingMap {
    source: KRing,
    target: KRing,
    /// Images of ℓ_i.
    lines: Vec<KElement>,
}

impl RingMap {
    pub fn new(source: &KRing, target: &KRing, lines: Vec<KElement>) -> Result<Self, PushError> {
        if lines.len() != source.num_factors() {
            return Err(PushError::ImageCount { expected: source.num_factors(), got: lines.len() });
        }
        let one = KElement::one(target);
        for (i, l) in lines.iter().enumerate() {
            if **l.ring() != **target {
                return Err(PushError::RingMismatch { expected: target.to_string(), got: l.ring().to_string() });
            }
            if !(&one - l).pow(source.factors()[i] as u64 + 1).is_zero() {
                return Err(PushError::Relation(i));
            }
        }
        Ok(RingMap { source: source.clone(), target: target.clone(), lines })
    }

    /// Sends ℓ_i to the Laurent monomial `ℓ^{exps[i]}` of the target.
    pub fn from_monomials(source: &KRing, target: &KRing, exps: &[Vec<i64>]) -> Result<Self, PushError> {
        let lines = exps.iter().map(|e| line(target, e)).collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, lines)
    }

    pub fn identity(ring: &KRing) -> Self {
        let lines = (0..ring.num_factors()).map(|i| &KElement::one(ring) - &KElement::var(ring, i)).collect();
        RingMap { source: ring.clone(), target: ring.clone(), lines }
    }

    /// Restriction to a point: every ℓ_i ↦ 1.
    pub fn to_point(ring: &KRing) -> Self {
        let pt = KRingPresentation::new(vec![]).unwrap();
        let lines = vec![KElement::one(&pt); ring.num_factors()];
        RingMap { source: ring.clone(), target: pt, lines }
    }

    /// `p*` for the projection from `base` with a ℙⁿ factor inserted at
    /// position `factor`.
    pub fn projection(base: &KRing, n: usize, factor: usize) -> Result<Self, PushError> {
        if factor > base.num_factors() {
            return Err(PushError::BadFactor(factor, base.to_string()));
        }
        let total = insert_factor(base, n, factor)?;
        let lines = (0..base.num_factors())
            .map(|j| {
                let t = if j < factor { j } else { j + 1 };
                &KElement::one(&total) - &KElement::var(&total, t)
            })
            .collect();
        Ok(RingMap { source: base.clone(), target: total, lines })
    }

    pub fn source(&self) -> &KRing {
        &self.source
    }

    pub fn target(&self) -> &KRing {
        &self.target
    }

    pub fn pullback(&self, u: &KElement) -> KElement {
        let one = KElement::one(&self.target);
        let xs: Vec<KElement> = self.lines.iter().map(|l| &one - l).collect();
        u.substitute(&self.target, &xs)
    }

    /// `g × id_{ℙⁿ}`, with the fiber at position `at_source` in the source
    /// and `at_target` in the target.
    pub fn extend_by_fiber(&self, n: usize, at_source: usize, at_target: usize) -> Result<Self, PushError> {
        let source = insert_factor(&self.source, n, at_source)?;
        let target = insert_factor(&self.target, n, at_target)?;
        let embed = RingMap::projection(&self.target, n, at_target)?;
        let mut lines: Vec<KElement> = self.lines.iter().map(|l| embed.pullback(l)).collect();
        lines.insert(at_source, &KElement::one(&target) - &KElement::var(&target, at_target));
        RingMap::new(&source, &target, lines)
    }
}

fn insert_factor(base: &KRing, n: usize, factor: usize) -> Result<KRing, PushError> {
    if factor > base.num_factors() {
        return Err(PushError::BadFactor(factor, base.to_string()));
    }
    let mut fs = base.factors().to_vec();
    fs.insert(factor, n);
    Ok(KRingPresentation::new(fs)?)
}

fn remove_factor(total: &KRing, factor: usize) -> Result<KRing, PushError> {
    if factor >= total.num_factors() {
        return Err(PushError::BadFactor(factor, total.to_string()));
    }
    let mut fs = total.factors().to_vec();
    fs.remove(factor);
    Ok(KRingPresentation::new(fs)?)
}

/// Coefficients `b_0..b_n` over the base with `u = Σ b_i ℓ^i`, where ℓ is
/// the generator of the given factor.
pub fn fiber_basis_coefficients(u: &KElement, factor: usize) -> Result<Vec<KElement>, PushError> {
    let total = u.ring();
    let base = remove_factor(total, factor)?;
    let n = total.factors()[factor];
    let mut b = vec![KElement::zero(&base); n + 1];
    // x^j = (1 − ℓ)^j = Σ_i C(j, i) (−1)^i ℓ^i.
    for (idx, c) in u.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut exps = total.exponents(idx);
        let j = exps.remove(factor);
        for (i, bi) in b.iter_mut().enumerate().take(j + 1) {
            let mut k = binomial(j as i64, i as i64);
            if i % 2 == 1 {
                k = -k;
            }
            let term = KElement::monomial(&base, &exps, c * BigRational::from_integer(k));
            *bi = &*bi + &term;
        }
    }
    Ok(b)
}

/// Pushforward along the projection forgetting `factor`.
pub fn pushforward_pn(u: &KElement, factor: usize) -> Result<KElement, PushError> {
    Ok(fiber_basis_coefficients(u, factor)?.swap_remove(0))
}

/// χ(ℙⁿ, O(d)) by pushing `ℓ^{−d}` to a point.
pub fn euler_characteristic(n: usize, d: i64) -> Result<BigInt, PushError> {
    let ring = KRingPresentation::new(vec![n])?;
    let u = line(&ring, &[-d])?;
    let r = pushforward_pn(&u, 0)?.rank();
    debug_assert!(r.is_integer());
    Ok(r.to_integer())
}

/// `p_*(u · p*v) = p_*(u) · v`.
pub fn projection_formula_check(u: &KElement, factor: usize, v: &KElement) -> Result<bool, PushError> {
    let n = *u.ring().factors().get(factor).ok_or_else(|| PushError::BadFactor(factor, u.ring().to_string()))?;
    let p = RingMap::projection(v.ring(), n, factor)?;
    if **p.target() != **u.ring() {
        return Err(PushError::RingMismatch { expected: p.target().to_string(), got: u.ring().to_string() });
    }
    let lhs = pushforward_pn(&(u * &p.pullback(v)), factor)?;
    Ok(lhs == &pushforward_pn(u, factor)? * v)
}

/// `g* p_* = p'_* g'*` for `u` on `B × ℙⁿ` (fiber last) and `g' = g × id`.
pub fn base_change_check(g: &RingMap, u: &KElement) -> Result<bool, PushError> {
    let factor = u.ring().num_factors().checked_sub(1).ok_or_else(|| PushError::BadFactor(0, u.ring().to_string()))?;
    let n = u.ring().factors()[factor];
    if factor != g.source().num_factors() {
        return Err(PushError::RingMismatch { expected: format!("{}xP{n}", g.source()), got: u.ring().to_string() });
    }
    let g2 = g.extend_by_fiber(n, factor, g.target().num_factors())?;
    if **g2.source() != **u.ring() {
        return Err(PushError::RingMismatch { expected: g2.source().to_string(), got: u.ring().to_string() });
    }
    let lhs = g.pullback(&pushforward_pn(u, factor)?);
    let rhs = pushforward_pn(&g2.pullback(u), g.target().num_factors())?;
    Ok(lhs == rhs)
}

/// An element of `ℚ[h_1..h_m]/(h_i^{d_i+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct CohElement(pub KElement);

impl CohElement {
    pub fn ring(&self) -> &KRing {
        self.0.ring()
    }

    pub fn mul(&self, other: &CohElement) -> CohElement {
        CohElement(&self.0 * &other.0)
    }

    /// Degree-0 part.
    pub fn rank(&self) -> BigRational {
        self.0.rank()
    }
}

impl fmt::Display for CohElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.write_with(f, "h")
    }
}

/// `c_1(ℓ^e) = −Σ e_i h_i`.
fn first_chern(ring: &KRing, exps: &[i64]) -> Result<KElement, PushError> {
    if exps.len() != ring.num_factors() {
        return Err(KError::ExponentLength { expected: ring.num_factors(), got: exps.len() }.into());
    }
    let mut y = KElement::zero(ring);
    for (i, &e) in exps.iter().enumerate() {
        y = &y - &KElement::var(ring, i).scale(&BigRational::from_integer(e.into()));
    }
    Ok(y)
}

/// Evaluates `Σ c_k y^k` at a nilpotent `y`.
fn eval_series(coeffs: &[BigRational], y: &KElement) -> KElement {
    let ring = y.ring();
    let mut acc = KElement::zero(ring);
    for c in coeffs.iter().rev() {
        acc = &(&acc * y) + &KElement::constant(ring, c.clone());
    }
    acc
}

fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// `e^y` up to `y^n`.
fn exp_series(n: usize) -> Vec<BigRational> {
    (0..=n).map(|k| BigRational::new(BigInt::one(), factorial(k))).collect()
}

/// `(1 − e^{−y})/y = Σ (−1)^k y^k/(k+1)!` up to `y^n`.
fn inverse_todd_series(n: usize) -> Vec<BigRational> {
    (0..=n)
        .map(|k| {
            let c = BigRational::new(BigInt::one(), factorial(k + 1));
            if k % 2 == 1 { -c } else { c }
        })
        .collect()
}

/// `Q(y) = y/(1 − e^{−y})` up to `y^n`, by inverting the series above.
pub fn todd_series(n: usize) -> Vec<BigRational> {
    let a = inverse_todd_series(n);
    let mut q: Vec<BigRational> = vec![BigRational::one()];
    for k in 1..=n {
        let s: BigRational = (1..=k).map(|j| &a[j] * &q[k - j]).sum();
        q.push(-s);
    }
    q
}

/// ch of a virtual sum of lines.
pub fn chern_character(ring: &KRing, s: &SplitElement) -> Result<CohElement, PushError> {
    let ex = exp_series(ring.dimension());
    let mut acc = KElement::zero(ring);
    for e in &s.positive {
        acc = &acc + &eval_series(&ex, &first_chern(ring, e)?);
    }
    for e in &s.negative {
        acc = &acc - &eval_series(&ex, &first_chern(ring, e)?);
    }
    Ok(CohElement(acc))
}

/// Td of a virtual sum of lines: `Π Q(c_1)` over the positive part divided
/// by the same product over the negative part.
pub fn todd_class(ring: &KRing, s: &SplitElement) -> Result<CohElement, PushError> {
    let n = ring.dimension();
    let (q, qinv) = (todd_series(n), inverse_todd_series(n));
    let mut acc = KElement::one(ring);
    for e in &s.positive {
        acc = &acc * &eval_series(&q, &first_chern(ring, e)?);
    }
    for e in &s.negative {
        acc = &acc * &eval_series(&qinv, &first_chern(ring, e)?);
    }
    Ok(CohElement(acc))
}

/// Integration over the fiber: the coefficient of `h_factor^{d}`.
pub fn coh_pushforward(c: &CohElement, factor: usize) -> Result<CohElement, PushError> {
    let total = c.ring();
    let base = remove_factor(total, factor)?;
    let n = total.factors()[factor];
    let mut out = KElement::zero(&base);
    for (idx, coeff) in c.0.coeffs().iter().enumerate() {
        let mut exps = total.exponents(idx);
        if exps.remove(factor) == n && !coeff.is_zero() {
            out = &out + &KElement::monomial(&base, &exps, coeff.clone());
        }
    }
    Ok(CohElement(out))
}

/// Tangent class of ℙⁿ from the Euler sequence: `(n+1)·O(1) − 1`.
pub fn tangent_class(n: usize) -> SplitElement {
    SplitElement { positive: vec![vec![-1]; n + 1], negative: vec![vec![0]] }
}

/// Both sides of Riemann–Roch for `⊕ O(a_j)` on ℙⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct GrrReport {
    /// `Σ χ(ℙⁿ, O(a_j))` from the K-theoretic pushforward.
    pub lhs: BigRational,
    /// `∫ ch(E) · Td(T)`.
    pub rhs: BigRational,
}

impl GrrReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub const GRR_MAX_N: usize = 8;
pub const GRR_MAX_TWIST: i64 = 8;

pub fn grr_check(n: usize, bundle: &[i64]) -> Result<GrrReport, PushError> {
    if n > GRR_MAX_N {
        return Err(PushError::Guard(format!("n = {n} exceeds {GRR_MAX_N}")));
    }
    if let Some(a) = bundle.iter().find(|a| a.abs() > GRR_MAX_TWIST) {
        return Err(PushError::Guard(format!("twist {a} exceeds {GRR_MAX_TWIST} in absolute value")));
    }
    let mut lhs = BigInt::zero();
    for &a in bundle {
        lhs += euler_characteristic(n, a)?;
    }
    let ring = KRingPresentation::new(vec![n])?;
    let e = SplitElement::effective(bundle.iter().map(|a| vec![-a]).collect());
    let integrand = chern_character(&ring, &e)?.mul(&todd_class(&ring, &tangent_class(n))?);
    let rhs = coh_pushforward(&integrand, 0)?.rank();
    Ok(GrrReport { lhs: BigRational::from_integer(lhs), rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, ratio};
    use crate::kring::{parse_element, EvalLimits};
    use proptest::prelude::*;

    fn ring(s: &str) -> KRing {
        KRingPresentation::parse(s).unwrap()
    }

    fn el(r: &KRing, s: &str) -> KElement {
        parse_element(r, s, EvalLimits::default()).unwrap()
    }

    #[test]
    fn pullback_examples() {
        let (q, p1) = (ring("P1xP1"), ring("P1"));
        let diag = RingMap::from_monomials(&q, &p1, &[vec![1], vec![1]]).unwrap();
        let l1l2 = line(&q, &[1, 1]).unwrap();
        assert_eq!(diag.pullback(&l1l2).to_string(), "1 - 2*x");
        let u = el(&q, "3 - x1 + 2*x1*x2");
        assert_eq!(RingMap::identity(&q).pullback(&u), u);
        let pt = RingMap::to_point(&q);
        assert_eq!(pt.pullback(&u).rank(), rat(3));
        // ℓ ↦ ℓ⁻¹ is fine; ℓ ↦ 2 breaks (1 − ℓ)² = 0.
        assert!(RingMap::from_monomials(&p1, &p1, &[vec![-1]]).is_ok());
        let two = KElement::int(&p1, 2);
        assert_eq!(RingMap::new(&p1, &p1, vec![two]), Err(PushError::Relation(0)));
    }

    #[test]
    fn pushforward_examples() {
        for n in 0..4 {
            let r = KRingPresentation::new(vec![n]).unwrap();
            assert_eq!(pushforward_pn(&KElement::one(&r), 0).unwrap().rank(), rat(1));
        }
        let p2 = ring("P2");
        assert!(pushforward_pn(&line(&p2, &[1]).unwrap(), 0).unwrap().is_zero());
        let p1 = ring("P1");
        assert_eq!(pushforward_pn(&line(&p1, &[-3]).unwrap(), 0).unwrap().rank(), rat(4));
        assert!(pushforward_pn(&KElement::one(&p1), 1).is_err());
    }

    #[test]
    fn euler_characteristic_examples() {
        assert_eq!(euler_characteristic(2, 3).unwrap(), BigInt::from(10));
        for n in 0..6 {
            assert_eq!(euler_characteristic(n, 0).unwrap(), BigInt::one());
        }
        assert_eq!(euler_characteristic(1, -3).unwrap(), BigInt::from(-2));
    }

    #[test]
    fn projection_formula_examples() {
        let q = ring("P1xP1");
        let u = line(&q, &[2, 0]).unwrap();
        let p1 = ring("P1");
        let v = line(&p1, &[1]).unwrap();
        assert!(projection_formula_check(&u, 0, &v).unwrap());
        assert!(projection_formula_check(&u, 0, &KElement::one(&p1)).unwrap());
    }

    #[test]
    fn base_change_examples() {
        let p1 = ring("P1");
        let u = el(&ring("P1xP2"), "2 - x1 + x2^2 - 3*x1*x2");
        assert!(base_change_check(&RingMap::to_point(&p1), &u).unwrap());
        assert!(base_change_check(&RingMap::identity(&p1), &u).unwrap());
        let q = ring("P1xP1");
        let diag = RingMap::from_monomials(&q, &p1, &[vec![1], vec![1]]).unwrap();
        let w = KElement::monomial(&ring("P1xP1xP2"), &[1, 1, 2], rat(1));
        assert!(base_change_check(&diag, &w).unwrap());
    }

    #[test]
    fn chern_character_examples() {
        let p2 = ring("P2");
        let o1 = SplitElement::effective(vec![vec![-1]]);
        assert_eq!(chern_character(&p2, &o1).unwrap().to_string(), "1 + h + 1/2*h^2");
        let triv = SplitElement::effective(vec![vec![0]]);
        assert_eq!(chern_character(&p2, &triv).unwrap().to_string(), "1");
        let p1 = ring("P1");
        let s = SplitElement { positive: vec![vec![-1]], negative: vec![vec![0]] };
        assert_eq!(chern_character(&p1, &s).unwrap().to_string(), "h");
    }

    #[test]
    fn todd_examples() {
        assert_eq!(todd_series(4), vec![rat(1), ratio(1, 2), ratio(1, 12), rat(0), ratio(-1, 720)]);
        let p1 = ring("P1");
        assert_eq!(todd_class(&p1, &tangent_class(1)).unwrap().to_string(), "1 + h");
        let p2 = ring("P2");
        let triv = SplitElement::effective(vec![vec![0]; 3]);
        assert_eq!(todd_class(&p2, &triv).unwrap().to_string(), "1");
        let o1 = SplitElement::effective(vec![vec![-1]]);
        assert_eq!(todd_class(&p2, &o1).unwrap().to_string(), "1 + 1/2*h + 1/12*h^2");
        // Td of ℙ² is 1 + 3/2 h + h².
        assert_eq!(todd_class(&p2, &tangent_class(2)).unwrap().to_string(), "1 + 3/2*h + h^2");
    }

    #[test]
    fn coh_pushforward_examples() {
        for n in 1..4 {
            let r = KRingPresentation::new(vec![n]).unwrap();
            let top = CohElement(KElement::monomial(&r, &[n], rat(1)));
            assert_eq!(coh_pushforward(&top, 0).unwrap().rank(), rat(1));
            let below = CohElement(KElement::monomial(&r, &[n - 1], rat(1)));
            assert!(coh_pushforward(&below, 0).unwrap().0.is_zero());
        }
        let p1 = ring("P1");
        let edh = chern_character(&p1, &SplitElement::effective(vec![vec![-5]])).unwrap();
        assert_eq!(coh_pushforward(&edh, 0).unwrap().rank(), rat(5));
    }

    #[test]
    fn grr_examples() {
        for (n, b, value) in [(1, vec![0], 1), (2, vec![3], 10), (3, vec![-1, 2], 10)] {
            let r = grr_check(n, &b).unwrap();
            assert!(r.holds());
            assert_eq!(r.lhs, rat(value));
        }
        assert!(matches!(grr_check(9, &[0]), Err(PushError::Guard(_))));
        assert!(matches!(grr_check(2, &[9]), Err(PushError::Guard(_))));
    }

    fn element(r: KRing) -> impl Strategy<Value = KElement> {
        let n = r.size();
        prop::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(a, b)| ratio(a, b)), n)
            .prop_map(move |cs| KElement::from_coeffs(&r, cs))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn projection_formula_random(u in element(ring("P2xP1")), v in element(ring("P2"))) {
            prop_assert!(projection_formula_check(&u, 1, &v).unwrap());
        }

        #[test]
        fn projection_formula_inner_fiber(u in element(ring("P1xP2xP1")), v in element(ring("P1xP1"))) {
            prop_assert!(projection_formula_check(&u, 1, &v).unwrap());
        }

        #[test]
        fn pushforward_order_is_irrelevant(u in element(ring("P2xP3"))) {
            let a = pushforward_pn(&pushforward_pn(&u, 0).unwrap(), 0).unwrap();
            let b = pushforward_pn(&pushforward_pn(&u, 1).unwrap(), 0).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn basis_rewrite_reconstructs(u in element(ring("P1xP3"))) {
            let b = fiber_basis_coefficients(&u, 1).unwrap();
            let p = RingMap::projection(&ring("P1"), 3, 1).unwrap();
            let ell = line(u.ring(), &[0, 1]).unwrap();
            let back = b.iter().enumerate().fold(KElement::zero(u.ring()), |acc, (i, bi)| {
                &acc + &(&p.pullback(bi) * &ell.pow(i as u64))
            });
            prop_assert_eq!(back, u);
        }

        #[test]
        fn base_change_random(u in element(ring("P2xP1")), a in -3i64..=3, b in -3i64..=3) {
            // g: P2 → P1xP1 pulling ℓ_i back to ℓ^a, ℓ^b.
            let g = RingMap::from_monomials(&ring("P2"), &ring("P1xP1"), &[vec![a, b]]);
            // ℓ^a·ℓ^b on P1xP1 is unipotent of order 3, so the relation holds.
            let g = g.unwrap();
            prop_assert!(base_change_check(&g, &u).unwrap());
        }

        #[test]
        fn euler_characteristic_recurrences(n in 1usize..=5, d in -8i64..=8) {
            let chi = |n: usize, d: i64| euler_characteristic(n, d).unwrap();
            prop_assert_eq!(chi(n, d), chi(n, d - 1) + chi(n - 1, d));
            let sign = if n % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(chi(n, d), chi(n, -d - n as i64 - 1) * sign);
        }
    }
}
