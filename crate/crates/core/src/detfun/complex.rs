use std::ops::RangeInclusive;

use crate::field::{Field, Matrix};

use super::DetError;

/// A bounded cochain complex of based finite-dimensional vector spaces.
///
/// `dims[i]` is the dimension in degree `lowest + i`; `maps[i]` is the
/// differential from degree `lowest + i` to `lowest + i + 1`, stored as a
/// `dims[i+1] × dims[i]` matrix acting on column vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct BasedComplex<F: Field> {
    field: F,
    lowest: i64,
    dims: Vec<usize>,
    maps: Vec<Matrix<F::Elem>>,
}

impl<F: Field> BasedComplex<F> {
    pub fn new(
        field: F,
        lowest: i64,
        dims: Vec<usize>,
        maps: Vec<Matrix<F::Elem>>,
    ) -> Result<Self, DetError> {
        let expected = dims.len().saturating_sub(1);
        if maps.len() != expected {
            return Err(DetError::Shape(format!(
                "{} differentials given for {} degrees",
                maps.len(),
                dims.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.rows() != dims[i + 1] || m.cols() != dims[i] {
                return Err(DetError::Shape(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    lowest + i as i64,
                    m.rows(),
                    m.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        for i in 1..maps.len() {
            if !maps[i].mul(&field, &maps[i - 1]).is_zero(&field) {
                return Err(DetError::NotComplex(lowest + i as i64 - 1));
            }
        }
        Ok(BasedComplex {
            field,
            lowest,
            dims,
            maps,
        })
    }

    /// A single space in degree `degree`.
    pub fn concentrated(field: F, degree: i64, dim: usize) -> Self {
        BasedComplex {
            field,
            lowest: degree,
            dims: vec![dim],
            maps: Vec::new(),
        }
    }

    /// `0 → V --m--> W → 0` with `V` in degree `lowest`.
    pub fn two_term(field: F, lowest: i64, map: Matrix<F::Elem>) -> Self {
        let dims = vec![map.cols(), map.rows()];
        BasedComplex {
            field,
            lowest,
            dims,
            maps: vec![map],
        }
    }

    pub fn zero(field: F) -> Self {
        BasedComplex {
            field,
            lowest: 0,
            dims: Vec::new(),
            maps: Vec::new(),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix<F::Elem>] {
        &self.maps
    }

    /// Degrees carrying a (possibly zero) space.
    pub fn degrees(&self) -> RangeInclusive<i64> {
        self.lowest..=self.lowest + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, degree: i64) -> usize {
        let i = degree - self.lowest;
        if i < 0 {
            return 0;
        }
        self.dims.get(i as usize).copied().unwrap_or(0)
    }

    /// The differential out of `degree`, zero outside the stored range.
    pub fn differential(&self, degree: i64) -> Matrix<F::Elem> {
        let i = degree - self.lowest;
        if i >= 0 {
            if let Some(m) = self.maps.get(i as usize) {
                return m.clone();
            }
        }
        Matrix::zeros(&self.field, self.dim(degree + 1), self.dim(degree))
    }

    pub fn rank_of_differential(&self, degree: i64) -> usize {
        self.differential(degree).rank(&self.field)
    }

    /// `Σ (-1)^n dim C^n`.
    pub fn euler_char(&self) -> i64 {
        self.degrees()
            .map(|n| if n.rem_euclid(2) == 0 { 1 } else { -1 } * self.dim(n) as i64)
            .sum()
    }

    /// `Σ (-1)^(p+1) p dim C^p`.
    pub fn secondary_euler(&self) -> i64 {
        self.degrees()
            .map(|p| if p.rem_euclid(2) == 0 { -1 } else { 1 } * p * self.dim(p) as i64)
            .sum()
    }

    /// Degrees with nonzero cohomology, paired with the cohomology dimension.
    pub fn cohomology(&self) -> Vec<(i64, usize)> {
        self.degrees()
            .filter_map(|n| {
                let h = self.dim(n) - self.rank_of_differential(n) - self.rank_of_differential(n - 1);
                (h > 0).then_some((n, h))
            })
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology().is_empty()
    }

    /// Reindex so that degree `n` of the result is degree `n + k` of `self`.
    /// Differentials are not re-signed.
    pub fn shift(&self, k: i64) -> Self {
        BasedComplex {
            field: self.field.clone(),
            lowest: self.lowest - k,
            dims: self.dims.clone(),
            maps: self.maps.clone(),
        }
    }

    /// Restate the complex on a (larger) degree window, padding with zeros.
    pub fn on_range(&self, lowest: i64, highest: i64) -> Self {
        assert!(
            self.dims.iter().enumerate().all(|(i, &d)| {
                let n = self.lowest + i as i64;
                d == 0 || (lowest..=highest).contains(&n)
            }),
            "window must contain the support"
        );
        let dims: Vec<usize> = (lowest..=highest).map(|n| self.dim(n)).collect();
        let maps = (lowest..highest).map(|n| self.differential(n)).collect();
        BasedComplex {
            field: self.field.clone(),
            lowest,
            dims,
            maps,
        }
    }

    /// Replace the based structure by `c_n U_n`; differentials become
    /// `U_{n+1}^{-1} d_n U_n`.
    pub fn change_basis(&self, bases: &[Matrix<F::Elem>]) -> Result<Self, DetError> {
        if bases.len() != self.dims.len() {
            return Err(DetError::Shape("one basis change per degree required".into()));
        }
        let mut inverses = Vec::with_capacity(bases.len());
        for (i, u) in bases.iter().enumerate() {
            if u.rows() != self.dims[i] || u.cols() != self.dims[i] {
                return Err(DetError::Shape(format!("basis change {i} has the wrong size")));
            }
            inverses.push(
                u.inverse(&self.field)
                    .ok_or_else(|| DetError::Shape(format!("basis change {i} is singular")))?,
            );
        }
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, d)| inverses[i + 1].mul(&self.field, &d.mul(&self.field, &bases[i])))
            .collect();
        BasedComplex::new(self.field.clone(), self.lowest, self.dims.clone(), maps)
    }
}

/// Degreewise direct sum with the basis of `a` first.
pub fn direct_sum<F: Field>(a: &BasedComplex<F>, b: &BasedComplex<F>) -> Result<BasedComplex<F>, DetError> {
    if a.field != b.field {
        return Err(DetError::FieldMismatch);
    }
    let field = a.field.clone();
    let (lo, hi) = hull(&[a, b]);
    let dims = (lo..=hi).map(|n| a.dim(n) + b.dim(n)).collect();
    let maps = (lo..hi)
        .map(|n| {
            let zero_ab = Matrix::zeros(&field, a.dim(n + 1), b.dim(n));
            let zero_ba = Matrix::zeros(&field, b.dim(n + 1), a.dim(n));
            Matrix::block(&field, &a.differential(n), &zero_ab, &zero_ba, &b.differential(n))
        })
        .collect();
    BasedComplex::new(field, lo, dims, maps)
}

/// Smallest window containing all the given complexes (`(0, 0)` if all empty).
pub(crate) fn hull<F: Field>(cs: &[&BasedComplex<F>]) -> (i64, i64) {
    let ranges: Vec<_> = cs.iter().filter(|c| !c.dims.is_empty()).map(|c| c.degrees()).collect();
    if ranges.is_empty() {
        return (0, 0);
    }
    let lo = ranges.iter().map(|r| *r.start()).min().unwrap();
    let hi = ranges.iter().map(|r| *r.end()).max().unwrap();
    (lo, hi)
}

/// A chain map: per-degree matrices `f_n: S^n → T^n` commuting with the
/// differentials.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMap<F: Field> {
    source: BasedComplex<F>,
    target: BasedComplex<F>,
    lowest: i64,
    components: Vec<Matrix<F::Elem>>,
}

impl<F: Field> ComplexMap<F> {
    /// `components[i]` acts in degree `lowest + i`; absent degrees are zero.
    pub fn new(
        source: BasedComplex<F>,
        target: BasedComplex<F>,
        lowest: i64,
        components: Vec<Matrix<F::Elem>>,
    ) -> Result<Self, DetError> {
        if source.field != target.field {
            return Err(DetError::FieldMismatch);
        }
        let map = ComplexMap {
            source,
            target,
            lowest,
            components,
        };
        let (lo, hi) = hull(&[&map.source, &map.target]);
        for (i, m) in map.components.iter().enumerate() {
            let n = lowest + i as i64;
            if m.rows() != map.target.dim(n) || m.cols() != map.source.dim(n) {
                return Err(DetError::Shape(format!("map component in degree {n} has the wrong size")));
            }
        }
        let field = map.source.field.clone();
        for n in lo - 1..=hi {
            let lhs = map.target.differential(n).mul(&field, &map.component(n));
            let rhs = map.component(n + 1).mul(&field, &map.source.differential(n));
            if lhs != rhs {
                return Err(DetError::NotChainMap(n));
            }
        }
        Ok(map)
    }

    pub fn identity(c: &BasedComplex<F>) -> Self {
        let components = c.dims.iter().map(|&d| Matrix::identity(&c.field, d)).collect();
        ComplexMap {
            source: c.clone(),
            target: c.clone(),
            lowest: c.lowest,
            components,
        }
    }

    /// A degree-0 endomorphism of a single space.
    pub fn automorphism(field: F, matrix: Matrix<F::Elem>) -> Result<Self, DetError> {
        if matrix.rows() != matrix.cols() {
            return Err(DetError::Shape("automorphism must be square".into()));
        }
        let c = BasedComplex::concentrated(field, 0, matrix.rows());
        ComplexMap::new(c.clone(), c, 0, vec![matrix])
    }

    pub fn source(&self) -> &BasedComplex<F> {
        &self.source
    }

    pub fn target(&self) -> &BasedComplex<F> {
        &self.target
    }

    pub fn component(&self, degree: i64) -> Matrix<F::Elem> {
        let i = degree - self.lowest;
        if i >= 0 {
            if let Some(m) = self.components.get(i as usize) {
                return m.clone();
            }
        }
        Matrix::zeros(&self.source.field, self.target.dim(degree), self.source.dim(degree))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ComplexMap<F>) -> Result<ComplexMap<F>, DetError> {
        if self.target != next.source {
            return Err(DetError::Shape("maps are not composable".into()));
        }
        let field = self.source.field.clone();
        let (lo, hi) = hull(&[&self.source, &next.target]);
        let components = (lo..=hi)
            .map(|n| next.component(n).mul(&field, &self.component(n)))
            .collect();
        ComplexMap::new(self.source.clone(), next.target.clone(), lo, components)
    }

    /// `cone(f)^n = S^{n+1} ⊕ T^n` with differential `[[-d_S, 0], [f, d_T]]`.
    pub fn cone(&self) -> BasedComplex<F> {
        let field = self.source.field.clone();
        let (lo, hi) = hull(&[&self.source, &self.target]);
        let (lo, hi) = (lo - 1, hi);
        let dims = (lo..=hi)
            .map(|n| self.source.dim(n + 1) + self.target.dim(n))
            .collect();
        let maps = (lo..hi)
            .map(|n| {
                let top_right = Matrix::zeros(&field, self.source.dim(n + 2), self.target.dim(n));
                Matrix::block(
                    &field,
                    &self.source.differential(n + 1).neg(&field),
                    &top_right,
                    &self.component(n + 1),
                    &self.target.differential(n),
                )
            })
            .collect();
        BasedComplex::new(field, lo, dims, maps).expect("cone of a chain map is a complex")
    }
}
