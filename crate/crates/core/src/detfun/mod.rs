//! Determinant of cohomology on based complexes over ℚ or 𝔽_p.
//!
//! The torsion of an acyclic complex is computed by choosing, in each degree
//! `n`, the standard basis vectors `s_n` singled out by the leftmost-pivot
//! rule on `d_n`, and comparing the basis `(s_n, d(s_{n-1}))` of `C^n` with
//! the given one:
//!
//! ```text
//! τ(C) = Π_n det[s_n, d(s_{n-1}) / c_n]^((-1)^(n+1))
//! ```
//!
//! With this convention `0 → V --A--> W → 0` (V in degree 0) has torsion
//! `det A`, a base change `c_n ↦ c_n U_n` multiplies τ by
//! `Π det(U_n)^((-1)^n)`, and reindexing by one inverts τ.

mod complex;
pub mod json;

pub use complex::{direct_sum, BasedComplex, ComplexMap};

use num_bigint::BigInt;
use thiserror::Error;

use crate::field::{binomial, permutation_sign, Field, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("d∘d ≠ 0 out of degree {0}")]
    NotComplex(i64),
    #[error("complex is not acyclic: nonzero cohomology in degrees {0:?}")]
    NotAcyclic(Vec<i64>),
    #[error("map is not a quasi-isomorphism: cone has cohomology in degrees {0:?}")]
    NotQuasiIso(Vec<i64>),
    #[error("map does not commute with differentials at degree {0}")]
    NotChainMap(i64),
    #[error("sequence is not in block form at degree {0}: {1}")]
    NotBlockForm(i64, String),
    #[error("complexes live over different fields")]
    FieldMismatch,
    #[error("malformed grid: {0}")]
    MalformedGrid(String),
    #[error("argument out of range: {0}")]
    Guard(String),
    #[error("invalid complex JSON: {0}")]
    Json(String),
}

/// Torsion of an acyclic based complex.
pub fn torsion<F: Field>(c: &BasedComplex<F>) -> Result<F::Elem, DetError> {
    let bad: Vec<i64> = c.cohomology().into_iter().map(|(n, _)| n).collect();
    if !bad.is_empty() {
        return Err(DetError::NotAcyclic(bad));
    }
    let field = c.field();
    let mut tau = field.one();
    let mut boundary_basis: Vec<Vec<F::Elem>> = Vec::new();
    for n in c.degrees() {
        let dim = c.dim(n);
        let d = c.differential(n);
        let pivots = d.pivot_columns(field);
        let mut columns: Vec<Vec<F::Elem>> = pivots
            .iter()
            .map(|&j| {
                let mut e = vec![field.zero(); dim];
                e[j] = field.one();
                e
            })
            .collect();
        columns.extend(boundary_basis.iter().cloned());
        debug_assert_eq!(columns.len(), dim);
        let det = columns_det(field, dim, &columns);
        let factor = if (n + 1).rem_euclid(2) == 0 {
            det
        } else {
            field.inv(&det).expect("acyclic bases are invertible")
        };
        tau = field.mul(&tau, &factor);
        boundary_basis = pivots.iter().map(|&j| d.column(j)).collect();
    }
    Ok(tau)
}

fn columns_det<F: Field>(field: &F, dim: usize, columns: &[Vec<F::Elem>]) -> F::Elem {
    let mut m = Matrix::zeros(field, dim, dim);
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    m.det(field)
}

/// `Σ_n (-1)^n dim C^n`.
pub fn euler_char<F: Field>(c: &BasedComplex<F>) -> i64 {
    c.euler_char()
}

/// `Σ_p (-1)^(p+1) p dim C^p`.
pub fn secondary_euler<F: Field>(c: &BasedComplex<F>) -> i64 {
    c.secondary_euler()
}

/// Determinant of a quasi-isomorphism, `τ(cone f)^{-1}`.
///
/// The cone of a degree-0 automorphism sits in degrees −1 and 0, where the
/// torsion convention yields `det(f)^{-1}`; inverting makes the value the
/// matrix determinant.
pub fn det_of_quasi_iso<F: Field>(f: &ComplexMap<F>) -> Result<F::Elem, DetError> {
    let cone = f.cone();
    let bad: Vec<i64> = cone.cohomology().into_iter().map(|(n, _)| n).collect();
    if !bad.is_empty() {
        return Err(DetError::NotQuasiIso(bad));
    }
    let tau = torsion(&cone)?;
    Ok(f.source().field().inv(&tau).expect("torsion is a unit"))
}

/// The sign relating `τ(A)` to `τ(A')·τ(A'')` for a block extension with the
/// sub block first: `(-1)^{Σ_n rank d''_n · rank d'_{n-1}}`.
pub fn predicted_ses_sign<F: Field>(sub: &BasedComplex<F>, quot: &BasedComplex<F>) -> i64 {
    let (lo, hi) = complex::hull(&[sub, quot]);
    let exponent: usize = (lo..=hi)
        .map(|n| quot.rank_of_differential(n) * sub.rank_of_differential(n - 1))
        .sum();
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Comparison scalar `τ(A) / (τ(A')·τ(A''))` of a short exact sequence
/// `A' → A → A''` given in block form (A' the leading basis block of A).
pub fn ses_multiplicativity<F: Field>(
    sub: &BasedComplex<F>,
    mid: &BasedComplex<F>,
    quot: &BasedComplex<F>,
    inclusion: &ComplexMap<F>,
    projection: &ComplexMap<F>,
) -> Result<F::Elem, DetError> {
    if inclusion.source() != sub || inclusion.target() != mid {
        return Err(DetError::Shape("inclusion must map A' to A".into()));
    }
    if projection.source() != mid || projection.target() != quot {
        return Err(DetError::Shape("projection must map A to A''".into()));
    }
    let field = mid.field();
    let (lo, hi) = complex::hull(&[sub, mid, quot]);
    for n in lo..=hi {
        let (a, b, c) = (sub.dim(n), mid.dim(n), quot.dim(n));
        if a + c != b {
            return Err(DetError::NotBlockForm(n, format!("{a} + {c} ≠ {b}")));
        }
        let lead = Matrix::block(
            field,
            &Matrix::identity(field, a),
            &Matrix::zeros(field, a, 0),
            &Matrix::zeros(field, c, a),
            &Matrix::zeros(field, c, 0),
        );
        if inclusion.component(n) != lead {
            return Err(DetError::NotBlockForm(n, "inclusion is not [I; 0]".into()));
        }
        let tail = Matrix::block(
            field,
            &Matrix::zeros(field, c, a),
            &Matrix::identity(field, c),
            &Matrix::zeros(field, 0, a),
            &Matrix::zeros(field, 0, c),
        );
        if projection.component(n) != tail {
            return Err(DetError::NotBlockForm(n, "projection is not [0 I]".into()));
        }
    }
    comparison_scalar(sub, mid, quot)
}

fn comparison_scalar<F: Field>(
    sub: &BasedComplex<F>,
    mid: &BasedComplex<F>,
    quot: &BasedComplex<F>,
) -> Result<F::Elem, DetError> {
    let field = mid.field();
    let denom = field.mul(&torsion(sub)?, &torsion(quot)?);
    Ok(field.mul(&torsion(mid)?, &field.inv(&denom).expect("torsion is a unit")))
}

/// Builds the block extension `A' → A → A''` whose middle differential is
/// `[[d', h], [0, d'']]`, together with its inclusion and projection.
pub fn block_extension<F: Field>(
    sub: &BasedComplex<F>,
    quot: &BasedComplex<F>,
    twist: &[Matrix<F::Elem>],
) -> Result<(BasedComplex<F>, ComplexMap<F>, ComplexMap<F>), DetError> {
    let field = sub.field().clone();
    if *quot.field() != field {
        return Err(DetError::FieldMismatch);
    }
    let (lo, hi) = complex::hull(&[sub, quot]);
    let dims = (lo..=hi).map(|n| sub.dim(n) + quot.dim(n)).collect();
    let maps = (lo..hi)
        .map(|n| {
            let i = (n - lo) as usize;
            let h = twist
                .get(i)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(&field, sub.dim(n + 1), quot.dim(n)));
            Matrix::block(
                &field,
                &sub.differential(n),
                &h,
                &Matrix::zeros(&field, quot.dim(n + 1), sub.dim(n)),
                &quot.differential(n),
            )
        })
        .collect();
    let mid = BasedComplex::new(field.clone(), lo, dims, maps)?;
    let inc = (lo..=hi)
        .map(|n| {
            Matrix::block(
                &field,
                &Matrix::identity(&field, sub.dim(n)),
                &Matrix::zeros(&field, sub.dim(n), 0),
                &Matrix::zeros(&field, quot.dim(n), sub.dim(n)),
                &Matrix::zeros(&field, quot.dim(n), 0),
            )
        })
        .collect();
    let proj = (lo..=hi)
        .map(|n| {
            Matrix::block(
                &field,
                &Matrix::zeros(&field, quot.dim(n), sub.dim(n)),
                &Matrix::identity(&field, quot.dim(n)),
                &Matrix::zeros(&field, 0, sub.dim(n)),
                &Matrix::zeros(&field, 0, quot.dim(n)),
            )
        })
        .collect();
    let inclusion = ComplexMap::new(sub.clone(), mid.clone(), lo, inc)?;
    let projection = ComplexMap::new(mid.clone(), quot.clone(), lo, proj)?;
    Ok((mid, inclusion, projection))
}

/// A coordinate splitting `sub → mid → quot`: in each degree, the listed
/// basis positions of `mid` carry `sub` (in order) and the remaining
/// positions, in increasing order, carry `quot`.
#[derive(Debug, Clone, PartialEq)]
pub struct Splitting {
    pub lowest: i64,
    pub sub_positions: Vec<Vec<usize>>,
}

impl Splitting {
    /// The leading-block splitting for the given sub dimensions.
    pub fn leading(lowest: i64, sub_dims: &[usize]) -> Self {
        Splitting {
            lowest,
            sub_positions: sub_dims.iter().map(|&d| (0..d).collect()).collect(),
        }
    }

    fn positions(&self, degree: i64) -> &[usize] {
        let i = degree - self.lowest;
        if i < 0 {
            return &[];
        }
        self.sub_positions.get(i as usize).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// One edge of a 3×3 diagram.
struct Edge<'a, F: Field> {
    sub: &'a BasedComplex<F>,
    mid: &'a BasedComplex<F>,
    quot: &'a BasedComplex<F>,
    split: &'a Splitting,
}

impl<F: Field> Edge<'_, F> {
    /// Validates the splitting and returns `(measured, predicted)`.
    fn scalars(&self) -> Result<(F::Elem, F::Elem), DetError> {
        let field = self.mid.field();
        let (lo, hi) = complex::hull(&[self.sub, self.mid, self.quot]);
        let mut perm_sign = 1i64;
        let mut orders = Vec::new();
        for n in lo..=hi {
            let (a, b, c) = (self.sub.dim(n), self.mid.dim(n), self.quot.dim(n));
            let pos = self.split.positions(n);
            if a + c != b || pos.len() != a {
                return Err(DetError::MalformedGrid(format!(
                    "degree {n}: dimensions {a} + {c} do not split {b}"
                )));
            }
            let mut seen = vec![false; b];
            for &p in pos {
                if p >= b || seen[p] {
                    return Err(DetError::MalformedGrid(format!("degree {n}: bad positions {pos:?}")));
                }
                seen[p] = true;
            }
            let mut order: Vec<usize> = pos.to_vec();
            order.extend((0..b).filter(|&p| !seen[p]));
            perm_sign *= permutation_sign(&order);
            orders.push(order);
        }
        // The sub positions must span a subcomplex of mid.
        for n in lo..hi {
            let i = (n - lo) as usize;
            let outside = &orders[i + 1][self.sub.dim(n + 1)..];
            let from = &orders[i][..self.sub.dim(n)];
            if !self.mid.differential(n).select(outside, from).is_zero(field) {
                return Err(DetError::MalformedGrid(format!(
                    "degree {n}: sub positions are not a subcomplex"
                )));
            }
        }
        let measured = comparison_scalar(self.sub, self.mid, self.quot)?;
        let predicted = field.from_i64(perm_sign * predicted_ses_sign(self.sub, self.quot));
        Ok((measured, predicted))
    }
}

/// A 3×3 diagram of complexes `entries[row][col]` whose rows
/// `X[i][0] → X[i][1] → X[i][2]` and columns `X[0][j] → X[1][j] → X[2][j]`
/// are coordinate splittings.
#[derive(Debug, Clone)]
pub struct NineGrid<F: Field> {
    pub entries: [[BasedComplex<F>; 3]; 3],
    pub row_splits: [Splitting; 3],
    pub col_splits: [Splitting; 3],
}

/// Compares the two ways of decomposing the center through the diagram
/// with the structure signs predicted from ranks and shuffles.
///
/// Row-first: middle row, then the outer columns. Column-first: middle
/// column, then the outer rows. Returns true iff each path's measured
/// comparison scalar equals its predicted sign.
pub fn nine_diagram_check<F: Field>(grid: &NineGrid<F>) -> Result<bool, DetError> {
    let field = grid.entries[1][1].field().clone();
    for row in &grid.entries {
        for c in row {
            if *c.field() != field {
                return Err(DetError::FieldMismatch);
            }
        }
    }
    let e = &grid.entries;
    let row = |i: usize| Edge {
        sub: &e[i][0],
        mid: &e[i][1],
        quot: &e[i][2],
        split: &grid.row_splits[i],
    };
    let col = |j: usize| Edge {
        sub: &e[0][j],
        mid: &e[1][j],
        quot: &e[2][j],
        split: &grid.col_splits[j],
    };
    let path = |edges: [Edge<'_, F>; 3]| -> Result<(F::Elem, F::Elem), DetError> {
        let mut measured = field.one();
        let mut predicted = field.one();
        for edge in edges {
            let (m, p) = edge.scalars()?;
            measured = field.mul(&measured, &m);
            predicted = field.mul(&predicted, &p);
        }
        Ok((measured, predicted))
    };
    let (row_measured, row_predicted) = path([row(1), col(0), col(2)])?;
    let (col_measured, col_predicted) = path([col(1), row(0), row(2)])?;
    Ok(row_measured == row_predicted && col_measured == col_predicted)
}

/// `Σ_p (-1)^(p+1) p · C(n+k-p-1, k-p) · C(n, p)`: the secondary Euler
/// characteristic of `S^k` of the cone of the identity on an
/// `n`-dimensional space. Equals `n`.
pub fn grayson_check(n: i64, k: i64) -> Result<BigInt, DetError> {
    if !(1..=30).contains(&n) || !(1..=30).contains(&k) {
        return Err(DetError::Guard(format!("need 1 ≤ n, k ≤ 30, got n={n}, k={k}")));
    }
    let mut total = BigInt::from(0);
    for p in 0..=k {
        let term = binomial(n + k - p - 1, k - p) * binomial(n, p) * BigInt::from(p);
        if p % 2 == 0 {
            total -= term;
        } else {
            total += term;
        }
    }
    Ok(total)
}
