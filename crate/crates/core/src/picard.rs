//! Graded determinant lines over a field, as a strictified Picard category.
//!
//! Objects are pairs `(rank, unit)`. Associativity and unit constraints are
//! identities; the only nontrivial structure is the symmetry
//! `c_{a,b}` with Koszul scale `(-1)^{rank(a)·rank(b)}`.

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicardError {
    #[error("graded lines live over different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("a graded line needs a nonzero unit")]
    ZeroUnit,
    #[error("no morphism between lines of rank {0} and {1}")]
    RankMismatch(i64, i64),
    #[error("morphisms are not composable")]
    NotComposable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradedLine<F: Field> {
    field: F,
    rank: i64,
    unit: F::Elem,
}

impl<F: Field> GradedLine<F> {
    pub fn new(field: F, rank: i64, unit: F::Elem) -> Result<Self, PicardError> {
        if field.is_zero(&unit) {
            return Err(PicardError::ZeroUnit);
        }
        Ok(GradedLine { field, rank, unit })
    }

    /// The zero object `(0, 1)`.
    pub fn unit_object(field: F) -> Self {
        let one = field.one();
        GradedLine {
            field,
            rank: 0,
            unit: one,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn unit(&self) -> &F::Elem {
        &self.unit
    }

    /// The inverse object `(-r, u^{-1})`.
    pub fn inverse(&self) -> Self {
        GradedLine {
            field: self.field.clone(),
            rank: -self.rank,
            unit: self.field.inv(&self.unit).expect("units are nonzero"),
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), PicardError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PicardError::FieldMismatch(self.field.name(), other.field.name()))
        }
    }
}

/// Rank adds, unit multiplies.
pub fn tensor<F: Field>(a: &GradedLine<F>, b: &GradedLine<F>) -> Result<GradedLine<F>, PicardError> {
    a.same_field(b)?;
    Ok(GradedLine {
        field: a.field.clone(),
        rank: a.rank + b.rank,
        unit: a.field.mul(&a.unit, &b.unit),
    })
}

/// A morphism of graded lines; only exists between equal ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct LineMorphism<F: Field> {
    source: GradedLine<F>,
    target: GradedLine<F>,
    scale: F::Elem,
}

impl<F: Field> LineMorphism<F> {
    pub fn new(
        source: GradedLine<F>,
        target: GradedLine<F>,
        scale: F::Elem,
    ) -> Result<Self, PicardError> {
        source.same_field(&target)?;
        if source.rank != target.rank {
            return Err(PicardError::RankMismatch(source.rank, target.rank));
        }
        if source.field.is_zero(&scale) {
            return Err(PicardError::ZeroUnit);
        }
        Ok(LineMorphism {
            source,
            target,
            scale,
        })
    }

    pub fn identity(x: &GradedLine<F>) -> Self {
        LineMorphism {
            source: x.clone(),
            target: x.clone(),
            scale: x.field.one(),
        }
    }

    pub fn source(&self) -> &GradedLine<F> {
        &self.source
    }

    pub fn target(&self) -> &GradedLine<F> {
        &self.target
    }

    pub fn scale(&self) -> &F::Elem {
        &self.scale
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.source.field.is_one(&self.scale)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LineMorphism<F>) -> Result<LineMorphism<F>, PicardError> {
        if self.target != other.source {
            return Err(PicardError::NotComposable);
        }
        Ok(LineMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            scale: self.source.field.mul(&self.scale, &other.scale),
        })
    }

    pub fn inverse(&self) -> LineMorphism<F> {
        LineMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            scale: self.source.field.inv(&self.scale).expect("scales are nonzero"),
        }
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &LineMorphism<F>) -> Result<LineMorphism<F>, PicardError> {
        Ok(LineMorphism {
            source: tensor(&self.source, &other.source)?,
            target: tensor(&self.target, &other.target)?,
            scale: self.source.field.mul(&self.scale, &other.scale),
        })
    }
}

/// `c_{a,b}: a ⊗ b → b ⊗ a`.
pub fn commutativity_iso<F: Field>(
    a: &GradedLine<F>,
    b: &GradedLine<F>,
) -> Result<LineMorphism<F>, PicardError> {
    let field = a.field.clone();
    LineMorphism::new(tensor(a, b)?, tensor(b, a)?, field.sign(a.rank * b.rank))
}

/// `ε(x) = c_{x,x}`.
pub fn epsilon<F: Field>(x: &GradedLine<F>) -> LineMorphism<F> {
    commutativity_iso(x, x).expect("a line shares its own field")
}

/// `a_{x,y,z}: (x⊗y)⊗z → x⊗(y⊗z)`; the identity in this model.
pub fn associator<F: Field>(
    x: &GradedLine<F>,
    y: &GradedLine<F>,
    z: &GradedLine<F>,
) -> Result<LineMorphism<F>, PicardError> {
    let left = tensor(&tensor(x, y)?, z)?;
    let right = tensor(x, &tensor(y, z)?)?;
    LineMorphism::new(left, right, x.field.one())
}

/// Coherence data a checker composes: an associator and a symmetry.
///
/// [`check_pentagon`] and [`check_hexagon`] use the Koszul structure;
/// the `_with` variants accept arbitrary structure so that deliberately
/// broken sign rules can be shown to fail.
pub trait Braiding<F: Field> {
    fn associator(
        &self,
        x: &GradedLine<F>,
        y: &GradedLine<F>,
        z: &GradedLine<F>,
    ) -> Result<LineMorphism<F>, PicardError>;

    fn symmetry(&self, x: &GradedLine<F>, y: &GradedLine<F>) -> Result<LineMorphism<F>, PicardError>;
}

/// Strict associators with Koszul signs.
#[derive(Debug, Clone, Copy, Default)]
pub struct Koszul;

impl<F: Field> Braiding<F> for Koszul {
    fn associator(
        &self,
        x: &GradedLine<F>,
        y: &GradedLine<F>,
        z: &GradedLine<F>,
    ) -> Result<LineMorphism<F>, PicardError> {
        associator(x, y, z)
    }

    fn symmetry(&self, x: &GradedLine<F>, y: &GradedLine<F>) -> Result<LineMorphism<F>, PicardError> {
        commutativity_iso(x, y)
    }
}

pub fn check_pentagon<F: Field>(
    w: &GradedLine<F>,
    x: &GradedLine<F>,
    y: &GradedLine<F>,
    z: &GradedLine<F>,
) -> Result<bool, PicardError> {
    check_pentagon_with(&Koszul, w, x, y, z)
}

/// Compares `a_{w,x,y⊗z} ∘ a_{w⊗x,y,z}` with
/// `(id_w ⊗ a_{x,y,z}) ∘ a_{w,x⊗y,z} ∘ (a_{w,x,y} ⊗ id_z)`.
pub fn check_pentagon_with<F: Field, B: Braiding<F>>(
    braid: &B,
    w: &GradedLine<F>,
    x: &GradedLine<F>,
    y: &GradedLine<F>,
    z: &GradedLine<F>,
) -> Result<bool, PicardError> {
    let wx = tensor(w, x)?;
    let xy = tensor(x, y)?;
    let yz = tensor(y, z)?;
    let short = braid
        .associator(&wx, y, z)?
        .then(&braid.associator(w, x, &yz)?)?;
    let long = braid
        .associator(w, x, y)?
        .tensor(&LineMorphism::identity(z))?
        .then(&braid.associator(w, &xy, z)?)?
        .then(&LineMorphism::identity(w).tensor(&braid.associator(x, y, z)?)?)?;
    Ok(short.then(&long.inverse())?.is_identity())
}

pub fn check_hexagon<F: Field>(
    x: &GradedLine<F>,
    y: &GradedLine<F>,
    z: &GradedLine<F>,
) -> Result<bool, PicardError> {
    check_hexagon_with(&Koszul, x, y, z)
}

/// Checks both hexagons and the symmetry condition `c_{y,x} ∘ c_{x,y} = id`.
pub fn check_hexagon_with<F: Field, B: Braiding<F>>(
    braid: &B,
    x: &GradedLine<F>,
    y: &GradedLine<F>,
    z: &GradedLine<F>,
) -> Result<bool, PicardError> {
    let idx = LineMorphism::identity(x);
    let idy = LineMorphism::identity(y);
    let idz = LineMorphism::identity(z);

    // (x⊗y)⊗z → x⊗(y⊗z) → (y⊗z)⊗x → y⊗(z⊗x)
    let first_top = braid
        .associator(x, y, z)?
        .then(&braid.symmetry(x, &tensor(y, z)?)?)?
        .then(&braid.associator(y, z, x)?)?;
    // (x⊗y)⊗z → (y⊗x)⊗z → y⊗(x⊗z) → y⊗(z⊗x)
    let first_bottom = braid
        .symmetry(x, y)?
        .tensor(&idz)?
        .then(&braid.associator(y, x, z)?)?
        .then(&idy.tensor(&braid.symmetry(x, z)?)?)?;

    // x⊗(y⊗z) → (x⊗y)⊗z → z⊗(x⊗y) → (z⊗x)⊗y
    let second_top = braid
        .associator(x, y, z)?
        .inverse()
        .then(&braid.symmetry(&tensor(x, y)?, z)?)?
        .then(&braid.associator(z, x, y)?.inverse())?;
    // x⊗(y⊗z) → x⊗(z⊗y) → (x⊗z)⊗y → (z⊗x)⊗y
    let second_bottom = idx
        .tensor(&braid.symmetry(y, z)?)?
        .then(&braid.associator(x, z, y)?.inverse())?
        .then(&braid.symmetry(x, z)?.tensor(&idy)?)?;

    let symmetric = braid.symmetry(x, y)?.then(&braid.symmetry(y, x)?)?.is_identity();
    Ok(first_top.then(&first_bottom.inverse())?.is_identity()
        && second_top.then(&second_bottom.inverse())?.is_identity()
        && symmetric)
}
