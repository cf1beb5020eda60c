//! Exact calculus for determinant functors, λ-rings on K₀ of projective
//! spaces, Riemann–Roch on ℙⁿ, and the Gersten complex of ℙ¹ over ℚ.

pub mod cli;
pub mod detfun;
pub mod field;
pub mod gersten;
pub mod kring;
pub mod lambda;
pub mod picard;
pub mod pushpull;
