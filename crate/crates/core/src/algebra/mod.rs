//! Exact arithmetic in Q(√p) and dense linear algebra over it.

pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod subspace;
pub mod weil;

pub use matrix::{Matrix, RankKernel};
pub use poly::Poly;
pub use scalar::{Field, Scalar};
pub use subspace::Subquotient;
pub use weil::{weil_split, WeightPiece, WeightSplit};
