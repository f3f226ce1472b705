//! Exact limit cohomology of semistable degenerations over p-adic fields,
//! computed through (φ,N)-modules, Steenbrink complexes and weight spectral
//! sequences.

pub mod algebra;
pub mod error;
pub mod io;
pub mod complexes;
pub mod degeneration;
pub mod phimod;
#[cfg(feature = "random")]
pub mod random;

pub use algebra::{Field, Matrix, Scalar};
pub use error::{Error, Result};
