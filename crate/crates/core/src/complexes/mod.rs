//! Bounded complexes of (φ,N)-modules, double complexes, monodromy
//! complexes and the weight spectral sequence.

pub mod complex;
pub mod double;
pub mod koszul;
pub mod monodromy;
pub mod spectral;

pub use complex::{cone, homology, twist_shift, Block, ChainMap, Complex, Homology, Term};
pub use double::{total_complex, DoubleComplex, TotalLayout};
pub use koszul::{
    bar_mult_table, derivation_check, koszul_selftest, lax_tensor, projection_formula_matrix, BarTable, Check,
};
pub use monodromy::{cofree_truncation, kummer_object, monodromy_on_graded, GradedMonodromy, MonodromyComplex};
pub use spectral::{homology_filtration, weight_ss, weight_ss_with, Filtration, SSCell, SSResult};
