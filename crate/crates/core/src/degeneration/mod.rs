//! Semistable special fibers, their Steenbrink complexes and what is read
//! off them: limit cohomology, the Clemens–Schmid sequence and the two
//! routes to the nearby-cycle comparison.

pub mod analysis;
pub mod examples;
pub mod fiber;
pub mod steenbrink;

pub use analysis::{
    chi_compare, chi_report, clemens_schmid, limit_cohomology, self_duality, special_fiber_complexes, CSReport, ChiReport,
    CsNode, CsThread, LimitCohomology, LimitDegree, Profile, SelfDuality, SpecialFiberComplexes,
};
pub use examples::{builtin_example, builtin_spec, BUILTIN_NAMES};
pub use fiber::{validate_fiber, FiberSpec, PairingSpec, PieceSpec, RestrictionSpec, SemistableFiber, StratumKey, StratumSpec};
pub use steenbrink::{steenbrink, BlockKey, SteenbrinkComplex};
