//! Boundary strata of central streams, computed combinatorially.
//!
//! A Newton polygon `xi` determines a minimal arrowed binary sequence; its
//! codimension-one generic specializations are produced by full
//! modifications and cross-checked against a brute-force search in the
//! symmetric group.

pub mod abs;
pub mod boundary;
pub mod error;
pub mod modification;
pub mod newton;
pub mod weyl;

#[cfg(test)]
mod properties;

pub use abs::{
    abs_from_binary_sequence, direct_sum, minimal_abs, minimal_abs_segment, Abs, BinaryExpansion,
    BinarySequence, Symbol,
};
pub use boundary::{
    boundary_set, boundary_set_oracle, oracle_sweep, verify_curtailment, verify_direct_sum,
    verify_duality, BoundarySet, VerificationReport,
};
pub use error::{Error, Result};
pub use modification::{
    full_modification, small_modification, specialization_to_weyl, ModificationTrace, SmallModPair,
    Verdict,
};
pub use newton::{NewtonPolygon, Phi, Reduction, Segment};
pub use weyl::{JwContext, Permutation, SpecializationOracle};
