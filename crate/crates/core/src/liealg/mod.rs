//! Validated 2-step nilpotent metric Lie algebras and their structure.

pub mod algebra;
pub mod ideals;
pub mod nonsingular;
pub mod split;

pub use algebra::{
    orthonormalize, validate, GramError, MetricLieAlgebra, Orthonormalized, StructureConstants,
    ValidationError, Violation,
};
pub use ideals::{
    ideal_decomposition, Component, ComponentKind, IdealDecomposition, InternalInconsistency,
};
pub use nonsingular::{is_nonsingular, Nonsingularity, DEFAULT_NONSINGULARITY_SAMPLES};
pub use split::{j_injective, CenterSplit, JMap};
