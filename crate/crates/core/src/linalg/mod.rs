//! Dense linear algebra over exact rationals and `f64`.

pub mod eigen;
pub mod matrix;
pub mod solve;
pub mod subspace;

pub use eigen::{eigendecompose_symmetric, EigenError, Eigenspace};
pub use matrix::Matrix;
pub use solve::{nullspace, rank, rref, solve_affine, AffineSolution, InfeasibilityWitness};
pub use subspace::SubspaceBasis;
