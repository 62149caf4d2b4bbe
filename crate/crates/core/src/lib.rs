//! Exact Hausdorff distance under translation in the plane, with instance
//! generators that encode Orthogonal Vectors and Convolution 3SUM as
//! translation problems.
//!
//! Coordinates live in ℚ[√2] ([`ExactScalar`]), so every predicate is decided
//! exactly. The decision procedure is in [`solver`], the reductions in
//! [`reduction`], brute-force ground truth in [`oracles`], and generation,
//! verification and benchmarking in [`harness`].

pub mod error;
pub mod format;
pub mod geometry;
pub mod harness;
pub mod oracles;
pub mod reduction;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use format::Instance;
pub use geometry::{Norm, Point, PointSet};
pub use scalar::{ExactScalar, Rational};
pub use solver::{decide_translation, CandidateTranslation, Direction, SolverOptions};
