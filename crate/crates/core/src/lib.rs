//! Complexity analysis for rank-1 weighted matrix completion.
//!
//! An instance is a pair `(C, u*)`: a symmetric nonnegative weight matrix and
//! a ground-truth vector, normalized so both have unit entry-wise l1 norm. The
//! instance defines the loss
//!
//! ```text
//! g(u) = sum_{i,j} C_ij (u_i u_j - u*_i u*_j)^2 .
//! ```
//!
//! The library computes the instance's complexity: the inverse of the weighted
//! l1 distance from `(C, u*)` to the set of instances whose global solution is
//! not unique. That set has an exact combinatorial description in terms of the
//! weighted graph of `C` (connectivity and bipartiteness of the subgraph on the
//! support of `u*`), which makes the distance computable by enumerating
//! certificates. On top of that sit generators for the extremal instance
//! families, evaluators for the printed complexity bounds, and optimization
//! machinery (gradient descent, multistart Newton, second-order classification)
//! for landscape experiments.
//!
//! Modules:
//! - [`instance`]: instance representation, normalization, loss derivatives.
//! - [`graph`]: instance graph, degeneracy tests, closure membership.
//! - [`metric`]: exact metric by certificate enumeration plus closed forms.
//! - [`families`] / [`bounds`]: instance generators and bound evaluators.
//! - [`landscape`] / [`reduced`]: gradient descent, saddle scans, the reduced
//!   m-dimensional problem and its explicit spurious critical points.
//! - [`io`]: the JSON instance file format.

pub mod bounds;
pub mod error;
pub mod families;
pub mod graph;
pub mod instance;
pub mod io;
pub mod landscape;
pub mod linalg;
pub mod metric;
pub mod reduced;
pub mod rng;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::Error;
pub use instance::{GroundTruth, Instance, Point, WeightMatrix};
pub use rng::RandomStream;

/// Default tolerances shared across modules. Operations that take an explicit
/// config can override them.
pub mod tol {
    /// Normalization residual allowed on stored instances.
    pub const NORMALIZATION: f64 = 1e-12;
    /// Relative error allowed when checking gradients against finite differences.
    pub const GRAD_CHECK: f64 = 1e-6;
    /// Relative error allowed when checking Hessians against finite differences.
    pub const HESS_CHECK: f64 = 1e-5;
    /// Eigenvalue slack separating second-order critical points from saddles.
    pub const EIG: f64 = 1e-8;
    /// Default Frobenius success radius for gradient-descent experiments.
    pub const SUCCESS: f64 = 1e-5;
}
