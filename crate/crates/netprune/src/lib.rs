//! Grid-based net & prune primitives for geometric distance optimization.
//!
//! The crate is organized around a small driver loop that repeatedly sparsifies
//! a point set with `r`-nets and discards irrelevant points with far/close
//! splits, guided by a per-problem distance decider. The loop shrinks the
//! input geometrically in expectation, which makes constant-factor
//! approximation of a large class of distance quantities (k-center radius,
//! rank distances, MST edge lengths, sketch-constrained balls and clusters)
//! run in expected linear time; dedicated refinement then sharpens the
//! constant factor to `1 + eps` or to an exact value where the problem allows.
//!
//! Modules:
//! - [`geom`]: points, weighted points, grid hashing, cell neighborhoods.
//! - [`nets`]: `r`-net construction and far/close splits.
//! - [`framework`]: the decider interface, the sampling driver, and interval
//!   refinement.
//! - [`problems`]: concrete deciders and end-to-end solvers.
//! - [`hiprob`]: the high-probability sampling pipeline that replaces the
//!   driver's random pivot with a middle-rank nearest-neighbor distance.
//! - [`oracle`]: brute-force reference implementations used by tests and the
//!   CLI's oracle mode.
//! - [`datagen`]: seeded synthetic point clouds.

pub mod datagen;
pub mod error;
mod exec;
pub mod framework;
pub mod geom;
pub mod hiprob;
pub mod nets;
pub mod oracle;
pub mod problems;

pub use error::Error;
