//! Goodness-of-fit testing for stochastic block models.
//!
//! The test fits a `K0`-community block model, centers and rescales the
//! adjacency matrix entrywise with the fitted edge probabilities, and
//! compares the extreme eigenvalues of the residual matrix with the
//! Tracy-Widom (beta = 1) law. A parametric-bootstrap correction recalibrates
//! the location and spread of both extreme eigenvalues, and running the test
//! for `K0 = 1, 2, ...` yields a sequential estimate of the number of
//! communities.
//!
//! Modules:
//! - [`netgen`]: graphs, model parameters, generators, edge-list ingestion.
//! - [`spectral`]: Lanczos eigen-solvers and spectral clustering.
//! - [`gof`]: residual matrices, the Tracy-Widom table and the tests.
//! - [`select`]: sequential estimation of the community count.
//! - [`harness`]: experiment runners and report writers.

pub mod error;
pub mod gof;
pub mod harness;
pub mod netgen;
pub mod rng;
pub mod select;
pub mod spectral;

pub use error::{Error, ErrorKind, Result};
pub use rng::SeededRng;
