//! Convex operational theories in finite dimensions: cones and their duals,
//! minimal and maximal tensor products, conditional states, and decision
//! procedures for cloning, broadcasting, nondisturbance, bit commitment and
//! teleportation.
//!
//! Everything is generic over [`Scalar`]: run with [`Rational`] for exact
//! verdicts, or with `f64` and an absolute tolerance when the model has
//! irrational coordinates.

pub mod cli;
pub mod composites;
pub mod cone;
pub mod dd;
pub mod error;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod maps;
pub mod models;
pub mod protocols;
pub mod scalar;
pub mod space;

pub use cone::{ConeKind, ConeRep};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use maps::LinearMap;
pub use scalar::{Arithmetic, Rational, Scalar};
pub use space::{Effect, Observable, StateSpace};
