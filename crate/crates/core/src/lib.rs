//! Exact computations around Lagrangian tori in four-dimensional ellipsoids,
//! balls, polydisks and cylinders.

pub mod buildings;
pub mod ech;
pub mod error;
pub mod exactnum;
pub mod fredholm;
pub mod linf;
pub mod reeb;
pub mod shape;
pub mod sweep;

pub use error::{Error, Result};
pub use exactnum::{PerturbedRational, Rational};
