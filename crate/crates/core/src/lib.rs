//! Invariants of conical Calabi-Yau metrics on weighted line arrangements
//! and their local models.

pub mod arrangement;
pub mod cone_lab;
pub mod cp1;
pub mod error;
pub mod invariants;
pub mod optimize;
pub mod pk_cone;
pub mod quadrature;
pub mod scalar;
pub mod valuations;

pub use error::{Error, Result};
pub use scalar::Scalar;

#[cfg(doctest)]
mod book;
