//! Exact classification of nilpotent 3x3 matrix tuples up to simultaneous
//! conjugation, with the degeneration and hom orders between their orbits.

pub mod classify;
pub mod curves;
pub mod eps;
pub mod error;
pub mod expr;
pub mod free_algebra;
pub mod group;
pub mod hom;
pub mod label;
pub mod matrix;
pub mod order;
pub mod poset;
pub mod scalar;
pub mod tables;
pub mod tuple;
pub mod verify;

pub use error::{Error, Result};
pub use free_algebra::{NCMatrix, NCPoly, Word};
pub use label::{ExtParam, Letter, OrbitLabel};
pub use matrix::Matrix;
pub use scalar::{Field, Scalar};
pub use tuple::MatrixTuple;
