//! Exact Hochschild cohomology of finite-dimensional algebras: cup product,
//! Gerstenhaber bracket and the BV operator of a Frobenius form, together with
//! the self-injective family `R(n, r)` and its homotopy-based cochain realizations.

pub mod algebra;
pub mod cochain;
pub mod engine;
pub mod error;
pub mod frobenius;
pub mod linalg;
pub mod resolution;
pub mod scalar;
pub mod verify;
pub mod zoo;

pub use algebra::{Algebra, Automorphism, Element, Grading};
pub use cochain::Cochain;
pub use engine::Engine;

pub use error::{Error, Result};
pub use frobenius::FrobeniusData;
pub use scalar::{Field, Scalar};
