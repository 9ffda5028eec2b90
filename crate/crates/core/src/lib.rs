//! Exact algebra for Hilbert schemes of points on surfaces, modelled through
//! weighted graded Frobenius algebras.
//!
//! Everything is computed over the rationals. Start from a
//! [`presentation::AlgebraPresentation`] (see [`models`] for built-in ones),
//! then build Fock spaces, Hilbert algebras, Kummer quotients and Hodge series
//! from it.

pub mod acceptance;
pub mod cli;
pub mod error;
pub mod fock;
pub mod format;
pub mod hilbert;
pub mod koszul;
pub mod kummer;
pub mod linalg;
pub mod models;
pub mod perm;
pub mod presentation;
pub mod scalar;
pub mod series;
pub mod validate;
pub mod weights;

pub use error::{Error, Result};
pub use presentation::{AlgebraPresentation, Element, PresentationBuilder};
pub use scalar::Q;
pub use weights::{Weight, WeightGroup};
