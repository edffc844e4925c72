//! Bounds, verifiers and random ensembles for locally recoverable codes.

pub mod bounds;
pub mod code;
pub mod enumerator;
pub mod ensembles;
pub mod error;
pub mod field;
pub mod io;
pub mod locality;
pub mod matrix;
mod par;
pub mod report;
pub mod rng;

pub use code::LinearCode;
pub use enumerator::WeightEnumerator;
pub use error::{Error, Result};
pub use field::{Elem, Field};
pub use matrix::Matrix;
pub use par::configure_threads;
