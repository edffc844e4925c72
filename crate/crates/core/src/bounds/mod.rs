//! Upper and lower bounds on the parameters of locally recoverable codes.

pub mod asymptotic;
pub mod expander;
pub mod finite;
pub mod optimize;

pub use asymptotic::{emit_curves, AsymptoticPoint, BoundName};
pub use finite::{CodeParams, KqOracle};
