//! Recovering sets, recovery graphs and the closure machinery.

pub mod closure;
pub mod coloring;
pub mod recovering;

pub use closure::{
    best_closure_search, closure, distance_certificate, ClosureResult, ClosureSearch,
    RecoveryGraph,
};
pub use coloring::{
    e_ratio, floor_identity_check, permutation_coloring_experiment, ColoringReport,
};
pub use recovering::{
    locality_profile, verify_recovering_set_general, verify_recovering_set_linear,
    LocalityProfile, RecoveringSetCertificate,
};
