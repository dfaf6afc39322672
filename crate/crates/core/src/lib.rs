//! Permutation algebra and decision tooling for the group discrete
//! logarithm problem over permutation groups, with a polynomial reduction
//! from Exactly-1 Positive 3-SAT and the Benes routing it is built on.

pub mod benes;
pub mod cli;
pub mod error;
pub mod graphroute;
pub mod instance;
pub mod perm;
pub mod reduce;
pub mod sat;
pub mod search;

pub use error::{Error, Result};
pub use instance::{decide_k1, verify_witness, Base, BaseRole, GdlpInstance, Witness};
pub use perm::Permutation;
pub use sat::{brute_force_sat, Assignment, SatInstance};
pub use search::SearchOptions;
