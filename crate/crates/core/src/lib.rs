//! Exact-statevector ADAPT-VQE with coupled exchange operator pools.

pub mod adapt;
pub mod circuits;
pub mod error;
pub mod measurement;
pub mod molecule;
pub mod optimizer;
pub mod par;
pub mod pauli;
pub mod pools;
pub mod simulator;

pub use error::{Error, Result};
pub use par::Execution;
