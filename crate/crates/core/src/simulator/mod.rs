//! Exact statevector evolution, energies and gradients.

mod ansatz;
mod krylov;
mod state;

pub use ansatz::{operator_gradients, pool_gradients, AnsatzState};
pub use krylov::{expm_multiply, generator_action};
pub use state::{operator_derivatives, Statevector};
