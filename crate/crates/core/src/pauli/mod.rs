//! Pauli strings, sums of them, and fermion-to-qubit mappings.

mod compiled;
mod fermion;
mod sum;
mod term;

pub use compiled::CompiledOperator;
pub use fermion::{
    anti_hermitian_pair, jordan_wigner, number_operator, qubit_ladder_image, spin_z_operator,
    FermionTerm, Ladder,
};
pub use sum::{PauliSum, PURGE_THRESHOLD};
pub use term::{PauliTerm, C64, MAX_QUBITS};
