//! Molecular integrals, qubit Hamiltonians, reference determinants and the
//! exact ground-state energy.

mod fci;
mod fcidump;
mod hamiltonian;
mod manifest;

use std::path::Path;

pub use fci::{fci_ground_energy, ground_state, Eigenpair, Sector};
pub use fcidump::{parse_fcidump, MolecularIntegrals};
pub use hamiltonian::{
    build_qubit_hamiltonian, hartree_fock_determinant, spin_occupations, Ordering, Spin,
};
pub use manifest::{load_manifest, FixtureEntry};

use crate::error::Result;
use crate::par::Execution;
use crate::pauli::PauliSum;

/// Everything a simulation needs about one molecule.
#[derive(Clone, Debug)]
pub struct MolecularSystem {
    pub integrals: MolecularIntegrals,
    pub ordering: Ordering,
    pub hamiltonian: PauliSum,
    pub hf_determinant: u64,
    pub fci_energy: f64,
}

impl MolecularSystem {
    /// Builds the Hamiltonian and solves for the lowest energy in the
    /// reference's (particle number, `2 S_z`) sector.
    pub fn new(integrals: MolecularIntegrals, ordering: Ordering) -> Result<Self> {
        let hamiltonian = build_qubit_hamiltonian(&integrals, ordering)?;
        let hf_determinant = hartree_fock_determinant(&integrals, ordering)?;
        let sector = Sector {
            n_particles: integrals.n_electrons() as u32,
            ms2: integrals.ms2(),
            alpha_mask: ordering.alpha_mask(integrals.n_spatial()),
        };
        let fci_energy = ground_state(&hamiltonian, Some(sector), Execution::default())?.energy;
        Ok(Self {
            integrals,
            ordering,
            hamiltonian,
            hf_determinant,
            fci_energy,
        })
    }

    pub fn from_fcidump(path: impl AsRef<Path>, ordering: Ordering) -> Result<Self> {
        Self::new(MolecularIntegrals::from_file(path)?, ordering)
    }

    pub fn n_qubits(&self) -> usize {
        self.integrals.n_qubits()
    }

    pub fn n_electrons(&self) -> usize {
        self.integrals.n_electrons()
    }

    pub fn sector(&self) -> Sector {
        Sector {
            n_particles: self.integrals.n_electrons() as u32,
            ms2: self.integrals.ms2(),
            alpha_mask: self.alpha_mask(),
        }
    }

    pub fn alpha_mask(&self) -> u64 {
        self.ordering.alpha_mask(self.integrals.n_spatial())
    }
}
