use serde::{Deserialize, Serialize};

use super::fcidump::MolecularIntegrals;
use crate::error::{Error, Result};
use crate::pauli::{jordan_wigner, FermionTerm, PauliSum, C64};

/// Hermiticity defect tolerated before the Hamiltonian is projected onto its
/// Hermitian part.
const HERMITICITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Alpha,
    Beta,
}

/// Map from (spatial orbital, spin) to qubit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    /// α on even qubits `2p`, β on odd qubits `2p + 1`.
    #[default]
    Interleaved,
    /// β on qubits `0..n`, α on qubits `n..2n`.
    Block,
}

impl Ordering {
    pub fn qubit(self, n_spatial: usize, orbital: usize, spin: Spin) -> usize {
        match (self, spin) {
            (Ordering::Interleaved, Spin::Alpha) => 2 * orbital,
            (Ordering::Interleaved, Spin::Beta) => 2 * orbital + 1,
            (Ordering::Block, Spin::Beta) => orbital,
            (Ordering::Block, Spin::Alpha) => n_spatial + orbital,
        }
    }

    /// Inverse of [`Ordering::qubit`].
    pub fn orbital(self, n_spatial: usize, qubit: usize) -> (usize, Spin) {
        match self {
            Ordering::Interleaved if qubit.is_multiple_of(2) => (qubit / 2, Spin::Alpha),
            Ordering::Interleaved => (qubit / 2, Spin::Beta),
            Ordering::Block if qubit < n_spatial => (qubit, Spin::Beta),
            Ordering::Block => (qubit - n_spatial, Spin::Alpha),
        }
    }

    pub fn spin(self, n_spatial: usize, qubit: usize) -> Spin {
        self.orbital(n_spatial, qubit).1
    }

    /// Bitmask of α qubits on a `2·n_spatial`-qubit register.
    pub fn alpha_mask(self, n_spatial: usize) -> u64 {
        (0..n_spatial).fold(0, |m, p| m | 1 << self.qubit(n_spatial, p, Spin::Alpha))
    }
}

/// Qubit Hamiltonian
/// `E_core + Σ h_pq a†_pσ a_qσ + ½ Σ (pq|rs) a†_pσ a†_rτ a_sτ a_qσ`
/// under the Jordan–Wigner mapping.
pub fn build_qubit_hamiltonian(ints: &MolecularIntegrals, ordering: Ordering) -> Result<PauliSum> {
    let n = ints.n_spatial();
    let n_qubits = ints.n_qubits();
    let spins = [Spin::Alpha, Spin::Beta];
    let mut terms = Vec::new();
    for p in 0..n {
        for q in 0..n {
            let h = ints.one_body(p, q);
            if h == 0.0 {
                continue;
            }
            for s in spins {
                let a = ordering.qubit(n, p, s);
                let b = ordering.qubit(n, q, s);
                terms.push(FermionTerm::new(
                    vec![(a, true), (b, false)],
                    C64::new(h, 0.0),
                ));
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = ints.two_body(p, q, r, s);
                    if v == 0.0 {
                        continue;
                    }
                    for sigma in spins {
                        for tau in spins {
                            let ps = ordering.qubit(n, p, sigma);
                            let qs = ordering.qubit(n, q, sigma);
                            let rt = ordering.qubit(n, r, tau);
                            let st = ordering.qubit(n, s, tau);
                            if ps == rt || qs == st {
                                continue;
                            }
                            terms.push(FermionTerm::new(
                                vec![(ps, true), (rt, true), (st, false), (qs, false)],
                                C64::new(0.5 * v, 0.0),
                            ));
                        }
                    }
                }
            }
        }
    }
    let mut h = jordan_wigner(n_qubits, &terms)?;
    h.add_raw(0, 0, C64::new(ints.core_energy(), 0.0));
    h.purge();
    let defect = h.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    Ok(h.hermitian_part())
}

/// Occupation numbers `(n_α, n_β)` fixed by the electron count and `2 S_z`.
pub fn spin_occupations(n_electrons: usize, ms2: i32, n_spatial: usize) -> Result<(usize, usize)> {
    let infeasible = Error::InfeasibleOccupation {
        n_electrons,
        ms2,
        n_spatial,
    };
    let total = n_electrons as i64;
    let diff = ms2 as i64;
    if (total + diff) % 2 != 0 || diff.abs() > total {
        return Err(infeasible);
    }
    let n_alpha = ((total + diff) / 2) as usize;
    let n_beta = ((total - diff) / 2) as usize;
    if n_alpha > n_spatial || n_beta > n_spatial {
        return Err(infeasible);
    }
    Ok((n_alpha, n_beta))
}

/// Basis-state index of the determinant filling the lowest spatial orbitals
/// of each spin.
pub fn hartree_fock_determinant(ints: &MolecularIntegrals, ordering: Ordering) -> Result<u64> {
    let n = ints.n_spatial();
    let (n_alpha, n_beta) = spin_occupations(ints.n_electrons(), ints.ms2(), n)?;
    let alpha = (0..n_alpha).map(|p| ordering.qubit(n, p, Spin::Alpha));
    let beta = (0..n_beta).map(|p| ordering.qubit(n, p, Spin::Beta));
    Ok(alpha.chain(beta).fold(0u64, |m, q| m | 1 << q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molecule::fcidump::parse_fcidump;
    use crate::pauli::{number_operator, spin_z_operator};
    use dense_oracle as dense;

    const H2: &str = include_str!("../../../../fixtures/h2_0.74.fcidump");

    fn dense_of(s: &PauliSum) -> dense::Matrix {
        let terms: Vec<_> = s
            .iter()
            .map(|t| (t.x_mask(), t.z_mask(), t.coefficient()))
            .collect();
        dense::sum_matrix(s.n_qubits(), &terms)
    }

    /// Hamiltonian assembled directly from dense ladder matrices.
    fn dense_hamiltonian(ints: &MolecularIntegrals, ordering: Ordering) -> dense::Matrix {
        let n = ints.n_spatial();
        let nq = ints.n_qubits();
        let dim = 1 << nq;
        let mut m = dense::Matrix::identity(dim, dim) * C64::new(ints.core_energy(), 0.0);
        let spins = [Spin::Alpha, Spin::Beta];
        for p in 0..n {
            for q in 0..n {
                for s in spins {
                    let ops = [
                        (ordering.qubit(n, p, s), true),
                        (ordering.qubit(n, q, s), false),
                    ];
                    m += dense::ladder_product(nq, &ops, true) * C64::new(ints.one_body(p, q), 0.0);
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        for a in spins {
                            for b in spins {
                                let ops = [
                                    (ordering.qubit(n, p, a), true),
                                    (ordering.qubit(n, r, b), true),
                                    (ordering.qubit(n, s, b), false),
                                    (ordering.qubit(n, q, a), false),
                                ];
                                let v = 0.5 * ints.two_body(p, q, r, s);
                                m += dense::ladder_product(nq, &ops, true) * C64::new(v, 0.0);
                            }
                        }
                    }
                }
            }
        }
        m
    }

    #[test]
    fn h2_has_fifteen_hermitian_terms() {
        let ints = parse_fcidump(H2).unwrap();
        for ordering in [Ordering::Interleaved, Ordering::Block] {
            let h = build_qubit_hamiltonian(&ints, ordering).unwrap();
            assert_eq!(h.n_qubits(), 4);
            assert_eq!(h.len(), 15);
            assert!(h.is_hermitian(0.0));
            assert!(h.constant().norm() > 0.0);
            let expected = dense_hamiltonian(&ints, ordering);
            assert!(dense::max_abs_diff(&dense_of(&h), &expected) < 1e-12);
        }
    }

    #[test]
    fn zero_integrals_give_scaled_identity() {
        let ints = MolecularIntegrals::zeros(3, 2, 0, -2.5);
        let h = build_qubit_hamiltonian(&ints, Ordering::default()).unwrap();
        assert_eq!(h, PauliSum::identity(6, -2.5));
    }

    #[test]
    fn conserves_number_and_spin() {
        let ints = parse_fcidump(H2).unwrap();
        for ordering in [Ordering::Interleaved, Ordering::Block] {
            let h = build_qubit_hamiltonian(&ints, ordering).unwrap();
            let n_op = number_operator(4);
            let sz = spin_z_operator(4, ordering.alpha_mask(2));
            assert!(h.commutator(&n_op).unwrap().max_coefficient() < 1e-10);
            assert!(h.commutator(&sz).unwrap().max_coefficient() < 1e-10);
        }
    }

    #[test]
    fn h2_block_reference_is_0101() {
        let ints = parse_fcidump(H2).unwrap();
        assert_eq!(
            hartree_fock_determinant(&ints, Ordering::Block).unwrap(),
            0b0101
        );
        assert_eq!(
            hartree_fock_determinant(&ints, Ordering::Interleaved).unwrap(),
            0b0011
        );
    }

    #[test]
    fn reference_edge_cases() {
        let empty = MolecularIntegrals::zeros(3, 0, 0, 0.0);
        assert_eq!(
            hartree_fock_determinant(&empty, Ordering::Interleaved).unwrap(),
            0
        );
        let odd = MolecularIntegrals::zeros(3, 3, 0, 0.0);
        assert!(matches!(
            hartree_fock_determinant(&odd, Ordering::Interleaved),
            Err(Error::InfeasibleOccupation { .. })
        ));
        let overfull = MolecularIntegrals::zeros(2, 4, 2, 0.0);
        assert!(hartree_fock_determinant(&overfull, Ordering::Block).is_err());
        let triplet = MolecularIntegrals::zeros(3, 2, 2, 0.0);
        assert_eq!(
            hartree_fock_determinant(&triplet, Ordering::Interleaved).unwrap(),
            0b000101
        );
    }

    #[test]
    fn ordering_round_trips() {
        for ordering in [Ordering::Interleaved, Ordering::Block] {
            for q in 0..12 {
                let (p, s) = ordering.orbital(6, q);
                assert_eq!(ordering.qubit(6, p, s), q);
            }
            assert_eq!(ordering.alpha_mask(6).count_ones(), 6);
        }
    }
}
