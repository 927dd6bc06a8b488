use std::path::PathBuf;

use ceo_adapt::molecule::{
    build_qubit_hamiltonian, fci_ground_energy, load_manifest, MolecularIntegrals, MolecularSystem,
    Ordering, Sector, Spin,
};
use ceo_adapt::pauli::{number_operator, spin_z_operator, C64};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn integrals(name: &str) -> MolecularIntegrals {
    MolecularIntegrals::from_file(fixtures().join(format!("{name}.fcidump"))).unwrap()
}

/// Applies a ladder string (rightmost first) to an occupation bitstring,
/// returning the image and its fermionic sign.
fn apply_ladders(det: u64, ops: &[(usize, bool)]) -> Option<(u64, f64)> {
    let mut state = det;
    let mut sign = 1.0;
    for &(mode, creation) in ops.iter().rev() {
        let bit = 1u64 << mode;
        if (state & bit != 0) == creation {
            return None;
        }
        if (state & (bit - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        state ^= bit;
    }
    Some((state, sign))
}

/// CI matrix in the determinant basis built straight from the integrals.
fn determinant_ci(ints: &MolecularIntegrals, ordering: Ordering, dets: &[u64]) -> DMatrix<f64> {
    let n = ints.n_spatial();
    let index: std::collections::HashMap<u64, usize> =
        dets.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let spins = [Spin::Alpha, Spin::Beta];
    let mut m = DMatrix::<f64>::identity(dets.len(), dets.len()) * ints.core_energy();
    for (col, &det) in dets.iter().enumerate() {
        let mut add = |ops: &[(usize, bool)], value: f64| {
            if value == 0.0 {
                return;
            }
            if let Some((out, sign)) = apply_ladders(det, ops) {
                m[(index[&out], col)] += sign * value;
            }
        };
        for p in 0..n {
            for q in 0..n {
                for s in spins {
                    let ops = [
                        (ordering.qubit(n, p, s), true),
                        (ordering.qubit(n, q, s), false),
                    ];
                    add(&ops, ints.one_body(p, q));
                }
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
                                add(&ops, 0.5 * ints.two_body(p, q, r, s));
                            }
                        }
                    }
                }
            }
        }
    }
    m
}

#[test]
fn h6_sector_energy_matches_determinant_ci() {
    let ints = integrals("h6_1.50");
    let ordering = Ordering::Interleaved;
    let h = build_qubit_hamiltonian(&ints, ordering).unwrap();
    let sector = Sector {
        n_particles: 6,
        ms2: 0,
        alpha_mask: ordering.alpha_mask(6),
    };
    let dets: Vec<u64> = sector.basis(12).into_iter().map(|b| b as u64).collect();
    assert_eq!(dets.len(), 400);
    let ci = determinant_ci(&ints, ordering, &dets);
    assert!((&ci - ci.transpose()).abs().max() < 1e-12);
    let exact = SymmetricEigen::new(ci).eigenvalues.min();
    let e = fci_ground_energy(&h, Some(sector)).unwrap();
    assert!((e - exact).abs() < 1e-9, "{e} vs {exact}");
}

#[test]
fn manifest_fci_energies_agree() {
    let dir = fixtures();
    for entry in load_manifest(dir.join("manifest.json")).unwrap() {
        let system =
            MolecularSystem::from_fcidump(dir.join(&entry.fcidump), Ordering::Interleaved).unwrap();
        assert_eq!(system.n_qubits(), entry.n_qubits);
        let diff = (system.fci_energy - entry.fci_energy).abs();
        assert!(diff < 1e-8, "{}: {diff:e}", entry.fcidump);
    }
}

#[test]
fn benchmark_register_widths() {
    assert_eq!(integrals("lih_3.00").n_qubits(), 12);
    assert_eq!(integrals("h6_1.50").n_qubits(), 12);
    let beh2 = build_qubit_hamiltonian(&integrals("beh2_2.00"), Ordering::Interleaved).unwrap();
    assert_eq!(beh2.n_qubits(), 14);
    assert!(beh2.is_hermitian(0.0));
}

#[test]
fn hamiltonians_conserve_number_and_spin() {
    for name in ["h4_1.00", "lih_3.00"] {
        let ints = integrals(name);
        for ordering in [Ordering::Interleaved, Ordering::Block] {
            let h = build_qubit_hamiltonian(&ints, ordering).unwrap();
            let nq = ints.n_qubits();
            let n_op = number_operator(nq);
            let sz = spin_z_operator(nq, ordering.alpha_mask(ints.n_spatial()));
            assert!(h.commutator(&n_op).unwrap().max_coefficient() < 1e-10);
            assert!(h.commutator(&sz).unwrap().max_coefficient() < 1e-10);
        }
    }
}

#[test]
fn build_is_deterministic() {
    let text = std::fs::read_to_string(fixtures().join("lih_1.50.fcidump")).unwrap();
    let a = build_qubit_hamiltonian(
        &ceo_adapt::molecule::parse_fcidump(&text).unwrap(),
        Ordering::Block,
    )
    .unwrap();
    let b = build_qubit_hamiltonian(
        &ceo_adapt::molecule::parse_fcidump(&text).unwrap(),
        Ordering::Block,
    )
    .unwrap();
    assert_eq!(a, b);
    let ka: Vec<_> = a.keys().collect();
    let kb: Vec<_> = b.keys().collect();
    assert_eq!(ka, kb);
}

#[test]
fn variational_bound_on_random_states() {
    let ints = integrals("h2_0.74");
    let h = build_qubit_hamiltonian(&ints, Ordering::Interleaved).unwrap();
    let e0 = fci_ground_energy(&h, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..100 {
        let mut v: Vec<C64> = (0..16)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let nrm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= nrm);
        let mut energy = 0.0;
        for t in h.iter() {
            for (b, amp) in v.iter().enumerate() {
                let (out, phase) = t.apply_to_basis(b as u64);
                energy += (v[out as usize].conj() * phase * amp).re;
            }
        }
        assert!(energy >= e0 - 1e-10);
    }
}
