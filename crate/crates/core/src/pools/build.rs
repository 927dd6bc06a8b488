use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::operator::{Exchange, OperatorKind, PoolOperator};
use crate::error::{Error, Result};
use crate::molecule::{spin_occupations, Ordering, Spin};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PoolFamily {
    Gsd,
    Qubit,
    Qeb,
    OvpCeo,
}

#[derive(Clone, Debug)]
pub struct Pool {
    family: PoolFamily,
    n_qubits: usize,
    operators: Vec<PoolOperator>,
}

impl Pool {
    pub fn family(&self) -> PoolFamily {
        self.family
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn operators(&self) -> &[PoolOperator] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&PoolOperator> {
        self.operators.get(index)
    }

    /// Indices of operators whose support equals `support`.
    pub fn with_support(&self, support: u64) -> Vec<usize> {
        (0..self.operators.len())
            .filter(|&k| self.operators[k].support() == support)
            .collect()
    }
}

fn check_even(n_qubits: usize) -> Result<()> {
    if !n_qubits.is_multiple_of(2) {
        return Err(Error::OddQubitCount(n_qubits));
    }
    Ok(())
}

fn spin_of(ordering: Ordering, n_qubits: usize, q: usize) -> i32 {
    match ordering.spin(n_qubits / 2, q) {
        Spin::Alpha => 1,
        Spin::Beta => -1,
    }
}

/// Sorted qubit list, the primary enumeration key.
fn qubit_list(mask: u64) -> Vec<usize> {
    (0..64).filter(|k| mask >> k & 1 == 1).collect()
}

/// S_z-conserving exchanges on every pair and quadruple of spin-orbitals, in
/// enumeration order (sorted support, then singles before doubles, then
/// pairing index).
///
/// Sources are the pair (or orbital) containing the lowest qubit.
pub fn excitation_exchanges(n_qubits: usize, ordering: Ordering) -> Result<Vec<Exchange>> {
    check_even(n_qubits)?;
    let spin = |q: usize| spin_of(ordering, n_qubits, q);
    let mut out: Vec<(Vec<usize>, usize, Exchange)> = Vec::new();
    for i in 0..n_qubits {
        for j in i + 1..n_qubits {
            if spin(i) == spin(j) {
                out.push((vec![i, j], 0, Exchange::new(1 << i, 1 << j, false)));
            }
        }
    }
    for a in 0..n_qubits {
        for b in a + 1..n_qubits {
            for c in b + 1..n_qubits {
                for d in c + 1..n_qubits {
                    let pairings = [((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))];
                    for (k, ((p, q), (r, s))) in pairings.into_iter().enumerate() {
                        if spin(p) + spin(q) != spin(r) + spin(s) {
                            continue;
                        }
                        let src = 1u64 << p | 1 << q;
                        let tgt = 1u64 << r | 1 << s;
                        out.push((vec![a, b, c, d], 1 + k, Exchange::new(src, tgt, false)));
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| (&x.0, x.1).cmp(&(&y.0, y.1)));
    Ok(out.into_iter().map(|(_, _, e)| e).collect())
}

/// Single and double qubit excitations.
pub fn build_qe_pool(n_qubits: usize, ordering: Ordering) -> Result<Pool> {
    let operators = excitation_exchanges(n_qubits, ordering)?
        .into_iter()
        .enumerate()
        .map(|(k, e)| PoolOperator::qubit_excitation(n_qubits, e, k))
        .collect();
    Ok(Pool {
        family: PoolFamily::Qeb,
        n_qubits,
        operators,
    })
}

/// Every distinct Pauli string appearing in the QE pool generators.
pub fn build_qubit_pool(qe_pool: &Pool) -> Result<Pool> {
    if qe_pool.family != PoolFamily::Qeb {
        return Err(Error::WrongKind {
            expected: "QE pool",
            found: format!("{:?}", qe_pool.family),
        });
    }
    let mut strings = BTreeSet::new();
    for op in &qe_pool.operators {
        for key in op.generators()[0].keys() {
            strings.insert((qubit_list(key.0 | key.1), key));
        }
    }
    let operators = strings
        .into_iter()
        .map(|(_, (x, z))| PoolOperator::pauli_string(qe_pool.n_qubits, x, z))
        .collect();
    Ok(Pool {
        family: PoolFamily::Qubit,
        n_qubits: qe_pool.n_qubits,
        operators,
    })
}

/// Single QEs plus, on every quadruple, the sum and difference of each pair
/// of double QEs sharing that support.
pub fn build_ovp_ceo_pool(n_qubits: usize, ordering: Ordering) -> Result<Pool> {
    let exchanges = excitation_exchanges(n_qubits, ordering)?;
    let mut operators = Vec::new();
    let mut k = 0;
    while k < exchanges.len() {
        let support = exchanges[k].support();
        let mut end = k + 1;
        while end < exchanges.len() && exchanges[end].support() == support {
            end += 1;
        }
        if support.count_ones() == 2 {
            for (j, e) in exchanges.iter().enumerate().take(end).skip(k) {
                operators.push(PoolOperator::qubit_excitation(n_qubits, e.clone(), j));
            }
        } else {
            for i in k..end {
                for j in i + 1..end {
                    for plus in [true, false] {
                        operators.push(PoolOperator::ovp_ceo(
                            n_qubits,
                            (&exchanges[i], i),
                            (&exchanges[j], j),
                            plus,
                        ));
                    }
                }
            }
        }
        k = end;
    }
    Ok(Pool {
        family: PoolFamily::OvpCeo,
        n_qubits,
        operators,
    })
}

/// Twin set of an OVP-CEO double: the QEs sharing its support, kept when
/// `nonzero` contains their QE-pool index.
pub fn twin_set(
    ovp: &PoolOperator,
    qe_pool: &Pool,
    nonzero: &BTreeSet<usize>,
) -> Result<Vec<usize>> {
    match ovp.kind() {
        OperatorKind::OvpCeoPlus | OperatorKind::OvpCeoMinus => {}
        other => {
            return Err(Error::WrongKind {
                expected: "OVP-CEO",
                found: other.to_string(),
            })
        }
    }
    Ok(qe_pool
        .with_support(ovp.support())
        .into_iter()
        .filter(|k| nonzero.contains(k))
        .collect())
}

/// Multi-parameter CEO built from the surviving twin set of `ovp`.
pub fn mvp_twin(
    ovp: &PoolOperator,
    qe_pool: &Pool,
    nonzero: &BTreeSet<usize>,
) -> Result<PoolOperator> {
    let twins = twin_set(ovp, qe_pool, nonzero)?;
    let qes: Vec<(&Exchange, usize)> = twins
        .iter()
        .map(|&k| (&qe_pool.operators[k].rotations()[0].exchange, k))
        .collect();
    PoolOperator::mvp_ceo(qe_pool.n_qubits, &qes)
}

/// Generalized fermionic singles and doubles on the QE index sets.
pub fn build_gsd_pool(n_qubits: usize, ordering: Ordering) -> Result<Pool> {
    let operators = excitation_exchanges(n_qubits, ordering)?
        .into_iter()
        .map(|e| PoolOperator::fermionic_excitation(n_qubits, e))
        .collect();
    Ok(Pool {
        family: PoolFamily::Gsd,
        n_qubits,
        operators,
    })
}

/// Occupied-to-virtual spin-preserving singles and `S_z`-preserving doubles
/// relative to the Hartree–Fock determinant, in lexical order of (source, target) qubits.
pub fn build_uccsd(
    n_qubits: usize,
    n_electrons: usize,
    ms2: i32,
    ordering: Ordering,
) -> Result<Vec<PoolOperator>> {
    check_even(n_qubits)?;
    let n_spatial = n_qubits / 2;
    let (n_alpha, n_beta) = spin_occupations(n_electrons, ms2, n_spatial)?;
    let occupied: BTreeSet<usize> = (0..n_alpha)
        .map(|p| ordering.qubit(n_spatial, p, Spin::Alpha))
        .chain((0..n_beta).map(|p| ordering.qubit(n_spatial, p, Spin::Beta)))
        .collect();
    let virtuals: Vec<usize> = (0..n_qubits).filter(|q| !occupied.contains(q)).collect();
    let occupied: Vec<usize> = occupied.into_iter().collect();
    let spin = |q: usize| spin_of(ordering, n_qubits, q);

    let mut excitations: BTreeMap<(Vec<usize>, Vec<usize>), Exchange> = BTreeMap::new();
    for &i in &occupied {
        for &a in &virtuals {
            if spin(i) == spin(a) {
                excitations.insert((vec![i], vec![a]), Exchange::new(1 << i, 1 << a, true));
            }
        }
    }
    for (x, &i) in occupied.iter().enumerate() {
        for &j in &occupied[x + 1..] {
            for (y, &a) in virtuals.iter().enumerate() {
                for &b in &virtuals[y + 1..] {
                    if spin(i) + spin(j) == spin(a) + spin(b) {
                        let src = 1u64 << i | 1 << j;
                        let tgt = 1u64 << a | 1 << b;
                        excitations.insert((vec![i, j], vec![a, b]), Exchange::new(src, tgt, true));
                    }
                }
            }
        }
    }
    Ok(excitations
        .into_values()
        .map(|e| PoolOperator::fermionic_excitation(n_qubits, e))
        .collect())
}
