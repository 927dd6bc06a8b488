use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliTerm};

/// Partition of Hamiltonian strings into jointly measurable collections.
#[derive(Clone, Debug, Serialize)]
pub struct GroupingReport {
    pub k: usize,
    pub n_qubits: usize,
    #[serde(skip)]
    pub collections: Vec<Vec<PauliTerm>>,
    pub r_hat: f64,
}

impl GroupingReport {
    pub fn collection_count(&self) -> usize {
        self.collections.len()
    }
}

/// Whether two strings commute on every contiguous block of `k` qubits.
/// `k = 0` treats every distinct pair as incompatible.
pub fn k_commute(a: &PauliTerm, b: &PauliTerm, k: usize, n_qubits: usize) -> bool {
    if k == 0 {
        return a.key() == b.key();
    }
    let clash = (a.x_mask() & b.z_mask()) ^ (a.z_mask() & b.x_mask());
    (0..n_qubits).step_by(k).all(|start| {
        let width = k.min(n_qubits - start);
        let block = ((1u64 << width) - 1) << start;
        (clash & block).count_ones().is_multiple_of(2)
    })
}

/// `[Σ_ij |c_ij| / Σ_i √(Σ_j |c_ij|²)]²`.
pub fn r_hat(collections: &[Vec<PauliTerm>]) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for coll in collections {
        num += coll.iter().map(|t| t.coefficient().norm()).sum::<f64>();
        den += coll
            .iter()
            .map(|t| t.coefficient().norm_sqr())
            .sum::<f64>()
            .sqrt();
    }
    if den == 0.0 {
        return Err(Error::EmptyHamiltonian);
    }
    Ok((num / den).powi(2))
}

/// Greedy first-fit coloring of the non-identity strings of `h`, visited in
/// descending `|coefficient|` with ties in key order.
pub fn k_commutativity_grouping(h: &PauliSum, k: usize) -> Result<GroupingReport> {
    let n = h.n_qubits();
    let mut terms: Vec<PauliTerm> = h.iter().filter(|t| t.key() != (0, 0)).collect();
    if terms.is_empty() {
        return Err(Error::EmptyHamiltonian);
    }
    terms.sort_by(|a, b| {
        b.coefficient()
            .norm()
            .total_cmp(&a.coefficient().norm())
            .then(a.key().cmp(&b.key()))
    });
    let mut collections: Vec<Vec<PauliTerm>> = Vec::new();
    for t in terms {
        match collections
            .iter_mut()
            .find(|c| c.iter().all(|u| k_commute(&t, u, k, n)))
        {
            Some(c) => c.push(t),
            None => collections.push(vec![t]),
        }
    }
    let r = r_hat(&collections)?;
    Ok(GroupingReport {
        k,
        n_qubits: n,
        collections,
        r_hat: r,
    })
}
