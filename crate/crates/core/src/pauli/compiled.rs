use super::sum::PauliSum;
use super::term::{i_pow, C64};
use crate::par::{self, Execution};

/// Output rows handled per parallel task.
const CHUNK: usize = 1 << 10;

/// A [`PauliSum`] prepared for repeated matrix-free application.
///
/// Strings sharing an X mask permute basis states identically, so each group
/// is stored as one permutation `b → b ⊕ x` plus a diagonal
/// `d_x[b] = Σ_z c_z i^{|x∧z|} (−1)^{|z∧b|}`.
#[derive(Clone, Debug)]
pub struct CompiledOperator {
    n_qubits: usize,
    groups: Vec<(u64, Vec<C64>)>,
}

impl CompiledOperator {
    pub fn new(op: &PauliSum) -> Self {
        let n = op.n_qubits();
        let dim = 1usize << n;
        let mut groups: Vec<(u64, Vec<(u64, C64)>)> = Vec::new();
        for (&(x, z), &c) in op.raw_terms() {
            match groups.last_mut() {
                Some((gx, zs)) if *gx == x => zs.push((z, c)),
                _ => groups.push((x, vec![(z, c)])),
            }
        }
        let groups = groups
            .into_iter()
            .map(|(x, zs)| {
                let diag = (0..dim as u64)
                    .map(|b| {
                        zs.iter()
                            .map(|&(z, c)| {
                                let k =
                                    (x & z).count_ones() as i64 + 2 * (z & b).count_ones() as i64;
                                c * i_pow(k)
                            })
                            .sum()
                    })
                    .collect();
                (x, diag)
            })
            .collect();
        Self {
            n_qubits: n,
            groups,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    /// `out = O · input`.
    pub fn apply_into(&self, exec: Execution, input: &[C64], out: &mut [C64]) {
        assert_eq!(input.len(), self.dim());
        assert_eq!(out.len(), self.dim());
        par::for_each_chunk_mut(exec, out, CHUNK, |start, rows| {
            for (offset, slot) in rows.iter_mut().enumerate() {
                let b = start + offset;
                let mut acc = C64::new(0.0, 0.0);
                for (x, diag) in &self.groups {
                    let src = b ^ *x as usize;
                    acc += diag[src] * input[src];
                }
                *slot = acc;
            }
        });
    }

    pub fn apply(&self, exec: Execution, input: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        self.apply_into(exec, input, &mut out);
        out
    }
}
