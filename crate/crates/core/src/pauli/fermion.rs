use super::sum::PauliSum;
use super::term::{i_pow, product_phase, C64};
use crate::error::{Error, Result};

/// A ladder operator: `(mode, true)` is `a_mode^†`, `(mode, false)` is `a_mode`.
pub type Ladder = (usize, bool);

/// A product of fermionic ladder operators written left to right, so the
/// rightmost operator acts first on a ket.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionTerm {
    pub operators: Vec<Ladder>,
    pub coefficient: C64,
}

impl FermionTerm {
    pub fn new(operators: Vec<Ladder>, coefficient: C64) -> Self {
        Self {
            operators,
            coefficient,
        }
    }

    /// Hermitian conjugate: reversed order, creation flags flipped.
    pub fn adjoint(&self) -> Self {
        Self {
            operators: self.operators.iter().rev().map(|&(m, c)| (m, !c)).collect(),
            coefficient: self.coefficient.conj(),
        }
    }
}

/// Pauli image of a product of ladder operators.
///
/// With `parity_strings` each ladder operator carries the Jordan–Wigner string
/// `∏_{k<j} Z_k`; without it the operators are plain qubit ladders
/// `Q^† = (X − iY)/2`, `Q = (X + iY)/2`.
pub(crate) fn ladder_image(
    n_qubits: usize,
    operators: &[Ladder],
    coefficient: C64,
    parity_strings: bool,
) -> Result<PauliSum> {
    // Each factor is a two-term sum (X_j ∓ iY_j)/2 times an optional Z string.
    let mut acc: Vec<(u64, u64, C64)> = vec![(0, 0, coefficient)];
    for &(mode, creation) in operators {
        if mode >= n_qubits {
            return Err(Error::ModeOutOfRange {
                mode,
                n_modes: n_qubits,
            });
        }
        let bit = 1u64 << mode;
        let string = if parity_strings { bit - 1 } else { 0 };
        let y_sign = if creation { -1.0 } else { 1.0 };
        let factor = [
            (bit, string, C64::new(0.5, 0.0)),
            (bit, string | bit, C64::new(0.0, 0.5 * y_sign)),
        ];
        let mut next = Vec::with_capacity(acc.len() * 2);
        for &(xa, za, ca) in &acc {
            for &(xb, zb, cb) in &factor {
                let k = product_phase(xa, za, xb, zb);
                next.push((xa ^ xb, za ^ zb, ca * cb * i_pow(k)));
            }
        }
        acc = next;
    }
    let mut out = PauliSum::new(n_qubits);
    for (x, z, c) in acc {
        out.add_raw(x, z, c);
    }
    out.purge();
    Ok(out)
}

/// Jordan–Wigner image of a sum of fermionic terms, collected and purged.
pub fn jordan_wigner(n_qubits: usize, terms: &[FermionTerm]) -> Result<PauliSum> {
    let mut out = PauliSum::new(n_qubits);
    for t in terms {
        let image = ladder_image(n_qubits, &t.operators, t.coefficient, true)?;
        for (&(x, z), &c) in image.raw_terms() {
            out.add_raw(x, z, c);
        }
    }
    out.purge();
    Ok(out)
}

/// Same as [`jordan_wigner`] but without parity strings (qubit ladders).
pub fn qubit_ladder_image(n_qubits: usize, terms: &[FermionTerm]) -> Result<PauliSum> {
    let mut out = PauliSum::new(n_qubits);
    for t in terms {
        let image = ladder_image(n_qubits, &t.operators, t.coefficient, false)?;
        for (&(x, z), &c) in image.raw_terms() {
            out.add_raw(x, z, c);
        }
    }
    out.purge();
    Ok(out)
}

/// `T − T^†` for a single term.
pub fn anti_hermitian_pair(term: &FermionTerm) -> [FermionTerm; 2] {
    let mut adj = term.adjoint();
    adj.coefficient = -adj.coefficient;
    [term.clone(), adj]
}

/// Total particle-number operator `Σ_j a_j^† a_j`.
pub fn number_operator(n_qubits: usize) -> PauliSum {
    let terms: Vec<_> = (0..n_qubits)
        .map(|j| FermionTerm::new(vec![(j, true), (j, false)], C64::new(1.0, 0.0)))
        .collect();
    jordan_wigner(n_qubits, &terms).expect("modes in range")
}

/// `S_z = ½ Σ_j s_j n_j` with `s_j = +1` on α modes (bits of `alpha_mask`)
/// and `−1` on β modes.
pub fn spin_z_operator(n_qubits: usize, alpha_mask: u64) -> PauliSum {
    let terms: Vec<_> = (0..n_qubits)
        .map(|j| {
            let s = if alpha_mask >> j & 1 == 1 { 0.5 } else { -0.5 };
            FermionTerm::new(vec![(j, true), (j, false)], C64::new(s, 0.0))
        })
        .collect();
    jordan_wigner(n_qubits, &terms).expect("modes in range")
}
