//! Dense reference constructions for small registers.
//!
//! Everything here is built directly from textbook definitions (Kronecker
//! products of 2x2 Pauli matrices, explicit ladder-operator action on
//! occupation-number basis states, Padé matrix exponentials). Nothing in this
//! crate shares code with the bitmask simulator it is used to check.
//!
//! Basis convention: qubit `k` is bit `k` of the basis-state index.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Matrix = DMatrix<C64>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Matrix {
        match self {
            Pauli::I => Matrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
            Pauli::X => Matrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
            Pauli::Y => Matrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
            Pauli::Z => Matrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }
}

/// Kronecker product of per-qubit matrices; `factors[k]` acts on qubit `k`.
pub fn kron_qubits(factors: &[Matrix]) -> Matrix {
    let mut out = Matrix::from_element(1, 1, ONE);
    // Highest qubit is the most significant tensor factor.
    for f in factors.iter().rev() {
        out = out.kronecker(f);
    }
    out
}

/// Dense matrix of the Pauli string described by symplectic masks.
pub fn pauli_matrix(n_qubits: usize, x_mask: u64, z_mask: u64) -> Matrix {
    let factors: Vec<Matrix> = (0..n_qubits)
        .map(|k| Pauli::from_bits(x_mask >> k & 1 == 1, z_mask >> k & 1 == 1).matrix())
        .collect();
    kron_qubits(&factors)
}

/// Dense matrix of a Pauli string written as a label, leftmost character on
/// the highest qubit (e.g. `"XXXY"` has `Y` on qubit 0).
pub fn label_matrix(label: &str) -> Matrix {
    let factors: Vec<Matrix> = label
        .chars()
        .rev()
        .map(|c| match c {
            'I' => Pauli::I,
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            other => panic!("bad Pauli label character {other:?}"),
        })
        .map(Pauli::matrix)
        .collect();
    kron_qubits(&factors)
}

/// Dense matrix of a weighted sum of Pauli strings given as `(x, z, coeff)`.
pub fn sum_matrix(n_qubits: usize, terms: &[(u64, u64, C64)]) -> Matrix {
    let dim = 1usize << n_qubits;
    let mut out = Matrix::zeros(dim, dim);
    for &(x, z, c) in terms {
        out += pauli_matrix(n_qubits, x, z) * c;
    }
    out
}

/// Fermionic ladder operator built from its action on occupation-number
/// states: `a_j^†|..0_j..> = (-1)^{#occupied below j} |..1_j..>`.
pub fn fermion_ladder(n_qubits: usize, mode: usize, creation: bool) -> Matrix {
    let dim = 1usize << n_qubits;
    let mut out = Matrix::zeros(dim, dim);
    for b in 0..dim {
        let occupied = b >> mode & 1 == 1;
        if occupied == creation {
            continue;
        }
        let below = (b & ((1usize << mode) - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
        out[(b ^ (1 << mode), b)] = C64::new(sign, 0.0);
    }
    out
}

/// Qubit ladder operator (no parity string): `|1><0|` or `|0><1|` on `mode`.
pub fn qubit_ladder(n_qubits: usize, mode: usize, creation: bool) -> Matrix {
    let dim = 1usize << n_qubits;
    let mut out = Matrix::zeros(dim, dim);
    for b in 0..dim {
        let occupied = b >> mode & 1 == 1;
        if occupied != creation {
            out[(b ^ (1 << mode), b)] = ONE;
        }
    }
    out
}

/// Product of ladder operators, written left to right as in second
/// quantization (the rightmost operator acts first).
pub fn ladder_product(n_qubits: usize, ops: &[(usize, bool)], fermionic: bool) -> Matrix {
    let dim = 1usize << n_qubits;
    let mut out = Matrix::identity(dim, dim);
    for &(mode, creation) in ops {
        let m = if fermionic {
            fermion_ladder(n_qubits, mode, creation)
        } else {
            qubit_ladder(n_qubits, mode, creation)
        };
        out *= m;
    }
    out
}

pub fn expm(m: &Matrix) -> Matrix {
    m.exp()
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a * b - b * a
}

/// Largest absolute entry.
pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    max_abs(&(a - b))
}

/// Smallest deviation between `a` and `e^{iφ} b` over global phases `φ`.
pub fn max_abs_diff_up_to_phase(a: &Matrix, b: &Matrix) -> f64 {
    let overlap: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    max_abs_diff(a, &(b * phase))
}

pub fn apply(m: &Matrix, v: &[C64]) -> Vec<C64> {
    let vec = nalgebra::DVector::from_column_slice(v);
    (m * vec).iter().copied().collect()
}

/// `<v|M|v>`.
pub fn quadratic_form(m: &Matrix, v: &[C64]) -> C64 {
    let mv = apply(m, v);
    v.iter().zip(mv.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &Matrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Restriction of `m` to the listed basis states.
pub fn restrict(m: &Matrix, basis: &[usize]) -> Matrix {
    Matrix::from_fn(basis.len(), basis.len(), |i, j| m[(basis[i], basis[j])])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xy_is_iz() {
        let xy = Pauli::X.matrix() * Pauli::Y.matrix();
        assert!(max_abs_diff(&xy, &(Pauli::Z.matrix() * I)) < 1e-15);
    }

    #[test]
    fn label_order_is_big_endian() {
        // Z on qubit 0 flips the sign of odd basis indices.
        let m = label_matrix("IZ");
        assert_eq!(m[(1, 1)], -ONE);
        assert_eq!(m[(2, 2)], ONE);
    }

    #[test]
    fn fermion_ladders_anticommute() {
        let a0 = fermion_ladder(3, 0, false);
        let a2d = fermion_ladder(3, 2, true);
        let anti = &a0 * &a2d + &a2d * &a0;
        assert!(max_abs(&anti) < 1e-15);
    }
}
