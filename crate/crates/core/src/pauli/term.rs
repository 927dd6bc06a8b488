use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest register the bitmask representation supports.
pub const MAX_QUBITS: usize = 63;

pub(crate) fn width_mask(n_qubits: usize) -> u64 {
    if n_qubits >= 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

/// `i^k` for `k` taken mod 4.
pub(crate) fn i_pow(k: i64) -> C64 {
    match k.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Phase picked up by the product of two Pauli strings, `P_a P_b = i^k P_{a⊕b}`.
///
/// Strings are normalized as `i^{|x∧z|} X^x Z^z`, so each one is Hermitian
/// and `Y = iXZ` on every qubit where both masks are set.
pub(crate) fn product_phase(xa: u64, za: u64, xb: u64, zb: u64) -> i64 {
    let x = xa ^ xb;
    let z = za ^ zb;
    (xa & za).count_ones() as i64
        + (xb & zb).count_ones() as i64
        + 2 * (za & xb).count_ones() as i64
        - (x & z).count_ones() as i64
}

/// A weighted Pauli string on `n_qubits` qubits in symplectic form.
///
/// Qubit `k` carries X when only bit `k` of `x_mask` is set, Z when only bit
/// `k` of `z_mask` is set, Y when both are set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliTerm {
    x_mask: u64,
    z_mask: u64,
    coefficient: C64,
    n_qubits: usize,
}

impl PauliTerm {
    pub fn new(n_qubits: usize, x_mask: u64, z_mask: u64, coefficient: C64) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(n_qubits));
        }
        let outside = (x_mask | z_mask) & !width_mask(n_qubits);
        if outside != 0 {
            return Err(Error::MaskOutOfRange {
                mask: x_mask | z_mask,
                n_qubits,
            });
        }
        Ok(Self {
            x_mask,
            z_mask,
            coefficient,
            n_qubits,
        })
    }

    pub fn identity(n_qubits: usize, coefficient: C64) -> Self {
        Self {
            x_mask: 0,
            z_mask: 0,
            coefficient,
            n_qubits,
        }
    }

    /// Parses a label such as `"XXXY"`; the leftmost character acts on the
    /// highest qubit, so `"XXXY"` has `Y` on qubit 0.
    pub fn from_label(label: &str, coefficient: C64) -> Result<Self> {
        let n = label.chars().count();
        let mut x = 0u64;
        let mut z = 0u64;
        for (k, c) in label.chars().rev().enumerate() {
            match c {
                'I' => {}
                'X' => x |= 1 << k,
                'Y' => {
                    x |= 1 << k;
                    z |= 1 << k;
                }
                'Z' => z |= 1 << k,
                _ => {
                    return Err(Error::MaskOutOfRange {
                        mask: 0,
                        n_qubits: n,
                    })
                }
            }
        }
        Self::new(n, x, z, coefficient)
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn coefficient(&self) -> C64 {
        self.coefficient
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn key(&self) -> (u64, u64) {
        (self.x_mask, self.z_mask)
    }

    /// Qubits on which the string is not the identity.
    pub fn support(&self) -> u64 {
        self.x_mask | self.z_mask
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn y_count(&self) -> usize {
        (self.x_mask & self.z_mask).count_ones() as usize
    }

    pub fn with_coefficient(self, coefficient: C64) -> Self {
        Self {
            coefficient,
            ..self
        }
    }

    fn check_width(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::WidthMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let k = product_phase(self.x_mask, self.z_mask, other.x_mask, other.z_mask);
        Ok(Self {
            x_mask: self.x_mask ^ other.x_mask,
            z_mask: self.z_mask ^ other.z_mask,
            coefficient: self.coefficient * other.coefficient * i_pow(k),
            n_qubits: self.n_qubits,
        })
    }

    /// Symplectic test: the strings commute iff they anticommute on an even
    /// number of qubits.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_width(other)?;
        Ok(strings_commute(
            self.x_mask,
            self.z_mask,
            other.x_mask,
            other.z_mask,
        ))
    }

    /// Action on a computational basis state: `P|b> = phase |b ⊕ x>`.
    pub fn apply_to_basis(&self, basis: u64) -> (u64, C64) {
        let sign = if (self.z_mask & basis).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        (
            basis ^ self.x_mask,
            self.coefficient * i_pow(self.y_count() as i64) * sign,
        )
    }

    pub fn label(&self) -> String {
        (0..self.n_qubits)
            .rev()
            .map(|k| match (self.x_mask >> k & 1, self.z_mask >> k & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (1, 1) => 'Y',
                _ => 'Z',
            })
            .collect()
    }
}

pub(crate) fn strings_commute(xa: u64, za: u64, xb: u64, zb: u64) -> bool {
    ((xa & zb).count_ones() + (za & xb).count_ones()).is_multiple_of(2)
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:+.6}{:+.6}i) {}",
            self.coefficient.re,
            self.coefficient.im,
            self.label()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dense_oracle as dense;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn x_times_y_is_i_z() {
        let x = PauliTerm::from_label("X", c(1.0, 0.0)).unwrap();
        let y = PauliTerm::from_label("Y", c(1.0, 0.0)).unwrap();
        let p = x.multiply(&y).unwrap();
        assert_eq!(p.label(), "Z");
        assert_eq!(p.coefficient(), c(0.0, 1.0));
    }

    #[test]
    fn identity_is_neutral() {
        let p = PauliTerm::from_label("XYZIY", c(0.3, -0.2)).unwrap();
        let id = PauliTerm::identity(5, c(1.0, 0.0));
        assert_eq!(id.multiply(&p).unwrap(), p);
        assert_eq!(p.multiply(&id).unwrap(), p);
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let a = PauliTerm::from_label("XX", c(1.0, 0.0)).unwrap();
        let b = PauliTerm::from_label("XXX", c(1.0, 0.0)).unwrap();
        assert!(matches!(a.multiply(&b), Err(Error::WidthMismatch { .. })));
        assert!(matches!(a.commutes(&b), Err(Error::WidthMismatch { .. })));
    }

    #[test]
    fn mask_outside_register_is_rejected() {
        assert!(PauliTerm::new(2, 0b100, 0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn qe_strings_commute() {
        let a = PauliTerm::from_label("XXXY", c(1.0, 0.0)).unwrap();
        let b = PauliTerm::from_label("XXYX", c(1.0, 0.0)).unwrap();
        assert!(a.commutes(&b).unwrap());
        let x = PauliTerm::from_label("X", c(1.0, 0.0)).unwrap();
        let z = PauliTerm::from_label("Z", c(1.0, 0.0)).unwrap();
        assert!(!x.commutes(&z).unwrap());
    }

    fn random_term(rng: &mut ChaCha8Rng, n: usize) -> PauliTerm {
        let m = width_mask(n);
        PauliTerm::new(
            n,
            rng.random::<u64>() & m,
            rng.random::<u64>() & m,
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        )
        .unwrap()
    }

    fn dense_of(t: &PauliTerm) -> dense::Matrix {
        dense::pauli_matrix(t.n_qubits(), t.x_mask(), t.z_mask()) * t.coefficient()
    }

    #[test]
    fn products_match_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = random_term(&mut rng, 6);
            let b = random_term(&mut rng, 6);
            let p = a.multiply(&b).unwrap();
            let expected = dense_of(&a) * dense_of(&b);
            assert!(dense::max_abs_diff(&dense_of(&p), &expected) < 1e-12);
        }
    }

    #[test]
    fn multiplication_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = random_term(&mut rng, 5);
            let b = random_term(&mut rng, 5);
            let d = random_term(&mut rng, 5);
            let left = a.multiply(&b).unwrap().multiply(&d).unwrap();
            let right = a.multiply(&b.multiply(&d).unwrap()).unwrap();
            assert_eq!(left.key(), right.key());
            assert!((left.coefficient() - right.coefficient()).norm() < 1e-12);
            let dense_left = dense_of(&a) * dense_of(&b) * dense_of(&d);
            assert!(dense::max_abs_diff(&dense_of(&left), &dense_left) < 1e-12);
        }
    }

    #[test]
    fn commutation_matches_dense_commutator_up_to_three_qubits() {
        for n in 1..=3usize {
            let m = width_mask(n);
            for xa in 0..=m {
                for za in 0..=m {
                    for xb in 0..=m {
                        for zb in 0..=m {
                            let a = PauliTerm::new(n, xa, za, c(1.0, 0.0)).unwrap();
                            let b = PauliTerm::new(n, xb, zb, c(1.0, 0.0)).unwrap();
                            let comm = dense::commutator(&dense_of(&a), &dense_of(&b));
                            let dense_commutes = dense::max_abs(&comm) < 1e-12;
                            assert_eq!(a.commutes(&b).unwrap(), dense_commutes);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn basis_action_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let t = random_term(&mut rng, 4);
            let m = dense_of(&t);
            for b in 0..16u64 {
                let (out, amp) = t.apply_to_basis(b);
                assert!((m[(out as usize, b as usize)] - amp).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn label_round_trip() {
        let t = PauliTerm::from_label("XIZY", c(1.0, 0.0)).unwrap();
        assert_eq!(t.label(), "XIZY");
        assert_eq!(t.weight(), 3);
        assert_eq!(t.support(), 0b1011);
    }
}
