use std::collections::BTreeMap;

use super::term::{i_pow, product_phase, strings_commute, width_mask, PauliTerm, C64, MAX_QUBITS};
use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped by [`PauliSum::purge`].
pub const PURGE_THRESHOLD: f64 = 1e-14;

/// A weighted sum of Pauli strings keyed by `(x_mask, z_mask)`.
///
/// The map is ordered, so iteration (and every reduction built on it) is
/// deterministic.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<(u64, u64), C64>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "register too large");
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize, coefficient: f64) -> Self {
        let mut s = Self::new(n_qubits);
        s.add_raw(0, 0, C64::new(coefficient, 0.0));
        s.purge();
        s
    }

    pub fn from_terms<I: IntoIterator<Item = PauliTerm>>(
        n_qubits: usize,
        terms: I,
    ) -> Result<Self> {
        let mut s = Self::new(n_qubits);
        for t in terms {
            s.add_term(&t)?;
        }
        s.purge();
        Ok(s)
    }

    /// Builds a sum from `(label, coefficient)` pairs, labels as in
    /// [`PauliTerm::from_label`].
    pub fn from_labels(items: &[(&str, C64)]) -> Result<Self> {
        let n = items.first().map(|(l, _)| l.len()).unwrap_or(0);
        let terms = items
            .iter()
            .map(|(l, c)| PauliTerm::from_label(l, *c))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n, terms)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, x_mask: u64, z_mask: u64) -> C64 {
        self.terms
            .get(&(x_mask, z_mask))
            .copied()
            .unwrap_or_default()
    }

    pub fn constant(&self) -> C64 {
        self.coefficient(0, 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = PauliTerm> + '_ {
        self.terms
            .iter()
            .map(move |(&(x, z), &c)| PauliTerm::new(self.n_qubits, x, z, c).expect("in range"))
    }

    pub fn keys(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.terms.keys().copied()
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<(u64, u64), C64> {
        &self.terms
    }

    pub(crate) fn add_raw(&mut self, x: u64, z: u64, c: C64) {
        *self.terms.entry((x, z)).or_default() += c;
    }

    pub fn add_term(&mut self, term: &PauliTerm) -> Result<()> {
        if term.n_qubits() != self.n_qubits {
            return Err(Error::WidthMismatch {
                left: self.n_qubits,
                right: term.n_qubits(),
            });
        }
        self.add_raw(term.x_mask(), term.z_mask(), term.coefficient());
        Ok(())
    }

    /// Drops entries with `|c| < PURGE_THRESHOLD`.
    pub fn purge(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PURGE_THRESHOLD);
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

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let mut out = self.clone();
        for (&(x, z), &c) in &other.terms {
            out.add_raw(x, z, c);
        }
        out.purge();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = Self::new(self.n_qubits);
        for (&k, &c) in &self.terms {
            out.terms.insert(k, c * factor);
        }
        out.purge();
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let mut out = Self::new(self.n_qubits);
        for (&(xa, za), &ca) in &self.terms {
            for (&(xb, zb), &cb) in &other.terms {
                let k = product_phase(xa, za, xb, zb);
                out.add_raw(xa ^ xb, za ^ zb, ca * cb * i_pow(k));
            }
        }
        out.purge();
        Ok(out)
    }

    /// `[self, other]`, computed from anticommuting pairs only.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let mut out = Self::new(self.n_qubits);
        for (&(xa, za), &ca) in &self.terms {
            for (&(xb, zb), &cb) in &other.terms {
                if strings_commute(xa, za, xb, zb) {
                    continue;
                }
                let k = product_phase(xa, za, xb, zb);
                out.add_raw(xa ^ xb, za ^ zb, ca * cb * i_pow(k) * 2.0);
            }
        }
        out.purge();
        Ok(out)
    }

    /// Hermitian conjugate; every normalized string is Hermitian, so only the
    /// coefficients are conjugated.
    pub fn adjoint(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    /// Largest imaginary coefficient part. Zero iff the sum is Hermitian.
    pub fn hermiticity_defect(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Drops the imaginary part of every coefficient, i.e. returns
    /// `(self + self^†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = C64::new(c.re, 0.0);
        }
        out.purge();
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.re.abs() <= tol)
    }

    /// Sum of coefficient magnitudes (an upper bound on the spectral norm).
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Union of the supports of all strings.
    pub fn support(&self) -> u64 {
        self.terms.keys().fold(0, |acc, (x, z)| acc | x | z)
    }

    /// Same strings and coefficients up to `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.n_qubits != other.n_qubits {
            return false;
        }
        match self.sub(other) {
            Ok(d) => d.max_coefficient() <= tol,
            Err(_) => false,
        }
    }

    /// Widens the register, keeping every string on its original qubits.
    pub fn embed(&self, n_qubits: usize) -> Result<Self> {
        if n_qubits < self.n_qubits || self.support() & !width_mask(n_qubits) != 0 {
            return Err(Error::WidthMismatch {
                left: self.n_qubits,
                right: n_qubits,
            });
        }
        Ok(Self {
            n_qubits,
            terms: self.terms.clone(),
        })
    }
}
