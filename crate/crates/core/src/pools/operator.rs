use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{
    anti_hermitian_pair, jordan_wigner, qubit_ladder_image, FermionTerm, Ladder, PauliSum, C64,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    SingleQE,
    DoubleQE,
    PauliString,
    OvpCeoPlus,
    OvpCeoMinus,
    MvpCeo,
    GsdSingle,
    GsdDouble,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            OperatorKind::SingleQE => "single-qe",
            OperatorKind::DoubleQE => "double-qe",
            OperatorKind::PauliString => "pauli",
            OperatorKind::OvpCeoPlus => "ovp-ceo+",
            OperatorKind::OvpCeoMinus => "ovp-ceo-",
            OperatorKind::MvpCeo => "mvp-ceo",
            OperatorKind::GsdSingle => "gsd-single",
            OperatorKind::GsdDouble => "gsd-double",
        };
        f.write_str(name)
    }
}

/// Exchange between two occupation patterns on a common support.
///
/// The generator `T = τ − τ^†` with `τ = ∏ creations(target) ∏ annihilations(source)`
/// maps `|src⟩ → s|tgt⟩` and `|tgt⟩ → −s|src⟩`, where `s = ±1` is the
/// fermionic parity sign when `fermionic` is set and `+1` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exchange {
    pub source: u64,
    pub target: u64,
    pub fermionic: bool,
}

impl Exchange {
    pub fn new(source: u64, target: u64, fermionic: bool) -> Self {
        debug_assert_eq!(source & target, 0);
        debug_assert_eq!(source.count_ones(), target.count_ones());
        Self {
            source,
            target,
            fermionic,
        }
    }

    pub fn support(&self) -> u64 {
        self.source | self.target
    }

    /// `τ`: creations on target qubits in ascending order, then annihilations
    /// on source qubits in descending order.
    pub fn ladders(&self) -> Vec<Ladder> {
        let bits = |m: u64| (0..64).filter(move |k| m >> k & 1 == 1);
        bits(self.target)
            .map(|q| (q as usize, true))
            .chain(bits(self.source).rev().map(|q| (q as usize, false)))
            .collect()
    }

    /// Sign `s` with `τ|b⟩ = s|b'⟩` for a basis state `b` matching the source
    /// pattern on the support.
    pub fn sign(&self, basis: u64) -> f64 {
        if !self.fermionic {
            return 1.0;
        }
        // Rightmost factor first: annihilations on ascending source qubits,
        // then creations on descending target qubits.
        let mut state = basis;
        let mut parity = 0u32;
        let mut src = self.source;
        while src != 0 {
            let bit = src & src.wrapping_neg();
            parity += (state & (bit - 1)).count_ones();
            state ^= bit;
            src ^= bit;
        }
        let mut tgt = self.target;
        while tgt != 0 {
            let bit = 1u64 << (63 - tgt.leading_zeros());
            parity += (state & (bit - 1)).count_ones();
            state ^= bit;
            tgt ^= bit;
        }
        if parity.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Pauli image of `T` under the qubit or Jordan–Wigner mapping.
    pub fn generator(&self, n_qubits: usize) -> PauliSum {
        let tau = FermionTerm::new(self.ladders(), C64::new(1.0, 0.0));
        let pair = anti_hermitian_pair(&tau);
        let image = if self.fermionic {
            jordan_wigner(n_qubits, &pair)
        } else {
            qubit_ladder_image(n_qubits, &pair)
        };
        image.expect("exchange qubits inside register")
    }
}

/// One exchange rotated by `weight · θ[parameter]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation {
    pub exchange: Exchange,
    pub parameter: usize,
    pub weight: f64,
}

/// How the simulator applies an operator's exponential.
#[derive(Clone, Debug, PartialEq)]
pub enum Evolution {
    /// Commuting exchange rotations on disjoint basis-state pairs.
    Exchanges(Vec<Rotation>),
    /// `exp(θ · i·weight·P)`.
    PauliRotation {
        x_mask: u64,
        z_mask: u64,
        weight: f64,
    },
}

/// An element of an operator pool or a fixed ansatz.
#[derive(Clone, Debug)]
pub struct PoolOperator {
    kind: OperatorKind,
    support: u64,
    generators: Vec<PauliSum>,
    evolution: Evolution,
    cnot_count: usize,
    cnot_depth: usize,
    /// Indices into the QE pool built on the same register, for QE and CEO
    /// kinds.
    constituents: Vec<usize>,
}

fn exchange_label(e: &Exchange) -> String {
    let list = |m: u64| {
        (0..64)
            .filter(|k| m >> k & 1 == 1)
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!("{}->{}", list(e.source), list(e.target))
}

impl PoolOperator {
    fn from_rotations(
        kind: OperatorKind,
        n_qubits: usize,
        rotations: Vec<Rotation>,
        arity: usize,
        cost: (usize, usize),
        constituents: Vec<usize>,
    ) -> Self {
        let support = rotations.iter().fold(0, |m, r| m | r.exchange.support());
        let mut generators = vec![PauliSum::new(n_qubits); arity];
        for r in &rotations {
            let g = r
                .exchange
                .generator(n_qubits)
                .scale(C64::new(r.weight, 0.0));
            generators[r.parameter] = generators[r.parameter].add(&g).expect("same width");
        }
        // Fermionic generators act on the Jordan–Wigner strings as well.
        let support = generators.iter().fold(support, |m, g| m | g.support());
        Self {
            kind,
            support,
            generators,
            evolution: Evolution::Exchanges(rotations),
            cnot_count: cost.0,
            cnot_depth: cost.1,
            constituents,
        }
    }

    /// A single or double qubit excitation.
    pub fn qubit_excitation(n_qubits: usize, exchange: Exchange, qe_index: usize) -> Self {
        let (kind, cost) = match exchange.source.count_ones() {
            1 => (OperatorKind::SingleQE, (2, 2)),
            _ => (OperatorKind::DoubleQE, (13, 11)),
        };
        let rot = Rotation {
            exchange: Exchange {
                fermionic: false,
                ..exchange
            },
            parameter: 0,
            weight: 1.0,
        };
        Self::from_rotations(kind, n_qubits, vec![rot], 1, cost, vec![qe_index])
    }

    /// Generalized fermionic single or double excitation.
    pub fn fermionic_excitation(n_qubits: usize, exchange: Exchange) -> Self {
        let rot = Rotation {
            exchange: Exchange {
                fermionic: true,
                ..exchange
            },
            parameter: 0,
            weight: 1.0,
        };
        let mut op = Self::from_rotations(
            OperatorKind::GsdSingle,
            n_qubits,
            vec![rot],
            1,
            (0, 0),
            vec![],
        );
        let span = op.support.count_ones() as usize;
        let (kind, count) = if op.rotations()[0].exchange.source.count_ones() == 1 {
            (OperatorKind::GsdSingle, 4 * (span - 1))
        } else {
            (OperatorKind::GsdDouble, 16 * (span - 1))
        };
        op.kind = kind;
        op.cnot_count = count;
        op.cnot_depth = count;
        op
    }

    /// `exp(θ·i·P)` for a Pauli string `P`.
    pub fn pauli_string(n_qubits: usize, x_mask: u64, z_mask: u64) -> Self {
        let mut g = PauliSum::new(n_qubits);
        g.add_raw(x_mask, z_mask, C64::new(0.0, 1.0));
        let support = x_mask | z_mask;
        let cost = if support.count_ones() <= 2 { 2 } else { 6 };
        Self {
            kind: OperatorKind::PauliString,
            support,
            generators: vec![g],
            evolution: Evolution::PauliRotation {
                x_mask,
                z_mask,
                weight: 1.0,
            },
            cnot_count: cost,
            cnot_depth: cost,
            constituents: vec![],
        }
    }

    /// One-parameter sum (`Plus`) or difference (`Minus`) of two QEs on the
    /// same support.
    pub fn ovp_ceo(
        n_qubits: usize,
        first: (&Exchange, usize),
        second: (&Exchange, usize),
        plus: bool,
    ) -> Self {
        let kind = if plus {
            OperatorKind::OvpCeoPlus
        } else {
            OperatorKind::OvpCeoMinus
        };
        let rotations = vec![
            Rotation {
                exchange: Exchange {
                    fermionic: false,
                    ..first.0.clone()
                },
                parameter: 0,
                weight: 1.0,
            },
            Rotation {
                exchange: Exchange {
                    fermionic: false,
                    ..second.0.clone()
                },
                parameter: 0,
                weight: if plus { 1.0 } else { -1.0 },
            },
        ];
        Self::from_rotations(
            kind,
            n_qubits,
            rotations,
            1,
            (9, 7),
            vec![first.1, second.1],
        )
    }

    /// Independently parameterized QEs on a common support.
    pub fn mvp_ceo(n_qubits: usize, qes: &[(&Exchange, usize)]) -> Result<Self> {
        if qes.len() < 2 {
            return Err(Error::TwinSetTooSmall(qes.len()));
        }
        let rotations = qes
            .iter()
            .enumerate()
            .map(|(k, (e, _))| Rotation {
                exchange: Exchange {
                    fermionic: false,
                    ..(*e).clone()
                },
                parameter: k,
                weight: 1.0,
            })
            .collect();
        let constituents = qes.iter().map(|(_, i)| *i).collect();
        Ok(Self::from_rotations(
            OperatorKind::MvpCeo,
            n_qubits,
            rotations,
            qes.len(),
            (13, 13),
            constituents,
        ))
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn support(&self) -> u64 {
        self.support
    }

    pub fn support_qubits(&self) -> Vec<usize> {
        (0..64).filter(|k| self.support >> k & 1 == 1).collect()
    }

    pub fn generators(&self) -> &[PauliSum] {
        &self.generators
    }

    pub fn arity(&self) -> usize {
        self.generators.len()
    }

    pub fn evolution(&self) -> &Evolution {
        &self.evolution
    }

    pub fn rotations(&self) -> &[Rotation] {
        match &self.evolution {
            Evolution::Exchanges(r) => r,
            Evolution::PauliRotation { .. } => &[],
        }
    }

    pub fn cnot_count(&self) -> usize {
        self.cnot_count
    }

    pub fn cnot_depth(&self) -> usize {
        self.cnot_depth
    }

    pub fn constituents(&self) -> &[usize] {
        &self.constituents
    }

    pub fn n_qubits(&self) -> usize {
        self.generators[0].n_qubits()
    }

    /// Short human-readable descriptor, e.g. `double-qe 0,1->2,3`.
    pub fn label(&self) -> String {
        match &self.evolution {
            Evolution::PauliRotation { x_mask, z_mask, .. } => {
                let term = crate::pauli::PauliTerm::new(
                    self.n_qubits(),
                    *x_mask,
                    *z_mask,
                    C64::new(1.0, 0.0),
                )
                .expect("in range");
                format!("{} {}", self.kind, term.label())
            }
            Evolution::Exchanges(rots) => {
                let parts: Vec<String> = rots.iter().map(|r| exchange_label(&r.exchange)).collect();
                format!("{} {}", self.kind, parts.join(" | "))
            }
        }
    }
}

impl fmt::Display for PoolOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dense_oracle as dense;

    fn dense_of(s: &PauliSum) -> dense::Matrix {
        let terms: Vec<_> = s
            .iter()
            .map(|t| (t.x_mask(), t.z_mask(), t.coefficient()))
            .collect();
        dense::sum_matrix(s.n_qubits(), &terms)
    }

    #[test]
    fn exchange_generator_maps_source_to_target() {
        for fermionic in [false, true] {
            let e = Exchange::new(0b0011, 0b1100, fermionic);
            let m = dense_of(&e.generator(4));
            assert!((m[(0b1100, 0b0011)] - C64::new(e.sign(0b0011), 0.0)).norm() < 1e-14);
            assert!((m[(0b0011, 0b1100)] + C64::new(e.sign(0b0011), 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn fermionic_sign_matches_dense_ladders() {
        let e = Exchange::new(0b000101, 0b101000, true);
        let tau = dense::ladder_product(6, &e.ladders(), true);
        for rest in [0u64, 0b000010, 0b010000, 0b010010] {
            let b = e.source | rest;
            let out = e.target | rest;
            assert!((tau[(out as usize, b as usize)] - C64::new(e.sign(b), 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn double_qe_has_eight_strings_and_costs_thirteen() {
        let op = PoolOperator::qubit_excitation(4, Exchange::new(0b0101, 0b1010, false), 0);
        assert_eq!(op.kind(), OperatorKind::DoubleQE);
        assert_eq!(op.generators()[0].len(), 8);
        assert_eq!((op.cnot_count(), op.cnot_depth()), (13, 11));
        assert!(op.generators()[0].is_anti_hermitian(1e-15));
    }

    #[test]
    fn gsd_costs_follow_span() {
        let d = PoolOperator::fermionic_excitation(4, Exchange::new(0b0011, 0b1100, true));
        assert_eq!(d.kind(), OperatorKind::GsdDouble);
        assert_eq!(d.cnot_count(), 48);
        let s = PoolOperator::fermionic_excitation(4, Exchange::new(0b0001, 0b0010, true));
        assert_eq!(s.kind(), OperatorKind::GsdSingle);
        assert_eq!(s.cnot_count(), 4);
        let wide = PoolOperator::fermionic_excitation(6, Exchange::new(0b000001, 0b100000, true));
        assert_eq!(wide.support(), 0b111111);
        assert_eq!(wide.cnot_count(), 20);
    }

    #[test]
    fn mvp_needs_two_constituents() {
        let e = Exchange::new(0b0101, 0b1010, false);
        assert!(matches!(
            PoolOperator::mvp_ceo(4, &[(&e, 0)]),
            Err(Error::TwinSetTooSmall(1))
        ));
    }

    #[test]
    fn labels_are_readable() {
        let op = PoolOperator::qubit_excitation(4, Exchange::new(0b0101, 0b1010, false), 0);
        assert_eq!(op.label(), "double-qe 0,2->1,3");
        let p = PoolOperator::pauli_string(4, 0b1111, 0b0001);
        assert_eq!(p.label(), "pauli XXXY");
    }
}
