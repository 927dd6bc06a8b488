use crate::error::{Error, Result};
use crate::par::Execution;
use crate::pauli::{CompiledOperator, PauliSum, C64};
use crate::pools::{Evolution, Exchange, OperatorKind, PoolOperator, Rotation};

/// Residual imaginary part tolerated in an expectation value.
const IMAGINARY_TOL: f64 = 1e-10;

/// Calls `f(b_src, b_tgt)` for every basis-state pair linked by `exchange`.
#[inline]
pub(crate) fn for_each_pair(n_qubits: usize, exchange: &Exchange, mut f: impl FnMut(usize, usize)) {
    let full = if n_qubits == 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    };
    let comp = full & !exchange.support();
    let mut rest = 0u64;
    loop {
        f(
            (rest | exchange.source) as usize,
            (rest | exchange.target) as usize,
        );
        if rest == comp {
            break;
        }
        rest = rest.wrapping_sub(comp) & comp;
    }
}

/// `exp(angle·T)` for one exchange, in place.
pub(crate) fn rotate(amps: &mut [C64], n_qubits: usize, exchange: &Exchange, angle: f64) {
    if angle == 0.0 {
        return;
    }
    let (s, c) = angle.sin_cos();
    for_each_pair(n_qubits, exchange, |src, tgt| {
        let sign = exchange.sign(src as u64);
        let a = amps[src];
        let b = amps[tgt];
        amps[src] = a * c - b * (sign * s);
        amps[tgt] = a * (sign * s) + b * c;
    });
}

/// `2 Re⟨bra| weight·T |ket⟩` for one exchange.
pub(crate) fn exchange_derivative(
    n_qubits: usize,
    exchange: &Exchange,
    weight: f64,
    bra: &[C64],
    ket: &[C64],
) -> f64 {
    let mut acc = 0.0;
    for_each_pair(n_qubits, exchange, |src, tgt| {
        let sign = exchange.sign(src as u64);
        acc += sign * ((bra[tgt].conj() * ket[src]).re - (bra[src].conj() * ket[tgt]).re);
    });
    2.0 * weight * acc
}

/// `P|b⟩ = phase·|b ⊕ x⟩` with `P` normalized as `i^{|x∧z|} X^x Z^z`.
#[inline]
fn pauli_phase(x_mask: u64, z_mask: u64, basis: usize) -> C64 {
    let k = (x_mask & z_mask).count_ones() + 2 * (z_mask & basis as u64).count_ones();
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// `exp(angle·i·P)`, in place.
pub(crate) fn pauli_rotate(amps: &mut [C64], x_mask: u64, z_mask: u64, angle: f64) {
    if angle == 0.0 {
        return;
    }
    let (s, c) = angle.sin_cos();
    let is = C64::new(0.0, s);
    if x_mask == 0 {
        for (b, a) in amps.iter_mut().enumerate() {
            *a *= c + is * pauli_phase(0, z_mask, b);
        }
        return;
    }
    let x = x_mask as usize;
    for b in 0..amps.len() {
        let partner = b ^ x;
        if partner < b {
            continue;
        }
        // P|b⟩ = p1|partner⟩, P|partner⟩ = p2|b⟩.
        let p1 = pauli_phase(x_mask, z_mask, b);
        let p2 = pauli_phase(x_mask, z_mask, partner);
        let a = amps[b];
        let d = amps[partner];
        amps[b] = a * c + is * p2 * d;
        amps[partner] = d * c + is * p1 * a;
    }
}

/// `2 Re⟨bra| i·weight·P |ket⟩`.
pub(crate) fn pauli_derivative(
    x_mask: u64,
    z_mask: u64,
    weight: f64,
    bra: &[C64],
    ket: &[C64],
) -> f64 {
    let x = x_mask as usize;
    let mut acc = C64::new(0.0, 0.0);
    for (b, k) in ket.iter().enumerate() {
        acc += bra[b ^ x].conj() * pauli_phase(x_mask, z_mask, b) * k;
    }
    2.0 * weight * (C64::new(0.0, 1.0) * acc).re
}

/// Normalized complex amplitudes over `2^n` basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl Statevector {
    /// Computational basis state `|basis⟩`.
    pub fn basis(n_qubits: usize, basis: u64) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[basis as usize] = C64::new(1.0, 0.0);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// Wraps and normalizes an amplitude vector of length `2^n`.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Self {
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        assert_eq!(
            1 << n_qubits,
            amplitudes.len(),
            "length must be a power of two"
        );
        let mut s = Self {
            n_qubits,
            amplitudes,
        };
        let nrm = s.norm();
        s.amplitudes.iter_mut().for_each(|a| *a /= nrm);
        s
    }

    /// Wraps amplitudes without normalizing (adjoint vectors are not states).
    pub(crate) fn from_raw(amplitudes: Vec<C64>) -> Self {
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Probability weight on basis states outside `keep`.
    pub fn leakage(&self, keep: impl Fn(u64) -> bool) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(b, _)| !keep(*b as u64))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn check_kind(
        op: &PoolOperator,
        allowed: &[OperatorKind],
        expected: &'static str,
    ) -> Result<()> {
        if !allowed.contains(&op.kind()) {
            return Err(Error::WrongKind {
                expected,
                found: op.kind().to_string(),
            });
        }
        Ok(())
    }

    fn check_arity(op: &PoolOperator, found: usize) -> Result<()> {
        if op.arity() != found {
            return Err(Error::ArityMismatch {
                expected: op.arity(),
                found,
            });
        }
        Ok(())
    }

    fn apply_rotations(&mut self, rotations: &[Rotation], params: &[f64]) {
        for r in rotations {
            rotate(
                &mut self.amplitudes,
                self.n_qubits,
                &r.exchange,
                r.weight * params[r.parameter],
            );
        }
    }

    /// Exponential of any pool operator at the given parameters.
    pub fn apply_operator(&mut self, op: &PoolOperator, params: &[f64]) -> Result<()> {
        Self::check_arity(op, params.len())?;
        match op.evolution() {
            Evolution::Exchanges(rots) => self.apply_rotations(rots, params),
            Evolution::PauliRotation {
                x_mask,
                z_mask,
                weight,
            } => pauli_rotate(&mut self.amplitudes, *x_mask, *z_mask, weight * params[0]),
        }
        Ok(())
    }

    /// Undoes [`Statevector::apply_operator`].
    pub fn unapply_operator(&mut self, op: &PoolOperator, params: &[f64]) -> Result<()> {
        let negated: Vec<f64> = params.iter().map(|p| -p).collect();
        Self::check_arity(op, params.len())?;
        match op.evolution() {
            Evolution::Exchanges(rots) => {
                for r in rots.iter().rev() {
                    rotate(
                        &mut self.amplitudes,
                        self.n_qubits,
                        &r.exchange,
                        r.weight * negated[r.parameter],
                    );
                }
            }
            Evolution::PauliRotation {
                x_mask,
                z_mask,
                weight,
            } => pauli_rotate(&mut self.amplitudes, *x_mask, *z_mask, weight * negated[0]),
        }
        Ok(())
    }

    /// Givens rotation between the source and target patterns of a QE.
    pub fn apply_qe_evolution(&mut self, op: &PoolOperator, theta: f64) -> Result<()> {
        Self::check_kind(
            op,
            &[OperatorKind::SingleQE, OperatorKind::DoubleQE],
            "single or double QE",
        )?;
        self.apply_operator(op, &[theta])
    }

    pub fn apply_ovp_ceo(&mut self, op: &PoolOperator, theta: f64) -> Result<()> {
        Self::check_kind(
            op,
            &[OperatorKind::OvpCeoPlus, OperatorKind::OvpCeoMinus],
            "OVP-CEO",
        )?;
        self.apply_operator(op, &[theta])
    }

    pub fn apply_mvp_ceo(&mut self, op: &PoolOperator, thetas: &[f64]) -> Result<()> {
        Self::check_kind(op, &[OperatorKind::MvpCeo], "MVP-CEO")?;
        self.apply_operator(op, thetas)
    }

    pub fn apply_fermionic_evolution(&mut self, op: &PoolOperator, theta: f64) -> Result<()> {
        Self::check_kind(
            op,
            &[OperatorKind::GsdSingle, OperatorKind::GsdDouble],
            "fermionic excitation",
        )?;
        self.apply_operator(op, &[theta])
    }

    /// `exp(θ·g)` for a single-term anti-Hermitian generator `g = i·c·P`.
    pub fn apply_pauli_exponential(&mut self, generator: &PauliSum, theta: f64) -> Result<()> {
        let mut terms = generator.iter();
        let (Some(term), None) = (terms.next(), terms.next()) else {
            return Err(Error::MultiTermGenerator);
        };
        let c = term.coefficient();
        if c.re.abs() > 1e-14 {
            return Err(Error::MultiTermGenerator);
        }
        pauli_rotate(
            &mut self.amplitudes,
            term.x_mask(),
            term.z_mask(),
            theta * c.im,
        );
        Ok(())
    }

    /// `H|ψ⟩`.
    pub fn apply_hamiltonian(&self, h: &CompiledOperator, exec: Execution) -> Vec<C64> {
        h.apply(exec, &self.amplitudes)
    }

    /// `⟨ψ|H|ψ⟩` through a precompiled operator.
    pub fn expectation_compiled(&self, h: &CompiledOperator, exec: Execution) -> f64 {
        let hpsi = h.apply(exec, &self.amplitudes);
        self.amplitudes
            .iter()
            .zip(&hpsi)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    /// `⟨ψ|H|ψ⟩` for a Hermitian Pauli sum.
    pub fn expectation(&self, h: &PauliSum) -> Result<f64> {
        let defect = h.hermiticity_defect();
        if defect > 1e-12 {
            return Err(Error::NotHermitian(defect));
        }
        let mut acc = C64::new(0.0, 0.0);
        for t in h.iter() {
            let c = t.coefficient();
            for (b, a) in self.amplitudes.iter().enumerate() {
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let out = b ^ t.x_mask() as usize;
                acc += self.amplitudes[out].conj() * c * pauli_phase(t.x_mask(), t.z_mask(), b) * a;
            }
        }
        assert!(acc.im.abs() < IMAGINARY_TOL * (1.0 + h.one_norm()));
        Ok(acc.re)
    }
}

/// Per-parameter derivatives `2 Re⟨bra| G_j |ket⟩` of an operator's generators.
pub fn operator_derivatives(op: &PoolOperator, bra: &[C64], ket: &[C64]) -> Vec<f64> {
    let n_qubits = bra.len().trailing_zeros() as usize;
    let mut out = vec![0.0; op.arity()];
    match op.evolution() {
        Evolution::Exchanges(rots) => {
            for r in rots {
                out[r.parameter] += exchange_derivative(n_qubits, &r.exchange, r.weight, bra, ket);
            }
        }
        Evolution::PauliRotation {
            x_mask,
            z_mask,
            weight,
        } => out[0] = pauli_derivative(*x_mask, *z_mask, *weight, bra, ket),
    }
    out
}
