use super::state::{operator_derivatives, Statevector};
use crate::error::Result;
use crate::par::{self, Execution};
use crate::pauli::{CompiledOperator, C64};
use crate::pools::{Pool, PoolOperator};

/// `∂E/∂θ` at `θ = 0` for every pool element appended to `state`:
/// `⟨ψ|[H, A_k]|ψ⟩ = 2 Re⟨Hψ|A_k ψ⟩`.
///
/// Multi-parameter elements report the derivative of their first parameter.
pub fn pool_gradients(
    state: &Statevector,
    pool: &Pool,
    h: &CompiledOperator,
    exec: Execution,
) -> Vec<f64> {
    let lambda = state.apply_hamiltonian(h, exec);
    operator_gradients(state, &lambda, pool.operators(), exec)
}

/// Same as [`pool_gradients`] with `H|ψ⟩` supplied.
pub fn operator_gradients(
    state: &Statevector,
    h_psi: &[C64],
    ops: &[PoolOperator],
    exec: Execution,
) -> Vec<f64> {
    let psi = state.amplitudes();
    par::map(exec, ops, |op| operator_derivatives(op, h_psi, psi)[0])
}

/// Ordered ansatz elements, their parameters and the evolved reference.
#[derive(Clone, Debug)]
pub struct AnsatzState {
    n_qubits: usize,
    reference: u64,
    elements: Vec<(PoolOperator, Vec<usize>)>,
    parameters: Vec<f64>,
    cached: Statevector,
}

impl AnsatzState {
    pub fn new(n_qubits: usize, reference: u64) -> Self {
        Self {
            n_qubits,
            reference,
            elements: Vec::new(),
            parameters: Vec::new(),
            cached: Statevector::basis(n_qubits, reference),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn reference(&self) -> u64 {
        self.reference
    }

    pub fn elements(&self) -> &[(PoolOperator, Vec<usize>)] {
        &self.elements
    }

    pub fn parameters(&self) -> &[f64] {
        &self.parameters
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Appends an element with its new parameters set to zero; the cached
    /// state is unchanged because the new factor is the identity.
    pub fn push(&mut self, op: PoolOperator) {
        let start = self.parameters.len();
        let slots: Vec<usize> = (start..start + op.arity()).collect();
        self.parameters.extend(std::iter::repeat_n(0.0, op.arity()));
        self.elements.push((op, slots));
    }

    /// Appends an element at the given parameters.
    pub fn push_with(&mut self, op: PoolOperator, params: &[f64]) -> Result<()> {
        self.cached.apply_operator(&op, params)?;
        let start = self.parameters.len();
        self.parameters.extend_from_slice(params);
        self.elements
            .push((op, (start..start + params.len()).collect()));
        Ok(())
    }

    /// State prepared at arbitrary parameters.
    pub fn prepare(&self, parameters: &[f64]) -> Statevector {
        assert_eq!(parameters.len(), self.parameters.len());
        let mut s = Statevector::basis(self.n_qubits, self.reference);
        for (op, slots) in &self.elements {
            let p: Vec<f64> = slots.iter().map(|&k| parameters[k]).collect();
            s.apply_operator(op, &p).expect("arity matches slots");
        }
        s
    }

    pub fn set_parameters(&mut self, parameters: &[f64]) {
        self.cached = self.prepare(parameters);
        self.parameters = parameters.to_vec();
    }

    pub fn state(&self) -> &Statevector {
        &self.cached
    }

    /// `max |cached − prepare(parameters)|`.
    pub fn cache_deviation(&self) -> f64 {
        let fresh = self.prepare(&self.parameters);
        fresh
            .amplitudes()
            .iter()
            .zip(self.cached.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn energy(&self, h: &CompiledOperator, parameters: &[f64], exec: Execution) -> f64 {
        self.prepare(parameters).expectation_compiled(h, exec)
    }

    /// Energy and analytic gradient at `parameters` by a forward pass and a
    /// backward adjoint sweep.
    pub fn energy_and_gradient(
        &self,
        h: &CompiledOperator,
        parameters: &[f64],
        exec: Execution,
    ) -> (f64, Vec<f64>) {
        let mut phi = self.prepare(parameters);
        let mut lambda = Statevector::from_raw(phi.apply_hamiltonian(h, exec));
        let energy: f64 = phi
            .amplitudes()
            .iter()
            .zip(lambda.amplitudes())
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        let mut grad = vec![0.0; parameters.len()];
        for (op, slots) in self.elements.iter().rev() {
            let p: Vec<f64> = slots.iter().map(|&k| parameters[k]).collect();
            let d = operator_derivatives(op, lambda.amplitudes(), phi.amplitudes());
            for (slot, g) in slots.iter().zip(d) {
                grad[*slot] += g;
            }
            phi.unapply_operator(op, &p).expect("arity matches slots");
            lambda
                .unapply_operator(op, &p)
                .expect("arity matches slots");
        }
        (energy, grad)
    }
}
