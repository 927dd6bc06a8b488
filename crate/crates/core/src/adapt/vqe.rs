use nalgebra::DMatrix;

use crate::error::Result;
use crate::optimizer::{minimize, BfgsOptions, Objective, OptimizerState};
use crate::par::Execution;
use crate::pauli::CompiledOperator;
use crate::simulator::AnsatzState;

/// Energy and adjoint gradient of a fixed-structure ansatz.
pub struct AnsatzObjective<'a> {
    pub ansatz: &'a AnsatzState,
    pub hamiltonian: &'a CompiledOperator,
    pub execution: Execution,
}

impl Objective for AnsatzObjective<'_> {
    fn energy(&mut self, x: &[f64]) -> Result<f64> {
        Ok(self.ansatz.energy(self.hamiltonian, x, self.execution))
    }

    fn gradient(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .ansatz
            .energy_and_gradient(self.hamiltonian, x, self.execution)
            .1)
    }
}

/// Optimizes all parameters of `ansatz` from their current values and
/// stores the result in it.
pub fn optimize_ansatz(
    ansatz: &mut AnsatzState,
    hamiltonian: &CompiledOperator,
    inverse_hessian: Option<DMatrix<f64>>,
    options: &BfgsOptions,
    execution: Execution,
) -> Result<OptimizerState> {
    let x0 = ansatz.parameters().to_vec();
    let mut objective = AnsatzObjective {
        ansatz,
        hamiltonian,
        execution,
    };
    let state = minimize(&mut objective, &x0, inverse_hessian, options)?;
    ansatz.set_parameters(&state.parameters);
    Ok(state)
}
