use serde::Serialize;

use super::vqe::optimize_ansatz;
use crate::circuits::{CostModel, DepthSchedule};
use crate::error::Result;
use crate::measurement::{CostLedger, GradientPricing};
use crate::molecule::MolecularSystem;
use crate::optimizer::{minimize, BfgsOptions, EvaluationCounts, Objective};
use crate::par::{self, Execution};
use crate::pauli::{CompiledOperator, C64};
use crate::pools::{build_uccsd, PoolOperator};
use crate::simulator::{
    expm_multiply, generator_action, operator_derivatives, AnsatzState, Statevector,
};

const QUADRATURE_NODES: usize = 16;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    (p0, p1) = (p1, ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k);
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            ((1.0 - x) / 2.0, w / 2.0)
        })
        .collect()
}

/// `E(θ) = ⟨ψ0| e^{−A} H e^{A} |ψ0⟩` with `A = Σ θ_k G_k` applied as a single
/// exponential.
pub struct UnitaryCoupledCluster<'a> {
    pub operators: &'a [PoolOperator],
    pub hamiltonian: &'a CompiledOperator,
    pub reference: Statevector,
    pub execution: Execution,
}

impl UnitaryCoupledCluster<'_> {
    fn evolve(&self, params: &[f64], v: &[C64], t: f64) -> Result<Vec<C64>> {
        expm_multiply(|u| generator_action(self.operators, params, u), v, t)
    }

    pub fn state(&self, params: &[f64]) -> Result<Statevector> {
        Ok(Statevector::from_amplitudes(self.evolve(
            params,
            self.reference.amplitudes(),
            1.0,
        )?))
    }

    /// `∂E/∂θ_k = 2 Re ∫₀¹ ⟨e^{−sA} Hψ| G_k e^{(1−s)A} ψ0⟩ ds` by quadrature.
    pub fn gradient(&self, params: &[f64]) -> Result<Vec<f64>> {
        let psi = self.state(params)?;
        let h_psi = psi.apply_hamiltonian(self.hamiltonian, self.execution);
        let mut grad = vec![0.0; params.len()];
        for (s, w) in gauss_legendre(QUADRATURE_NODES) {
            let bra = self.evolve(params, &h_psi, -s)?;
            let ket = self.evolve(params, self.reference.amplitudes(), 1.0 - s)?;
            let parts = par::map(self.execution, self.operators, |op| {
                operator_derivatives(op, &bra, &ket)[0]
            });
            for (g, p) in grad.iter_mut().zip(parts) {
                *g += w * p;
            }
        }
        Ok(grad)
    }
}

impl Objective for UnitaryCoupledCluster<'_> {
    fn energy(&mut self, x: &[f64]) -> Result<f64> {
        Ok(self
            .state(x)?
            .expectation_compiled(self.hamiltonian, self.execution))
    }

    fn gradient(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        UnitaryCoupledCluster::gradient(self, x)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UccsdResult {
    pub trotterized: bool,
    pub energy: f64,
    pub error: f64,
    pub parameter_count: usize,
    /// Circuit costs of the single Trotter step; absent for the exact exponential.
    pub cnot_count: Option<usize>,
    pub cnot_depth: Option<usize>,
    pub measurement_units: f64,
    pub evaluations: EvaluationCounts,
    pub converged: bool,
    /// Largest gradient component at the returned point.
    pub gradient_max: f64,
    pub parameters: Vec<f64>,
}

/// One optimization of all occupied-to-virtual singles and doubles from zero.
pub fn run_uccsd_vqe(
    system: &MolecularSystem,
    trotterized: bool,
    options: &BfgsOptions,
    pricing: GradientPricing,
    exec: Execution,
) -> Result<UccsdResult> {
    let n = system.n_qubits();
    let ops = build_uccsd(
        n,
        system.n_electrons(),
        system.integrals.ms2(),
        system.ordering,
    )?;
    let h = CompiledOperator::new(&system.hamiltonian);
    let (state, cost) = if trotterized {
        let mut ansatz = AnsatzState::new(n, system.hf_determinant);
        let model = CostModel::default();
        let mut schedule = DepthSchedule::new(n);
        for op in &ops {
            schedule.append(&model, op)?;
            ansatz.push(op.clone());
        }
        let st = optimize_ansatz(&mut ansatz, &h, None, options, exec)?;
        (st, Some((schedule.total_count(), schedule.depth())))
    } else {
        let mut objective = UnitaryCoupledCluster {
            operators: &ops,
            hamiltonian: &h,
            reference: Statevector::basis(n, system.hf_determinant),
            execution: exec,
        };
        let st = minimize(&mut objective, &vec![0.0; ops.len()], None, options)?;
        (st, None)
    };
    let mut ledger = CostLedger::default();
    ledger.charge_optimization(
        state.counts.energy,
        state.counts.gradient,
        ops.len(),
        pricing,
    );
    Ok(UccsdResult {
        trotterized,
        energy: state.energy,
        error: state.energy - system.fci_energy,
        parameter_count: ops.len(),
        cnot_count: cost.map(|c| c.0),
        cnot_depth: cost.map(|c| c.1),
        measurement_units: ledger.total_units(),
        evaluations: state.counts,
        converged: state.converged(),
        gradient_max: state.gradient.iter().fold(0.0, |m, g| m.max(g.abs())),
        parameters: state.parameters,
    })
}
