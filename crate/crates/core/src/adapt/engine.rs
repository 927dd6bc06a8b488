use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::config::{AdaptConfig, PoolChoice};
use super::vqe::optimize_ansatz;
use crate::circuits::{CostModel, DepthSchedule};
use crate::error::{Error, Result};
use crate::measurement::{gradient_observable_strings, CostLedger, GradientCostMode};
use crate::molecule::MolecularSystem;
use crate::optimizer::{augment_inverse_hessian, EvaluationCounts, OptimizerState};
use crate::par::Execution;
use crate::pauli::CompiledOperator;
use crate::pools::{
    build_gsd_pool, build_ovp_ceo_pool, build_qe_pool, build_qubit_pool, mvp_twin, OperatorKind,
    Pool, PoolOperator,
};
use crate::simulator::{operator_gradients, AnsatzState};

/// Gradients at or below this magnitude count as zero.
pub const ZERO_GRADIENT: f64 = 1e-12;

/// 1 kcal/mol in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.594e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    GradientNorm,
    EnergyChange,
    MaxIterations,
    ErrorTarget,
    OptimizerFailure,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StopReason::GradientNorm => "gradient-norm",
            StopReason::EnergyChange => "energy-change",
            StopReason::MaxIterations => "max-iterations",
            StopReason::ErrorTarget => "error-target",
            StopReason::OptimizerFailure => "optimizer-failure",
        };
        f.write_str(s)
    }
}

/// State after one ADAPT iteration; iteration 0 is the reference determinant.
/// Cost fields are cumulative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub energy: f64,
    pub error: f64,
    pub parameter_count: usize,
    pub cnot_count: usize,
    pub cnot_depth: usize,
    pub measurement_units: f64,
    /// Norm of the gradient round that triggered this iteration.
    pub gradient_norm: Option<f64>,
    pub selected: Vec<String>,
    pub evaluations: EvaluationCounts,
    pub optimizer_converged: bool,
}

#[derive(Clone, Debug)]
pub struct AdaptRun {
    pub config: AdaptConfig,
    pub records: Vec<IterationRecord>,
    pub stop_reason: StopReason,
    /// Norm of the last gradient round, including the one that stopped the run.
    pub final_gradient_norm: f64,
    pub ansatz: AnsatzState,
    pub ledger: CostLedger,
    pub fci_energy: f64,
}

impl AdaptRun {
    pub fn last(&self) -> &IterationRecord {
        self.records
            .last()
            .expect("reference record always present")
    }

    /// First record whose error is below `threshold`.
    pub fn first_below(&self, threshold: f64) -> Option<&IterationRecord> {
        self.records.iter().find(|r| r.error < threshold)
    }
}

/// Greedy disjoint-support packing in descending `|gradient|`, ties by index.
pub fn tetris_select(gradients: &[f64], ops: &[PoolOperator]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..gradients.len()).collect();
    order.sort_by(|&a, &b| {
        gradients[b]
            .abs()
            .total_cmp(&gradients[a].abs())
            .then(a.cmp(&b))
    });
    let mut used = 0u64;
    let mut chosen = Vec::new();
    for k in order {
        if gradients[k].abs() <= ZERO_GRADIENT {
            break;
        }
        if ops[k].support() & used == 0 {
            used |= ops[k].support();
            chosen.push(k);
        }
    }
    chosen
}

/// Index of the largest `|gradient|`, first on ties.
pub fn argmax_abs(gradients: &[f64]) -> Option<usize> {
    gradients
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (k, g)| match best {
            Some((_, b)) if b >= g.abs() => best,
            _ => Some((k, g.abs())),
        })
        .map(|(k, _)| k)
}

/// What one selected pool element turns into.
enum Addition {
    Fixed(PoolOperator),
    /// Energy-based choice between the OVP and its MVP twin.
    Decide {
        ovp: PoolOperator,
        mvp: PoolOperator,
    },
}

struct Engine<'a> {
    system: &'a MolecularSystem,
    cfg: &'a AdaptConfig,
    exec: Execution,
    h: CompiledOperator,
    pool: Pool,
    qe_pool: Pool,
    model: CostModel,
    n_strings: usize,
    ansatz: AnsatzState,
    inverse_hessian: DMatrix<f64>,
    schedule: DepthSchedule,
    ledger: CostLedger,
}

impl Engine<'_> {
    fn expand(&self, index: usize, h_psi: &[crate::pauli::C64]) -> Result<Addition> {
        let op = &self.pool.operators()[index];
        if !self.cfg.pool.is_ceo() || op.kind() == OperatorKind::SingleQE {
            return Ok(Addition::Fixed(op.clone()));
        }
        let twins = self.qe_pool.with_support(op.support());
        let twin_ops: Vec<PoolOperator> = twins
            .iter()
            .map(|&k| self.qe_pool.operators()[k].clone())
            .collect();
        let grads = operator_gradients(self.ansatz.state(), h_psi, &twin_ops, self.exec);
        let nonzero: BTreeSet<usize> = twins
            .iter()
            .zip(&grads)
            .filter(|(_, g)| g.abs() > ZERO_GRADIENT)
            .map(|(&k, _)| k)
            .collect();
        let mvp = || mvp_twin(op, &self.qe_pool, &nonzero);
        Ok(match (self.cfg.pool, nonzero.len()) {
            (PoolChoice::OvpCeoOnly, _) | (_, 0) => Addition::Fixed(op.clone()),
            (PoolChoice::MvpCeoOnly, 1) => {
                let k = *nonzero.first().expect("one element");
                Addition::Fixed(self.qe_pool.operators()[k].clone())
            }
            (PoolChoice::MvpCeoOnly, _) => Addition::Fixed(mvp()?),
            (_, 1) => Addition::Fixed(op.clone()),
            (PoolChoice::CeoDvg, _) => Addition::Fixed(mvp()?),
            (PoolChoice::CeoDve, _) => Addition::Decide {
                ovp: op.clone(),
                mvp: mvp()?,
            },
            _ => unreachable!("non-CEO families returned early"),
        })
    }

    fn optimize(&self, ansatz: &mut AnsatzState, prior: &DMatrix<f64>) -> Result<OptimizerState> {
        let h0 = if self.cfg.hessian_recycling {
            Some(augment_inverse_hessian(
                prior,
                ansatz.parameters().len() - prior.nrows(),
            )?)
        } else {
            None
        };
        optimize_ansatz(ansatz, &self.h, h0, &self.cfg.optimizer, self.exec)
    }

    fn charge(&mut self, st: &OptimizerState) {
        self.ledger.charge_optimization(
            st.counts.energy,
            st.counts.gradient,
            st.parameters.len(),
            self.cfg.gradient_pricing,
        );
    }

    /// Appends the additions, optimizes, and returns the final optimizer
    /// state with the summed evaluation counts.
    fn grow(
        &mut self,
        additions: Vec<Addition>,
    ) -> Result<(OptimizerState, EvaluationCounts, Vec<PoolOperator>)> {
        let mut base = self.ansatz.clone();
        let mut appended = Vec::new();
        let mut decides = Vec::new();
        for a in additions {
            match a {
                Addition::Fixed(op) => {
                    base.push(op.clone());
                    appended.push(op);
                }
                Addition::Decide { ovp, mvp } => decides.push((ovp, mvp)),
            }
        }
        let prior = self.inverse_hessian.clone();
        let start_energy = self
            .ansatz
            .energy(&self.h, self.ansatz.parameters(), self.exec);
        let mut total = EvaluationCounts::default();
        let mut outcome = None;
        for (ovp, mvp) in decides {
            let mut with_ovp = base.clone();
            with_ovp.push(ovp.clone());
            let st_ovp = self.optimize(&mut with_ovp, &prior)?;
            let mut with_mvp = base.clone();
            with_mvp.push(mvp.clone());
            let st_mvp = self.optimize(&mut with_mvp, &prior)?;
            for st in [&st_ovp, &st_mvp] {
                self.charge(st);
                total += st.counts;
            }
            let gain_ovp = (st_ovp.energy - start_energy) / self.model.ovp_ceo.count as f64;
            let gain_mvp = (st_mvp.energy - start_energy) / self.model.mvp_ceo.count as f64;
            // Both gains are non-positive; keep the OVP unless the MVP lowers
            // the energy more per CNOT.
            if gain_mvp > gain_ovp {
                base = with_ovp;
                appended.push(ovp);
                outcome = Some(st_ovp);
            } else {
                base = with_mvp;
                appended.push(mvp);
                outcome = Some(st_mvp);
            }
        }
        let state = match outcome {
            // The last decision already optimized every new parameter.
            Some(st) => st,
            None => {
                let st = self.optimize(&mut base, &prior)?;
                self.charge(&st);
                total += st.counts;
                st
            }
        };
        self.ansatz = base;
        Ok((state, total, appended))
    }

    fn record(&self, iteration: usize, energy: f64, gradient_norm: Option<f64>) -> IterationRecord {
        IterationRecord {
            iteration,
            energy,
            error: energy - self.system.fci_energy,
            parameter_count: self.ansatz.parameters().len(),
            cnot_count: self.schedule.total_count(),
            cnot_depth: self.schedule.depth(),
            measurement_units: self.ledger.total_units(),
            gradient_norm,
            selected: Vec::new(),
            evaluations: EvaluationCounts::default(),
            optimizer_converged: true,
        }
    }
}

/// Selection pool for a family; CEO families select from the OVP-CEO pool.
pub fn selection_pool(
    choice: PoolChoice,
    qe_pool: &Pool,
    n_qubits: usize,
    system: &MolecularSystem,
) -> Result<Pool> {
    match choice {
        PoolChoice::Gsd => build_gsd_pool(n_qubits, system.ordering),
        PoolChoice::Qubit => build_qubit_pool(qe_pool),
        PoolChoice::Qeb => Ok(qe_pool.clone()),
        _ => build_ovp_ceo_pool(n_qubits, system.ordering),
    }
}

/// ADAPT-VQE from the reference determinant of `system`.
pub fn run_adapt(system: &MolecularSystem, cfg: &AdaptConfig, exec: Execution) -> Result<AdaptRun> {
    cfg.validate()?;
    let n = system.n_qubits();
    let qe_pool = build_qe_pool(n, system.ordering)?;
    let pool = selection_pool(cfg.pool, &qe_pool, n, system)?;
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let n_strings = match cfg.gradient_cost_mode {
        GradientCostMode::Naive => gradient_observable_strings(&system.hamiltonian, &pool)?,
        GradientCostMode::Ogm => 0,
    };
    let mut engine = Engine {
        system,
        cfg,
        exec,
        h: CompiledOperator::new(&system.hamiltonian),
        pool,
        qe_pool,
        model: CostModel::default(),
        n_strings,
        ansatz: AnsatzState::new(n, system.hf_determinant),
        inverse_hessian: DMatrix::zeros(0, 0),
        schedule: DepthSchedule::new(n),
        ledger: CostLedger::default(),
    };
    let hf_energy = engine.ansatz.state().expectation_compiled(&engine.h, exec);
    let mut records = vec![engine.record(0, hf_energy, None)];
    let (stop_reason, final_norm) = loop {
        let iteration = records.len();
        let state = engine.ansatz.state();
        let h_psi = state.apply_hamiltonian(&engine.h, exec);
        let grads = operator_gradients(state, &h_psi, engine.pool.operators(), exec);
        let norm = grads.iter().map(|g| g * g).sum::<f64>().sqrt();
        if norm < cfg.epsilon {
            break (StopReason::GradientNorm, norm);
        }
        if let [.., before, after] = records.as_slice() {
            if (before.energy - after.energy).abs() < cfg.energy_change_floor {
                break (StopReason::EnergyChange, norm);
            }
        }
        if iteration > cfg.max_iterations {
            break (StopReason::MaxIterations, norm);
        }
        engine
            .ledger
            .charge_gradient_round(cfg.gradient_cost_mode, n, engine.n_strings);
        let chosen = if cfg.tetris {
            tetris_select(&grads, engine.pool.operators())
        } else {
            argmax_abs(&grads).into_iter().collect()
        };
        let additions = chosen
            .iter()
            .map(|&k| engine.expand(k, &h_psi))
            .collect::<Result<Vec<_>>>()?;
        let (st, counts, appended) = match engine.grow(additions) {
            Ok(v) => v,
            Err(Error::NonFiniteEnergy) => break (StopReason::OptimizerFailure, norm),
            Err(e) => return Err(e),
        };
        for op in &appended {
            engine.schedule.append(&engine.model, op)?;
        }
        engine.inverse_hessian = st.inverse_hessian.clone();
        let mut rec = engine.record(iteration, st.energy, Some(norm));
        rec.selected = appended.iter().map(PoolOperator::label).collect();
        rec.evaluations = counts;
        rec.optimizer_converged = st.converged();
        records.push(rec);
        if cfg
            .stop_below_error
            .is_some_and(|t| st.energy - system.fci_energy < t)
        {
            break (StopReason::ErrorTarget, norm);
        }
    };
    Ok(AdaptRun {
        config: cfg.clone(),
        records,
        stop_reason,
        final_gradient_norm: final_norm,
        ansatz: engine.ansatz,
        ledger: engine.ledger,
        fci_energy: system.fci_energy,
    })
}
