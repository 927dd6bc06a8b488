use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliTerm, C64, PURGE_THRESHOLD};
use crate::pools::Pool;

/// How a pool-gradient measurement round is priced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradientCostMode {
    /// `8N` energy evaluations for `N` spin orbitals.
    #[default]
    Ogm,
    /// `4·N_s` for `N_s` distinct strings across all gradient observables.
    Naive,
}

/// Price of one optimizer gradient call relative to one energy evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientPricing {
    /// Two energy evaluations per parameter (parameter shift).
    #[default]
    PerComponent,
    /// Two energy evaluations per gradient vector.
    PerVector,
}

impl GradientPricing {
    pub fn units(self, dim: usize) -> f64 {
        match self {
            GradientPricing::PerComponent => 2.0 * dim as f64,
            GradientPricing::PerVector => 2.0,
        }
    }
}

/// Cumulative measurement cost in units of one energy evaluation. Every
/// component only grows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostLedger {
    pub pool_gradient_units: f64,
    pub optimization_energy_units: f64,
    pub optimization_gradient_units: f64,
}

impl CostLedger {
    pub fn total_units(&self) -> f64 {
        self.pool_gradient_units + self.optimization_energy_units + self.optimization_gradient_units
    }

    pub fn charge_gradient_round(
        &mut self,
        mode: GradientCostMode,
        n_spin_orbitals: usize,
        n_strings: usize,
    ) {
        self.pool_gradient_units += match mode {
            GradientCostMode::Ogm => 8.0 * n_spin_orbitals as f64,
            GradientCostMode::Naive => 4.0 * n_strings as f64,
        };
    }

    pub fn charge_optimization(
        &mut self,
        energy_evals: usize,
        gradient_evals: usize,
        dim: usize,
        pricing: GradientPricing,
    ) {
        self.optimization_energy_units += energy_evals as f64;
        self.optimization_gradient_units += gradient_evals as f64 * pricing.units(dim);
    }
}

/// Distinct non-identity strings across the observables `[H, G]` for every
/// generator `G` of the pool.
///
/// Only anticommuting pairs contribute: `[h, p] = 2hp` for them and `0`
/// otherwise.
pub fn gradient_observable_strings(h: &PauliSum, pool: &Pool) -> Result<usize> {
    let h_terms: Vec<PauliTerm> = h.iter().filter(|t| t.key() != (0, 0)).collect();
    let mut strings = HashSet::new();
    let mut acc: HashMap<(u64, u64), C64> = HashMap::new();
    for op in pool.operators() {
        for g in op.generators() {
            if g.n_qubits() != h.n_qubits() {
                return Err(Error::WidthMismatch {
                    left: h.n_qubits(),
                    right: g.n_qubits(),
                });
            }
            acc.clear();
            for p in g.iter() {
                for t in h_terms
                    .iter()
                    .filter(|t| !t.commutes(&p).expect("same width"))
                {
                    let prod = t.multiply(&p)?;
                    *acc.entry(prod.key()).or_default() += prod.coefficient() * 2.0;
                }
            }
            strings.extend(
                acc.iter()
                    .filter(|(k, c)| **k != (0, 0) && c.norm() > PURGE_THRESHOLD)
                    .map(|(k, _)| *k),
            );
        }
    }
    Ok(strings.len())
}
