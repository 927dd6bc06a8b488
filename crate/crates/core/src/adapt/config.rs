use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::{GradientCostMode, GradientPricing};
use crate::optimizer::BfgsOptions;

/// Pool and operator-selection rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoolChoice {
    Gsd,
    Qubit,
    Qeb,
    OvpCeoOnly,
    MvpCeoOnly,
    CeoDvg,
    CeoDve,
}

impl PoolChoice {
    pub fn is_ceo(self) -> bool {
        matches!(
            self,
            PoolChoice::OvpCeoOnly
                | PoolChoice::MvpCeoOnly
                | PoolChoice::CeoDvg
                | PoolChoice::CeoDve
        )
    }
}

impl std::fmt::Display for PoolChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PoolChoice::Gsd => "gsd",
            PoolChoice::Qubit => "qubit",
            PoolChoice::Qeb => "qeb",
            PoolChoice::OvpCeoOnly => "ovp-ceo-only",
            PoolChoice::MvpCeoOnly => "mvp-ceo-only",
            PoolChoice::CeoDvg => "ceo-dvg",
            PoolChoice::CeoDve => "ceo-dve",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdaptConfig {
    pub pool: PoolChoice,
    /// Stop when the pool-gradient 2-norm falls below this.
    pub epsilon: f64,
    /// Stop when the last iteration lowered the energy by less than this.
    pub energy_change_floor: f64,
    pub max_iterations: usize,
    pub tetris: bool,
    pub hessian_recycling: bool,
    pub gradient_cost_mode: GradientCostMode,
    pub gradient_pricing: GradientPricing,
    /// Stop as soon as the error against FCI drops below this.
    pub stop_below_error: Option<f64>,
    pub optimizer: BfgsOptions,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        Self {
            pool: PoolChoice::CeoDvg,
            epsilon: 1e-6,
            energy_change_floor: 1e-10,
            max_iterations: 200,
            tetris: false,
            hessian_recycling: false,
            gradient_cost_mode: GradientCostMode::Naive,
            gradient_pricing: GradientPricing::PerComponent,
            stop_below_error: None,
            optimizer: BfgsOptions::default(),
        }
    }
}

impl AdaptConfig {
    /// DVG selection with TETRIS, OGM pricing and Hessian recycling.
    pub fn ceo_star() -> Self {
        Self {
            pool: PoolChoice::CeoDvg,
            tetris: true,
            hessian_recycling: true,
            gradient_cost_mode: GradientCostMode::Ogm,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        // NaN fails every `matches!` below.
        let positive = |x: f64| matches!(x.partial_cmp(&0.0), Some(std::cmp::Ordering::Greater));
        if !positive(self.epsilon) {
            return bad("epsilon must be positive");
        }
        if self.energy_change_floor.is_nan() || self.energy_change_floor < 0.0 {
            return bad("energy_change_floor must be non-negative");
        }
        if self.stop_below_error.is_some_and(|e| !positive(e)) {
            return bad("stop_below_error must be positive");
        }
        let o = &self.optimizer;
        if !(0.0 < o.c1 && o.c1 < o.c2 && o.c2 < 1.0) {
            return bad("optimizer needs 0 < c1 < c2 < 1");
        }
        Ok(())
    }
}
