//! The adaptive ansatz loop, its CEO selection variants, and the fixed
//! UCCSD baseline.

mod config;
mod engine;
mod uccsd;
mod vqe;

pub use config::{AdaptConfig, PoolChoice};
pub use engine::{
    argmax_abs, run_adapt, selection_pool, tetris_select, AdaptRun, IterationRecord, StopReason,
    CHEMICAL_ACCURACY, ZERO_GRADIENT,
};
pub use uccsd::{gauss_legendre, run_uccsd_vqe, UccsdResult, UnitaryCoupledCluster};
pub use vqe::{optimize_ansatz, AnsatzObjective};
