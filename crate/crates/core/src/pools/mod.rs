//! Operator pools, the UCCSD excitation list and the OVP-to-MVP twin map.

mod build;
mod operator;

pub use build::{
    build_gsd_pool, build_ovp_ceo_pool, build_qe_pool, build_qubit_pool, build_uccsd,
    excitation_exchanges, mvp_twin, twin_set, Pool, PoolFamily,
};
pub use operator::{Evolution, Exchange, OperatorKind, PoolOperator, Rotation};
