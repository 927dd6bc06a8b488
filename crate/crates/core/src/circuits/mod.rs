//! CNOT accounting per pool element, ASAP depth scheduling, and the
//! explicit four-qubit circuit templates checked against dense exponentials.

mod cost;
mod template;

pub use cost::{CnotCost, CostModel, DepthSchedule};
pub use template::{
    export_templates, label_matrix, mvp_angles, mvp_template, ovp_plus_template, pauli_sum_matrix,
    phase_insensitive_distance, qe_template, template_exchanges, verify_circuit_templates, Circuit,
    Gate, TemplateReport, MVP_STRINGS,
};
