//! Measurement-cost ledger and k-commutativity grouping of Hamiltonian strings.

mod grouping;
mod ledger;

pub use grouping::{k_commutativity_grouping, k_commute, r_hat, GroupingReport};
pub use ledger::{gradient_observable_strings, CostLedger, GradientCostMode, GradientPricing};
