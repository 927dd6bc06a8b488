use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pools::{OperatorKind, PoolOperator};

/// CNOT count and CNOT depth of one circuit block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnotCost {
    pub count: usize,
    pub depth: usize,
}

impl CnotCost {
    pub const fn new(count: usize, depth: usize) -> Self {
        Self { count, depth }
    }
}

/// Per-kind CNOT costs. GSD excitations scale with the number of qubits
/// their Jordan–Wigner strings span; their depth equals their count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostModel {
    pub single_qe: CnotCost,
    pub double_qe: CnotCost,
    pub pauli_two: CnotCost,
    pub pauli_four: CnotCost,
    pub ovp_ceo: CnotCost,
    pub mvp_ceo: CnotCost,
    /// Count per spanned qubit beyond the first.
    pub gsd_single_per_qubit: usize,
    pub gsd_double_per_qubit: usize,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            single_qe: CnotCost::new(2, 2),
            double_qe: CnotCost::new(13, 11),
            pauli_two: CnotCost::new(2, 2),
            pauli_four: CnotCost::new(6, 6),
            ovp_ceo: CnotCost::new(9, 7),
            mvp_ceo: CnotCost::new(13, 13),
            gsd_single_per_qubit: 4,
            gsd_double_per_qubit: 16,
        }
    }
}

impl CostModel {
    pub fn element_cost(&self, op: &PoolOperator) -> Result<CnotCost> {
        let span = op.support().count_ones() as usize;
        let gsd = |per: usize| {
            let count = per * span.saturating_sub(1);
            CnotCost::new(count, count)
        };
        match op.kind() {
            OperatorKind::SingleQE => Ok(self.single_qe),
            OperatorKind::DoubleQE => Ok(self.double_qe),
            OperatorKind::OvpCeoPlus | OperatorKind::OvpCeoMinus => Ok(self.ovp_ceo),
            OperatorKind::MvpCeo => Ok(self.mvp_ceo),
            OperatorKind::PauliString => match span {
                2 => Ok(self.pauli_two),
                4 => Ok(self.pauli_four),
                w => Err(Error::UnknownCostKind(format!(
                    "pauli string of weight {w}"
                ))),
            },
            OperatorKind::GsdSingle => Ok(gsd(self.gsd_single_per_qubit)),
            OperatorKind::GsdDouble => Ok(gsd(self.gsd_double_per_qubit)),
        }
    }
}

/// As-soon-as-possible CNOT-layer schedule over per-qubit clocks.
///
/// An element starts when every qubit of its support is free and occupies
/// all of them for its own depth. Depth never decreases under `append`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthSchedule {
    clocks: Vec<usize>,
    total_count: usize,
}

impl DepthSchedule {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            clocks: vec![0; n_qubits],
            total_count: 0,
        }
    }

    /// Schedules a block acting on `support` and returns its start layer.
    pub fn append_block(&mut self, support: u64, cost: CnotCost) -> usize {
        let needed = 64 - support.leading_zeros() as usize;
        if needed > self.clocks.len() {
            self.clocks.resize(needed, 0);
        }
        let qubits = || (0..self.clocks.len()).filter(move |q| support >> q & 1 == 1);
        let start = qubits().map(|q| self.clocks[q]).max().unwrap_or(0);
        for q in qubits().collect::<Vec<_>>() {
            self.clocks[q] = start + cost.depth;
        }
        self.total_count += cost.count;
        start
    }

    pub fn append(&mut self, model: &CostModel, op: &PoolOperator) -> Result<usize> {
        let cost = model.element_cost(op)?;
        Ok(self.append_block(op.support(), cost))
    }

    pub fn depth(&self) -> usize {
        self.clocks.iter().copied().max().unwrap_or(0)
    }

    pub fn total_count(&self) -> usize {
        self.total_count
    }

    pub fn clocks(&self) -> &[usize] {
        &self.clocks
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molecule::Ordering;
    use crate::pools::{
        build_gsd_pool, build_ovp_ceo_pool, build_qe_pool, build_qubit_pool, mvp_twin,
    };

    #[test]
    fn table_matches_operator_costs() {
        let model = CostModel::default();
        let qe = build_qe_pool(8, Ordering::Interleaved).unwrap();
        let pools = [
            build_qubit_pool(&qe).unwrap(),
            build_ovp_ceo_pool(8, Ordering::Interleaved).unwrap(),
            build_gsd_pool(8, Ordering::Interleaved).unwrap(),
            qe,
        ];
        for pool in &pools {
            for op in pool.operators() {
                let c = model.element_cost(op).unwrap();
                assert_eq!(
                    (c.count, c.depth),
                    (op.cnot_count(), op.cnot_depth()),
                    "{op}"
                );
            }
        }
    }

    #[test]
    fn documented_entries() {
        let model = CostModel::default();
        let qe = build_qe_pool(8, Ordering::Interleaved).unwrap();
        let double = qe
            .operators()
            .iter()
            .find(|o| o.kind() == OperatorKind::DoubleQE)
            .unwrap();
        assert_eq!(model.element_cost(double).unwrap(), CnotCost::new(13, 11));
        let ovp = build_ovp_ceo_pool(8, Ordering::Interleaved).unwrap();
        let plus = ovp
            .operators()
            .iter()
            .find(|o| o.kind() == OperatorKind::OvpCeoPlus)
            .unwrap();
        assert_eq!(model.element_cost(plus).unwrap(), CnotCost::new(9, 7));
        let all = qe.with_support(plus.support()).into_iter().collect();
        let twin = mvp_twin(plus, &qe, &all).unwrap();
        assert_eq!(model.element_cost(&twin).unwrap(), CnotCost::new(13, 13));
    }

    #[test]
    fn gsd_double_over_twelve_qubits() {
        let gsd = build_gsd_pool(12, Ordering::Interleaved).unwrap();
        let wide = gsd
            .operators()
            .iter()
            .find(|o| o.kind() == OperatorKind::GsdDouble && o.support().count_ones() == 12)
            .unwrap();
        assert_eq!(CostModel::default().element_cost(wide).unwrap().count, 176);
    }

    #[test]
    fn odd_pauli_weight_is_unknown() {
        let op = PoolOperator::pauli_string(4, 0b0111, 0b0001);
        assert!(matches!(
            CostModel::default().element_cost(&op),
            Err(Error::UnknownCostKind(_))
        ));
    }

    #[test]
    fn disjoint_blocks_overlap_and_shared_blocks_stack() {
        let mut s = DepthSchedule::new(8);
        s.append_block(0b0000_1111, CnotCost::new(9, 7));
        s.append_block(0b1111_0000, CnotCost::new(13, 11));
        assert_eq!(s.depth(), 11);
        assert_eq!(s.total_count(), 22);
        let mut t = DepthSchedule::new(8);
        t.append_block(0b0000_1111, CnotCost::new(9, 7));
        t.append_block(0b0111_1000, CnotCost::new(13, 11));
        assert_eq!(t.depth(), 18);
    }

    #[test]
    fn three_disjoint_ovps_pack_into_one_layer() {
        let ovp = build_ovp_ceo_pool(12, Ordering::Interleaved).unwrap();
        let model = CostModel::default();
        let mut chosen: Vec<&PoolOperator> = Vec::new();
        for op in ovp.operators() {
            if op.kind() == OperatorKind::OvpCeoPlus
                && chosen.iter().all(|c| c.support() & op.support() == 0)
            {
                chosen.push(op);
            }
        }
        let mut s = DepthSchedule::new(12);
        for op in &chosen[..3] {
            s.append(&model, op).unwrap();
        }
        assert_eq!((s.total_count(), s.depth()), (27, 7));
    }
}
