mod common;

use std::collections::BTreeSet;

use ceo_adapt::adapt::{
    argmax_abs, optimize_ansatz, run_adapt, AdaptConfig, PoolChoice, StopReason,
};
use ceo_adapt::circuits::{CnotCost, DepthSchedule};
use ceo_adapt::optimizer::BfgsOptions;
use ceo_adapt::pauli::{CompiledOperator, C64};
use ceo_adapt::pools::{build_ovp_ceo_pool, build_qe_pool, mvp_twin, OperatorKind, PoolOperator};
use ceo_adapt::simulator::{pool_gradients, AnsatzState, Statevector};
use ceo_adapt::Execution;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Minimizer of a unimodal function on `[lo, hi]` by golden-section search.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-12 {
        let a = hi - ratio * (hi - lo);
        let b = lo + ratio * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn one_parameter_bfgs_matches_golden_section() {
    let sys = common::system("h2_0.74");
    let h = CompiledOperator::new(&sys.hamiltonian);
    let qe = build_qe_pool(4, sys.ordering).unwrap();
    let reference = Statevector::basis(4, sys.hf_determinant);
    let grads = pool_gradients(&reference, &qe, &h, Execution::Sequential);
    let op = qe.operators()[argmax_abs(&grads).unwrap()].clone();
    assert_eq!(op.kind(), OperatorKind::DoubleQE);

    let mut ansatz = AnsatzState::new(4, sys.hf_determinant);
    ansatz.push(op);
    let energy = |t: f64| ansatz.energy(&h, &[t], Execution::Sequential);
    let oracle = golden_section(
        energy,
        -std::f64::consts::FRAC_PI_2,
        std::f64::consts::FRAC_PI_2,
    );
    let oracle_energy = energy(oracle);

    let state = optimize_ansatz(
        &mut ansatz,
        &h,
        None,
        &BfgsOptions::default(),
        Execution::Sequential,
    )
    .unwrap();
    assert!(state.converged());
    assert!(
        (state.parameters[0] - oracle).abs() < 1e-6,
        "{} vs {oracle}",
        state.parameters[0]
    );
    assert!((state.energy - oracle_energy).abs() < 1e-12);
    assert!((state.energy - sys.fci_energy).abs() < 1e-9);
}

#[test]
fn dvg_coincides_with_ovp_only_when_twins_vanish() {
    // On H2 every twin set has exactly one nonzero QE gradient, so DVG never
    // has a reason to pick an MVP.
    let sys = common::system("h2_0.74");
    let run = |pool| {
        run_adapt(
            &sys,
            &AdaptConfig {
                pool,
                ..AdaptConfig::default()
            },
            Execution::Sequential,
        )
        .unwrap()
    };
    let dvg = run(PoolChoice::CeoDvg);
    let ovp = run(PoolChoice::OvpCeoOnly);
    assert_eq!(dvg.records.len(), ovp.records.len());
    for (a, b) in dvg.records.iter().zip(&ovp.records) {
        assert_eq!(a.selected, b.selected);
        assert!((a.energy - b.energy).abs() < 1e-12);
        assert_eq!(a.cnot_count, b.cnot_count);
    }
}

#[test]
fn qeb_selection_agrees_with_gradients_derived_from_the_ovp_round() {
    let sys = common::system("h4_1.00");
    let h = CompiledOperator::new(&sys.hamiltonian);
    let n = sys.n_qubits();
    let qe = build_qe_pool(n, sys.ordering).unwrap();
    let ovp = build_ovp_ceo_pool(n, sys.ordering).unwrap();
    for budget in 0..4 {
        let cfg = AdaptConfig {
            pool: PoolChoice::Qeb,
            max_iterations: budget,
            ..AdaptConfig::default()
        };
        let run = run_adapt(&sys, &cfg, Execution::Parallel).unwrap();
        let state = run.ansatz.state();
        let direct = pool_gradients(state, &qe, &h, Execution::Parallel);
        let from_ovp = pool_gradients(state, &ovp, &h, Execution::Parallel);

        // Singles appear in both pools; doubles are recovered as (g₊ ± g₋)/2.
        let mut derived = vec![f64::NAN; qe.len()];
        for (op, g) in ovp.operators().iter().zip(&from_ovp) {
            match op.kind() {
                OperatorKind::SingleQE => derived[op.constituents()[0]] = *g,
                OperatorKind::OvpCeoPlus => {
                    let minus = ovp
                        .operators()
                        .iter()
                        .position(|m| {
                            m.kind() == OperatorKind::OvpCeoMinus
                                && m.constituents() == op.constituents()
                        })
                        .unwrap();
                    let [first, second] = [op.constituents()[0], op.constituents()[1]];
                    derived[first] = 0.5 * (g + from_ovp[minus]);
                    derived[second] = 0.5 * (g - from_ovp[minus]);
                }
                _ => {}
            }
        }
        for (d, g) in derived.iter().zip(&direct) {
            assert!((d.abs() - g.abs()).abs() < 1e-12, "{d} vs {g}");
        }
        let best = derived.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        assert!((best - direct[argmax_abs(&direct).unwrap()].abs()).abs() < 1e-12);

        let next = run_adapt(
            &sys,
            &AdaptConfig {
                max_iterations: budget + 1,
                ..cfg
            },
            Execution::Parallel,
        )
        .unwrap();
        if next.records.len() > run.records.len() {
            let chosen = &next.records.last().unwrap().selected[0];
            assert_eq!(
                chosen,
                &qe.operators()[argmax_abs(&direct).unwrap()].label()
            );
        }
    }
}

#[test]
fn hessian_recycling_does_not_cost_more_evaluations() {
    for name in ["h2_0.74", "h4_1.00"] {
        let sys = common::system(name);
        let energy_evals = |hessian_recycling| {
            let cfg = AdaptConfig {
                pool: PoolChoice::CeoDvg,
                hessian_recycling,
                ..AdaptConfig::default()
            };
            let run = run_adapt(&sys, &cfg, Execution::Parallel).unwrap();
            assert!(run.last().error < 1.6e-3);
            (
                run.records
                    .iter()
                    .map(|r| r.evaluations.energy)
                    .sum::<usize>(),
                run.ledger.optimization_energy_units,
            )
        };
        let (with, with_units) = energy_evals(true);
        let (without, without_units) = energy_evals(false);
        assert!(with <= without, "{name}: {with} > {without}");
        assert!(with_units <= without_units);
    }
}

#[test]
fn norm_termination_leaves_a_small_gradient() {
    let sys = common::system("h4_1.00");
    for pool in [PoolChoice::Qeb, PoolChoice::CeoDvg] {
        let cfg = AdaptConfig {
            pool,
            epsilon: 1e-4,
            ..AdaptConfig::default()
        };
        let run = run_adapt(&sys, &cfg, Execution::Parallel).unwrap();
        if run.stop_reason == StopReason::GradientNorm {
            assert!(run.final_gradient_norm < cfg.epsilon);
        }
        for w in run.records.windows(2) {
            assert!(w[1].energy <= w[0].energy + 1e-12);
        }
    }
}

#[test]
fn first_tetris_round_on_h6_adds_several_operators() {
    let sys = common::system("h6_1.50");
    let cfg = AdaptConfig {
        max_iterations: 1,
        ..AdaptConfig::ceo_star()
    };
    let run = run_adapt(&sys, &cfg, Execution::Parallel).unwrap();
    let first = &run.records[1];
    assert!(first.selected.len() >= 2, "{:?}", first.selected);
    let supports: Vec<u64> = run
        .ansatz
        .elements()
        .iter()
        .map(|(op, _)| op.support())
        .collect();
    for (i, a) in supports.iter().enumerate() {
        for b in &supports[i + 1..] {
            assert_eq!(a & b, 0);
        }
    }
    // Disjoint blocks run in parallel: depth is that of the deepest block.
    let deepest = run
        .ansatz
        .elements()
        .iter()
        .map(|(op, _)| op.cnot_depth())
        .max()
        .unwrap();
    assert_eq!(first.cnot_depth, deepest);
}

#[test]
fn mvp_constituent_order_is_irrelevant() {
    let n = 8;
    let ordering = Default::default();
    let qe = build_qe_pool(n, ordering).unwrap();
    let ovp = build_ovp_ceo_pool(n, ordering).unwrap();
    let all: BTreeSet<usize> = (0..qe.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for op in ovp
        .operators()
        .iter()
        .filter(|o| o.kind() == OperatorKind::OvpCeoPlus)
        .take(12)
    {
        let mvp = mvp_twin(op, &qe, &all).unwrap();
        let thetas: Vec<f64> = (0..mvp.arity())
            .map(|_| rng.random_range(-1.5..1.5))
            .collect();
        let psi = Statevector::from_amplitudes(
            (0..1 << n)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        );
        let mut joint = psi.clone();
        joint.apply_operator(&mvp, &thetas).unwrap();
        let members: Vec<&PoolOperator> = mvp
            .constituents()
            .iter()
            .map(|&k| &qe.operators()[k])
            .collect();
        for order in [vec![0, 1, 2], vec![2, 1, 0], vec![1, 2, 0]] {
            let mut seq = psi.clone();
            for &k in order.iter().filter(|&&k| k < members.len()) {
                seq.apply_operator(members[k], &[thetas[k]]).unwrap();
            }
            let dev = seq
                .amplitudes()
                .iter()
                .zip(joint.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-12, "{mvp}: {dev}");
        }
    }
}

proptest! {
    #[test]
    fn schedule_depth_never_exceeds_count(blocks in proptest::collection::vec((1u64..(1 << 10), 1usize..20), 1..40)) {
        let mut schedule = DepthSchedule::new(10);
        for (support, count) in &blocks {
            schedule.append_block(*support, CnotCost { count: *count, depth: *count });
        }
        prop_assert!(schedule.depth() <= schedule.total_count());
    }

    #[test]
    fn chained_supports_give_depth_equal_to_count(counts in proptest::collection::vec(1usize..20, 1..20)) {
        let mut schedule = DepthSchedule::new(6);
        for (k, count) in counts.iter().enumerate() {
            // Consecutive supports always share qubit 0.
            let support = 1 | (1u64 << (1 + k % 5));
            schedule.append_block(support, CnotCost { count: *count, depth: *count });
        }
        prop_assert_eq!(schedule.depth(), schedule.total_count());
    }
}
