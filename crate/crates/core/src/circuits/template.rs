use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::Serialize;

use super::cost::{CnotCost, CostModel};
use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliTerm, C64};
use crate::pools::{Exchange, PoolOperator};

const TEMPLATE_TOL: f64 = 1e-10;

/// Gates of the explicit templates. Rotations follow `R_a(φ) = exp(−iφσ_a/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
}

impl Gate {
    fn matrix_2x2(&self) -> Option<(usize, [[C64; 2]; 2])> {
        let r = |x: f64| C64::new(x, 0.0);
        let z = C64::new(0.0, 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Some(match *self {
            Gate::Cnot { .. } => return None,
            Gate::Ry { qubit, angle } => {
                let (s, c) = (angle / 2.0).sin_cos();
                (qubit, [[r(c), r(-s)], [r(s), r(c)]])
            }
            Gate::Rz { qubit, angle } => (
                qubit,
                [
                    [C64::from_polar(1.0, -angle / 2.0), z],
                    [z, C64::from_polar(1.0, angle / 2.0)],
                ],
            ),
            Gate::H(q) => (q, [[r(h), r(h)], [r(h), r(-h)]]),
            Gate::S(q) => (q, [[r(1.0), z], [z, C64::new(0.0, 1.0)]]),
            Gate::Sdg(q) => (q, [[r(1.0), z], [z, C64::new(0.0, -1.0)]]),
            Gate::X(q) => (q, [[z, r(1.0)], [r(1.0), z]]),
        })
    }

    fn qasm(&self) -> String {
        match *self {
            Gate::Cnot { control, target } => format!("cx q[{control}],q[{target}];"),
            Gate::Ry { qubit, angle } => format!("ry({angle:.17e}) q[{qubit}];"),
            Gate::Rz { qubit, angle } => format!("rz({angle:.17e}) q[{qubit}];"),
            Gate::H(q) => format!("h q[{q}];"),
            Gate::S(q) => format!("s q[{q}];"),
            Gate::Sdg(q) => format!("sdg q[{q}];"),
            Gate::X(q) => format!("x q[{q}];"),
        }
    }
}

/// A gate list on `n_qubits` lines, applied left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cnot { .. }))
            .count()
    }

    /// Number of CNOT layers under as-soon-as-possible placement; one-qubit
    /// gates take no time.
    pub fn cnot_depth(&self) -> usize {
        let mut clock = vec![0; self.n_qubits];
        for g in &self.gates {
            if let Gate::Cnot { control, target } = *g {
                let t = clock[control].max(clock[target]) + 1;
                clock[control] = t;
                clock[target] = t;
            }
        }
        clock.into_iter().max().unwrap_or(0)
    }

    pub fn cost(&self) -> CnotCost {
        CnotCost::new(self.cnot_count(), self.cnot_depth())
    }

    /// Dense unitary; qubit `k` is bit `k` of the basis index.
    pub fn unitary(&self) -> DMatrix<C64> {
        let dim = 1usize << self.n_qubits;
        let mut u = DMatrix::<C64>::identity(dim, dim);
        for g in &self.gates {
            match g.matrix_2x2() {
                None => {
                    let Gate::Cnot { control, target } = *g else {
                        unreachable!()
                    };
                    let mut next = u.clone();
                    for row in 0..dim {
                        if row >> control & 1 == 1 {
                            next.set_row(row ^ (1 << target), &u.row(row));
                        }
                    }
                    u = next;
                }
                Some((q, m)) => {
                    let bit = 1 << q;
                    for lo in (0..dim).filter(|r| r & bit == 0) {
                        let hi = lo | bit;
                        for col in 0..dim {
                            let (a, b) = (u[(lo, col)], u[(hi, col)]);
                            u[(lo, col)] = m[0][0] * a + m[0][1] * b;
                            u[(hi, col)] = m[1][0] * a + m[1][1] * b;
                        }
                    }
                }
            }
        }
        u
    }

    /// OpenQASM 2.0 text, one gate per line.
    pub fn to_qasm(&self) -> String {
        let mut out = format!(
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{}];\n",
            self.n_qubits
        );
        for g in &self.gates {
            let _ = writeln!(out, "{}", g.qasm());
        }
        out
    }
}

fn cx(control: usize, target: usize) -> Gate {
    Gate::Cnot { control, target }
}

fn ry(qubit: usize, angle: f64) -> Gate {
    Gate::Ry { qubit, angle }
}

/// Double QE `|0101⟩ → |1010⟩` on qubits `0..4`: 13 CNOTs, depth 11.
#[rustfmt::skip]
pub fn qe_template(theta: f64) -> Circuit {
    let (a, b) = (-theta / 4.0, theta / 4.0);
    use Gate::*;
    let gates = vec![
        cx(0, 2), cx(1, 3), cx(0, 1), X(2), X(3), H(1), H(2), H(3),
        ry(0, a), cx(0, 2), ry(0, b), cx(0, 3), ry(0, a), cx(0, 2), ry(0, b), cx(0, 1),
        ry(0, a), ry(1, -FRAC_PI_2), Sdg(1), cx(0, 2), ry(0, b), cx(0, 3), H(3), X(3),
        ry(0, a), cx(0, 2), H(2), X(2), ry(0, b),
        S(0), cx(0, 1), Sdg(1), cx(0, 2), cx(1, 3),
    ];
    Circuit { n_qubits: 4, gates }
}

/// OVP-CEO `+` on qubits `0..4`: 9 CNOTs, depth 7.
#[rustfmt::skip]
pub fn ovp_plus_template(theta: f64) -> Circuit {
    let (a, b) = (-theta / 2.0, theta / 2.0);
    use Gate::*;
    let gates = vec![
        cx(0, 1), cx(2, 3), cx(0, 2), ry(0, a), H(1), H(3), cx(0, 3), ry(0, b),
        cx(0, 1), ry(0, a), cx(0, 3), ry(0, b), H(3), ry(1, -FRAC_PI_2),
        cx(0, 2), S(0), Sdg(1), cx(0, 1), cx(2, 3), Sdg(1),
    ];
    Circuit { n_qubits: 4, gates }
}

/// Pauli strings rotated by [`mvp_template`], labels with qubit 3 leftmost.
pub const MVP_STRINGS: [&str; 8] = [
    "XXXY", "XXYX", "YXYY", "YXXX", "YYXY", "YYYX", "XYYY", "XYXX",
];

/// `exp(i/8 · Σ_k angles[k] · MVP_STRINGS[k])` with 13 CNOTs sharing line 0.
pub fn mvp_template(angles: [f64; 8]) -> Circuit {
    const SIGNS: [f64; 8] = [-1.0, -1.0, 1.0, -1.0, 1.0, 1.0, 1.0, -1.0];
    const LADDER: [usize; 7] = [1, 3, 1, 2, 1, 3, 1];
    use Gate::*;
    let mut gates = vec![Sdg(0), cx(0, 3), cx(0, 2), cx(0, 1), H(0), Sdg(2)];
    for k in 0..8 {
        gates.push(Rz {
            qubit: 0,
            angle: SIGNS[k] * angles[k] / 4.0,
        });
        if let Some(&c) = LADDER.get(k) {
            gates.push(cx(c, 0));
        }
    }
    gates.extend([H(0), cx(0, 1), cx(0, 2), cx(0, 3), S(2)]);
    Circuit { n_qubits: 4, gates }
}

/// Template angles realizing `θ1·T1 + θ2·T2` for the two opposite-spin QEs
/// `|0101⟩ → |1010⟩` and `|1001⟩ → |0110⟩`.
pub fn mvp_angles(theta1: f64, theta2: f64) -> [f64; 8] {
    let (p, m) = (theta1 + theta2, theta1 - theta2);
    [p, -p, -m, -m, p, -p, m, m]
}

/// The two opposite-spin double QEs on qubits `0..4`.
pub fn template_exchanges() -> [Exchange; 2] {
    [
        Exchange::new(0b0101, 0b1010, false),
        Exchange::new(0b1001, 0b0110, false),
    ]
}

/// Dense matrix of a Pauli sum.
pub fn pauli_sum_matrix(sum: &PauliSum) -> DMatrix<C64> {
    let dim = 1usize << sum.n_qubits();
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for term in sum.iter() {
        for col in 0..dim {
            let (row, amp) = term.apply_to_basis(col as u64);
            m[(row as usize, col)] += amp;
        }
    }
    m
}

fn generator_exponential(op: &PoolOperator, params: &[f64]) -> DMatrix<C64> {
    let dim = 1usize << op.n_qubits();
    let mut a = DMatrix::<C64>::zeros(dim, dim);
    for (g, &p) in op.generators().iter().zip(params) {
        a += pauli_sum_matrix(g) * C64::new(p, 0.0);
    }
    a.exp()
}

/// `min_φ max |a − e^{iφ} b|` estimated with the phase fixed on the largest entry of `b`.
pub fn phase_insensitive_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let (idx, _) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("non-empty");
    let ratio = a[idx] / b[idx];
    let phase = ratio / ratio.norm();
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct TemplateReport {
    pub name: &'static str,
    pub cnot_count: usize,
    pub cnot_depth: usize,
    pub tabulated: CnotCost,
    /// Largest phase-insensitive deviation over the checked parameter sets.
    pub deviation: f64,
}

impl TemplateReport {
    pub fn passed(&self) -> bool {
        self.deviation <= TEMPLATE_TOL && self.cnot_count == self.tabulated.count
    }
}

fn check(
    name: &'static str,
    tabulated: CnotCost,
    cases: impl IntoIterator<Item = (Circuit, DMatrix<C64>)>,
) -> Result<TemplateReport> {
    let mut deviation = 0.0f64;
    let mut cost = CnotCost::default();
    for (circuit, reference) in cases {
        deviation = deviation.max(phase_insensitive_distance(&circuit.unitary(), &reference));
        cost = circuit.cost();
    }
    if deviation > TEMPLATE_TOL {
        return Err(Error::TemplateMismatch {
            name: name.to_string(),
            deviation,
        });
    }
    Ok(TemplateReport {
        name,
        cnot_count: cost.count,
        cnot_depth: cost.depth,
        tabulated,
        deviation,
    })
}

const CHECK_ANGLES: [f64; 5] = [0.0, 0.3, -1.1, 2.7, -0.05];

/// Builds each explicit template at several angles and compares its
/// unitary with the exponential of the matching pool generator.
pub fn verify_circuit_templates() -> Result<Vec<TemplateReport>> {
    let model = CostModel::default();
    let [first, second] = template_exchanges();
    let qe = PoolOperator::qubit_excitation(4, first.clone(), 0);
    let ovp = PoolOperator::ovp_ceo(4, (&first, 0), (&second, 1), true);
    let mvp = PoolOperator::mvp_ceo(4, &[(&first, 0), (&second, 1)])?;
    let qe_report = check(
        "double-qe",
        model.double_qe,
        CHECK_ANGLES
            .iter()
            .map(|&t| (qe_template(t), generator_exponential(&qe, &[t]))),
    )?;
    let mvp_report = check(
        "mvp-ceo",
        model.mvp_ceo,
        CHECK_ANGLES
            .iter()
            .zip(CHECK_ANGLES.iter().rev())
            .map(|(&t1, &t2)| {
                (
                    mvp_template(mvp_angles(t1, t2)),
                    generator_exponential(&mvp, &[t1, t2]),
                )
            }),
    )?;
    let ovp_report = check(
        "ovp-ceo+",
        model.ovp_ceo,
        CHECK_ANGLES
            .iter()
            .map(|&t| (ovp_plus_template(t), generator_exponential(&ovp, &[t]))),
    )?;
    Ok(vec![qe_report, mvp_report, ovp_report])
}

/// Each named template at a fixed angle, as OpenQASM.
pub fn export_templates(theta: f64) -> Vec<(&'static str, String)> {
    vec![
        ("double-qe", qe_template(theta).to_qasm()),
        ("mvp-ceo", mvp_template(mvp_angles(theta, theta)).to_qasm()),
        ("ovp-ceo+", ovp_plus_template(theta).to_qasm()),
    ]
}

/// Dense matrix of a single Pauli string label with unit coefficient.
pub fn label_matrix(label: &str) -> Result<DMatrix<C64>> {
    let term = PauliTerm::from_label(label, C64::new(1.0, 0.0))?;
    Ok(pauli_sum_matrix(&PauliSum::from_terms(
        term.n_qubits(),
        [term],
    )?))
}
