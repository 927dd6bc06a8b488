use nalgebra::{DMatrix, SymmetricEigen};

use super::state::for_each_pair;
use crate::error::{Error, Result};
use crate::pauli::C64;
use crate::pools::{Evolution, PoolOperator};

const MAX_KRYLOV: usize = 40;
const STEP_TOL: f64 = 1e-13;
const MAX_STEPS: usize = 10_000;

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `A|v⟩` for `A = Σ_k θ_k G_k` over exchange-type operators.
pub fn generator_action(ops: &[PoolOperator], params: &[f64], v: &[C64]) -> Vec<C64> {
    let n_qubits = v.len().trailing_zeros() as usize;
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (op, &theta) in ops.iter().zip(params) {
        let Evolution::Exchanges(rots) = op.evolution() else {
            panic!("generator_action needs exchange-type operators");
        };
        for r in rots {
            let w = theta * r.weight;
            if w == 0.0 {
                continue;
            }
            for_each_pair(n_qubits, &r.exchange, |src, tgt| {
                let s = w * r.exchange.sign(src as u64);
                out[tgt] += v[src] * s;
                out[src] -= v[tgt] * s;
            });
        }
    }
    out
}

/// `exp(t·A)|v⟩` for an anti-Hermitian `A` given by its action.
///
/// Lanczos on the Hermitian `iA`; each Krylov basis is reused while the
/// sub-step is halved until the a-posteriori error estimate drops below
/// tolerance.
pub fn expm_multiply(apply: impl Fn(&[C64]) -> Vec<C64>, v: &[C64], t: f64) -> Result<Vec<C64>> {
    let mut u = v.to_vec();
    let mut remaining = t;
    let mut step = t;
    let mut steps = 0;
    let i = C64::new(0.0, 1.0);
    while remaining.abs() > 0.0 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::NoConvergence {
                what: "Krylov exponential",
                iterations: steps,
                residual: remaining.abs(),
            });
        }
        let nu = norm(&u);
        if nu == 0.0 {
            return Ok(u);
        }
        let mut basis: Vec<Vec<C64>> = vec![u.iter().map(|x| x / nu).collect()];
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        loop {
            let last = basis.last().expect("non-empty");
            let mut w: Vec<C64> = apply(last).into_iter().map(|x| i * x).collect();
            alphas.push(dot(last, &w).re);
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let beta = norm(&w);
            betas.push(beta);
            if beta < 1e-14 || basis.len() == MAX_KRYLOV || basis.len() == v.len() {
                break;
            }
            basis.push(w.iter().map(|x| x / beta).collect());
        }
        let m = alphas.len();
        let tri = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                alphas[r]
            } else if r + 1 == c {
                betas[r]
            } else if c + 1 == r {
                betas[c]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(tri);
        let exact_subspace = betas[m - 1] < 1e-14;
        step = step.abs().min(remaining.abs()).copysign(t);
        let coeffs = loop {
            // e^{-i h T} e1 = Q e^{-i h Λ} Qᵀ e1.
            let y: Vec<C64> = (0..m)
                .map(|r| {
                    (0..m)
                        .map(|k| {
                            let q = eig.eigenvectors[(r, k)] * eig.eigenvectors[(0, k)];
                            C64::from_polar(q, -step * eig.eigenvalues[k])
                        })
                        .sum()
                })
                .collect();
            let estimate = betas[m - 1] * y[m - 1].norm();
            if exact_subspace || estimate <= STEP_TOL {
                break y;
            }
            step /= 2.0;
        };
        let mut next = vec![C64::new(0.0, 0.0); u.len()];
        for (c, b) in coeffs.iter().zip(&basis) {
            let c = c * nu;
            next.iter_mut().zip(b).for_each(|(x, y)| *x += c * y);
        }
        u = next;
        remaining -= step;
        if remaining.abs() < 1e-15 * t.abs().max(1.0) {
            break;
        }
        // Try a larger step next time if this one was cut.
        step *= 2.0;
    }
    Ok(u)
}
