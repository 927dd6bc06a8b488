use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::pauli::{CompiledOperator, PauliSum, C64};

const MAX_KRYLOV: usize = 60;
const RESIDUAL_TOL: f64 = 1e-10;
const MAX_RESTARTS: usize = 200;
const HERMITICITY_TOL: f64 = 1e-12;

/// Particle-number and `2 S_z` symmetry sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sector {
    pub n_particles: u32,
    pub ms2: i32,
    /// Qubits holding α spin-orbitals.
    pub alpha_mask: u64,
}

impl Sector {
    pub fn contains(&self, basis: u64) -> bool {
        let n_alpha = (basis & self.alpha_mask).count_ones() as i32;
        let n_beta = (basis & !self.alpha_mask).count_ones() as i32;
        (n_alpha + n_beta) as u32 == self.n_particles && n_alpha - n_beta == self.ms2
    }

    pub fn basis(&self, n_qubits: usize) -> Vec<usize> {
        (0..1usize << n_qubits)
            .filter(|&b| self.contains(b as u64))
            .collect()
    }
}

/// Ground state of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub energy: f64,
    pub state: Vec<C64>,
    pub residual: f64,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn scale(a: &mut [C64], s: f64) {
    a.iter_mut().for_each(|x| *x *= s);
}

/// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
///
/// With a sector, the start vector and every Krylov vector are projected onto
/// it, so the result is the lowest eigenvalue within the sector.
pub fn ground_state(h: &PauliSum, sector: Option<Sector>, exec: Execution) -> Result<Eigenpair> {
    let defect = h.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.n_qubits();
    let dim = 1usize << n;
    let op = CompiledOperator::new(h);
    let mask: Vec<bool> = (0..dim)
        .map(|b| sector.is_none_or(|s| s.contains(b as u64)))
        .collect();
    let project = |v: &mut [C64]| {
        for (x, keep) in v.iter_mut().zip(&mask) {
            if !keep {
                *x = C64::new(0.0, 0.0);
            }
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2c);
    let mut start: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), 0.0))
        .collect();
    project(&mut start);
    let start_norm = norm(&start);
    if start_norm == 0.0 {
        return Err(Error::NoConvergence {
            what: "Lanczos (empty sector)",
            iterations: 0,
            residual: f64::INFINITY,
        });
    }
    scale(&mut start, 1.0 / start_norm);

    let krylov = MAX_KRYLOV.min(mask.iter().filter(|&&k| k).count());
    let mut last_residual = f64::INFINITY;
    let mut w = vec![C64::new(0.0, 0.0); dim];
    for _ in 0..MAX_RESTARTS {
        let mut basis: Vec<Vec<C64>> = vec![start.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        loop {
            let v = basis.last().expect("non-empty");
            op.apply_into(exec, v, &mut w);
            project(&mut w);
            let alpha = dot(v, &w).re;
            alphas.push(alpha);
            // Two passes of classical Gram–Schmidt against the whole basis.
            for _ in 0..2 {
                for u in &basis {
                    let c = dot(u, &w);
                    w.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
                }
            }
            let beta = norm(&w);
            if basis.len() == krylov || beta < 1e-13 {
                betas.push(beta);
                break;
            }
            betas.push(beta);
            let mut next = w.clone();
            scale(&mut next, 1.0 / beta);
            basis.push(next);
        }
        let m = alphas.len();
        let tri = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alphas[i]
            } else if i + 1 == j {
                betas[i]
            } else if j + 1 == i {
                betas[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(tri);
        let (k, &energy) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty tridiagonal");
        let y = eig.eigenvectors.column(k);
        let residual = (betas[m - 1] * y[m - 1]).abs();
        let mut ritz = vec![C64::new(0.0, 0.0); dim];
        for (coef, u) in y.iter().zip(&basis) {
            ritz.iter_mut().zip(u).for_each(|(x, v)| *x += v * *coef);
        }
        let rn = norm(&ritz);
        scale(&mut ritz, 1.0 / rn);
        last_residual = residual;
        if residual < RESIDUAL_TOL {
            return Ok(Eigenpair {
                energy,
                state: ritz,
                residual,
            });
        }
        start = ritz;
    }
    Err(Error::NoConvergence {
        what: "Lanczos",
        iterations: MAX_RESTARTS,
        residual: last_residual,
    })
}

/// Lowest eigenvalue of `h`, optionally restricted to a symmetry sector.
pub fn fci_ground_energy(h: &PauliSum, sector: Option<Sector>) -> Result<f64> {
    ground_state(h, sector, Execution::default()).map(|e| e.energy)
}
