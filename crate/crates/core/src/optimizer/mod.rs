//! BFGS with a strong-Wolfe line search, evaluation counters for the
//! measurement ledger, and block-identity growth of a recycled inverse Hessian.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A differentiable cost function. Every call is one charged evaluation.
pub trait Objective {
    fn energy(&mut self, x: &[f64]) -> Result<f64>;
    fn gradient(&mut self, x: &[f64]) -> Result<Vec<f64>>;
}

/// Adapter over a pair of closures.
pub struct FnObjective<F, G> {
    pub energy: F,
    pub gradient: G,
}

impl<F, G> Objective for FnObjective<F, G>
where
    F: FnMut(&[f64]) -> f64,
    G: FnMut(&[f64]) -> Vec<f64>,
{
    fn energy(&mut self, x: &[f64]) -> Result<f64> {
        Ok((self.energy)(x))
    }

    fn gradient(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        Ok((self.gradient)(x))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BfgsOptions {
    /// Sufficient-decrease constant.
    pub c1: f64,
    /// Curvature constant.
    pub c2: f64,
    pub gradient_tolerance: f64,
    /// Iteration cap per parameter.
    pub iterations_per_parameter: usize,
    pub max_line_search_evaluations: usize,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            c1: 1e-4,
            c2: 0.9,
            gradient_tolerance: 1e-8,
            iterations_per_parameter: 200,
            max_line_search_evaluations: 40,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationCounts {
    pub energy: usize,
    pub gradient: usize,
}

impl std::ops::AddAssign for EvaluationCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.energy += rhs.energy;
        self.gradient += rhs.gradient;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    GradientTolerance,
    IterationLimit,
    /// No step satisfying the strong Wolfe conditions was found; the state
    /// is the best point reached.
    LineSearchFailure,
}

#[derive(Clone, Debug)]
pub struct OptimizerState {
    pub parameters: Vec<f64>,
    /// Symmetric, sized to `parameters`.
    pub inverse_hessian: DMatrix<f64>,
    pub energy: f64,
    pub gradient: Vec<f64>,
    pub counts: EvaluationCounts,
    pub iterations: usize,
    pub termination: Termination,
}

impl OptimizerState {
    pub fn converged(&self) -> bool {
        self.termination == Termination::GradientTolerance
    }
}

struct Counted<'a, O: Objective + ?Sized> {
    inner: &'a mut O,
    counts: EvaluationCounts,
}

impl<O: Objective + ?Sized> Counted<'_, O> {
    fn energy(&mut self, x: &DVector<f64>) -> Result<f64> {
        self.counts.energy += 1;
        let e = self.inner.energy(x.as_slice())?;
        if e.is_finite() {
            Ok(e)
        } else {
            Err(Error::NonFiniteEnergy)
        }
    }

    fn gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.counts.gradient += 1;
        let g = self.inner.gradient(x.as_slice())?;
        if g.iter().all(|v| v.is_finite()) {
            Ok(DVector::from_vec(g))
        } else {
            Err(Error::NonFiniteEnergy)
        }
    }
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Accepted line-search point.
struct Step {
    alpha: f64,
    x: DVector<f64>,
    energy: f64,
    gradient: DVector<f64>,
}

/// Minimizer of the cubic through `(a, fa, da)` and `(b, fb, db)`, if real.
fn cubic_min(a: f64, fa: f64, da: f64, b: f64, fb: f64, db: f64) -> Option<f64> {
    let d1 = da + db - 3.0 * (fa - fb) / (a - b);
    let disc = d1 * d1 - da * db;
    if disc < 0.0 {
        return None;
    }
    let d2 = (b - a).signum() * disc.sqrt();
    let t = b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
    t.is_finite().then_some(t)
}

/// Minimizer of the quadratic through `(a, fa, da)` and `(b, fb)`.
fn quadratic_min(a: f64, fa: f64, da: f64, b: f64, fb: f64) -> Option<f64> {
    let h = b - a;
    let curvature = fb - fa - da * h;
    if curvature <= 0.0 {
        return None;
    }
    let t = a - da * h * h / (2.0 * curvature);
    t.is_finite().then_some(t)
}

struct LineSearch<'o, 'a, O: Objective + ?Sized> {
    f: &'o mut Counted<'a, O>,
    x: &'o DVector<f64>,
    p: &'o DVector<f64>,
    f0: f64,
    d0: f64,
    opts: &'o BfgsOptions,
    evaluations: usize,
    best: Option<Step>,
}

impl<O: Objective + ?Sized> LineSearch<'_, '_, O> {
    fn point(&self, alpha: f64) -> DVector<f64> {
        self.x + self.p * alpha
    }

    fn budget_left(&self) -> bool {
        self.evaluations < self.opts.max_line_search_evaluations
    }

    fn phi(&mut self, alpha: f64) -> Result<(DVector<f64>, f64)> {
        self.evaluations += 1;
        let x = self.point(alpha);
        let e = self.f.energy(&x)?;
        Ok((x, e))
    }

    fn dphi(&mut self, alpha: f64, x: DVector<f64>, e: f64) -> Result<(f64, Step)> {
        let g = self.f.gradient(&x)?;
        let d = g.dot(self.p);
        let step = Step {
            alpha,
            x,
            energy: e,
            gradient: g,
        };
        Ok((d, step))
    }

    fn remember(&mut self, step: &Step) {
        let better = self.best.as_ref().is_none_or(|b| step.energy < b.energy);
        if better && step.energy < self.f0 {
            self.best = Some(Step {
                alpha: step.alpha,
                x: step.x.clone(),
                energy: step.energy,
                gradient: step.gradient.clone(),
            });
        }
    }

    fn armijo(&self, alpha: f64, e: f64) -> bool {
        e <= self.f0 + self.opts.c1 * alpha * self.d0
    }

    fn curvature(&self, d: f64) -> bool {
        d.abs() <= -self.opts.c2 * self.d0
    }

    /// Bracketing phase; returns a strong-Wolfe point or `None` on budget
    /// exhaustion.
    fn run(&mut self) -> Result<Option<Step>> {
        let (mut prev_alpha, mut prev_f, mut prev_d) = (0.0, self.f0, self.d0);
        let mut alpha = 1.0;
        let mut first = true;
        while self.budget_left() {
            let (x, e) = self.phi(alpha)?;
            if !self.armijo(alpha, e) || (!first && e >= prev_f) {
                return self.zoom((prev_alpha, prev_f, prev_d), (alpha, e, None));
            }
            let (d, step) = self.dphi(alpha, x, e)?;
            self.remember(&step);
            if self.curvature(d) {
                return Ok(Some(step));
            }
            if d >= 0.0 {
                return self.zoom((alpha, e, d), (prev_alpha, prev_f, Some(prev_d)));
            }
            (prev_alpha, prev_f, prev_d) = (alpha, e, d);
            alpha *= 2.0;
            first = false;
        }
        Ok(None)
    }

    fn zoom(&mut self, lo: (f64, f64, f64), hi: (f64, f64, Option<f64>)) -> Result<Option<Step>> {
        let (mut a_lo, mut f_lo, mut d_lo) = lo;
        let (mut a_hi, mut f_hi, mut d_hi) = hi;
        while self.budget_left() {
            let (left, right) = if a_lo < a_hi {
                (a_lo, a_hi)
            } else {
                (a_hi, a_lo)
            };
            let width = right - left;
            if width <= f64::EPSILON * right.abs().max(1.0) {
                break;
            }
            let guess = match d_hi {
                Some(dh) => cubic_min(a_lo, f_lo, d_lo, a_hi, f_hi, dh),
                None => quadratic_min(a_lo, f_lo, d_lo, a_hi, f_hi),
            };
            let margin = 0.1 * width;
            let alpha = match guess {
                Some(t) if t > left + margin && t < right - margin => t,
                _ => 0.5 * (left + right),
            };
            let (x, e) = self.phi(alpha)?;
            if !self.armijo(alpha, e) || e >= f_lo {
                (a_hi, f_hi, d_hi) = (alpha, e, None);
                continue;
            }
            let (d, step) = self.dphi(alpha, x, e)?;
            self.remember(&step);
            if self.curvature(d) {
                return Ok(Some(step));
            }
            if d * (a_hi - a_lo) >= 0.0 {
                (a_hi, f_hi, d_hi) = (a_lo, f_lo, Some(d_lo));
            }
            (a_lo, f_lo, d_lo) = (alpha, e, d);
        }
        Ok(None)
    }
}

/// BFGS from `x0` with initial inverse Hessian `h0` (identity when `None`).
pub fn minimize<O: Objective + ?Sized>(
    objective: &mut O,
    x0: &[f64],
    h0: Option<DMatrix<f64>>,
    opts: &BfgsOptions,
) -> Result<OptimizerState> {
    let dim = x0.len();
    let mut h = h0.unwrap_or_else(|| DMatrix::identity(dim, dim));
    assert_eq!(h.nrows(), dim, "inverse Hessian size must match parameters");
    let mut f = Counted {
        inner: objective,
        counts: EvaluationCounts::default(),
    };
    let mut x = DVector::from_column_slice(x0);
    let mut energy = f.energy(&x)?;
    let mut g = if dim == 0 {
        DVector::zeros(0)
    } else {
        f.gradient(&x)?
    };
    let max_iterations = opts.iterations_per_parameter * dim.max(1);
    let mut iterations = 0;
    let termination = loop {
        if inf_norm(&g) < opts.gradient_tolerance {
            break Termination::GradientTolerance;
        }
        if iterations >= max_iterations {
            break Termination::IterationLimit;
        }
        let mut p = -(&h * &g);
        let mut d0 = g.dot(&p);
        if d0 >= 0.0 {
            // Lost positive definiteness; restart along steepest descent.
            h = DMatrix::identity(dim, dim);
            p = -g.clone();
            d0 = g.dot(&p);
        }
        let mut search = LineSearch {
            f: &mut f,
            x: &x,
            p: &p,
            f0: energy,
            d0,
            opts,
            evaluations: 0,
            best: None,
        };
        let accepted = search.run()?;
        let best = search.best.take();
        let Some(step) = accepted else {
            if let Some(b) = best {
                x = b.x;
                energy = b.energy;
                g = b.gradient;
            }
            break Termination::LineSearchFailure;
        };
        iterations += 1;
        let s = &step.x - &x;
        let y = &step.gradient - &g;
        let sy = s.dot(&y);
        if sy > f64::EPSILON * s.norm() * y.norm() {
            let rho = 1.0 / sy;
            let hy = &h * &y;
            let yhy = y.dot(&hy);
            // H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ, expanded.
            h += (&s * s.transpose()) * (rho * rho * yhy + rho)
                - (&hy * s.transpose() + &s * hy.transpose()) * rho;
            h = (&h + h.transpose()) * 0.5;
        }
        debug_assert!(step.alpha > 0.0);
        x = step.x;
        energy = step.energy;
        g = step.gradient;
    };
    Ok(OptimizerState {
        parameters: x.as_slice().to_vec(),
        inverse_hessian: h,
        energy,
        gradient: g.as_slice().to_vec(),
        counts: f.counts,
        iterations,
        termination,
    })
}

/// Block-diagonal extension of `h` by a `new_parameters`-sized identity.
pub fn augment_inverse_hessian(h: &DMatrix<f64>, new_parameters: usize) -> Result<DMatrix<f64>> {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "inverse Hessian must be square");
    let asym = (h - h.transpose()).amax();
    if asym > 1e-10 * h.amax().max(1.0) {
        return Err(Error::NonSymmetric(asym));
    }
    let mut out = DMatrix::identity(n + new_parameters, n + new_parameters);
    out.view_mut((0, 0), (n, n)).copy_from(h);
    Ok(out)
}
