//! BFGS with central finite-difference gradients and a backtracking line search.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use core::cell::RefCell;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BfgsSettings {
    /// Central-difference step.
    pub fd_step: f64,
    /// Stop when the gradient norm falls below this.
    pub grad_tol: f64,
    /// Stop when an accepted step changes the objective by less than this.
    pub value_tol: f64,
    /// Objective evaluation budget, gradient evaluations included.
    pub max_evaluations: usize,
}

impl Default for BfgsSettings {
    fn default() -> Self {
        Self { fd_step: 1e-6, grad_tol: 1e-9, value_tol: 1e-12, max_evaluations: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    /// Objective after each accepted step, starting value first.
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Central-difference gradient with step `h`.
pub fn central_gradient<F>(f: &mut F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut probe = x.to_vec();
    let mut grad = vec![0.0; x.len()];
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = f(&probe)?;
        probe[i] = x[i] - h;
        let down = f(&probe)?;
        probe[i] = x[i];
        grad[i] = (up - down) / (2.0 * h);
    }
    Ok(grad)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `f` from `x0`, differentiating it by central differences.
pub fn minimize<F>(f: F, x0: &[f64], settings: &BfgsSettings) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let f = RefCell::new(f);
    let h = settings.fd_step;
    bfgs(|x: &[f64]| (f.borrow_mut())(x), |x: &[f64]| central_gradient(&mut *f.borrow_mut(), x, h), x0, settings)
}

/// Like [`minimize`] with the gradient supplied by the caller. Each gradient
/// call is charged `2 n` evaluations, as a central difference would be.
pub fn minimize_with_gradient<F, G>(f: F, gradient: G, x0: &[f64], settings: &BfgsSettings) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> Result<f64>,
    G: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    bfgs(f, gradient, x0, settings)
}

fn bfgs<F, G>(mut f: F, mut gradient: G, x0: &[f64], settings: &BfgsSettings) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> Result<f64>,
    G: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let n = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64], evaluations: &mut usize| -> Result<f64> {
        *evaluations += 1;
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::NonFinite { context: "objective", value: v });
        }
        Ok(v)
    };
    let mut grad_at = |x: &[f64], evaluations: &mut usize| -> Result<Vec<f64>> {
        *evaluations += 2 * x.len();
        let g = gradient(x)?;
        if let Some(v) = g.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { context: "gradient", value: *v });
        }
        Ok(g)
    };
    let mut x = x0.to_vec();
    let mut fx = eval(&x, &mut evaluations)?;
    let mut history = vec![fx];
    if n == 0 {
        return Ok(Minimum { x, value: fx, evaluations, iterations: 0, history, converged: true });
    }
    let mut grad = grad_at(&x, &mut evaluations)?;
    // inverse Hessian approximation, row-major
    let mut inv = vec![0.0; n * n];
    let reset = |inv: &mut Vec<f64>, scale: f64| {
        inv.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            inv[i * n + i] = scale;
        }
    };
    reset(&mut inv, 1.0);
    let mut first_update = true;
    let mut iterations = 0;
    let mut converged = false;

    while evaluations + 2 * n < settings.max_evaluations {
        let gnorm = dot(&grad, &grad).sqrt();
        if gnorm < settings.grad_tol {
            converged = true;
            break;
        }
        let mut dir: Vec<f64> = (0..n).map(|i| -dot(&inv[i * n..(i + 1) * n], &grad)).collect();
        let mut slope = dot(&dir, &grad);
        if slope >= 0.0 {
            reset(&mut inv, 1.0);
            dir = grad.iter().map(|g| -g).collect();
            slope = -gnorm * gnorm;
        }
        // Armijo backtracking
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
            let ft = eval(&trial, &mut evaluations)?;
            if ft <= fx + 1e-4 * step * slope {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
            if evaluations >= settings.max_evaluations {
                break;
            }
        }
        let Some((x_new, f_new)) = accepted else {
            // no decrease along a descent direction: numerically stationary
            converged = gnorm < settings.grad_tol.sqrt();
            break;
        };
        iterations += 1;
        let g_new = grad_at(&x_new, &mut evaluations)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if first_update {
                reset(&mut inv, sy / dot(&y, &y));
                first_update = false;
            }
            let hy: Vec<f64> = (0..n).map(|i| dot(&inv[i * n..(i + 1) * n], &y)).collect();
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            for i in 0..n {
                for j in 0..n {
                    inv[i * n + j] += rho * ((1.0 + rho * yhy) * s[i] * s[j] - hy[i] * s[j] - s[i] * hy[j]);
                }
            }
        }
        let change = (fx - f_new).abs();
        x = x_new;
        fx = f_new;
        grad = g_new;
        history.push(fx);
        if change < settings.value_tol {
            converged = true;
            break;
        }
    }

    Ok(Minimum { x, value: fx, evaluations, iterations, history, converged })
}
