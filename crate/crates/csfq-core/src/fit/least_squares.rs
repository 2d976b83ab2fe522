//! Damped least-squares (Levenberg–Marquardt) minimization.
//!
//! The iteration solves `(J^T J + lambda diag(J^T J)) delta = J^T r` with the
//! damping parameter `lambda` adapting between gradient-descent-like (large
//! lambda) and Gauss–Newton-like (small lambda) behavior. Scaling the damping
//! by the diagonal of the normal matrix, rather than the identity, makes the
//! step equivariant under a uniform rescaling of the data: amplitude-like
//! parameter steps scale with the data, shape-parameter steps do not. The
//! y-scaling invariance promised by this module's tests is structural, not a
//! tolerance accident.
//!
//! Derivatives are central finite differences with per-parameter relative
//! steps; the covariance is the residual-variance-scaled inverse of the final
//! normal matrix.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fit::FitResult;

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Tuning knobs for [`least_squares_core`]; the defaults fit everything in
/// this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmOptions {
    /// Hard cap on outer iterations (Jacobian evaluations).
    pub max_iterations: u32,
    /// Converged when the relative cost drop of an accepted step is below this.
    pub ftol: f64,
    /// Converged when every parameter step is below xtol relatively.
    pub xtol: f64,
    /// Initial damping.
    pub lambda_init: f64,
    /// Multiplier applied to lambda on reject (and divided out on accept).
    pub lambda_factor: f64,
    /// Damping beyond this counts as a stall.
    pub lambda_max: f64,
    /// Relative finite-difference step; absolute for zero-valued parameters.
    pub fd_step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            ftol: 1e-12,
            xtol: 1e-12,
            lambda_init: 1e-3,
            lambda_factor: 10.0,
            lambda_max: 1e14,
            // cbrt(machine epsilon): optimal for central differences.
            fd_step: 6.055454452393343e-6,
        }
    }
}

/// Central-difference Jacobian of the model at `p`: J[(i, k)] = d f(x_i) / d p_k.
pub fn jacobian<F: Fn(f64, &[f64]) -> f64>(
    model: &F,
    p: &[f64],
    x: &[f64],
    fd_step: f64,
) -> Result<DMatrix<f64>> {
    let n = x.len();
    let np = p.len();
    let mut j = DMatrix::<f64>::zeros(n, np);
    let mut work = p.to_vec();
    for k in 0..np {
        // Relative step with a smooth absolute floor: a parameter sitting
        // near zero (a fitted phase, say) must still be perturbed by enough
        // to register against the other terms it enters.
        let h = fd_step * (p[k].abs() + fd_step);
        work[k] = p[k] + h;
        let hi: Vec<f64> = x.iter().map(|&xi| model(xi, &work)).collect();
        work[k] = p[k] - h;
        let lo: Vec<f64> = x.iter().map(|&xi| model(xi, &work)).collect();
        work[k] = p[k];
        for i in 0..n {
            let d = (hi[i] - lo[i]) / (2.0 * h);
            if !d.is_finite() {
                return Err(Error::Domain(alloc::format!(
                    "model not finite-differentiable at x = {}, parameter {k}",
                    x[i]
                )));
            }
            j[(i, k)] = d;
        }
    }
    Ok(j)
}

fn residuals<F: Fn(f64, &[f64]) -> f64>(
    model: &F,
    p: &[f64],
    x: &[f64],
    y: &[f64],
) -> DVector<f64> {
    DVector::from_iterator(x.len(), x.iter().zip(y).map(|(&xi, &yi)| yi - model(xi, p)))
}

fn cost(r: &DVector<f64>) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Fits `model(x, params)` to `(x, y)` by damped least squares.
///
/// `names` labels the parameters in the result and must match the length of
/// `initial`. Deterministic: identical inputs give bit-identical results.
pub fn least_squares_core<F: Fn(f64, &[f64]) -> f64>(
    model: F,
    names: &[&'static str],
    initial: &[f64],
    x: &[f64],
    y: &[f64],
    opts: &LmOptions,
) -> Result<FitResult> {
    let n = x.len();
    let np = initial.len();
    if np == 0 || names.len() != np {
        return Err(Error::Domain(alloc::format!(
            "need one name per parameter: {} names, {np} parameters",
            names.len()
        )));
    }
    if x.len() != y.len() {
        return Err(Error::Domain(alloc::format!(
            "x and y lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    // One residual degree of freedom is needed for the variance estimate.
    if n < np + 1 {
        return Err(Error::TooFewPoints {
            needed: np + 1,
            got: n,
        });
    }
    if initial.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("initial guess must be finite".into()));
    }

    let mut p = initial.to_vec();
    let mut r = residuals(&model, &p, x, y);
    let mut c = cost(&r);
    if !c.is_finite() {
        return Err(Error::Domain(
            "model is not finite at the initial guess".into(),
        ));
    }

    let mut lambda = opts.lambda_init;
    let mut iterations = 0u32;
    let mut converged = false;

    while iterations < opts.max_iterations {
        iterations += 1;
        let j = jacobian(&model, &p, x, opts.fd_step)?;
        let a = j.transpose() * &j;
        let g = j.transpose() * &r;

        // Inner step-control loop: raise the damping until a step improves
        // the cost (or provably cannot).
        let (p_new, r_new, c_new, delta) = loop {
            let mut damped = a.clone();
            for k in 0..np {
                // A zero diagonal entry means the parameter has no effect at
                // all; the floor keeps the factorization honest so the stall
                // is reported rather than NaN-ing out.
                let d = a[(k, k)].max(1e-300);
                damped[(k, k)] = a[(k, k)] + lambda * d;
            }
            let delta = match damped.cholesky() {
                Some(ch) => ch.solve(&g),
                None => {
                    lambda *= opts.lambda_factor;
                    if lambda > opts.lambda_max {
                        return Err(Error::SingularNormalMatrix);
                    }
                    continue;
                }
            };
            let p_try: Vec<f64> = p.iter().zip(delta.iter()).map(|(pi, di)| pi + di).collect();
            let r_try = residuals(&model, &p_try, x, y);
            let c_try = cost(&r_try);
            if c_try.is_finite() && c_try <= c {
                break (p_try, r_try, c_try, delta);
            }
            lambda *= opts.lambda_factor;
            if lambda > opts.lambda_max {
                return Err(Error::FitDidNotConverge { iterations });
            }
        };

        let drop = c - c_new;
        let step_small = delta
            .iter()
            .zip(p.iter())
            .all(|(d, pk)| d.abs() <= opts.xtol * (pk.abs() + opts.xtol));
        p = p_new;
        r = r_new;
        c = c_new;
        lambda = (lambda / opts.lambda_factor).max(1e-12);

        if drop <= opts.ftol * c.max(1e-300) || step_small {
            converged = true;
            break;
        }
    }

    if !converged {
        return Err(Error::FitDidNotConverge { iterations });
    }

    // Covariance from the final geometry: cov = s^2 (J^T J)^(-1), inverted
    // after Jacobi equilibration (unit diagonal) so parameters of wildly
    // different magnitudes do not wreck the factorization.
    let j = jacobian(&model, &p, x, opts.fd_step)?;
    let a = j.transpose() * &j;
    let mut scale = vec![0.0; np];
    for (k, s) in scale.iter_mut().enumerate() {
        let d = a[(k, k)];
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::SingularNormalMatrix);
        }
        *s = d.sqrt();
    }
    let mut r_mat = a.clone();
    for i in 0..np {
        for k in 0..np {
            r_mat[(i, k)] /= scale[i] * scale[k];
        }
    }
    let inv = r_mat
        .cholesky()
        .ok_or(Error::SingularNormalMatrix)?
        .inverse();
    let s2 = c / (n - np) as f64;
    let mut covariance = vec![vec![0.0; np]; np];
    let mut sigmas = vec![0.0; np];
    for i in 0..np {
        for k in 0..np {
            // Symmetrize away factorization round-off.
            covariance[i][k] = 0.5 * (inv[(i, k)] + inv[(k, i)]) * s2 / (scale[i] * scale[k]);
        }
    }
    for (k, s) in sigmas.iter_mut().enumerate() {
        *s = covariance[k][k].max(0.0).sqrt();
    }

    Ok(FitResult {
        names: names.to_vec(),
        params: p,
        sigmas,
        covariance,
        residual_rms: (c / n as f64).sqrt(),
        converged,
        iterations,
    })
}
