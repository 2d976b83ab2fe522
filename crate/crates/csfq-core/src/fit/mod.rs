//! Nonlinear least-squares fitting of the four measurement models:
//! exponential T1 decay, exponentially damped sinusoid (Ramsey/echo),
//! power-spectrum Lorentzian, and Gaussian histogram statistics.
//!
//! [`least_squares_core`] does the minimization; the `fit_*` wrappers add
//! model-specific initial guesses (documented on each), degeneracy checks,
//! and parameter canonicalization.

mod histogram;
mod least_squares;
mod models;

pub use histogram::{gaussian_stats, BinningPolicy, HistogramStats};
pub use least_squares::{jacobian, least_squares_core, LmOptions};
pub use models::{
    damped_sinusoid, exponential_decay, gaussian_peak, lorentzian_power, DAMPED_SINUSOID_PARAMS,
    EXP_DECAY_PARAMS, GAUSSIAN_PARAMS, LORENTZIAN_PARAMS,
};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// What kind of measurement a trace holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    T1Decay,
    Ramsey,
    Echo,
    ResonanceSweep,
}

impl TraceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TraceKind::T1Decay => "t1",
            TraceKind::Ramsey => "ramsey",
            TraceKind::Echo => "echo",
            TraceKind::ResonanceSweep => "resonance",
        }
    }
}

/// One measured (or synthesized) trace: delay/frequency against signal.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    pub kind: TraceKind,
    /// Abscissa: us for time kinds, GHz for resonance sweeps. Strictly
    /// increasing.
    pub x: Vec<f64>,
    /// Signal, arbitrary units; same length as x.
    pub y: Vec<f64>,
    /// Free-form annotations (generator parameters, provenance).
    pub meta: BTreeMap<String, String>,
}

impl TimeTrace {
    pub fn new(kind: TraceKind, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Domain(format!(
                "x and y lengths differ: {} vs {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 8 {
            return Err(Error::TooFewPoints {
                needed: 8,
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("trace values must be finite".into()));
        }
        if x.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("x must be strictly increasing".into()));
        }
        Ok(Self {
            kind,
            x,
            y,
            meta: BTreeMap::new(),
        })
    }
}

/// A converged fit: named parameters with 1-sigma uncertainties.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub names: Vec<&'static str>,
    pub params: Vec<f64>,
    /// Covariance-based 1-sigma uncertainties, aligned with `params`.
    pub sigmas: Vec<f64>,
    /// Residual-variance-scaled inverse normal matrix; symmetric PSD.
    pub covariance: Vec<Vec<f64>>,
    /// sqrt(SSR / n), in y units.
    pub residual_rms: f64,
    /// False means the parameters must not be used; the library only returns
    /// results with `converged = true` (non-convergence is an error).
    pub converged: bool,
    pub iterations: u32,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| *n == name)
            .map(|i| self.params[i])
    }

    pub fn sigma(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| *n == name)
            .map(|i| self.sigmas[i])
    }

    /// Flips the sign convention of parameter `k` (the model must be
    /// invariant under the flip); keeps the covariance consistent.
    fn flip_param(&mut self, k: usize) {
        self.params[k] = -self.params[k];
        for j in 0..self.params.len() {
            if j != k {
                self.covariance[k][j] = -self.covariance[k][j];
                self.covariance[j][k] = -self.covariance[j][k];
            }
        }
    }
}

fn ensure_kind(trace: &TimeTrace, want: &[TraceKind], expected: &'static str) -> Result<()> {
    if !want.contains(&trace.kind) {
        return Err(Error::WrongTraceKind {
            expected,
            got: trace.kind.as_str(),
        });
    }
    Ok(())
}

fn ensure_not_constant(y: &[f64]) -> Result<()> {
    let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = hi.abs().max(lo.abs()).max(1e-300);
    if hi - lo <= 1e-10 * scale {
        return Err(Error::ConstantSignal);
    }
    Ok(())
}

/// Fits `A exp(-t/T1) + B`.
///
/// Initial guess: the offset from the tail mean, the amplitude from the first
/// point, and T1 from the delay at which the baseline-subtracted signal first
/// falls to 1/e of its initial value.
pub fn fit_exponential_decay(trace: &TimeTrace) -> Result<FitResult> {
    ensure_kind(trace, &[TraceKind::T1Decay], "t1")?;
    ensure_not_constant(&trace.y)?;
    let guess = guess_exp_decay(&trace.x, &trace.y);
    let fit = least_squares_core(
        exponential_decay,
        &EXP_DECAY_PARAMS,
        &guess,
        &trace.x,
        &trace.y,
        &LmOptions::default(),
    )?;
    if fit.params[1] <= 0.0 {
        return Err(Error::DegenerateFit(format!(
            "T1 driven non-positive ({} us)",
            fit.params[1]
        )));
    }
    Ok(fit)
}

/// Fits `A exp(-t/T2) cos(2 pi dnu t + phi) + B` (Ramsey and echo share the
/// model; the echo's refocusing pulse changes the experiment, not the
/// function).
///
/// Initial guess: offset from the mean, amplitude from the largest excursion,
/// detuning from the dominant discrete-spectrum component of the
/// mean-subtracted signal, phase from the best of four quadrant candidates.
/// The result is canonicalized to amplitude >= 0, detuning >= 0, and phase in
/// (-pi, pi].
pub fn fit_damped_sinusoid(trace: &TimeTrace) -> Result<FitResult> {
    ensure_kind(trace, &[TraceKind::Ramsey, TraceKind::Echo], "ramsey/echo")?;
    ensure_not_constant(&trace.y)?;
    let guess = guess_damped_sinusoid(&trace.x, &trace.y)?;
    let mut fit = least_squares_core(
        damped_sinusoid,
        &DAMPED_SINUSOID_PARAMS,
        &guess,
        &trace.x,
        &trace.y,
        &LmOptions::default(),
    )?;
    if fit.params[1] <= 0.0 {
        return Err(Error::DegenerateFit(format!(
            "T2 driven non-positive ({} us)",
            fit.params[1]
        )));
    }
    // Canonical representative of the sign/phase symmetries:
    // (A, phi) ~ (-A, phi + pi) and (dnu, phi) ~ (-dnu, -phi).
    if fit.params[0] < 0.0 {
        fit.flip_param(0);
        fit.params[3] += core::f64::consts::PI;
    }
    if fit.params[2] < 0.0 {
        fit.flip_param(2);
        fit.flip_param(3);
    }
    fit.params[3] = wrap_phase(fit.params[3]);
    Ok(fit)
}

/// Fits the power Lorentzian `B + P (k^2/4) / ((f - f0)^2 + k^2/4)`.
///
/// Initial guess: offset from the minimum, center from the argmax, width from
/// the half-maximum crossing span. A peak on the first or last sweep point is
/// rejected — its center cannot be located.
pub fn fit_lorentzian(trace: &TimeTrace) -> Result<FitResult> {
    ensure_kind(trace, &[TraceKind::ResonanceSweep], "resonance")?;
    ensure_not_constant(&trace.y)?;
    let guess = guess_lorentzian(&trace.x, &trace.y)?;
    let mut fit = least_squares_core(
        lorentzian_power,
        &LORENTZIAN_PARAMS,
        &guess,
        &trace.x,
        &trace.y,
        &LmOptions::default(),
    )?;
    // The model is even in kappa.
    if fit.params[1] < 0.0 {
        fit.flip_param(1);
    }
    if fit.params[1] == 0.0 {
        return Err(Error::DegenerateFit("linewidth driven to zero".into()));
    }
    Ok(fit)
}

fn wrap_phase(phi: f64) -> f64 {
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut p = phi % two_pi;
    if p > core::f64::consts::PI {
        p -= two_pi;
    } else if p <= -core::f64::consts::PI {
        p += two_pi;
    }
    p
}

fn guess_exp_decay(x: &[f64], y: &[f64]) -> [f64; 3] {
    let n = y.len();
    let tail = (n / 10).max(3).min(n / 2);
    let b0 = y[n - tail..].iter().sum::<f64>() / tail as f64;
    let mut a0 = y[0] - b0;
    if a0 == 0.0 {
        let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
        a0 = hi - lo;
    }
    let inv_e = 1.0 / core::f64::consts::E;
    let span = x[n - 1] - x[0];
    let mut t0 = 0.5 * span;
    let mut prev = 1.0f64;
    for i in 1..n {
        let u = (y[i] - b0) / a0;
        if u <= inv_e {
            // Linear interpolation between the bracketing samples.
            let frac = if prev - u > 0.0 {
                (prev - inv_e) / (prev - u)
            } else {
                1.0
            };
            t0 = (x[i - 1] - x[0]) + frac * (x[i] - x[i - 1]);
            break;
        }
        prev = u;
    }
    if !(t0 > 0.0) {
        t0 = 0.2 * span;
    }
    [a0, t0, b0]
}

fn guess_damped_sinusoid(x: &[f64], y: &[f64]) -> Result<[f64; 5]> {
    let n = y.len();
    let b0 = y.iter().sum::<f64>() / n as f64;
    let s: Vec<f64> = y.iter().map(|v| v - b0).collect();
    let a0 = s.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let span = x[n - 1] - x[0];

    // Dominant discrete-spectrum component of the mean-subtracted signal,
    // probed on the 1/span frequency grid.
    let mut best_j = 1usize;
    let mut best_p = -1.0f64;
    for j in 1..=(n / 2) {
        let nu = j as f64 / span;
        let mut re = 0.0;
        let mut im = 0.0;
        for (xi, si) in x.iter().zip(&s) {
            let arg = 2.0 * core::f64::consts::PI * nu * (xi - x[0]);
            re += si * libm::cos(arg);
            im += si * libm::sin(arg);
        }
        let p = re * re + im * im;
        if p > best_p {
            best_p = p;
            best_j = j;
        }
    }
    let dnu0 = best_j as f64 / span;
    let periods = dnu0 * span;
    if periods < 2.0 {
        return Err(Error::TooFewPeriods { periods });
    }

    let t0 = span / 3.0;
    // Try the four quadrant phases and keep the cheapest.
    let mut best = [a0, t0, dnu0, 0.0, b0];
    let mut best_cost = f64::INFINITY;
    for q in 0..4 {
        let phi = 0.5 * core::f64::consts::PI * q as f64;
        let cand = [a0, t0, dnu0, phi, b0];
        let cost: f64 = x
            .iter()
            .zip(y)
            .map(|(&xi, &yi)| {
                let d = yi - damped_sinusoid(xi, &cand);
                d * d
            })
            .sum();
        if cost < best_cost {
            best_cost = cost;
            best = cand;
        }
    }
    best[3] = wrap_phase(best[3]);
    Ok(best)
}

fn guess_lorentzian(x: &[f64], y: &[f64]) -> Result<[f64; 4]> {
    let n = y.len();
    let b0 = y.iter().copied().fold(f64::INFINITY, f64::min);
    let mut imax = 0usize;
    for (i, &v) in y.iter().enumerate() {
        if v > y[imax] {
            imax = i;
        }
    }
    if imax == 0 || imax == n - 1 {
        return Err(Error::PeakAtBoundary);
    }
    let f0 = x[imax];
    let p0 = y[imax] - b0;
    let half = b0 + 0.5 * p0;

    let mut left = x[0];
    for i in (0..imax).rev() {
        if y[i] <= half {
            let frac = (y[i + 1] - half) / (y[i + 1] - y[i]);
            left = x[i + 1] - frac * (x[i + 1] - x[i]);
            break;
        }
    }
    let mut right = x[n - 1];
    for i in imax + 1..n {
        if y[i] <= half {
            let frac = (y[i - 1] - half) / (y[i - 1] - y[i]);
            right = x[i - 1] + frac * (x[i] - x[i - 1]);
            break;
        }
    }
    let min_dx = x[1] - x[0];
    let k0 = (right - left).max(min_dx);
    Ok([f0, k0, p0, b0])
}
