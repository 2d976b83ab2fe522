//! Qubit energy spectrum from the two-island charge-basis Hamiltonian.
//!
//! The three-junction loop leaves two independent islands, so the circuit
//! Hamiltonian acts on charge states |n1, n2> with n_i the Cooper-pair number
//! on each island, truncated to |n_i| <= N:
//!
//! * kinetic term: `(2e)^2/2 * n^T M^-1 n`, with M the two-island capacitance
//!   matrix built from the large-junction capacitance and the shunted small
//!   junction. When the device carries a measured charging energy the whole
//!   matrix is rescaled so the symmetric charge mode reproduces it exactly,
//!   keeping capacitance ratios fixed.
//! * each large-junction `-E_J cos(theta_i)` becomes a pair of single-charge
//!   hops with amplitude -E_J/2.
//! * the alpha junction closes the loop: `-alpha E_J cos(2 pi f - theta_1 -
//!   theta_2)` hops both charges at once with amplitude -alpha E_J/2 times a
//!   flux-dependent phase, where f is the applied flux in units of the flux
//!   quantum.
//!
//! Diagonalizing this dim-(2N+1)^2 Hermitian matrix gives the level structure;
//! every public entry point re-solves at cutoff N+2 and fails hard if the 0-1
//! transition moved by more than 1 MHz, so a too-small basis can never pass
//! silently.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::circuit::{DeviceParams, CODATA};
use crate::error::{Error, Result};

/// Hard limit on the cutoff-convergence shift of omega_01 [GHz]: raising the
/// cutoff from N to N+2 must move it by less than 1 MHz.
pub const CONVERGENCE_LIMIT_GHZ: f64 = 1e-3;

/// Default charge cutoff; converged to ~1e-8 GHz for the reference device.
pub const DEFAULT_CHARGE_CUTOFF: u32 = 12;

/// Minimum accepted charge cutoff.
pub const MIN_CHARGE_CUTOFF: u32 = 4;

/// One Hamiltonian to diagonalize: a device at a flux bias, with a basis size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitHamiltonianSpec {
    pub device: DeviceParams,
    /// Applied flux through the loop in units of the flux quantum.
    pub flux_frac: f64,
    /// Charge states run over n in [-N, N] on each island.
    pub charge_cutoff: u32,
}

impl QubitHamiltonianSpec {
    pub fn new(device: DeviceParams, flux_frac: f64, charge_cutoff: u32) -> Result<Self> {
        if !flux_frac.is_finite() {
            return Err(Error::Domain(format!(
                "flux_frac must be finite, got {flux_frac}"
            )));
        }
        if charge_cutoff < MIN_CHARGE_CUTOFF {
            return Err(Error::CutoffTooSmall {
                cutoff: charge_cutoff,
            });
        }
        Ok(Self {
            device,
            flux_frac,
            charge_cutoff,
        })
    }

    /// Matrix dimension (2N+1)^2.
    pub fn dim(&self) -> usize {
        let m = 2 * self.charge_cutoff as usize + 1;
        m * m
    }
}

/// Lowest levels of one eigensolve, relative to the ground state [GHz].
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLevels {
    /// `levels_ghz[0] == 0`; ascending.
    pub levels_ghz: Vec<f64>,
    /// |omega_01(N) - omega_01(N+2)| from the convergence re-solve [GHz].
    pub convergence_delta_ghz: f64,
}

/// One flux point of a spectrum sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub flux_frac: f64,
    pub omega01_ghz: f64,
    pub omega12_ghz: f64,
}

/// Qubit transition frequencies over a flux range.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCurve {
    /// Strictly increasing in flux.
    pub points: Vec<SpectrumPoint>,
}

impl SpectrumCurve {
    /// The sweep point with the smallest 0-1 transition.
    pub fn min_omega01(&self) -> Option<&SpectrumPoint> {
        self.points
            .iter()
            .min_by(|a, b| a.omega01_ghz.total_cmp(&b.omega01_ghz))
    }
}

/// Inverse-capacitance coefficients (a, b) of the two-island mode, such that
/// the kinetic energy is `(2e)^2/2 * (a (n1^2 + n2^2) + 2 b n1 n2)` [SI, 1/F].
fn inverse_capacitance_coeffs(device: &DeviceParams) -> Result<(f64, f64)> {
    let c = device.c_large_ff * 1e-15;
    let cp = device.alpha * c + device.c_shunt_ff * 1e-15;
    // det of the unscaled matrix [[c+cp, cp], [cp, c+cp]].
    let det = c * (c + 2.0 * cp);
    if !(det > 0.0) {
        return Err(Error::SingularCapacitanceMatrix);
    }
    // Scale so the symmetric charge mode's charging energy equals ec_ghz: the
    // geometric C_Sigma is (c + 2 cp) / 2, the target comes from E_C = e^2 /
    // 2 C_Sigma.
    let c_sigma_geom = 0.5 * (c + 2.0 * cp);
    let c_sigma_target = CODATA.e * CODATA.e / (2.0 * device.ec_ghz * 1e9 * CODATA.h);
    let lambda = c_sigma_target / c_sigma_geom;
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::SingularCapacitanceMatrix);
    }
    let a = (c + cp) / (det * lambda);
    let b = -cp / (det * lambda);
    Ok((a, b))
}

/// Builds the charge-basis Hamiltonian [GHz units].
pub fn build_hamiltonian(spec: &QubitHamiltonianSpec) -> Result<DMatrix<Complex<f64>>> {
    let n = spec.charge_cutoff as i64;
    let m = (2 * n + 1) as usize;
    let dim = m * m;
    let dev = &spec.device;
    let (a, b) = inverse_capacitance_coeffs(dev)?;

    // (2e)^2 / 2 = 2 e^2; convert J -> GHz.
    let kin_scale = 2.0 * CODATA.e * CODATA.e / CODATA.h / 1e9;
    let half_ej = Complex::new(-0.5 * dev.ej_ghz, 0.0);
    let two_pi_f = 2.0 * core::f64::consts::PI * spec.flux_frac;
    // -alpha E_J/2 * exp(-i 2 pi f) multiplies |n1+1, n2+1><n1, n2|.
    let alpha_hop = Complex::new(libm::cos(two_pi_f), -libm::sin(two_pi_f))
        * Complex::new(-0.5 * dev.alpha * dev.ej_ghz, 0.0);

    let idx = |n1: i64, n2: i64| -> usize { ((n1 + n) * (2 * n + 1) + (n2 + n)) as usize };

    let mut h = DMatrix::<Complex<f64>>::zeros(dim, dim);
    for n1 in -n..=n {
        for n2 in -n..=n {
            let i = idx(n1, n2);
            let kin = kin_scale * (a * (n1 * n1 + n2 * n2) as f64 + 2.0 * b * (n1 * n2) as f64);
            h[(i, i)] = Complex::new(kin, 0.0);
            // cos(theta_1): single-charge hop on island 1.
            if n1 < n {
                let j = idx(n1 + 1, n2);
                h[(j, i)] += half_ej;
                h[(i, j)] += half_ej;
            }
            // cos(theta_2): single-charge hop on island 2.
            if n2 < n {
                let j = idx(n1, n2 + 1);
                h[(j, i)] += half_ej;
                h[(i, j)] += half_ej;
            }
            // Loop junction: simultaneous hop with the flux phase.
            if n1 < n && n2 < n {
                let j = idx(n1 + 1, n2 + 1);
                h[(j, i)] += alpha_hop;
                h[(i, j)] += alpha_hop.conj();
            }
        }
    }
    Ok(h)
}

/// Eigenvalues of one Hamiltonian, sorted ascending [GHz], absolute offset.
fn sorted_eigenvalues(spec: &QubitHamiltonianSpec) -> Result<Vec<f64>> {
    let h = build_hamiltonian(spec)?;
    let vals = h.symmetric_eigenvalues();
    let mut v: Vec<f64> = vals.iter().copied().collect();
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::EigenSolver {
            detail: format!(
                "non-finite eigenvalue at flux {} cutoff {}",
                spec.flux_frac, spec.charge_cutoff
            ),
        });
    }
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Lowest `k` levels relative to the ground state, with the N+2 convergence
/// check applied to omega_01.
pub fn eigenlevels(spec: &QubitHamiltonianSpec, k: usize) -> Result<EnergyLevels> {
    if k == 0 {
        return Err(Error::Domain("must request at least one level".to_string()));
    }
    if k > spec.dim() {
        return Err(Error::LevelIndex {
            index: k - 1,
            levels: spec.dim(),
        });
    }
    let vals = sorted_eigenvalues(spec)?;
    let refined = QubitHamiltonianSpec {
        charge_cutoff: spec.charge_cutoff + 2,
        ..*spec
    };
    let vals_up = sorted_eigenvalues(&refined)?;
    let w01 = vals[1] - vals[0];
    let w01_up = vals_up[1] - vals_up[0];
    let delta = (w01 - w01_up).abs();
    if delta > CONVERGENCE_LIMIT_GHZ {
        return Err(Error::BasisNotConverged {
            cutoff: spec.charge_cutoff,
            delta_ghz: delta,
            limit_ghz: CONVERGENCE_LIMIT_GHZ,
        });
    }
    let ground = vals[0];
    Ok(EnergyLevels {
        levels_ghz: vals[..k].iter().map(|e| e - ground).collect(),
        convergence_delta_ghz: delta,
    })
}

/// Transition frequency omega_ij = E_j - E_i [GHz].
///
/// `i == j` is allowed and returns 0; `i > j` is rejected.
pub fn transition_frequency(spec: &QubitHamiltonianSpec, i: usize, j: usize) -> Result<f64> {
    if i > j {
        return Err(Error::Domain(format!(
            "transition indices must satisfy i <= j, got ({i}, {j})"
        )));
    }
    if j >= spec.dim() {
        return Err(Error::LevelIndex {
            index: j,
            levels: spec.dim(),
        });
    }
    if i == j {
        return Ok(0.0);
    }
    let levels = eigenlevels(spec, j + 1)?;
    Ok(levels.levels_ghz[j] - levels.levels_ghz[i])
}

/// omega_12 - omega_01 [GHz]: positive for this device (flux-qubit-like),
/// negative for a transmon.
pub fn anharmonicity(device: &DeviceParams, flux_frac: f64, charge_cutoff: u32) -> Result<f64> {
    let spec = QubitHamiltonianSpec::new(*device, flux_frac, charge_cutoff)?;
    let levels = eigenlevels(&spec, 3)?;
    Ok((levels.levels_ghz[2] - levels.levels_ghz[1]) - levels.levels_ghz[1])
}

/// Sweeps omega_01 and omega_12 over a uniform flux grid.
///
/// The N+2 convergence check runs once, at the first grid point; each further
/// point is a single eigensolve. Eigensolver failures are tagged with the
/// offending flux value.
pub fn spectrum_sweep(
    device: &DeviceParams,
    f_start: f64,
    f_end: f64,
    n_points: usize,
    charge_cutoff: u32,
) -> Result<SpectrumCurve> {
    let grid = flux_grid(f_start, f_end, n_points)?;
    let mut points = Vec::with_capacity(grid.len());
    for (k, &f) in grid.iter().enumerate() {
        let spec = QubitHamiltonianSpec::new(*device, f, charge_cutoff)?;
        let point = if k == 0 {
            let levels = eigenlevels(&spec, 3).map_err(|e| tag_flux(e, f))?;
            SpectrumPoint {
                flux_frac: f,
                omega01_ghz: levels.levels_ghz[1],
                omega12_ghz: levels.levels_ghz[2] - levels.levels_ghz[1],
            }
        } else {
            let vals = sorted_eigenvalues(&spec).map_err(|e| tag_flux(e, f))?;
            SpectrumPoint {
                flux_frac: f,
                omega01_ghz: vals[1] - vals[0],
                omega12_ghz: vals[2] - vals[1],
            }
        };
        points.push(point);
    }
    Ok(SpectrumCurve { points })
}

/// Solves one flux point without the N+2 re-solve; for callers that have
/// already established convergence on the same device and cutoff (parallel
/// sweeps). Returns (omega01, omega12) [GHz].
pub fn transitions_at_unchecked(
    device: &DeviceParams,
    flux_frac: f64,
    charge_cutoff: u32,
) -> Result<(f64, f64)> {
    let spec = QubitHamiltonianSpec::new(*device, flux_frac, charge_cutoff)?;
    let vals = sorted_eigenvalues(&spec).map_err(|e| tag_flux(e, flux_frac))?;
    Ok((vals[1] - vals[0], vals[2] - vals[1]))
}

/// Uniform grid over [f_start, f_end] with n_points >= 2.
pub fn flux_grid(f_start: f64, f_end: f64, n_points: usize) -> Result<Vec<f64>> {
    if !f_start.is_finite() || !f_end.is_finite() || f_start >= f_end {
        return Err(Error::Domain(format!(
            "flux range must satisfy f_start < f_end, got [{f_start}, {f_end}]"
        )));
    }
    if n_points < 2 {
        return Err(Error::Domain(format!(
            "sweep needs at least 2 points, got {n_points}"
        )));
    }
    let step = (f_end - f_start) / (n_points - 1) as f64;
    Ok((0..n_points).map(|i| f_start + step * i as f64).collect())
}

fn tag_flux(e: Error, flux_frac: f64) -> Error {
    match e {
        Error::EigenSolver { detail } => Error::SweepPoint { flux_frac, detail },
        other => other,
    }
}
