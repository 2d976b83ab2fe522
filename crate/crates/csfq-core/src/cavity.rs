//! Qubit-resonator coupling: dressed states of the Jaynes-Cummings model.
//!
//! Near resonance the single-excitation manifold of the coupled system splits
//! into two dressed branches
//!
//! ```text
//! omega_+- = (omega_r + omega_q)/2 +- sqrt(Delta^2/4 + g^2),  Delta = omega_q - omega_r
//! ```
//!
//! whose minimum separation (at Delta = 0) is the vacuum Rabi splitting 2g.
//! Far detuned, the qubit decays through the resonator at the Purcell rate
//! `kappa (g/Delta)^2`.
//!
//! Frequencies are linear frequencies in GHz throughout (the nu of nu = omega
//! / 2 pi), matching the rest of the crate.

use alloc::format;
use alloc::vec::Vec;

use crate::circuit::DeviceParams;
use crate::error::{Error, Result};
use crate::spectrum::{self, QubitHamiltonianSpec};

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// A qubit mode coupled to one resonator mode.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoupledSystem {
    /// Bare resonator frequency [GHz].
    pub omega_r_ghz: f64,
    /// Bare qubit transition frequency [GHz].
    pub omega_q_ghz: f64,
    /// Coupling strength g [GHz].
    pub g_ghz: f64,
    /// Resonator linewidth kappa [GHz].
    pub kappa_ghz: f64,
}

impl CoupledSystem {
    pub fn new(omega_r_ghz: f64, omega_q_ghz: f64, g_ghz: f64, kappa_ghz: f64) -> Result<Self> {
        for (name, v) in [
            ("omega_r_ghz", omega_r_ghz),
            ("omega_q_ghz", omega_q_ghz),
            ("g_ghz", g_ghz),
            ("kappa_ghz", kappa_ghz),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            omega_r_ghz,
            omega_q_ghz,
            g_ghz,
            kappa_ghz,
        })
    }

    /// Qubit-resonator detuning Delta = omega_q - omega_r [GHz].
    pub fn detuning_ghz(&self) -> f64 {
        self.omega_q_ghz - self.omega_r_ghz
    }
}

/// The two single-excitation dressed frequencies (upper, lower) [GHz].
///
/// Their sum always equals omega_r + omega_q, and their separation is
/// `sqrt(Delta^2 + 4 g^2) >= 2g`.
pub fn dressed_frequencies(sys: &CoupledSystem) -> (f64, f64) {
    let mean = 0.5 * (sys.omega_r_ghz + sys.omega_q_ghz);
    let delta = sys.detuning_ghz();
    let s = (0.25 * delta * delta + sys.g_ghz * sys.g_ghz).sqrt();
    (mean + s, mean - s)
}

/// Minimum dressed-state separation 2g [GHz].
pub fn vacuum_rabi_splitting(g_ghz: f64) -> Result<f64> {
    if !(g_ghz > 0.0) || !g_ghz.is_finite() {
        return Err(Error::Domain(format!(
            "g_ghz must be positive, got {g_ghz}"
        )));
    }
    Ok(2.0 * g_ghz)
}

/// Purcell-limited qubit lifetime [us]: `T1 = 1 / (2 pi kappa (g/Delta)^2)`
/// with kappa converted to an angular rate.
///
/// Only meaningful in the dispersive regime; zero detuning is rejected.
pub fn purcell_t1(sys: &CoupledSystem) -> Result<f64> {
    let delta = sys.detuning_ghz();
    if delta == 0.0 {
        return Err(Error::Domain(
            "Purcell limit undefined at zero detuning".into(),
        ));
    }
    let ratio = sys.g_ghz / delta;
    let rate_per_s = 2.0 * core::f64::consts::PI * sys.kappa_ghz * 1e9 * ratio * ratio;
    Ok(1.0 / rate_per_s * 1e6)
}

/// One flux point of an anticrossing scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnticrossingPoint {
    pub flux_frac: f64,
    /// Bare qubit frequency at this flux [GHz].
    pub omega_q_ghz: f64,
    pub upper_ghz: f64,
    pub lower_ghz: f64,
}

/// Dressed branches versus flux: the qubit is swept through the resonator by
/// the flux bias, producing the avoided crossing.
///
/// The charge-basis convergence check runs at the first flux point (same
/// policy as [`spectrum::spectrum_sweep`]).
pub fn anticrossing_curve(
    device: &DeviceParams,
    omega_r_ghz: f64,
    g_ghz: f64,
    f_start: f64,
    f_end: f64,
    n_points: usize,
    charge_cutoff: u32,
) -> Result<Vec<AnticrossingPoint>> {
    if !(omega_r_ghz > 0.0) || !omega_r_ghz.is_finite() {
        return Err(Error::Domain(format!(
            "omega_r_ghz must be positive, got {omega_r_ghz}"
        )));
    }
    vacuum_rabi_splitting(g_ghz)?;
    let grid = spectrum::flux_grid(f_start, f_end, n_points)?;
    let mut out = Vec::with_capacity(grid.len());
    for (k, &f) in grid.iter().enumerate() {
        let omega_q = if k == 0 {
            let spec = QubitHamiltonianSpec::new(*device, f, charge_cutoff)?;
            spectrum::eigenlevels(&spec, 2)?.levels_ghz[1]
        } else {
            spectrum::transitions_at_unchecked(device, f, charge_cutoff)?.0
        };
        // kappa does not move the branch centers; any positive value works.
        let sys = CoupledSystem::new(omega_r_ghz, omega_q, g_ghz, 1e-6)?;
        let (upper, lower) = dressed_frequencies(&sys);
        out.push(AnticrossingPoint {
            flux_frac: f,
            omega_q_ghz: omega_q,
            upper_ghz: upper,
            lower_ghz: lower,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_sys() -> CoupledSystem {
        // Measured: resonator 9.796 GHz, qubit 6.61 GHz, g = 90 MHz,
        // kappa = 0.697 MHz.
        CoupledSystem::new(9.796, 6.61, 0.090, 6.97e-4).unwrap()
    }

    #[test]
    fn validation_rejects_nonpositive() {
        assert!(CoupledSystem::new(0.0, 6.61, 0.09, 1e-3).is_err());
        assert!(CoupledSystem::new(9.796, -6.61, 0.09, 1e-3).is_err());
        assert!(CoupledSystem::new(9.796, 6.61, 0.0, 1e-3).is_err());
        assert!(CoupledSystem::new(9.796, 6.61, 0.09, f64::NAN).is_err());
        assert!(vacuum_rabi_splitting(0.0).is_err());
    }

    #[test]
    fn dressed_sum_rule_is_exact() {
        let sys = reference_sys();
        let (up, lo) = dressed_frequencies(&sys);
        let sum = up + lo;
        let bare = sys.omega_r_ghz + sys.omega_q_ghz;
        assert!(((sum - bare) / bare).abs() < 1e-12);
        assert!(up > lo);
    }

    #[test]
    fn on_resonance_split_is_two_g() {
        let sys = CoupledSystem::new(9.796, 9.796, 0.090, 6.97e-4).unwrap();
        let (up, lo) = dressed_frequencies(&sys);
        assert!((up - lo - 0.180).abs() < 1e-12);
        assert_eq!(vacuum_rabi_splitting(0.090).unwrap(), 0.180);
    }

    #[test]
    fn far_detuned_branches_approach_bare_modes() {
        let sys = CoupledSystem::new(9.796, 5.0, 0.090, 6.97e-4).unwrap();
        let (up, lo) = dressed_frequencies(&sys);
        // Dispersive shift g^2/Delta ~ 1.7 MHz.
        assert!((up - sys.omega_r_ghz).abs() < 2.5e-3);
        assert!((lo - sys.omega_q_ghz).abs() < 2.5e-3);
    }

    #[test]
    fn purcell_t1_matches_reference_budget() {
        // kappa = 0.697 MHz, g = 90 MHz, |Delta| = 3.19 GHz -> ~287 us.
        let sys = CoupledSystem::new(9.796, 9.796 - 3.19, 0.090, 6.97e-4).unwrap();
        let t1 = purcell_t1(&sys).unwrap();
        assert!((t1 - 286.88).abs() < 0.05, "got {t1}");
    }

    #[test]
    fn purcell_rejects_zero_detuning() {
        let sys = CoupledSystem::new(9.796, 9.796, 0.090, 6.97e-4).unwrap();
        assert!(purcell_t1(&sys).is_err());
    }

    #[test]
    fn purcell_scales_as_inverse_square_of_coupling() {
        let s1 = CoupledSystem::new(9.796, 6.61, 0.090, 6.97e-4).unwrap();
        let s2 = CoupledSystem::new(9.796, 6.61, 0.045, 6.97e-4).unwrap();
        let r = purcell_t1(&s2).unwrap() / purcell_t1(&s1).unwrap();
        assert!((r - 4.0).abs() < 1e-12);
    }
}
