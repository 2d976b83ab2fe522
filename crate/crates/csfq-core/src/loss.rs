//! Loss budget: quality factors, participation, and coherence decomposition.
//!
//! The chain runs measured resonator numbers into a qubit lifetime estimate:
//!
//! ```text
//! Q_L = f_r / kappa                    (loaded quality factor)
//! Q_int = Q_L / (1 - 10^(-IL/20))      (insertion loss removes coupling Q)
//! tan d = 1 / Q_int                    (effective dielectric loss tangent)
//! P_Si = C_shunt / C_Sigma             (participation of the shunt dielectric)
//! Q_cap = Q_int / P_Si                 (capacitive-loss quality factor)
//! 1/Q_1 = 1/Q_cap + 1/Q_ind + 1/Q_rad  (absent channels are lossless)
//! T_1 = Q_1 / (2 pi f_01)              (budgeted lifetime)
//! ```
//!
//! alongside the measured-coherence identities `Q_{1,2} = 2 pi f_01 T_{1,2}`
//! and `1/T_2 = 1/(2 T_1) + 1/T_phi`.

use alloc::format;
use alloc::string::String;

use crate::cavity::{self, CoupledSystem};
use crate::circuit::DeviceParams;
use crate::error::{Error, Result};

/// Measured resonator numbers and the quality factors derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResonatorParams {
    /// Resonance frequency [GHz].
    pub f_r_ghz: f64,
    /// Linewidth [GHz].
    pub kappa_ghz: f64,
    /// f_r / kappa.
    pub q_loaded: f64,
    /// Insertion loss at resonance [dB].
    pub insertion_loss_db: f64,
    /// Q_L with the coupling contribution removed.
    pub q_internal: f64,
    /// 1 / Q_internal.
    pub tan_delta: f64,
}

impl ResonatorParams {
    /// Derives the full set from the three measured numbers.
    pub fn from_measurement(f_r_ghz: f64, kappa_ghz: f64, insertion_loss_db: f64) -> Result<Self> {
        let q_loaded = loaded_q(f_r_ghz, kappa_ghz)?;
        let q_internal = internal_q(q_loaded, insertion_loss_db)?;
        let tan_delta = loss_tangent(q_internal)?;
        Ok(Self {
            f_r_ghz,
            kappa_ghz,
            q_loaded,
            insertion_loss_db,
            q_internal,
            tan_delta,
        })
    }

    /// Re-checks the internal identities, with a relative tolerance for the
    /// Q_L relation (fields may come from an external report).
    pub fn validate(&self, tol_rel: f64) -> Result<()> {
        let q = loaded_q(self.f_r_ghz, self.kappa_ghz)?;
        if ((self.q_loaded - q) / q).abs() > tol_rel.max(1e-3) {
            return Err(Error::Domain(format!(
                "q_loaded {} inconsistent with f_r/kappa = {q}",
                self.q_loaded
            )));
        }
        if self.q_internal < self.q_loaded {
            return Err(Error::Domain(format!(
                "q_internal {} below q_loaded {}",
                self.q_internal, self.q_loaded
            )));
        }
        let td = 1.0 / self.q_internal;
        if ((self.tan_delta - td) / td).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "tan_delta {} is not 1/q_internal",
                self.tan_delta
            )));
        }
        Ok(())
    }
}

/// Measured coherence times and the quality factors derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoherenceSet {
    pub t1_us: f64,
    /// Echo dephasing time [us]; must not exceed 2 T1.
    pub t2_echo_us: f64,
    /// Ramsey dephasing time [us].
    pub t2_ramsey_us: f64,
    /// Qubit transition frequency [GHz].
    pub omega01_ghz: f64,
    /// 2 pi f_01 T_1.
    pub q1: f64,
    /// 2 pi f_01 T_2 (echo).
    pub q2: f64,
    /// Pure dephasing time [us]; `None` means dephasing-free (T2 = 2 T1).
    pub t_phi_us: Option<f64>,
}

impl CoherenceSet {
    pub fn new(t1_us: f64, t2_echo_us: f64, t2_ramsey_us: f64, omega01_ghz: f64) -> Result<Self> {
        let q1 = qubit_quality_factor(omega01_ghz, t1_us)?;
        let q2 = qubit_quality_factor(omega01_ghz, t2_echo_us)?;
        check_positive("t2_ramsey_us", t2_ramsey_us)?;
        check_positive("t1_us", t1_us)?;
        check_positive("t2_echo_us", t2_echo_us)?;
        let t_phi_us = match pure_dephasing_time(t1_us, t2_echo_us)? {
            PureDephasing::Finite(t) => Some(t),
            PureDephasing::DephasingFree => None,
        };
        Ok(Self {
            t1_us,
            t2_echo_us,
            t2_ramsey_us,
            omega01_ghz,
            q1,
            q2,
            t_phi_us,
        })
    }
}

/// Result of the T2 decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PureDephasing {
    /// Finite pure dephasing time [us].
    Finite(f64),
    /// T2 = 2 T1 exactly: relaxation-limited, no dephasing contribution.
    DephasingFree,
}

/// Loaded quality factor Q_L = f_r / kappa.
pub fn loaded_q(f_r_ghz: f64, kappa_ghz: f64) -> Result<f64> {
    check_positive("f_r_ghz", f_r_ghz)?;
    check_positive("kappa_ghz", kappa_ghz)?;
    Ok(f_r_ghz / kappa_ghz)
}

/// Internal quality factor from insertion loss:
/// `Q_int = Q_L / (1 - 10^(-IL/20))`.
pub fn internal_q(q_loaded: f64, il_db: f64) -> Result<f64> {
    check_positive("q_loaded", q_loaded)?;
    if !(il_db > 0.0) || !il_db.is_finite() {
        return Err(Error::Domain(format!(
            "insertion loss must be positive (formula diverges), got {il_db} dB"
        )));
    }
    let attenuation = libm::pow(10.0, -il_db / 20.0);
    Ok(q_loaded / (1.0 - attenuation))
}

/// Effective dielectric loss tangent `tan d = 1 / Q_int`.
pub fn loss_tangent(q_internal: f64) -> Result<f64> {
    check_positive("q_internal", q_internal)?;
    Ok(1.0 / q_internal)
}

/// Fraction of capacitive energy stored in the shunt dielectric.
pub fn participation_si(c_shunt_ff: f64, c_sigma_ff: f64) -> Result<f64> {
    check_positive("c_shunt_ff", c_shunt_ff)?;
    check_positive("c_sigma_ff", c_sigma_ff)?;
    if c_shunt_ff > c_sigma_ff {
        return Err(Error::Domain(format!(
            "c_shunt ({c_shunt_ff} fF) cannot exceed c_sigma ({c_sigma_ff} fF)"
        )));
    }
    Ok(c_shunt_ff / c_sigma_ff)
}

/// Dielectric-loss-limited lifetime `T_1 = (Q_int / P_Si) / (2 pi f_01)` [us].
pub fn t1_from_dielectric_budget(q_internal: f64, p_si: f64, omega01_ghz: f64) -> Result<f64> {
    check_positive("q_internal", q_internal)?;
    check_positive("omega01_ghz", omega01_ghz)?;
    if !(p_si > 0.0) || p_si > 1.0 {
        return Err(Error::Domain(format!(
            "participation must lie in (0, 1], got {p_si}"
        )));
    }
    let q_cap = q_internal / p_si;
    Ok(q_cap / (2.0 * core::f64::consts::PI * omega01_ghz * 1e9) * 1e6)
}

/// Combines parallel loss channels: `1/Q = sum of 1/Q_i` over the supplied
/// components; `None` entries are lossless and contribute nothing.
pub fn combine_q(components: &[Option<f64>]) -> Result<f64> {
    let mut inv_sum = 0.0;
    let mut supplied = 0usize;
    for (i, c) in components.iter().enumerate() {
        if let Some(q) = c {
            if !(*q > 0.0) || !q.is_finite() {
                return Err(Error::Domain(format!(
                    "loss channel {i} must have positive Q, got {q}"
                )));
            }
            inv_sum += 1.0 / q;
            supplied += 1;
        }
    }
    if supplied == 0 {
        return Err(Error::Domain(String::from(
            "combine_q needs at least one supplied channel",
        )));
    }
    Ok(1.0 / inv_sum)
}

/// Quality factor of a coherence time: `Q = 2 pi f_01 T`.
///
/// `t_us = 0` is allowed and gives 0.
pub fn qubit_quality_factor(f01_ghz: f64, t_us: f64) -> Result<f64> {
    check_positive("f01_ghz", f01_ghz)?;
    if t_us < 0.0 || !t_us.is_finite() {
        return Err(Error::Domain(format!(
            "t_us must be non-negative, got {t_us}"
        )));
    }
    Ok(2.0 * core::f64::consts::PI * f01_ghz * 1e9 * t_us * 1e-6)
}

/// Pure dephasing time from `1/T_2 = 1/(2 T_1) + 1/T_phi` [us].
///
/// The boundary T2 = 2 T1 is the relaxation limit and comes back as the
/// distinguished [`PureDephasing::DephasingFree`] outcome; T2 beyond it is
/// unphysical and rejected.
pub fn pure_dephasing_time(t1_us: f64, t2_us: f64) -> Result<PureDephasing> {
    check_positive("t1_us", t1_us)?;
    check_positive("t2_us", t2_us)?;
    let limit = 2.0 * t1_us;
    if t2_us > limit {
        return Err(Error::Domain(format!(
            "T2 = {t2_us} us exceeds the relaxation limit 2*T1 = {limit} us"
        )));
    }
    if t2_us == limit {
        return Ok(PureDephasing::DephasingFree);
    }
    Ok(PureDephasing::Finite(1.0 / (1.0 / t2_us - 0.5 / t1_us)))
}

/// Echo T2 implied by T1 and a pure dephasing time [us]; inverse of
/// [`pure_dephasing_time`].
pub fn t2_from_dephasing(t1_us: f64, t_phi_us: f64) -> Result<f64> {
    check_positive("t1_us", t1_us)?;
    check_positive("t_phi_us", t_phi_us)?;
    Ok(1.0 / (0.5 / t1_us + 1.0 / t_phi_us))
}

/// The assembled loss budget.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LossBudget {
    /// Shunt-dielectric participation ratio.
    pub p_si: f64,
    /// Q_int / P_Si.
    pub q_cap: f64,
    /// Inductive-loss channel, if quantified.
    pub q_ind: Option<f64>,
    /// Radiative-loss channel, if quantified.
    pub q_rad: Option<f64>,
    /// Combined 1/Q sum over the supplied channels.
    pub q1_total: f64,
    /// Budgeted lifetime Q1_total / (2 pi f_01) [us].
    pub t1_budget_us: f64,
    /// Purcell-limited lifetime through the resonator [us].
    pub purcell_t1_us: f64,
}

/// Runs the full loss chain for one device.
///
/// Optional loss channels beyond the capacitive one are treated as lossless,
/// matching a budget that quantifies only dielectric loss; quantified values
/// can be folded in via [`loss_report_with_channels`].
pub fn loss_report(
    device: &DeviceParams,
    resonator: &ResonatorParams,
    coherence: &CoherenceSet,
    coupled: &CoupledSystem,
) -> Result<LossBudget> {
    loss_report_with_channels(device, resonator, coherence, coupled, None, None)
}

/// [`loss_report`] with explicit inductive / radiative channels.
pub fn loss_report_with_channels(
    device: &DeviceParams,
    resonator: &ResonatorParams,
    coherence: &CoherenceSet,
    coupled: &CoupledSystem,
    q_ind: Option<f64>,
    q_rad: Option<f64>,
) -> Result<LossBudget> {
    resonator.validate(1e-2)?;
    let p_si = participation_si(device.c_shunt_ff, device.c_sigma_ff())
        .map_err(|e| provenance(e, "device.c_shunt_ff / device.c_sigma"))?;
    let q_cap = resonator.q_internal / p_si;
    let q1_total =
        combine_q(&[Some(q_cap), q_ind, q_rad]).map_err(|e| provenance(e, "q_cap/q_ind/q_rad"))?;
    let t1_budget_us = q1_total / (2.0 * core::f64::consts::PI * coherence.omega01_ghz * 1e9) * 1e6;
    let purcell_t1_us =
        cavity::purcell_t1(coupled).map_err(|e| provenance(e, "coupled (Purcell)"))?;
    Ok(LossBudget {
        p_si,
        q_cap,
        q_ind,
        q_rad,
        q1_total,
        t1_budget_us,
        purcell_t1_us,
    })
}

fn provenance(e: Error, field: &str) -> Error {
    match e {
        Error::Domain(msg) => Error::Domain(format!("{field}: {msg}")),
        other => other,
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}
