//! JSON report shapes. Every derived quantity in the loss budget carries the
//! formula it came from, so a report is readable without the source. Floats
//! are emitted in serde_json's shortest round-trip form, which re-parses to
//! the identical bit pattern.

use std::collections::BTreeMap;

use csfq_core::{
    CoherenceSet, DeviceParams, FitResult, HistogramStats, LossBudget, ResonatorParams,
};
use serde::Serialize;

use crate::config::Measured;

/// A value labeled with the relation that produced it.
#[derive(Serialize)]
pub struct Quantity {
    pub value: f64,
    pub formula: &'static str,
}

/// As [`Quantity`], for channels that may be absent; `null` marks absence.
#[derive(Serialize)]
pub struct OptionalQuantity {
    pub value: Option<f64>,
    pub formula: &'static str,
}

fn q(value: f64, formula: &'static str) -> Quantity {
    Quantity { value, formula }
}

#[derive(Serialize)]
pub struct DeviceReport {
    pub alpha: Quantity,
    pub c_large_ff: Quantity,
    pub c_junction_ff: Quantity,
    pub c_shunt_ff: Quantity,
    pub c_sigma_ff: Quantity,
    pub ej_ghz: Quantity,
    pub ec_ghz: Quantity,
    pub ej_over_ec: Quantity,
}

#[derive(Serialize)]
pub struct ResonatorReport {
    pub f_r_ghz: Quantity,
    pub kappa_ghz: Quantity,
    pub insertion_loss_db: Quantity,
    pub q_loaded: Quantity,
    pub q_internal: Quantity,
    pub tan_delta: Quantity,
}

#[derive(Serialize)]
pub struct CoherenceReport {
    pub t1_us: Quantity,
    pub t2_echo_us: Quantity,
    pub t2_ramsey_us: Quantity,
    pub omega01_ghz: Quantity,
    pub q1: Quantity,
    pub q2: Quantity,
    pub t_phi_us: OptionalQuantity,
}

#[derive(Serialize)]
pub struct BudgetReport {
    pub p_si: Quantity,
    pub q_cap: Quantity,
    pub q_ind: OptionalQuantity,
    pub q_rad: OptionalQuantity,
    pub q1_total: Quantity,
    pub t1_budget_us: Quantity,
    pub purcell_t1_us: Quantity,
    pub detuning_ghz: Quantity,
    pub g_ghz: Quantity,
}

/// The full loss-budget report: echoed inputs plus every intermediate.
#[derive(Serialize)]
pub struct LossReport {
    pub device: DeviceReport,
    pub resonator: ResonatorReport,
    pub coherence: CoherenceReport,
    pub budget: BudgetReport,
}

pub fn loss_report_json(
    device: &DeviceParams,
    resonator: &ResonatorParams,
    coherence: &CoherenceSet,
    measured: &Measured,
    budget: &LossBudget,
) -> LossReport {
    LossReport {
        device: DeviceReport {
            alpha: q(device.alpha, "input: E_J ratio of the small junction"),
            c_large_ff: q(device.c_large_ff, "C = eps_r eps_0 A / t"),
            c_junction_ff: q(device.c_junction_ff(), "C_J = (1/2 + alpha) C"),
            c_shunt_ff: q(device.c_shunt_ff, "input: shunt capacitance"),
            c_sigma_ff: q(device.c_sigma_ff(), "C_Sigma = C_J + C_S"),
            ej_ghz: q(device.ej_ghz, "input: Josephson energy"),
            ec_ghz: q(
                device.ec_ghz,
                "input ec_ghz when given, else E_C = e^2 / (2 C_Sigma h)",
            ),
            ej_over_ec: q(device.ej_over_ec(), "E_J / E_C"),
        },
        resonator: ResonatorReport {
            f_r_ghz: q(resonator.f_r_ghz, "input: resonance frequency"),
            kappa_ghz: q(resonator.kappa_ghz, "input: linewidth"),
            insertion_loss_db: q(resonator.insertion_loss_db, "input: insertion loss"),
            q_loaded: q(resonator.q_loaded, "Q_L = f_r / kappa"),
            q_internal: q(resonator.q_internal, "Q_int = Q_L / (1 - 10^(-IL/20))"),
            tan_delta: q(resonator.tan_delta, "tan delta = 1 / Q_int"),
        },
        coherence: CoherenceReport {
            t1_us: q(coherence.t1_us, "input: energy relaxation time"),
            t2_echo_us: q(coherence.t2_echo_us, "input: echo coherence time"),
            t2_ramsey_us: q(coherence.t2_ramsey_us, "input: Ramsey coherence time"),
            omega01_ghz: q(coherence.omega01_ghz, "input: qubit transition frequency"),
            q1: q(coherence.q1, "Q_1 = 2 pi f_01 T_1"),
            q2: q(coherence.q2, "Q_2 = 2 pi f_01 T_2"),
            t_phi_us: OptionalQuantity {
                value: coherence.t_phi_us,
                formula: "1/T_phi = 1/T_2 - 1/(2 T_1); null means dephasing-free (T_2 = 2 T_1)",
            },
        },
        budget: BudgetReport {
            p_si: q(budget.p_si, "P_Si = C_S / C_Sigma"),
            q_cap: q(budget.q_cap, "Q_cap = Q_int / P_Si"),
            q_ind: OptionalQuantity {
                value: budget.q_ind,
                formula: "input channel; null means not quantified (treated lossless)",
            },
            q_rad: OptionalQuantity {
                value: budget.q_rad,
                formula: "input channel; null means not quantified (treated lossless)",
            },
            q1_total: q(
                budget.q1_total,
                "1/Q_1 = 1/Q_cap + 1/Q_ind + 1/Q_rad over supplied channels",
            ),
            t1_budget_us: q(budget.t1_budget_us, "T_1 = Q_1 / (2 pi f_01)"),
            purcell_t1_us: q(
                budget.purcell_t1_us,
                "T_1^Purcell = 1 / (2 pi kappa (g/Delta)^2)",
            ),
            detuning_ghz: q(
                measured.f_r_ghz - measured.omega01_ghz,
                "Delta = f_r - f_01",
            ),
            g_ghz: q(measured.g_ghz, "input: qubit-resonator coupling"),
        },
    }
}

/// Fit output: parameters and uncertainties as name-keyed maps.
#[derive(Serialize)]
pub struct FitReport {
    pub model: &'static str,
    pub n_points: usize,
    pub params: BTreeMap<&'static str, f64>,
    pub sigmas: BTreeMap<&'static str, f64>,
    pub residual_rms: f64,
    pub converged: bool,
    pub iterations: u32,
}

pub fn fit_report(model: &'static str, n_points: usize, fit: &FitResult) -> FitReport {
    let params = fit
        .names
        .iter()
        .copied()
        .zip(fit.params.iter().copied())
        .collect();
    let sigmas = fit
        .names
        .iter()
        .copied()
        .zip(fit.sigmas.iter().copied())
        .collect();
    FitReport {
        model,
        n_points,
        params,
        sigmas,
        residual_rms: fit.residual_rms,
        converged: fit.converged,
        iterations: fit.iterations,
    }
}

/// Histogram statistics output.
#[derive(Serialize)]
pub struct StatsReport {
    pub n: usize,
    pub bins: usize,
    pub mean: f64,
    pub sigma: f64,
    pub amplitude: f64,
    pub mean_sigma: f64,
    pub sigma_sigma: f64,
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub outlier_indices: Vec<usize>,
    pub outlier_values: Vec<f64>,
    pub converged: bool,
    pub iterations: u32,
}

pub fn stats_report(stats: &HistogramStats) -> StatsReport {
    let outlier_values = stats.outliers.iter().map(|&i| stats.values[i]).collect();
    StatsReport {
        n: stats.values.len(),
        bins: stats.counts.len(),
        mean: stats.mean,
        sigma: stats.sigma,
        amplitude: stats.amplitude,
        mean_sigma: stats.fit.sigma("mean").expect("gaussian fit has a mean"),
        sigma_sigma: stats.fit.sigma("sigma").expect("gaussian fit has a sigma"),
        bin_edges: stats.bin_edges.clone(),
        counts: stats.counts.clone(),
        outlier_indices: stats.outliers.clone(),
        outlier_values,
        converged: stats.fit.converged,
        iterations: stats.fit.iterations,
    }
}
