//! Generator-fit round trips: the synthetic-data module and the fit engine
//! are mutual oracles. Noiseless data must round-trip to 1e-6 relative from
//! perturbed starts; noisy data must land within its quoted uncertainties at
//! the expected rate; scaling the signal must rescale exactly the amplitude
//! block of the result.

use csfq_core::fit::{
    damped_sinusoid, exponential_decay, fit_damped_sinusoid, fit_exponential_decay, fit_lorentzian,
    gaussian_peak, least_squares_core, lorentzian_power, FitResult, LmOptions, GAUSSIAN_PARAMS,
};
use csfq_core::rng::Xoshiro256PlusPlus;
use csfq_core::synth::{
    gen_echo_trace, gen_ramsey_trace, gen_resonance_sweep, gen_t1_trace, NoiseSpec,
};
use csfq_core::TimeTrace;

const EXP_TRUTH: [f64; 3] = [0.93, 18.25, 0.05];
const RAMSEY_TRUTH: [f64; 5] = [0.48, 3.33, 5.0, 0.3, 0.5];
const ECHO_TRUTH: [f64; 5] = [0.46, 23.20, 0.5, 0.0, 0.5];
// The sweep generator produces a unit-peak, zero-offset line shape.
const LORENTZ_TRUTH: [f64; 4] = [9.796, 6.97e-4, 1.0, 0.0];
const GAUSS_TRUTH: [f64; 3] = [12.0, 16.3, 1.73];

/// Relative recovery error, falling back to an absolute gate for parameters
/// whose generating value is exactly zero.
fn max_rel_err(fit: &FitResult, truth: &[f64]) -> f64 {
    fit.params
        .iter()
        .zip(truth)
        .map(|(p, t)| {
            if *t == 0.0 {
                p.abs()
            } else {
                ((p - t) / t).abs()
            }
        })
        .fold(0.0, f64::max)
}

fn all_within_3_sigma(fit: &FitResult, truth: &[f64]) -> bool {
    fit.params
        .iter()
        .zip(&fit.sigmas)
        .zip(truth)
        .all(|((p, s), t)| (p - t).abs() <= 3.0 * s)
}

fn perturbed(truth: &[f64], rng: &mut Xoshiro256PlusPlus) -> Vec<f64> {
    truth
        .iter()
        .map(|t| t * (1.0 + rng.next_in_range(-0.2, 0.2)))
        .collect()
}

fn gauss_xy(noise_sigma: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let n = 120;
    let x: Vec<f64> = (0..n)
        .map(|i| 10.0 + 12.6 * i as f64 / (n - 1) as f64)
        .collect();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let y: Vec<f64> = x
        .iter()
        .map(|&xi| gaussian_peak(xi, &GAUSS_TRUTH) + noise_sigma * rng.next_gaussian())
        .collect();
    (x, y)
}

#[test]
fn noiseless_roundtrip_from_perturbed_starts() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(20260819);
    let opts = LmOptions::default();

    let t1 = gen_t1_trace(18.25, 160, 80.0, 0.93, 0.05, &NoiseSpec::noiseless()).unwrap();
    let ramsey = gen_ramsey_trace(
        3.33,
        5.0,
        0.3,
        400,
        10.0,
        0.48,
        0.5,
        &NoiseSpec::noiseless(),
    )
    .unwrap();
    let echo = gen_echo_trace(
        23.2,
        0.5,
        0.0,
        240,
        60.0,
        0.46,
        0.5,
        &NoiseSpec::noiseless(),
    )
    .unwrap();
    let sweep = gen_resonance_sweep(9.796, 6.97e-4, 1.4e-2, 401, &NoiseSpec::noiseless()).unwrap();
    let (gx, gy) = gauss_xy(0.0, 0);

    for round in 0..10 {
        let fit = least_squares_core(
            exponential_decay,
            &csfq_core::fit::EXP_DECAY_PARAMS,
            &perturbed(&EXP_TRUTH, &mut rng),
            &t1.x,
            &t1.y,
            &opts,
        )
        .unwrap();
        assert!(
            max_rel_err(&fit, &EXP_TRUTH) < 1e-6,
            "exp round {round}: {:?}",
            fit.params
        );

        let fit = least_squares_core(
            damped_sinusoid,
            &csfq_core::fit::DAMPED_SINUSOID_PARAMS,
            &perturbed(&RAMSEY_TRUTH, &mut rng),
            &ramsey.x,
            &ramsey.y,
            &opts,
        )
        .unwrap();
        assert!(
            max_rel_err(&fit, &RAMSEY_TRUTH) < 1e-6,
            "ramsey round {round}: {:?}",
            fit.params
        );

        // The echo phase truth is 0, so perturb it additively.
        let mut start = perturbed(&ECHO_TRUTH, &mut rng);
        start[3] = ECHO_TRUTH[3] + rng.next_in_range(-0.2, 0.2);
        let fit = least_squares_core(
            damped_sinusoid,
            &csfq_core::fit::DAMPED_SINUSOID_PARAMS,
            &start,
            &echo.x,
            &echo.y,
            &opts,
        )
        .unwrap();
        assert!(
            max_rel_err(&fit, &ECHO_TRUTH) < 1e-6,
            "echo round {round}: {:?}",
            fit.params
        );

        // f0 is a location parameter (the frequency origin is arbitrary), so
        // its 20% perturbation is taken on the linewidth scale; the offset's
        // on the peak height.
        let mut start = perturbed(&LORENTZ_TRUTH, &mut rng);
        start[0] = LORENTZ_TRUTH[0] + rng.next_in_range(-0.2, 0.2) * LORENTZ_TRUTH[1];
        start[3] = LORENTZ_TRUTH[3] + rng.next_in_range(-0.2, 0.2) * LORENTZ_TRUTH[2];
        let fit = least_squares_core(
            lorentzian_power,
            &csfq_core::fit::LORENTZIAN_PARAMS,
            &start,
            &sweep.x,
            &sweep.y,
            &opts,
        )
        .unwrap();
        assert!(
            max_rel_err(&fit, &LORENTZ_TRUTH) < 1e-6,
            "lorentzian round {round}: {:?}",
            fit.params
        );

        let mut fit = least_squares_core(
            gaussian_peak,
            &GAUSSIAN_PARAMS,
            &perturbed(&GAUSS_TRUTH, &mut rng),
            &gx,
            &gy,
            &opts,
        )
        .unwrap();
        // The model is even in sigma; fold to the positive representative.
        fit.params[2] = fit.params[2].abs();
        assert!(
            max_rel_err(&fit, &GAUSS_TRUTH) < 1e-6,
            "gaussian round {round}: {:?}",
            fit.params
        );
    }
}

#[test]
fn noisy_fits_cover_truth_at_three_sigma() {
    // 2% of each signal's amplitude, 100 seeds per model; every parameter
    // must sit within 3 fitted sigmas of truth in at least 95 runs.
    let mut hits = [0u32; 5];
    for seed in 0..100u64 {
        let noise = NoiseSpec::new(0.02 * 0.93, 1000 + seed).unwrap();
        let trace = gen_t1_trace(18.25, 160, 80.0, 0.93, 0.05, &noise).unwrap();
        if let Ok(fit) = fit_exponential_decay(&trace) {
            if all_within_3_sigma(&fit, &EXP_TRUTH) {
                hits[0] += 1;
            }
        }

        let noise = NoiseSpec::new(0.02 * 0.48, 2000 + seed).unwrap();
        let trace = gen_ramsey_trace(3.33, 5.0, 0.3, 400, 10.0, 0.48, 0.5, &noise).unwrap();
        if let Ok(fit) = fit_damped_sinusoid(&trace) {
            if all_within_3_sigma(&fit, &RAMSEY_TRUTH) {
                hits[1] += 1;
            }
        }

        let noise = NoiseSpec::new(0.02 * 0.46, 3000 + seed).unwrap();
        let trace = gen_echo_trace(23.2, 0.5, 0.0, 240, 60.0, 0.46, 0.5, &noise).unwrap();
        if let Ok(fit) = fit_damped_sinusoid(&trace) {
            // The phase truth is zero: 3-sigma is an absolute gate there.
            let ok = fit
                .params
                .iter()
                .zip(&fit.sigmas)
                .zip(&ECHO_TRUTH)
                .all(|((p, s), t)| (p - t).abs() <= 3.0 * s);
            if ok {
                hits[2] += 1;
            }
        }

        let noise = NoiseSpec::new(0.02, 4000 + seed).unwrap();
        let trace = gen_resonance_sweep(9.796, 6.97e-4, 1.4e-2, 401, &noise).unwrap();
        if let Ok(fit) = fit_lorentzian(&trace) {
            if all_within_3_sigma(&fit, &LORENTZ_TRUTH) {
                hits[3] += 1;
            }
        }

        let (gx, gy) = gauss_xy(0.02 * 12.0, 5000 + seed);
        let start = [
            GAUSS_TRUTH[0] * 1.1,
            GAUSS_TRUTH[1] * 0.95,
            GAUSS_TRUTH[2] * 1.1,
        ];
        if let Ok(fit) = least_squares_core(
            gaussian_peak,
            &GAUSSIAN_PARAMS,
            &start,
            &gx,
            &gy,
            &LmOptions::default(),
        ) {
            if all_within_3_sigma(&fit, &GAUSS_TRUTH) {
                hits[4] += 1;
            }
        }
    }
    let names = ["exp", "ramsey", "echo", "lorentzian", "gaussian"];
    for (n, h) in names.iter().zip(&hits) {
        assert!(*h >= 95, "{n}: only {h}/100 runs covered truth at 3 sigma");
    }
}

#[test]
fn y_scaling_rescales_amplitude_block_exactly() {
    // Scaling the signal by c must scale amplitude-like parameters and their
    // sigmas by c and leave shape parameters (and their sigmas) untouched.
    let noise = NoiseSpec::new(0.01, 777).unwrap();
    let trace = gen_ramsey_trace(3.33, 5.0, 0.3, 300, 10.0, 0.48, 0.5, &noise).unwrap();
    let scaled_y: Vec<f64> = trace.y.iter().map(|v| v * 1000.0).collect();
    let scaled = TimeTrace::new(trace.kind, trace.x.clone(), scaled_y).unwrap();

    let base = fit_damped_sinusoid(&trace).unwrap();
    let big = fit_damped_sinusoid(&scaled).unwrap();

    // amplitude (0) and offset (4) scale; t2 (1), detuning (2), phase (3)
    // are invariant.
    for &k in &[0usize, 4] {
        assert!(
            ((big.params[k] - 1000.0 * base.params[k]) / (1000.0 * base.params[k])).abs() < 1e-9,
            "param {k} did not scale"
        );
        assert!(
            ((big.sigmas[k] - 1000.0 * base.sigmas[k]) / (1000.0 * base.sigmas[k])).abs() < 1e-6,
            "sigma {k} did not scale"
        );
    }
    for &k in &[1usize, 2, 3] {
        assert!(
            ((big.params[k] - base.params[k]) / base.params[k]).abs() < 1e-9,
            "shape param {k} moved"
        );
        assert!(
            ((big.sigmas[k] - base.sigmas[k]) / base.sigmas[k]).abs() < 1e-6,
            "shape sigma {k} moved"
        );
    }
    assert!(
        ((big.residual_rms - 1000.0 * base.residual_rms) / (1000.0 * base.residual_rms)).abs()
            < 1e-9
    );
}

#[test]
fn fits_are_bit_deterministic() {
    let noise = NoiseSpec::new(0.02, 31337).unwrap();
    let a = fit_exponential_decay(&gen_t1_trace(18.25, 160, 80.0, 0.93, 0.05, &noise).unwrap())
        .unwrap();
    let b = fit_exponential_decay(&gen_t1_trace(18.25, 160, 80.0, 0.93, 0.05, &noise).unwrap())
        .unwrap();
    assert_eq!(a.iterations, b.iterations);
    for (x, y) in a.params.iter().zip(&b.params) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
    for (x, y) in a.sigmas.iter().zip(&b.sigmas) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
}

#[test]
fn quoted_sigmas_match_scatter_across_seeds() {
    // The quoted 1-sigma should describe the seed-to-seed scatter of the
    // fitted T1 within a factor of ~1.5 either way (chi-squared-ish check).
    let mut t1s = Vec::new();
    let mut quoted = Vec::new();
    for seed in 0..60u64 {
        let noise = NoiseSpec::new(0.02, 9000 + seed).unwrap();
        let trace = gen_t1_trace(18.25, 160, 80.0, 0.93, 0.05, &noise).unwrap();
        let fit = fit_exponential_decay(&trace).unwrap();
        t1s.push(fit.param("t1_us").unwrap());
        quoted.push(fit.sigma("t1_us").unwrap());
    }
    let n = t1s.len() as f64;
    let mean = t1s.iter().sum::<f64>() / n;
    let scatter = (t1s.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    let typical = quoted.iter().sum::<f64>() / n;
    assert!(
        scatter / typical > 1.0 / 1.5 && scatter / typical < 1.5,
        "scatter {scatter} vs quoted {typical}"
    );
}
