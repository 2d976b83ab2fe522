//! The four measurement models.
//!
//! All transcendentals route through `libm` so model evaluation is bit-exact
//! across platforms — the synthetic-data generators evaluate these same
//! functions, and their byte-level reproducibility is contractual.

/// Parameter names for [`exponential_decay`].
pub const EXP_DECAY_PARAMS: [&str; 3] = ["amplitude", "t1_us", "offset"];

/// `A exp(-x / T1) + B` with `p = [A, T1, B]`.
pub fn exponential_decay(x: f64, p: &[f64]) -> f64 {
    p[0] * libm::exp(-x / p[1]) + p[2]
}

/// Parameter names for [`damped_sinusoid`].
pub const DAMPED_SINUSOID_PARAMS: [&str; 5] =
    ["amplitude", "t2_us", "detuning_mhz", "phase_rad", "offset"];

/// `A exp(-x / T2) cos(2 pi dnu x + phi) + B` with
/// `p = [A, T2, dnu, phi, B]`; x in us and dnu in MHz, so their product is
/// dimensionless cycles.
pub fn damped_sinusoid(x: f64, p: &[f64]) -> f64 {
    p[0] * libm::exp(-x / p[1]) * libm::cos(2.0 * core::f64::consts::PI * p[2] * x + p[3]) + p[4]
}

/// Parameter names for [`lorentzian_power`].
pub const LORENTZIAN_PARAMS: [&str; 4] = ["f0_ghz", "kappa_ghz", "peak", "offset"];

/// Power-spectrum Lorentzian `B + P (k^2/4) / ((x - f0)^2 + k^2/4)` with
/// `p = [f0, k, P, B]`; `k` is the full width at half maximum.
pub fn lorentzian_power(x: f64, p: &[f64]) -> f64 {
    let hw2 = 0.25 * p[1] * p[1];
    let d = x - p[0];
    p[3] + p[2] * hw2 / (d * d + hw2)
}

/// Parameter names for [`gaussian_peak`].
pub const GAUSSIAN_PARAMS: [&str; 3] = ["amplitude", "mean", "sigma"];

/// `A exp(-(x - mu)^2 / 2 sigma^2)` with `p = [A, mu, sigma]`.
pub fn gaussian_peak(x: f64, p: &[f64]) -> f64 {
    let d = x - p[1];
    p[0] * libm::exp(-0.5 * d * d / (p[2] * p[2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_limits() {
        let p = [1.0, 18.25, 0.1];
        assert!((exponential_decay(0.0, &p) - 1.1).abs() < 1e-15);
        assert!((exponential_decay(1e6, &p) - 0.1).abs() < 1e-12);
        // 1/e point.
        let y = exponential_decay(18.25, &p);
        assert!((y - (0.1 + 1.0 / core::f64::consts::E)).abs() < 1e-15);
    }

    #[test]
    fn damped_sinusoid_period_and_phase() {
        // 5 MHz detuning: one period every 0.2 us.
        let p = [1.0, 3.33, 5.0, 0.0, 0.0];
        let y0 = damped_sinusoid(0.0, &p);
        assert!((y0 - 1.0).abs() < 1e-15);
        // A phase shift of pi flips the signal sign about the offset.
        let flipped = [1.0, 3.33, 5.0, core::f64::consts::PI, 0.25];
        for i in 0..10 {
            let x = i as f64 * 0.037;
            let a = damped_sinusoid(x, &p);
            let b = damped_sinusoid(x, &flipped);
            assert!((b - (0.25 - a)).abs() < 1e-12);
        }
    }

    #[test]
    fn lorentzian_fwhm_is_kappa() {
        let p = [9.796, 6.97e-4, 1.0, 0.0];
        let peak = lorentzian_power(9.796, &p);
        assert_eq!(peak, 1.0);
        let half_left = lorentzian_power(9.796 - 0.5 * 6.97e-4, &p);
        let half_right = lorentzian_power(9.796 + 0.5 * 6.97e-4, &p);
        assert!((half_left - 0.5).abs() < 1e-12);
        assert!((half_right - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gaussian_peak_shape() {
        let p = [7.0, 16.3, 1.73];
        assert_eq!(gaussian_peak(16.3, &p), 7.0);
        let one_sigma = gaussian_peak(16.3 + 1.73, &p);
        assert!((one_sigma - 7.0 * libm::exp(-0.5)).abs() < 1e-12);
        // Symmetric.
        let d = gaussian_peak(14.0, &p) - gaussian_peak(18.6, &p);
        assert!(d.abs() < 1e-14);
    }
}
