//! Histogramming and Gaussian statistics for repeated-measurement series.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fit::least_squares::{least_squares_core, LmOptions};
use crate::fit::models::{gaussian_peak, GAUSSIAN_PARAMS};
use crate::fit::FitResult;

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// How to choose the number of histogram bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinningPolicy {
    /// ceil(sqrt(n)) bins — the default.
    SquareRoot,
    /// A fixed bin count (at least 4, so the three-parameter Gaussian fit
    /// keeps a degree of freedom).
    Fixed(usize),
}

/// Histogram of a value series with a Gaussian fit over the bin centers.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramStats {
    /// The input values, unmodified.
    pub values: Vec<f64>,
    /// bins + 1 edges, first = min, last = max.
    pub bin_edges: Vec<f64>,
    /// Counts per bin; sums to values.len().
    pub counts: Vec<usize>,
    /// Fitted Gaussian center.
    pub mean: f64,
    /// Fitted Gaussian width (always positive).
    pub sigma: f64,
    /// Fitted Gaussian height.
    pub amplitude: f64,
    /// Indices of values outside mean +- 3 sigma of the fit.
    pub outliers: Vec<usize>,
    /// The underlying least-squares result (covariances, iterations).
    pub fit: FitResult,
}

/// Histograms the series and least-squares fits a Gaussian to the bin counts.
///
/// Outliers are the values beyond three fitted sigmas either side of the
/// fitted mean.
pub fn gaussian_stats(values: &[f64], binning: BinningPolicy) -> Result<HistogramStats> {
    let n = values.len();
    if n < 20 {
        return Err(Error::TooFewPoints { needed: 20, got: n });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("values must be finite".into()));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        return Err(Error::ConstantSignal);
    }

    let bins = match binning {
        BinningPolicy::SquareRoot => {
            let mut b = 1;
            while b * b < n {
                b += 1;
            }
            b
        }
        BinningPolicy::Fixed(b) => {
            if b < 4 {
                return Err(Error::Domain(alloc::format!(
                    "need at least 4 bins for the Gaussian fit, got {b}"
                )));
            }
            b
        }
    };

    let width = (hi - lo) / bins as f64;
    let mut bin_edges = Vec::with_capacity(bins + 1);
    for i in 0..=bins {
        bin_edges.push(lo + width * i as f64);
    }
    bin_edges[bins] = hi;

    let mut counts = vec![0usize; bins];
    for &v in values {
        let mut idx = ((v - lo) / width) as usize;
        if idx >= bins {
            idx = bins - 1;
        }
        counts[idx] += 1;
    }

    // Sample moments seed the fit.
    let sample_mean = values.iter().sum::<f64>() / n as f64;
    let sample_var = values
        .iter()
        .map(|v| (v - sample_mean) * (v - sample_mean))
        .sum::<f64>()
        / (n - 1) as f64;
    let sample_sd = sample_var.sqrt().max(width * 0.25);
    let amp0 = counts.iter().copied().max().unwrap_or(1) as f64;

    let centers: Vec<f64> = (0..bins)
        .map(|i| 0.5 * (bin_edges[i] + bin_edges[i + 1]))
        .collect();
    let count_y: Vec<f64> = counts.iter().map(|&c| c as f64).collect();

    let fit = least_squares_core(
        gaussian_peak,
        &GAUSSIAN_PARAMS,
        &[amp0, sample_mean, sample_sd],
        &centers,
        &count_y,
        &LmOptions::default(),
    )?;

    // The model is even in sigma; report the positive representative.
    let mean = fit.params[1];
    let sigma = fit.params[2].abs();
    let amplitude = fit.params[0];
    if !(sigma > 0.0) {
        return Err(Error::DegenerateFit("fitted sigma is zero".into()));
    }

    let outliers: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < mean - 3.0 * sigma || v > mean + 3.0 * sigma)
        .map(|(i, _)| i)
        .collect();

    Ok(HistogramStats {
        values: values.to_vec(),
        bin_edges,
        counts,
        mean,
        sigma,
        amplitude,
        outliers,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Xoshiro256PlusPlus;

    fn draws(mean: f64, sd: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut g = Xoshiro256PlusPlus::seed_from_u64(seed);
        (0..n).map(|_| mean + sd * g.next_gaussian()).collect()
    }

    #[test]
    fn recovers_generating_moments() {
        // The reference series: 100 draws from (16.3, 1.73).
        let v = draws(16.3, 1.73, 100, 41);
        let s = gaussian_stats(&v, BinningPolicy::SquareRoot).unwrap();
        assert!((s.mean - 16.3).abs() < 0.6, "mean {}", s.mean);
        assert!((s.sigma - 1.73).abs() < 0.5, "sigma {}", s.sigma);
        assert_eq!(s.counts.iter().sum::<usize>(), 100);
        assert_eq!(s.bin_edges.len(), s.counts.len() + 1);
        // sqrt rule: 100 values -> 10 bins.
        assert_eq!(s.counts.len(), 10);
    }

    #[test]
    fn ramsey_series_analogue() {
        let v = draws(3.25, 0.44, 100, 137);
        let s = gaussian_stats(&v, BinningPolicy::SquareRoot).unwrap();
        assert!((s.mean - 3.25).abs() < 0.2, "mean {}", s.mean);
        assert!((s.sigma - 0.44).abs() < 0.2, "sigma {}", s.sigma);
    }

    #[test]
    fn fixed_binning_is_respected() {
        let v = draws(10.0, 1.0, 200, 7);
        let s = gaussian_stats(&v, BinningPolicy::Fixed(14)).unwrap();
        assert_eq!(s.counts.len(), 14);
        assert!(gaussian_stats(&v, BinningPolicy::Fixed(2)).is_err());
    }

    #[test]
    fn rejects_small_or_degenerate_series() {
        let v = draws(10.0, 1.0, 19, 3);
        assert!(matches!(
            gaussian_stats(&v, BinningPolicy::SquareRoot),
            Err(Error::TooFewPoints {
                needed: 20,
                got: 19
            })
        ));
        let constant = vec![5.0; 50];
        assert!(matches!(
            gaussian_stats(&constant, BinningPolicy::SquareRoot),
            Err(Error::ConstantSignal)
        ));
        let mut with_nan = draws(10.0, 1.0, 30, 3);
        with_nan[4] = f64::NAN;
        assert!(gaussian_stats(&with_nan, BinningPolicy::SquareRoot).is_err());
    }

    #[test]
    fn symmetric_dataset_centers_fit_at_midpoint() {
        // Mirror every draw about 10: the dataset is exactly symmetric, so
        // the fitted center must land on the midpoint.
        let half = draws(0.0, 0.8, 20, 31415);
        let mut v = Vec::with_capacity(40);
        for d in half {
            v.push(10.0 + d);
            v.push(10.0 - d);
        }
        v.sort_by(f64::total_cmp);
        let s = gaussian_stats(&v, BinningPolicy::SquareRoot).unwrap();
        assert!((s.mean - 10.0).abs() < 0.1, "mean {}", s.mean);
    }

    #[test]
    fn flags_injected_outliers() {
        let mut v = draws(16.3, 1.0, 80, 11);
        v.push(16.3 - 8.0);
        v.push(16.3 - 7.5);
        let s = gaussian_stats(&v, BinningPolicy::SquareRoot).unwrap();
        assert!(s.outliers.contains(&80));
        assert!(s.outliers.contains(&81));
    }
}
