//! Minimal SVG histogram: bars, the fitted Gaussian, axes and nine-digit
//! tick labels. Primary outputs are CSV/JSON; this exists so a report can be
//! eyeballed without external tooling.

use std::fmt::Write as _;

use csfq_core::fit::gaussian_peak;
use csfq_core::HistogramStats;

use crate::csvio::sig9;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 50.0;

/// Renders the histogram and its Gaussian fit as a standalone SVG document.
pub fn histogram_svg(stats: &HistogramStats) -> String {
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let x_lo = stats.bin_edges[0];
    let x_hi = *stats.bin_edges.last().expect("non-empty edges");
    let y_max = stats
        .counts
        .iter()
        .map(|&c| c as f64)
        .fold(stats.amplitude, f64::max)
        .max(1.0);

    let to_x = |v: f64| MARGIN_L + (v - x_lo) / (x_hi - x_lo) * plot_w;
    let to_y = |v: f64| MARGIN_T + (1.0 - v / y_max) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );

    // Bars.
    for (k, &count) in stats.counts.iter().enumerate() {
        let x0 = to_x(stats.bin_edges[k]);
        let x1 = to_x(stats.bin_edges[k + 1]);
        let y = to_y(count as f64);
        let h = MARGIN_T + plot_h - y;
        let _ = writeln!(
            svg,
            "  <rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#9ecae1\" stroke=\"#3182bd\" stroke-width=\"1\"/>",
            x0,
            y,
            x1 - x0,
            h
        );
    }

    // Fitted Gaussian, sampled across the span.
    let params = [stats.amplitude, stats.mean, stats.sigma];
    let n_samples = 200;
    let mut path = String::new();
    for i in 0..=n_samples {
        let v = x_lo + (x_hi - x_lo) * i as f64 / n_samples as f64;
        let g = gaussian_peak(v, &params);
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(path, "{cmd}{:.2} {:.2} ", to_x(v), to_y(g));
    }
    let _ = writeln!(
        svg,
        "  <path d=\"{}\" fill=\"none\" stroke=\"#e6550d\" stroke-width=\"2\"/>",
        path.trim_end()
    );

    // Axes.
    let x_axis_y = MARGIN_T + plot_h;
    let _ = writeln!(
        svg,
        "  <line x1=\"{MARGIN_L}\" y1=\"{x_axis_y}\" x2=\"{:.2}\" y2=\"{x_axis_y}\" stroke=\"black\" stroke-width=\"1\"/>",
        MARGIN_L + plot_w
    );
    let _ = writeln!(
        svg,
        "  <line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{x_axis_y}\" stroke=\"black\" stroke-width=\"1\"/>"
    );

    // Tick labels: span ends and fitted mean on x; zero and max on y.
    for (v, anchor) in [(x_lo, "start"), (stats.mean, "middle"), (x_hi, "end")] {
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"{anchor}\">{}</text>",
            to_x(v),
            x_axis_y + 18.0,
            sig9(v)
        );
    }
    for v in [0.0, y_max] {
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">{}</text>",
            MARGIN_L - 6.0,
            to_y(v) + 4.0,
            sig9(v)
        );
    }
    let _ = writeln!(svg, "</svg>");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use csfq_core::fit::{gaussian_stats, BinningPolicy};
    use csfq_core::synth::gen_t1_series;

    #[test]
    fn svg_is_well_formed_and_deterministic() {
        let values = gen_t1_series(16.3, 1.73, 100, 2024, 0.0).unwrap();
        let stats = gaussian_stats(&values, BinningPolicy::SquareRoot).unwrap();
        let a = histogram_svg(&stats);
        let b = histogram_svg(&stats);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<rect").count(), stats.counts.len() + 1);
        assert!(a.contains("<path"));
    }
}
