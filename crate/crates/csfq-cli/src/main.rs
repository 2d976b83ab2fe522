//! csfq: spectra, anti-crossing curves, loss budgets, trace fits, drift
//! statistics and synthetic measurement data for a capacitively shunted flux
//! qubit coupled to a CPW resonator.
//!
//! Every command is deterministic: identical inputs (including seeds) produce
//! byte-identical outputs. stdout stays silent unless `--out -` is given;
//! diagnostics go to stderr. Exit codes: 0 success, 2 input error, 3 fit
//! non-convergence, 4 numerical solver failure.

// Domain guards use `!(x > 0.0)` so that NaN lands on the rejecting branch;
// the `x <= 0.0` form clippy prefers would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod csvio;
mod report;
mod svg;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use csfq_core::cavity::anticrossing_curve;
use csfq_core::fit::{
    fit_damped_sinusoid, fit_exponential_decay, fit_lorentzian, gaussian_stats, BinningPolicy,
};
use csfq_core::loss::loss_report_with_channels;
use csfq_core::spectrum::{self, QubitHamiltonianSpec, SpectrumCurve, SpectrumPoint};
use csfq_core::synth::{
    gen_echo_trace, gen_flux_map, gen_ramsey_trace, gen_resonance_sweep, gen_t1_series,
    gen_t1_trace, NoiseSpec,
};
use csfq_core::{CoherenceSet, CoupledSystem, DeviceParams, TimeTrace, TraceKind};

#[derive(Parser)]
#[command(
    name = "csfq",
    version,
    about = "Capacitively shunted flux qubit toolkit: spectra, loss budgets, fits, synthetic data"
)]
struct Cli {
    /// Print progress diagnostics to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the qubit transition over flux; CSV `flux_frac,omega01_ghz`.
    Spectrum {
        /// Device config file (key = value schema, see README).
        #[arg(long)]
        device: PathBuf,
        /// Sweep start, in flux quanta.
        #[arg(long, default_value_t = 0.45)]
        f_start: f64,
        /// Sweep end, in flux quanta.
        #[arg(long, default_value_t = 0.55)]
        f_end: f64,
        /// Grid points.
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Charge-basis cutoff N (basis dimension (2N+1)^2).
        #[arg(long, default_value_t = 12)]
        cutoff: u32,
        /// Add the omega12_ghz column.
        #[arg(long)]
        omega12: bool,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        out: String,
    },
    /// Dressed-state branches vs flux; CSV `flux_frac,upper_ghz,lower_ghz`.
    Anticrossing {
        /// Device config file.
        #[arg(long)]
        device: PathBuf,
        /// Bare resonator frequency [GHz].
        #[arg(long, default_value_t = 9.796)]
        f_r_ghz: f64,
        /// Qubit-resonator coupling [MHz].
        #[arg(long, default_value_t = 90.0)]
        g_mhz: f64,
        /// Sweep start, in flux quanta.
        #[arg(long, default_value_t = 0.38)]
        f_start: f64,
        /// Sweep end, in flux quanta.
        #[arg(long, default_value_t = 0.44)]
        f_end: f64,
        /// Grid points.
        #[arg(long, default_value_t = 121)]
        points: usize,
        /// Charge-basis cutoff N.
        #[arg(long, default_value_t = 12)]
        cutoff: u32,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        out: String,
    },
    /// Full loss budget from a device config and measured values; JSON report.
    Lossbudget {
        /// Device config file.
        #[arg(long)]
        device: PathBuf,
        /// Measured-values file (f_r_ghz, kappa_mhz, il_db, omega01_ghz,
        /// g_mhz, t1_us, t2_echo_us, t2_ramsey_us, optional q_ind/q_rad).
        #[arg(long)]
        measured: PathBuf,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        out: String,
    },
    /// Fit one measured trace; JSON with params, sigmas, residual_rms.
    Fit {
        /// Trace model.
        kind: FitKind,
        /// Input CSV with header `x,y` (x in us for time kinds, GHz for resonance).
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        out: String,
    },
    /// Histogram a value series with a Gaussian fit; JSON plus optional SVG.
    Stats {
        /// Input CSV with header `t1_us`, one value per row.
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Fixed bin count (default: square-root rule).
        #[arg(long)]
        bins: Option<usize>,
        /// Also write an SVG histogram to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        out: String,
    },
    /// Generate seeded synthetic data.
    #[command(subcommand)]
    Simulate(Simulate),
}

#[derive(Clone, Copy, ValueEnum)]
enum FitKind {
    T1,
    Ramsey,
    Echo,
    Resonance,
}

#[derive(Subcommand)]
enum Simulate {
    /// Exponential T1 decay trace; CSV `x,y`.
    T1 {
        /// Decay time [us].
        #[arg(long, default_value_t = 18.25)]
        t1_us: f64,
        /// Sample count.
        #[arg(long, default_value_t = 160)]
        points: usize,
        /// Last delay [us].
        #[arg(long, default_value_t = 80.0)]
        t_max_us: f64,
        /// Signal amplitude.
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Signal offset.
        #[arg(long, default_value_t = 0.0)]
        offset: f64,
        /// Gaussian noise sigma (signal units; default 2% of unit amplitude).
        #[arg(long, default_value_t = 0.02)]
        noise_sigma: f64,
        /// PRNG seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        out: String,
    },
    /// Ramsey fringe trace; CSV `x,y`.
    Ramsey {
        /// Coherence time [us].
        #[arg(long, default_value_t = 3.33)]
        t2_us: f64,
        /// Drive detuning [MHz].
        #[arg(long, default_value_t = 5.0)]
        detuning_mhz: f64,
        /// Fringe phase [rad].
        #[arg(long, default_value_t = 0.0)]
        phase_rad: f64,
        /// Sample count.
        #[arg(long, default_value_t = 400)]
        points: usize,
        /// Last delay [us].
        #[arg(long, default_value_t = 10.0)]
        t_max_us: f64,
        /// Signal amplitude.
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Signal offset.
        #[arg(long, default_value_t = 0.0)]
        offset: f64,
        /// Gaussian noise sigma (signal units).
        #[arg(long, default_value_t = 0.02)]
        noise_sigma: f64,
        /// PRNG seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        out: String,
    },
    /// Spin-echo fringe trace; CSV `x,y`.
    Echo {
        /// Coherence time [us].
        #[arg(long, default_value_t = 23.2)]
        t2_us: f64,
        /// Drive detuning [MHz].
        #[arg(long, default_value_t = 5.0)]
        detuning_mhz: f64,
        /// Fringe phase [rad].
        #[arg(long, default_value_t = 0.0)]
        phase_rad: f64,
        /// Sample count.
        #[arg(long, default_value_t = 240)]
        points: usize,
        /// Last delay [us].
        #[arg(long, default_value_t = 60.0)]
        t_max_us: f64,
        /// Signal amplitude.
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Signal offset.
        #[arg(long, default_value_t = 0.0)]
        offset: f64,
        /// Gaussian noise sigma (signal units).
        #[arg(long, default_value_t = 0.02)]
        noise_sigma: f64,
        /// PRNG seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        out: String,
    },
    /// Power-Lorentzian resonance sweep; CSV `x,y` with x in GHz.
    Resonance {
        /// Line center [GHz].
        #[arg(long, default_value_t = 9.796)]
        f0_ghz: f64,
        /// Linewidth [MHz].
        #[arg(long, default_value_t = 0.697)]
        kappa_mhz: f64,
        /// Sweep span [MHz], centered on f0 (at least 10 linewidths).
        #[arg(long, default_value_t = 14.0)]
        span_mhz: f64,
        /// Sample count.
        #[arg(long, default_value_t = 401)]
        points: usize,
        /// Gaussian noise sigma (signal units, unit peak).
        #[arg(long, default_value_t = 0.02)]
        noise_sigma: f64,
        /// PRNG seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        out: String,
    },
    /// Transmission map vs flux and probe; CSV `flux_frac,probe_ghz,magnitude`.
    Fluxmap {
        /// Device config file.
        #[arg(long)]
        device: PathBuf,
        /// Bare resonator frequency [GHz].
        #[arg(long, default_value_t = 9.796)]
        f_r_ghz: f64,
        /// Resonator linewidth [MHz].
        #[arg(long, default_value_t = 0.697)]
        kappa_mhz: f64,
        /// Resonator insertion loss [dB].
        #[arg(long, default_value_t = 0.461)]
        il_db: f64,
        /// Qubit-resonator coupling [MHz].
        #[arg(long, default_value_t = 90.0)]
        g_mhz: f64,
        /// Flux sweep start, in flux quanta.
        #[arg(long, default_value_t = 0.35)]
        flux_start: f64,
        /// Flux sweep end, in flux quanta.
        #[arg(long, default_value_t = 0.5)]
        flux_end: f64,
        /// Flux grid points.
        #[arg(long, default_value_t = 61)]
        flux_points: usize,
        /// Probe sweep start [GHz] (default: f_r - 0.3).
        #[arg(long)]
        probe_start: Option<f64>,
        /// Probe sweep end [GHz] (default: f_r + 0.3).
        #[arg(long)]
        probe_end: Option<f64>,
        /// Probe grid points.
        #[arg(long, default_value_t = 201)]
        probe_points: usize,
        /// Charge-basis cutoff N.
        #[arg(long, default_value_t = 12)]
        cutoff: u32,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        out: String,
    },
    /// Seeded T1 drift series; CSV `t1_us`.
    T1series {
        /// Series mean [us].
        #[arg(long, default_value_t = 16.3)]
        mean_us: f64,
        /// Series standard deviation [us].
        #[arg(long, default_value_t = 1.73)]
        sigma_us: f64,
        /// Number of values.
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Fraction of values replaced by low-side outliers, in [0, 1).
        #[arg(long, default_value_t = 0.0)]
        outlier_fraction: f64,
        /// PRNG seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        out: String,
    },
}

/// An error plus the process exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn input(error: anyhow::Error) -> Self {
        Self { code: 2, error }
    }
}

impl From<csfq_core::Error> for Failure {
    fn from(e: csfq_core::Error) -> Self {
        use csfq_core::Error as E;
        let code = match &e {
            E::Domain(_)
            | E::CutoffTooSmall { .. }
            | E::LevelIndex { .. }
            | E::TooFewPoints { .. }
            | E::WrongTraceKind { .. } => 2,
            E::ConstantSignal
            | E::TooFewPeriods { .. }
            | E::PeakAtBoundary
            | E::SingularNormalMatrix
            | E::FitDidNotConverge { .. }
            | E::DegenerateFit(_) => 3,
            E::SingularCapacitanceMatrix
            | E::EigenSolver { .. }
            | E::SweepPoint { .. }
            | E::BasisNotConverged { .. } => 4,
        };
        Self {
            code,
            error: anyhow::Error::new(e),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Spectrum {
            device,
            f_start,
            f_end,
            points,
            cutoff,
            omega12,
            out,
        } => {
            let device = config::load_device(device).map_err(Failure::input)?;
            let curve = parallel_spectrum(&device, *f_start, *f_end, *points, *cutoff)?;
            if cli.verbose {
                eprintln!(
                    "spectrum: {} flux points at cutoff {cutoff}",
                    curve.points.len()
                );
            }
            write_output(out, &csvio::format_spectrum(&curve, *omega12))
        }
        Command::Anticrossing {
            device,
            f_r_ghz,
            g_mhz,
            f_start,
            f_end,
            points,
            cutoff,
            out,
        } => {
            let device = config::load_device(device).map_err(Failure::input)?;
            let curve = anticrossing_curve(
                &device,
                *f_r_ghz,
                g_mhz / 1e3,
                *f_start,
                *f_end,
                *points,
                *cutoff,
            )?;
            if cli.verbose {
                eprintln!(
                    "anticrossing: {} flux points at cutoff {cutoff}",
                    curve.len()
                );
            }
            write_output(out, &csvio::format_anticrossing(&curve))
        }
        Command::Lossbudget {
            device,
            measured,
            out,
        } => {
            let device = config::load_device(device).map_err(Failure::input)?;
            let m = config::load_measured(measured).map_err(Failure::input)?;
            let resonator = m.resonator()?;
            let coherence =
                CoherenceSet::new(m.t1_us, m.t2_echo_us, m.t2_ramsey_us, m.omega01_ghz)?;
            let coupled = CoupledSystem::new(m.f_r_ghz, m.omega01_ghz, m.g_ghz, m.kappa_ghz)?;
            let budget = loss_report_with_channels(
                &device, &resonator, &coherence, &coupled, m.q_ind, m.q_rad,
            )?;
            let report = report::loss_report_json(&device, &resonator, &coherence, &m, &budget);
            write_output(out, &to_json(&report)?)
        }
        Command::Fit { kind, input, out } => {
            let (x, y) = csvio::read_xy(input).map_err(Failure::input)?;
            let n_points = x.len();
            let trace_kind = match kind {
                FitKind::T1 => TraceKind::T1Decay,
                FitKind::Ramsey => TraceKind::Ramsey,
                FitKind::Echo => TraceKind::Echo,
                FitKind::Resonance => TraceKind::ResonanceSweep,
            };
            let trace = TimeTrace::new(trace_kind, x, y)?;
            let fit = match kind {
                FitKind::T1 => fit_exponential_decay(&trace)?,
                FitKind::Ramsey | FitKind::Echo => fit_damped_sinusoid(&trace)?,
                FitKind::Resonance => fit_lorentzian(&trace)?,
            };
            if cli.verbose {
                eprintln!(
                    "fit: converged={} after {} iterations",
                    fit.converged, fit.iterations
                );
            }
            let model = trace.kind.as_str();
            write_output(out, &to_json(&report::fit_report(model, n_points, &fit))?)
        }
        Command::Stats {
            input,
            bins,
            svg,
            out,
        } => {
            let values = csvio::read_series(input).map_err(Failure::input)?;
            let policy = match bins {
                Some(n) => BinningPolicy::Fixed(*n),
                None => BinningPolicy::SquareRoot,
            };
            let stats = gaussian_stats(&values, policy)?;
            if cli.verbose {
                eprintln!(
                    "stats: {} values, {} bins, {} outliers",
                    values.len(),
                    stats.counts.len(),
                    stats.outliers.len()
                );
            }
            if let Some(svg_path) = svg {
                std::fs::write(svg_path, svg::histogram_svg(&stats))
                    .with_context(|| format!("cannot write {}", svg_path.display()))
                    .map_err(Failure::input)?;
            }
            write_output(out, &to_json(&report::stats_report(&stats))?)
        }
        Command::Simulate(sim) => run_simulate(cli, sim),
    }
}

fn run_simulate(cli: &Cli, sim: &Simulate) -> CmdResult {
    match sim {
        Simulate::T1 {
            t1_us,
            points,
            t_max_us,
            amplitude,
            offset,
            noise_sigma,
            seed,
            out,
        } => {
            let noise = NoiseSpec::new(*noise_sigma, *seed)?;
            let trace = gen_t1_trace(*t1_us, *points, *t_max_us, *amplitude, *offset, &noise)?;
            write_trace(cli, &trace, out)
        }
        Simulate::Ramsey {
            t2_us,
            detuning_mhz,
            phase_rad,
            points,
            t_max_us,
            amplitude,
            offset,
            noise_sigma,
            seed,
            out,
        } => {
            let noise = NoiseSpec::new(*noise_sigma, *seed)?;
            let trace = gen_ramsey_trace(
                *t2_us,
                *detuning_mhz,
                *phase_rad,
                *points,
                *t_max_us,
                *amplitude,
                *offset,
                &noise,
            )?;
            write_trace(cli, &trace, out)
        }
        Simulate::Echo {
            t2_us,
            detuning_mhz,
            phase_rad,
            points,
            t_max_us,
            amplitude,
            offset,
            noise_sigma,
            seed,
            out,
        } => {
            let noise = NoiseSpec::new(*noise_sigma, *seed)?;
            let trace = gen_echo_trace(
                *t2_us,
                *detuning_mhz,
                *phase_rad,
                *points,
                *t_max_us,
                *amplitude,
                *offset,
                &noise,
            )?;
            write_trace(cli, &trace, out)
        }
        Simulate::Resonance {
            f0_ghz,
            kappa_mhz,
            span_mhz,
            points,
            noise_sigma,
            seed,
            out,
        } => {
            let noise = NoiseSpec::new(*noise_sigma, *seed)?;
            let trace =
                gen_resonance_sweep(*f0_ghz, kappa_mhz / 1e3, span_mhz / 1e3, *points, &noise)?;
            write_trace(cli, &trace, out)
        }
        Simulate::Fluxmap {
            device,
            f_r_ghz,
            kappa_mhz,
            il_db,
            g_mhz,
            flux_start,
            flux_end,
            flux_points,
            probe_start,
            probe_end,
            probe_points,
            cutoff,
            out,
        } => {
            let device = config::load_device(device).map_err(Failure::input)?;
            let resonator =
                csfq_core::ResonatorParams::from_measurement(*f_r_ghz, kappa_mhz / 1e3, *il_db)?;
            let flux = spectrum::flux_grid(*flux_start, *flux_end, *flux_points)?;
            let p_lo = probe_start.unwrap_or(f_r_ghz - 0.3);
            let p_hi = probe_end.unwrap_or(f_r_ghz + 0.3);
            let probe = linspace(p_lo, p_hi, *probe_points).map_err(Failure::input)?;
            let map = gen_flux_map(&device, &resonator, g_mhz / 1e3, &flux, &probe, *cutoff)?;
            if cli.verbose {
                eprintln!(
                    "fluxmap: {} flux x {} probe points at cutoff {cutoff}",
                    flux.len(),
                    probe.len()
                );
            }
            write_output(out, &csvio::format_flux_map(&map))
        }
        Simulate::T1series {
            mean_us,
            sigma_us,
            n,
            outlier_fraction,
            seed,
            out,
        } => {
            let values = gen_t1_series(*mean_us, *sigma_us, *n, *seed, *outlier_fraction)?;
            write_output(out, &csvio::format_series(&values))
        }
    }
}

/// Flux sweep parallelized across grid points; the first point runs the
/// charge-basis convergence check, the rest reuse it.
fn parallel_spectrum(
    device: &DeviceParams,
    f_start: f64,
    f_end: f64,
    points: usize,
    cutoff: u32,
) -> Result<SpectrumCurve, Failure> {
    let grid = spectrum::flux_grid(f_start, f_end, points)?;
    let spec = QubitHamiltonianSpec::new(*device, grid[0], cutoff)?;
    let levels = spectrum::eigenlevels(&spec, 3)?;
    let mut curve = vec![SpectrumPoint {
        flux_frac: grid[0],
        omega01_ghz: levels.levels_ghz[1],
        omega12_ghz: levels.levels_ghz[2] - levels.levels_ghz[1],
    }];
    let rest: Result<Vec<_>, csfq_core::Error> = grid[1..]
        .par_iter()
        .map(|&f| {
            spectrum::transitions_at_unchecked(device, f, cutoff).map(|(w01, w12)| SpectrumPoint {
                flux_frac: f,
                omega01_ghz: w01,
                omega12_ghz: w12,
            })
        })
        .collect();
    curve.extend(rest?);
    Ok(SpectrumCurve { points: curve })
}

fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(anyhow!(
            "grid bounds must satisfy lo < hi, got [{lo}, {hi}]"
        ));
    }
    if n < 2 {
        return Err(anyhow!("grid needs at least 2 points, got {n}"));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| lo + step * i as f64).collect())
}

fn write_trace(cli: &Cli, trace: &TimeTrace, out: &str) -> CmdResult {
    if cli.verbose {
        eprintln!(
            "simulate: {} points, kind {}",
            trace.x.len(),
            trace.kind.as_str()
        );
    }
    write_output(out, &csvio::format_xy(&trace.x, &trace.y))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .context("JSON serialization")
        .map_err(Failure::input)?;
    text.push('\n');
    Ok(text)
}

/// Writes to a file, or to stdout when the path is `-`.
fn write_output(out: &str, content: &str) -> CmdResult {
    if out == "-" {
        std::io::stdout()
            .write_all(content.as_bytes())
            .context("writing to stdout")
            .map_err(Failure::input)?;
    } else {
        std::fs::write(out, content)
            .with_context(|| format!("cannot write {out}"))
            .map_err(Failure::input)?;
    }
    Ok(())
}
