//! Modeling and characterization toolkit for a capacitively shunted flux
//! qubit coupled to a coplanar-waveguide resonator.
//!
//! The crate covers the full chain from fabrication parameters to measured
//! coherence numbers:
//!
//! - [`circuit`] — junction geometry, capacitances, charging and Josephson
//!   energies of the three-junction, capacitively shunted circuit;
//! - [`spectrum`] — exact diagonalization of the two-island charge-basis
//!   Hamiltonian: transition frequencies, anharmonicity, flux sweeps;
//! - [`cavity`] — Jaynes-Cummings dressed states, vacuum Rabi splitting and
//!   the Purcell limit for the qubit-resonator system;
//! - [`loss`] — resonator quality factors, the dielectric loss budget and
//!   coherence-time bookkeeping (T1, T2, pure dephasing);
//! - [`fit`] — Levenberg-Marquardt fits of the four standard measurement
//!   models plus Gaussian histogram statistics;
//! - [`synth`] — seeded, bit-reproducible synthetic measurement data that
//!   round-trips through the fits;
//! - [`rng`] — the deterministic PRNG stack (splitmix64-seeded xoshiro256++
//!   with a Box-Muller Gaussian transform) behind the generators.
//!
//! `no_std`-compatible (with `alloc`) when built without the default `std`
//! feature; the optional `serde` feature derives serializers for the report
//! types.

#![cfg_attr(not(feature = "std"), no_std)]
// Domain guards use `!(x > 0.0)` so that NaN lands on the rejecting branch;
// the `x <= 0.0` form clippy prefers would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod cavity;
pub mod circuit;
pub mod error;
pub mod fit;
pub mod loss;
pub mod rng;
pub mod spectrum;
pub mod synth;

pub use error::{Error, Result};

// Re-exported so downstream users match the exact versions used here.
pub use nalgebra;
pub use num_complex;

pub use cavity::{AnticrossingPoint, CoupledSystem};
pub use circuit::{DeviceParams, JunctionGeometry, PhysicalConstants};
pub use fit::{BinningPolicy, FitResult, HistogramStats, TimeTrace, TraceKind};
pub use loss::{CoherenceSet, LossBudget, PureDephasing, ResonatorParams};
pub use rng::Xoshiro256PlusPlus;
pub use spectrum::{EnergyLevels, QubitHamiltonianSpec, SpectrumCurve, SpectrumPoint};
pub use synth::{FluxMap, NoiseSpec};
