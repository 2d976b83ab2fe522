//! Cross-checks of the charge-basis spectrum against independent
//! constructions: a from-scratch Hamiltonian assembly diagonalized with a
//! hand-rolled complex Jacobi solver, the exactly enumerable zero-tunneling
//! limit, and frozen reference frequencies.

use csfq_core::circuit::{DeviceParams, CODATA};
use csfq_core::num_complex::Complex;
use csfq_core::rng::Xoshiro256PlusPlus;
use csfq_core::spectrum::{
    build_hamiltonian, eigenlevels, transitions_at_unchecked, QubitHamiltonianSpec,
};

type C64 = Complex<f64>;

/// Independent kinetic coefficients: inverse of [[C+C', C'], [C', C+C']]
/// rescaled so the symmetric-mode charging energy matches `ec_ghz`.
fn kinetic_coeffs(dev: &DeviceParams) -> (f64, f64) {
    let c = dev.c_large_ff * 1e-15;
    let cp = dev.alpha * c + dev.c_shunt_ff * 1e-15;
    let det = c * (c + 2.0 * cp);
    let c_sigma_geom = 0.5 * (c + 2.0 * cp);
    let c_sigma_target = CODATA.e * CODATA.e / (2.0 * dev.ec_ghz * 1e9 * CODATA.h);
    let lambda = c_sigma_target / c_sigma_geom;
    ((c + cp) / (det * lambda), -cp / (det * lambda))
}

/// From-scratch dense Hamiltonian in a plain Vec-of-rows layout.
fn assemble_reference(dev: &DeviceParams, flux_frac: f64, n: i64) -> Vec<Vec<C64>> {
    let m = (2 * n + 1) as usize;
    let dim = m * m;
    let (a, b) = kinetic_coeffs(dev);
    let kin_scale = 2.0 * CODATA.e * CODATA.e / CODATA.h / 1e9;
    let phi = 2.0 * std::f64::consts::PI * flux_frac;
    let hop = -0.5 * dev.ej_ghz;
    let loop_hop = C64::new(phi.cos(), -phi.sin()) * (-0.5 * dev.alpha * dev.ej_ghz);

    let mut h = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    let idx = |n1: i64, n2: i64| ((n1 + n) * (2 * n + 1) + (n2 + n)) as usize;
    for n1 in -n..=n {
        for n2 in -n..=n {
            let i = idx(n1, n2);
            h[i][i] += C64::new(
                kin_scale * (a * ((n1 * n1 + n2 * n2) as f64) + 2.0 * b * ((n1 * n2) as f64)),
                0.0,
            );
            if n1 < n {
                let j = idx(n1 + 1, n2);
                h[j][i] += C64::new(hop, 0.0);
                h[i][j] += C64::new(hop, 0.0);
            }
            if n2 < n {
                let j = idx(n1, n2 + 1);
                h[j][i] += C64::new(hop, 0.0);
                h[i][j] += C64::new(hop, 0.0);
            }
            if n1 < n && n2 < n {
                let j = idx(n1 + 1, n2 + 1);
                h[j][i] += loop_hop;
                h[i][j] += loop_hop.conj();
            }
        }
    }
    h
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices. Slow and
/// simple, used only as an oracle.
// Index loops keep the pivot/rotation bookkeeping in its textbook shape.
#[allow(clippy::needless_range_loop)]
fn jacobi_eigenvalues(mut h: Vec<Vec<C64>>) -> Vec<f64> {
    let dim = h.len();
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..dim {
            for q in (p + 1)..dim {
                off += h[p][q].norm_sqr();
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = h[p][q];
                if apq.norm() < 1e-300 {
                    continue;
                }
                let app = h[p][p].re;
                let aqq = h[q][q].re;
                // Phase that makes the pivot real, then a real Jacobi
                // rotation on the [[app, |apq|], [|apq|, aqq]] block.
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Column rotation: [vp, vq] <- [c vp - s* conj(phase) vq,
                //                              s phase vp + c vq]
                for i in 0..dim {
                    let hip = h[i][p];
                    let hiq = h[i][q];
                    h[i][p] = hip * c - hiq * phase.conj() * s;
                    h[i][q] = hip * phase * s + hiq * c;
                }
                for i in 0..dim {
                    let hpi = h[p][i];
                    let hqi = h[q][i];
                    h[p][i] = hpi * c - hqi * phase * s;
                    h[q][i] = hpi * phase.conj() * s + hqi * c;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..dim).map(|i| h[i][i].re).collect();
    vals.sort_by(f64::total_cmp);
    vals
}

#[test]
fn construction_matches_independent_assembly() {
    let dev = DeviceParams::default();
    for &flux in &[0.0, 0.33, 0.5] {
        let spec = QubitHamiltonianSpec::new(dev, flux, 4).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let href = assemble_reference(&dev, flux, 4);
        let dim = href.len();
        assert_eq!(h.nrows(), dim);
        for i in 0..dim {
            for j in 0..dim {
                let d = h[(i, j)] - href[i][j];
                assert!(
                    d.norm() < 1e-12,
                    "entry ({i},{j}) differs at flux {flux}: {} vs {}",
                    h[(i, j)],
                    href[i][j]
                );
            }
        }
    }
}

#[test]
fn low_transitions_match_jacobi_oracle() {
    let dev = DeviceParams::default();
    // Small basis: the oracle check targets the solver, not convergence.
    let cutoff = 4u32;
    for &flux in &[0.33, 0.5] {
        let vals = jacobi_eigenvalues(assemble_reference(&dev, flux, cutoff as i64));
        let (w01, w12) = transitions_at_unchecked(&dev, flux, cutoff).unwrap();
        let j01 = vals[1] - vals[0];
        let j12 = vals[2] - vals[1];
        assert!(
            ((w01 - j01) / j01).abs() < 1e-9,
            "omega01 at flux {flux}: {w01} vs jacobi {j01}"
        );
        assert!(
            ((w12 - j12) / j12).abs() < 1e-9,
            "omega12 at flux {flux}: {w12} vs jacobi {j12}"
        );
    }
}

#[test]
fn zero_tunneling_spectrum_is_enumerable() {
    // With E_J = 0 the Hamiltonian is diagonal in charge: levels are exactly
    // the enumerated charging energies, independent of cutoff.
    let dev = DeviceParams {
        ej_ghz: 0.0,
        ..DeviceParams::default()
    };
    let cutoff = 4i64;
    let (a, b) = kinetic_coeffs(&dev);
    let kin_scale = 2.0 * CODATA.e * CODATA.e / CODATA.h / 1e9;
    let mut expected = Vec::new();
    for n1 in -cutoff..=cutoff {
        for n2 in -cutoff..=cutoff {
            expected.push(
                kin_scale * (a * ((n1 * n1 + n2 * n2) as f64) + 2.0 * b * ((n1 * n2) as f64)),
            );
        }
    }
    expected.sort_by(f64::total_cmp);
    let ground = expected[0];
    assert_eq!(ground, 0.0, "charge vacuum is the ground state");

    let spec = QubitHamiltonianSpec::new(dev, 0.5, cutoff as u32).unwrap();
    let levels = eigenlevels(&spec, 12).unwrap();
    assert_eq!(levels.convergence_delta_ghz, 0.0);
    for (k, (got, want)) in levels.levels_ghz.iter().zip(&expected).enumerate() {
        let tol = 1e-12 * want.abs().max(1.0);
        assert!(
            (got - (want - ground)).abs() < tol,
            "level {k}: {got} vs enumerated {want}"
        );
    }
}

#[test]
fn charging_energy_scale_is_exact() {
    // Pure kinetic spectrum scales exactly linearly in E_C (lambda scaling
    // is a single multiplicative factor, and doubling is exact in binary).
    let dev = DeviceParams {
        ej_ghz: 0.0,
        ..DeviceParams::default()
    };
    let doubled = dev.with_charging_energy(2.0 * dev.ec_ghz).unwrap();

    let base = eigenlevels(&QubitHamiltonianSpec::new(dev, 0.5, 4).unwrap(), 10).unwrap();
    let scaled = eigenlevels(&QubitHamiltonianSpec::new(doubled, 0.5, 4).unwrap(), 10).unwrap();
    for (e1, e2) in base.levels_ghz.iter().zip(&scaled.levels_ghz) {
        assert!(
            (e2 - 2.0 * e1).abs() <= 1e-14 * e1.abs().max(1.0),
            "{e2} vs 2 x {e1}"
        );
    }
}

#[test]
fn cutoff_convergence_window_at_sweet_spot() {
    let dev = DeviceParams::default();
    let w = |n: u32| transitions_at_unchecked(&dev, 0.5, n).unwrap().0;
    let w8 = w(8);
    let w10 = w(10);
    let w12 = w(12);
    let w14 = w(14);
    let w16 = w(16);
    // Successive increments shrink monotonically...
    let d810 = (w8 - w10).abs();
    let d1012 = (w10 - w12).abs();
    let d1214 = (w12 - w14).abs();
    assert!(d810 > d1012 && d1012 > d1214, "{d810} {d1012} {d1214}");
    // ...and the 10-vs-16 gap sits in the single-digit-kHz window.
    let gap = (w10 - w16).abs();
    assert!(
        gap > 1e-6 && gap < 1e-5,
        "10-vs-16 gap {gap} GHz outside (1, 10) kHz"
    );
}

#[test]
fn frozen_reference_frequencies_off_sweet_spot() {
    let dev = DeviceParams::default();
    let (w45, _) = transitions_at_unchecked(&dev, 0.45, 12).unwrap();
    let (w48, _) = transitions_at_unchecked(&dev, 0.48, 12).unwrap();
    assert!((w45 - 7.994390058).abs() < 2e-5, "omega01(0.45) = {w45}");
    assert!((w48 - 6.708869253).abs() < 2e-5, "omega01(0.48) = {w48}");
    // The qubit crosses the 9.796 GHz resonator at flux 0.405487.
    let (wx, _) = transitions_at_unchecked(&dev, 0.405487, 12).unwrap();
    assert!((wx - 9.796).abs() < 0.001, "crossing frequency {wx}");
}

#[test]
fn sweet_spot_symmetry_property_loop() {
    let dev = DeviceParams::default();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(5150);
    for _ in 0..5 {
        let delta = rng.next_in_range(0.0, 0.05);
        let (lo, _) = transitions_at_unchecked(&dev, 0.5 - delta, 6).unwrap();
        let (hi, _) = transitions_at_unchecked(&dev, 0.5 + delta, 6).unwrap();
        assert!(
            ((lo - hi) / lo).abs() < 1e-9,
            "asymmetry at delta {delta}: {lo} vs {hi}"
        );
    }
}
