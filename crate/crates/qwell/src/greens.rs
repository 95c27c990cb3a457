//! Eigenfunction densities from the diagonal Green's function.
//!
//! For `E` just below the real axis the Green's function of the well can be
//! written through the wave impedances of the two trial fields satisfying
//! the left and right boundary conditions. Where both fields are evaluated
//! at the same in-well point `x`,
//!
//! ```text
//!     G(x, x, E) = (2i/hbar) / (z_left(x) - z_right(x))
//! ```
//!
//! with the sign fixed so `Im G(x, x, E_n - i eps) > 0` near an eigenvalue
//! (spectral positivity). The side impedances continue the in-well phase
//! description to complex energy:
//!
//! ```text
//!     z_side(x) = z2 tan(k2 x - i phi_side)
//! ```
//!
//! At an eigenvalue both phases coincide (mod pi), the two impedances merge,
//! and `G` develops the pole `|psi_n(x)|^2 / (-i eps)`; hence
//!
//! ```text
//!     |psi_n(x)|^2 = lim_{eps->0} eps * Im G(x, x, E_n - i eps)
//! ```
//!
//! The limit is taken numerically over a decreasing `eps` schedule with
//! two-point Richardson extrapolation, which removes the O(eps) bias of the
//! finite-`eps` evaluations.

use num_complex::Complex64;

use crate::classical;
use crate::error::{QwellError, Result};
use crate::impedance::phases_at;
use crate::potential::{PotentialProfile, UnitSystem};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default `eps` schedule for [`eigenfunction_density`].
pub const DEFAULT_EPS_SCHEDULE: [f64; 4] = [1e-4, 1e-5, 1e-6, 1e-7];

/// One evaluation of the two side impedances at complex energy.
#[derive(Debug, Clone, Copy)]
pub struct GreensProbe {
    pub x: f64,
    pub energy: Complex64,
    pub z_left: Complex64,
    pub z_right: Complex64,
    /// Well interval the in-well formulas live on.
    pub interval: (f64, f64),
}

/// Impedances at `x` of the trial fields obeying the left and the right
/// decay condition, both continued to complex energy `e` (`Im e <= 0`).
/// `x` must lie strictly inside the well. A `tan` pole at the sample point
/// (a node of the trial field) is reported; callers nudge `x` by `1e-9 a`.
pub fn side_impedances(
    profile: &PotentialProfile,
    units: &UnitSystem,
    x: f64,
    e: Complex64,
) -> Result<(Complex64, Complex64)> {
    let tr = profile.as_three_region()?;
    if e.im > 0.0 {
        return Err(QwellError::OutOfRange {
            what: "Im(energy)",
            value: e.im,
            requirement: "on or below the real axis",
        });
    }
    let xi = x - tr.x0;
    if !(xi > 0.0 && xi < tr.width) {
        return Err(QwellError::OutsideWell {
            x,
            low: tr.x0,
            high: tr.x0 + tr.width,
        });
    }
    let k2 = ((e - tr.u2) * 2.0 * units.mass).sqrt() / units.hbar;
    let z2 = I * units.hbar * k2 / units.mass;
    let pair = phases_at(&tr, units, e);
    let z_left = z2 * (k2 * xi - I * pair.phi_left).tan();
    let z_right = z2 * (k2 * xi - I * pair.phi_right).tan();
    if !z_left.is_finite() || !z_right.is_finite() {
        return Err(QwellError::ImpedancePole { x });
    }
    Ok((z_left, z_right))
}

/// Bundled side-impedance evaluation.
pub fn probe(
    profile: &PotentialProfile,
    units: &UnitSystem,
    x: f64,
    e: Complex64,
) -> Result<GreensProbe> {
    let (z_left, z_right) = side_impedances(profile, units, x, e)?;
    let tr = profile.as_three_region()?;
    Ok(GreensProbe {
        x,
        energy: e,
        z_left,
        z_right,
        interval: (tr.x0, tr.x0 + tr.width),
    })
}

/// Diagonal Green's function `G(x, x, e) = (2i/hbar)/(z_left - z_right)`.
/// Exactly at a real eigenvalue the impedances coincide and the pole is
/// reported as an error; probe at `E - i eps` instead.
pub fn green_diagonal(
    profile: &PotentialProfile,
    units: &UnitSystem,
    x: f64,
    e: Complex64,
) -> Result<Complex64> {
    let (z_left, z_right) = side_impedances(profile, units, x, e)?;
    let diff = z_left - z_right;
    if diff.norm() == 0.0 {
        return Err(QwellError::GreensPoleAtEigenvalue { x });
    }
    Ok(2.0 * I / units.hbar / diff)
}

/// `|psi_n(x)|^2` from the `eps -> 0` limit of `eps * Im G(x, x, E_n - i eps)`.
///
/// `eps_schedule` must be strictly decreasing and positive; successive pairs
/// are Richardson-extrapolated in `eps` and the run is accepted once the
/// extrapolants stabilize to `1e-4` relative (with an absolute floor three
/// decades below the in-well density scale, so exact nodes cannot fail a
/// relative test on roundoff-sized values). Positions on the well edges are
/// nudged inside by `1e-9 a`; a `tan`-pole hit at a sample is nudged the
/// same way.
pub fn eigenfunction_density(
    profile: &PotentialProfile,
    units: &UnitSystem,
    x: f64,
    energy: f64,
    eps_schedule: &[f64],
) -> Result<f64> {
    let tr = profile.as_three_region()?;
    classical::verify_root(&tr, units, energy)?;
    if eps_schedule.len() < 2 {
        return Err(QwellError::BadEpsSchedule { reason: "need at least two entries" });
    }
    for pair in eps_schedule.windows(2) {
        if !(pair[0] > pair[1]) {
            return Err(QwellError::BadEpsSchedule { reason: "entries must strictly decrease" });
        }
    }
    if !(eps_schedule[eps_schedule.len() - 1] > 0.0) {
        return Err(QwellError::BadEpsSchedule { reason: "entries must be positive" });
    }

    let nudge = 1e-9 * tr.width;
    let x = x.clamp(tr.x0 + nudge, tr.x0 + tr.width - nudge);
    let density_at = |eps: f64, x: f64| -> Result<f64> {
        let e = Complex64::new(energy, -eps);
        let g = green_diagonal(profile, units, x, e)?;
        Ok(eps * g.im)
    };
    let mut raw = Vec::with_capacity(eps_schedule.len());
    for &eps in eps_schedule {
        let d = match density_at(eps, x) {
            Ok(d) => d,
            Err(QwellError::ImpedancePole { .. }) => density_at(eps, x + nudge)?,
            Err(e) => return Err(e),
        };
        raw.push(d);
    }

    // two-point Richardson in eps over successive schedule pairs
    let extrap: Vec<f64> = raw
        .windows(2)
        .zip(eps_schedule.windows(2))
        .map(|(d, e)| (e[0] * d[1] - e[1] * d[0]) / (e[0] - e[1]))
        .collect();
    let kap1 = tr.kappa1(units, energy);
    let kap3 = tr.kappa3(units, energy);
    let density_scale = 2.0 / (tr.width + (kap1 + kap3) / (kap1 * kap3));
    let floor = 1e-3 * density_scale;
    for pair in extrap.windows(2) {
        let diff = (pair[1] - pair[0]).abs();
        if diff > 1e-4 * pair[1].abs().max(floor) {
            return Err(QwellError::ConvergenceFailure {
                what: "eps extrapolation",
                detail: format!(
                    "successive extrapolants {} and {} differ beyond tolerance at x = {x}",
                    pair[0], pair[1]
                ),
            });
        }
    }
    Ok(*extrap.last().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{find_bound_states, wavefunction, DEFAULT_RESOLUTION};
    use crate::impedance::{phase_gap_mod_pi, real_phase};
    use approx::assert_abs_diff_eq;

    fn pet_profile() -> (PotentialProfile, UnitSystem) {
        (
            PotentialProfile::new(vec![0.0, 2.0], vec![5.0, -10.0, 8.0]).unwrap(),
            UnitSystem::default(),
        )
    }

    #[test]
    fn side_impedances_split_off_resonance_and_merge_at_roots() {
        let (p, u) = pet_profile();
        let x = 0.7;
        let (zl, zr) = side_impedances(&p, &u, x, Complex64::new(-5.0, 0.0)).unwrap();
        assert!((zl - zr).norm() > 1e-3);
        for state in find_bound_states(&p, &u, DEFAULT_RESOLUTION).unwrap() {
            let z2_scale = (2.0 * (state.energy + 10.0)).sqrt();
            let (zl, zr) = side_impedances(&p, &u, x, Complex64::new(state.energy, 0.0)).unwrap();
            assert!(
                (zl - zr).norm() < 1e-8 * z2_scale,
                "E = {}: zl = {zl}, zr = {zr}",
                state.energy
            );
        }
    }

    #[test]
    fn side_impedances_reject_upper_half_plane_and_outside_positions() {
        let (p, u) = pet_profile();
        assert!(matches!(
            side_impedances(&p, &u, 0.5, Complex64::new(-5.0, 1e-3)),
            Err(QwellError::OutOfRange { .. })
        ));
        assert!(matches!(
            side_impedances(&p, &u, -0.5, Complex64::new(-5.0, 0.0)),
            Err(QwellError::OutsideWell { .. })
        ));
        assert!(matches!(
            side_impedances(&p, &u, 2.0, Complex64::new(-5.0, 0.0)),
            Err(QwellError::OutsideWell { .. })
        ));
    }

    #[test]
    fn side_impedance_equals_log_derivative_of_matched_field_at_real_energy() {
        // at real E the left trial field inside the well is
        // cos(k2 x) + (kappa1/k2) sin(k2 x) up to scale; its impedance
        // -i psi'/psi (hbar = m = 1) must agree with the tan form
        let (p, u) = pet_profile();
        let e = -4.2f64;
        let kap1 = (2.0 * (5.0 - e)).sqrt();
        let k2 = (2.0 * (e + 10.0)).sqrt();
        for i in 1..10 {
            let x = 0.2 * i as f64;
            let (zl, _) = side_impedances(&p, &u, x, Complex64::new(e, 0.0)).unwrap();
            let psi = (k2 * x).cos() + kap1 / k2 * (k2 * x).sin();
            let dpsi = -k2 * (k2 * x).sin() + kap1 * (k2 * x).cos();
            let expect = -I * dpsi / psi;
            assert!(
                (zl - expect).norm() <= 1e-9 * expect.norm().max(1.0),
                "x = {x}: {zl} vs {expect}"
            );
        }
    }

    #[test]
    fn green_diagonal_has_positive_imaginary_part_near_eigenvalues() {
        let (p, u) = pet_profile();
        for state in find_bound_states(&p, &u, DEFAULT_RESOLUTION).unwrap() {
            for x in [0.3, 1.1, 1.8] {
                let g = green_diagonal(&p, &u, x, Complex64::new(state.energy, -1e-6)).unwrap();
                assert!(g.im > 0.0, "Im G = {} at E = {}, x = {x}", g.im, state.energy);
            }
        }
    }

    #[test]
    fn eps_times_im_g_vanishes_between_eigenvalues() {
        let (p, u) = pet_profile();
        // -5.0 sits between the second and third state
        let eps = 1e-8;
        let g = green_diagonal(&p, &u, 0.7, Complex64::new(-5.0, -eps)).unwrap();
        assert!((eps * g.im).abs() < 1e-6);
    }

    #[test]
    fn swapping_side_labels_flips_green_exactly() {
        let (p, u) = pet_profile();
        let e = Complex64::new(-6.4657893, -1e-6);
        let (zl, zr) = side_impedances(&p, &u, 0.9, e).unwrap();
        let g_forward = 2.0 * I / (zl - zr);
        let g_swapped = 2.0 * I / (zr - zl);
        assert_eq!(g_forward, -g_swapped);
    }

    #[test]
    fn extrapolated_density_matches_classical_square() {
        let (p, u) = pet_profile();
        for state in find_bound_states(&p, &u, DEFAULT_RESOLUTION).unwrap() {
            for i in 0..200 {
                let x = 2.0 * (i as f64 + 0.5) / 200.0;
                let d = eigenfunction_density(&p, &u, x, state.energy, &DEFAULT_EPS_SCHEDULE)
                    .unwrap();
                let psi = wavefunction(&p, &u, &state, x).unwrap();
                assert_abs_diff_eq!(d, psi * psi, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn density_vanishes_at_interior_nodes() {
        let (p, u) = pet_profile();
        let states = find_bound_states(&p, &u, DEFAULT_RESOLUTION).unwrap();
        let state = &states[1];
        let e = state.energy;
        let k2 = (2.0 * (e + 10.0)).sqrt();
        let kap1 = (2.0 * (5.0 - e)).sqrt();
        let kap3 = (2.0 * (8.0 - e)).sqrt();
        let phi = state.phase.unwrap();
        // first zero of cos(k2 x + phi) inside the well
        let node = (std::f64::consts::FRAC_PI_2 - phi) / k2;
        assert!(node > 0.0 && node < 2.0);
        let peak = 2.0 / (2.0 + (kap1 + kap3) / (kap1 * kap3));
        let d = eigenfunction_density(&p, &u, node, e, &DEFAULT_EPS_SCHEDULE).unwrap();
        assert!(d.abs() < 1e-6 * peak, "density {d} at node {node}");
    }

    #[test]
    fn density_integral_with_tails_is_one() {
        let (p, u) = pet_profile();
        let state = &find_bound_states(&p, &u, DEFAULT_RESOLUTION).unwrap()[0];
        let e = state.energy;
        // trapezoid over the well on a fine grid plus closed-form tails
        let n = 2000;
        let mut well = 0.0;
        for i in 0..=n {
            let x = 2.0 * i as f64 / n as f64;
            let d = eigenfunction_density(&p, &u, x, e, &DEFAULT_EPS_SCHEDULE).unwrap();
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            well += w * d * 2.0 / n as f64;
        }
        let co = crate::classical::matching_coefficients(&p, &u, e).unwrap();
        let kap1 = (2.0 * (5.0 - e)).sqrt();
        let kap3 = (2.0 * (8.0 - e)).sqrt();
        let tails = co.c11 * co.c11 / (2.0 * kap1)
            + co.c32 * co.c32 * (-4.0 * kap3).exp() / (2.0 * kap3);
        // trapezoid truncation on this grid dominates the eps error
        assert_abs_diff_eq!(well + tails, 1.0, epsilon = 1e-5);
    }

    #[test]
    fn impedance_slopes_in_eps_are_purely_imaginary_in_log_derivative_form() {
        // d z_side / d eps at an eigenvalue: multiplying by i maps the
        // impedances to the log-derivative fields psi'/psi, whose energy
        // slope is a positive (left) or negative (right) real integral of
        // psi^2/psi(x)^2; so in this module's convention the slopes must be
        // real, positive on the left and negative on the right
        let (p, u) = pet_profile();
        let state = &find_bound_states(&p, &u, DEFAULT_RESOLUTION).unwrap()[0];
        let e = state.energy;
        let x = 0.8;
        let eps = 1e-8;
        let (zl1, zr1) = side_impedances(&p, &u, x, Complex64::new(e, -eps)).unwrap();
        let (zl2, zr2) = side_impedances(&p, &u, x, Complex64::new(e, -2.0 * eps)).unwrap();
        let dzl = (zl2 - zl1) / eps;
        let dzr = (zr2 - zr1) / eps;
        assert!(dzl.arg().abs() < 1e-4, "arg dzl = {}", dzl.arg());
        assert!(
            (std::f64::consts::PI - dzr.arg().abs()) < 1e-4,
            "arg dzr = {}",
            dzr.arg()
        );
    }

    #[test]
    fn schedule_validation_rejects_bad_inputs() {
        let (p, u) = pet_profile();
        let e = find_bound_states(&p, &u, DEFAULT_RESOLUTION).unwrap()[0].energy;
        for schedule in [&[1e-4][..], &[1e-4, 1e-4][..], &[1e-5, 1e-4][..]] {
            assert!(matches!(
                eigenfunction_density(&p, &u, 1.0, e, schedule),
                Err(QwellError::BadEpsSchedule { .. })
            ));
        }
        assert!(matches!(
            eigenfunction_density(&p, &u, 1.0, -5.0, &DEFAULT_EPS_SCHEDULE),
            Err(QwellError::NotABoundState { .. })
        ));
    }

    #[test]
    fn probe_carries_interval_and_energy() {
        let (p, u) = pet_profile();
        let e = Complex64::new(-5.0, -1e-7);
        let pr = probe(&p, &u, 1.3, e).unwrap();
        assert_eq!(pr.interval, (0.0, 2.0));
        assert_eq!(pr.energy, e);
        assert_eq!(pr.x, 1.3);
        let (zl, zr) = side_impedances(&p, &u, 1.3, e).unwrap();
        assert_eq!(pr.z_left, zl);
        assert_eq!(pr.z_right, zr);
    }

    #[test]
    fn phases_at_complex_energy_continue_the_real_axis_values() {
        // sanity anchor for the complex continuation used by the side
        // impedances: as eps -> 0 the phases tend to the real-energy pair
        let (p, u) = pet_profile();
        let tr_e = -3.3;
        let real_pair = crate::impedance::phases(&p, &u, tr_e).unwrap();
        let eps_pair_im = {
            let tr = Complex64::new(tr_e, -1e-9);
            let profile3 = p.clone();
            // re-evaluate through the public side-impedance route by
            // comparing the implied phase gap
            let (zl, zr) = side_impedances(&profile3, &u, 0.6, tr).unwrap();
            (zl, zr)
        };
        let k2 = (2.0 * (tr_e + 10.0)).sqrt();
        let z2 = Complex64::new(0.0, k2);
        let zl_real = z2 * Complex64::new(k2 * 0.6 + real_phase(real_pair.phi_left), 0.0).tan();
        let zr_real = z2 * Complex64::new(k2 * 0.6 + real_phase(real_pair.phi_right), 0.0).tan();
        assert!((eps_pair_im.0 - zl_real).norm() < 1e-6 * zl_real.norm().max(1.0));
        assert!((eps_pair_im.1 - zr_real).norm() < 1e-6 * zr_real.norm().max(1.0));
        let gap = phase_gap_mod_pi(real_phase(real_pair.phi_left), real_phase(real_pair.phi_right));
        assert!(gap > 1e-3);
    }
}
