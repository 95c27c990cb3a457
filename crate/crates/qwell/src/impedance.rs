//! Bound states via quantum wave impedances.
//!
//! The wave impedance of a field `psi` is `Z(x) = (hbar/(i m)) psi'(x)/psi(x)`.
//! Solutions of fixed exponential/oscillatory type have constant impedance:
//! a rightward-decaying tail `e^{-kappa x}` carries `Z = +hbar kappa/m`, a
//! leftward-decaying one `e^{+kappa x}` carries `Z = -hbar kappa/m`, and a
//! well region supports `z2 = i hbar k2/m`. A region of length `L` and
//! characteristic impedance `z0` transforms a load `Z_L` at its far end into
//!
//! ```text
//!     Z_in = z0 (Z_L cos(kL) + i z0 sin(kL)) / (z0 cos(kL) + i Z_L sin(kL))
//! ```
//!
//! seen at its near end, the transmission-line input-impedance formula.
//! Transforming the right tail's load `z3` through the well and demanding it
//! match the left tail's `-z1` reproduces exactly the classical dispersion
//! relation; the residual here clears the complex denominator so bisection
//! can work on a continuous real function.
//!
//! The module also carries the phase description of the same condition: the
//! in-well impedance field seen from either side is `z2 tan(k2 x - i phi)`
//! with complex phases
//!
//! ```text
//!     phi_L = -(1/2) Ln((i kappa1 + k2)/(k2 - i kappa1))
//!     phi_R = -(1/2) Ln(e^{2 i k2 a} (k2 - i kappa3)/(k2 + i kappa3))
//! ```
//!
//! (principal branch). At real energies both are purely imaginary and their
//! imaginary parts are the real phase angles; a bound state is exactly the
//! condition `phi_L = phi_R (mod pi)`, and at a root the normalized in-well
//! density takes the closed form
//! `2 (a + (kappa1+kappa3)/(kappa1 kappa3))^-1 cos^2(k2 x + phi)`.

use num_complex::Complex64;

use crate::classical::{self, BoundState};
use crate::error::{QwellError, Result};
use crate::potential::{PotentialProfile, RegionWaveNumber, ThreeRegion, UnitSystem, WaveKind};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Characteristic impedance of one region at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicImpedance {
    pub value: Complex64,
    pub region_kind: WaveKind,
}

/// `hbar kappa/m` (real, evanescent) or `i hbar k/m` (imaginary,
/// propagating) for the given region wavenumber.
pub fn characteristic_impedance(
    wn: &RegionWaveNumber,
    units: &UnitSystem,
) -> Result<CharacteristicImpedance> {
    if !(wn.magnitude > 0.0) {
        return Err(QwellError::NonPositive {
            what: "wavenumber magnitude",
            value: wn.magnitude,
        });
    }
    let scale = units.hbar * wn.magnitude / units.mass;
    let value = match wn.kind {
        WaveKind::Evanescent => Complex64::new(scale, 0.0),
        WaveKind::Propagating => Complex64::new(0.0, scale),
    };
    Ok(CharacteristicImpedance { value, region_kind: wn.kind })
}

/// Transforms `z_load` at the far end of a line of characteristic impedance
/// `z0`, real wavenumber `k` and length `length` into the impedance seen at
/// the near end. A vanishing denominator (load resonant with the section)
/// is reported as an error; root-scanning callers treat it as a sign
/// sentinel rather than a value.
pub fn input_impedance(
    z0: &CharacteristicImpedance,
    z_load: Complex64,
    k: f64,
    length: f64,
) -> Result<Complex64> {
    let (s, c) = (k * length).sin_cos();
    let num = z_load * c + I * z0.value * s;
    let den = z0.value * c + I * z_load * s;
    let scale = (z0.value * c).norm() + (z_load * s).norm();
    if den.norm() <= 1e-30 * scale {
        return Err(QwellError::ResonantLoad);
    }
    Ok(z0.value * num / den)
}

/// Real continuous residual whose zeros are the bound states: the matching
/// condition `Z_in = -z1` with the input-impedance denominator cleared,
///
/// ```text
///     g(E) = Im[ z2 (z3 cos(k2 a) + i z2 sin(k2 a))
///              + z1 (z2 cos(k2 a) + i z3 sin(k2 a)) ]
/// ```
///
/// which equals `(hbar/m)^2` times the classical dispersion residual.
pub fn bound_state_residual_imp(
    profile: &PotentialProfile,
    units: &UnitSystem,
    energy: f64,
) -> Result<f64> {
    let tr = profile.as_three_region()?;
    tr.check_window(energy)?;
    Ok(residual_inner(&tr, units, energy))
}

pub(crate) fn residual_inner(tr: &ThreeRegion, units: &UnitSystem, energy: f64) -> f64 {
    let scale = units.hbar / units.mass;
    let z1 = Complex64::new(scale * tr.kappa1(units, energy), 0.0);
    let z2 = Complex64::new(0.0, scale * tr.k2(units, energy));
    let z3 = Complex64::new(scale * tr.kappa3(units, energy), 0.0);
    let (s, c) = (tr.k2(units, energy) * tr.width).sin_cos();
    (z2 * (z3 * c + I * z2 * s) + z1 * (z2 * c + I * z3 * s)).im
}

/// The complex phases of the in-well impedance field as seen from the left
/// and right boundary conditions. Purely imaginary at real energies; their
/// imaginary parts are the real phase angles compared modulo pi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePair {
    pub phi_left: Complex64,
    pub phi_right: Complex64,
}

/// Phases at a real energy in the bound-state window.
pub fn phases(profile: &PotentialProfile, units: &UnitSystem, energy: f64) -> Result<PhasePair> {
    let tr = profile.as_three_region()?;
    tr.check_window(energy)?;
    Ok(phases_at(&tr, units, Complex64::new(energy, 0.0)))
}

/// Same formulas with the energy continued below the real axis; wavenumbers
/// use principal square roots, which keep `Re kappa > 0` (decay preserved)
/// and `Re k2 > 0` for `Im E < 0`.
pub(crate) fn phases_at(tr: &ThreeRegion, units: &UnitSystem, e: Complex64) -> PhasePair {
    let two_m = 2.0 * units.mass;
    let kap1 = ((tr.u1 - e) * two_m).sqrt() / units.hbar;
    let k2 = ((e - tr.u2) * two_m).sqrt() / units.hbar;
    let kap3 = ((tr.u3 - e) * two_m).sqrt() / units.hbar;
    let a = tr.width;
    let phi_left = -0.5 * ((I * kap1 + k2) / (k2 - I * kap1)).ln();
    let phi_right = -0.5 * ((2.0 * I * k2 * a).exp() * (k2 - I * kap3) / (k2 + I * kap3)).ln();
    PhasePair { phi_left, phi_right }
}

/// The real phase angle carried by a complex phase: `Re(-i phi)`, which for
/// the purely imaginary phases of real energies is just `Im phi`.
pub fn real_phase(phi: Complex64) -> f64 {
    (-I * phi).re
}

/// Distance between two angles modulo pi, in `[0, pi/2]`.
pub fn phase_gap_mod_pi(alpha: f64, beta: f64) -> f64 {
    let d = alpha - beta;
    (d - std::f64::consts::PI * (d / std::f64::consts::PI).round()).abs()
}

/// Closed-form normalized density inside the well,
/// `2 (a + (kappa1+kappa3)/(kappa1 kappa3))^-1 cos^2(k2 (x-x0) + phi)`,
/// with `phi` the common value of the two phases at the bound state.
/// `x` must lie in the closed well interval.
pub fn well_density(
    profile: &PotentialProfile,
    units: &UnitSystem,
    state: &BoundState,
    x: f64,
) -> Result<f64> {
    let tr = profile.as_three_region()?;
    classical::verify_root(&tr, units, state.energy)?;
    let xi = x - tr.x0;
    if !(0.0..=tr.width).contains(&xi) {
        return Err(QwellError::OutsideWell {
            x,
            low: tr.x0,
            high: tr.x0 + tr.width,
        });
    }
    let kap1 = tr.kappa1(units, state.energy);
    let k2 = tr.k2(units, state.energy);
    let kap3 = tr.kappa3(units, state.energy);
    let phi = real_phase(phases_at(&tr, units, Complex64::new(state.energy, 0.0)).phi_left);
    let amp = 2.0 / (tr.width + (kap1 + kap3) / (kap1 * kap3));
    Ok(amp * (k2 * xi + phi).cos().powi(2))
}
