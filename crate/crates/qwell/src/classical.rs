//! Bound states of the three-region well by explicit wavefunction matching.
//!
//! For outer potentials `U1`, `U3` above the well floor `U2` and energies in
//! the window `U2 < E < min(U1, U3)` the solution decays as `e^{kappa1 x}`
//! on the left, oscillates as `C21 cos(k2 x) + C22 sin(k2 x)` inside, and
//! decays as `e^{-kappa3 x}` on the right (positions measured from the left
//! interface). Matching `psi` and `psi'` at both interfaces eliminates all
//! amplitudes but one and leaves the transcendental condition
//!
//! ```text
//!     tan(k2 a) = k2 (kappa1 + kappa3) / (kappa1 kappa3 - k2^2)
//! ```
//!
//! whose roots are the eigenenergies. Root finding uses the equivalent
//! pole-free form
//!
//! ```text
//!     f(E) = k2 (kappa1 + kappa3) cos(k2 a) + (kappa1 kappa3 - k2^2) sin(k2 a)
//! ```
//!
//! which is continuous across the window, so plain sign-change bracketing is
//! exhaustive. The remaining amplitude is fixed by normalization, for which
//! the closed form
//!
//! ```text
//!     |C11|^-2 = (1/2)(1 + kappa1^2/k2^2)(a + (kappa1 + kappa3)/(kappa1 kappa3))
//! ```
//!
//! holds at every root.

use serde::Serialize;

use crate::error::{QwellError, Result};
use crate::potential::{PotentialProfile, ThreeRegion, UnitSystem};
use crate::quad::adaptive_simpson;
use crate::rootfind::find_roots;

/// Which solver produced a bound state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Classical,
    Transfer,
    Impedance,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Classical => "classical",
            Method::Transfer => "transfer",
            Method::Impedance => "impedance",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One bound state, sorted position `index` in its spectrum.
///
/// `norm_constant` is `|C11|^2`, the squared left-tail amplitude of the
/// normalized eigenfunction, and `phase` is the in-well phase `phi` with
/// `cos(phi) = 1/sqrt(1 + kappa1^2/k2^2)`, `sin(phi) < 0`. Both are closed
/// forms of the three-region well; the transfer-matrix solver works at any
/// region count and leaves them unset.
#[derive(Debug, Clone, Serialize)]
pub struct BoundState {
    pub energy: f64,
    pub method: Method,
    pub index: usize,
    pub norm_constant: Option<f64>,
    pub phase: Option<f64>,
}

/// Default number of bracketing samples across the energy window.
pub const DEFAULT_RESOLUTION: usize = 4096;

/// Relative width at which root bisection stops.
pub const ROOT_REL_TOL: f64 = 1e-12;

/// Open energy interval that can hold bound states of a three-region well.
/// May be empty (high >= low is not guaranteed).
pub fn energy_window(profile: &PotentialProfile) -> Result<(f64, f64)> {
    Ok(profile.as_three_region()?.window())
}

/// The pole-free dispersion residual `f(E)`; its zeros on the open window
/// are exactly the bound-state energies.
pub fn dispersion_residual(profile: &PotentialProfile, units: &UnitSystem, energy: f64) -> Result<f64> {
    let tr = profile.as_three_region()?;
    tr.check_window(energy)?;
    Ok(residual_inner(&tr, units, energy))
}

fn residual_inner(tr: &ThreeRegion, units: &UnitSystem, energy: f64) -> f64 {
    let kap1 = tr.kappa1(units, energy);
    let k2 = tr.k2(units, energy);
    let kap3 = tr.kappa3(units, energy);
    let (s, c) = (k2 * tr.width).sin_cos();
    k2 * (kap1 + kap3) * c + (kap1 * kap3 - k2 * k2) * s
}

/// Magnitude scale of the residual near `energy`, used to decide whether a
/// value of `f` counts as zero.
fn residual_scale(tr: &ThreeRegion, units: &UnitSystem, energy: f64) -> f64 {
    let kap1 = tr.kappa1(units, energy);
    let k2 = tr.k2(units, energy);
    let kap3 = tr.kappa3(units, energy);
    k2 * (kap1 + kap3) + kap1 * kap3 + k2 * k2
}

pub(crate) fn verify_root(tr: &ThreeRegion, units: &UnitSystem, energy: f64) -> Result<()> {
    tr.check_window(energy)?;
    let residual = residual_inner(tr, units, energy);
    if residual.abs() > 1e-8 * residual_scale(tr, units, energy) {
        return Err(QwellError::NotABoundState { energy, residual });
    }
    Ok(())
}

/// All bound states of a three-region well, sorted ascending in energy.
///
/// The window is scanned at `resolution` uniformly spaced samples and each
/// sign change is bisected to relative tolerance [`ROOT_REL_TOL`]. An empty
/// or inverted window (no well at all, for instance `U1 = U2`) yields an
/// empty list rather than an error, matching the physics: such a profile
/// simply has no discrete spectrum.
pub fn find_bound_states(
    profile: &PotentialProfile,
    units: &UnitSystem,
    resolution: usize,
) -> Result<Vec<BoundState>> {
    let tr = profile.as_three_region()?;
    let (low, high) = tr.window();
    if !(high > low) {
        return Ok(Vec::new());
    }
    let roots = find_roots(
        |e| {
            tr.check_window(e)?;
            Ok(residual_inner(&tr, units, e))
        },
        low,
        high,
        resolution,
        ROOT_REL_TOL,
    )?;
    Ok(roots
        .into_iter()
        .enumerate()
        .map(|(index, energy)| BoundState {
            energy,
            method: Method::Classical,
            index,
            norm_constant: Some(normalization_unchecked(&tr, units, energy)),
            phase: Some(phase_inner(&tr, units, energy)),
        })
        .collect())
}

/// Squared normalized amplitude `|C11|^2` of the left exponential tail,
/// from the closed form valid at dispersion roots. Rejects energies whose
/// residual is not consistent with a root.
pub fn normalization(profile: &PotentialProfile, units: &UnitSystem, energy: f64) -> Result<f64> {
    let tr = profile.as_three_region()?;
    verify_root(&tr, units, energy)?;
    Ok(normalization_unchecked(&tr, units, energy))
}

fn normalization_unchecked(tr: &ThreeRegion, units: &UnitSystem, energy: f64) -> f64 {
    let kap1 = tr.kappa1(units, energy);
    let k2 = tr.k2(units, energy);
    let kap3 = tr.kappa3(units, energy);
    let r = kap1 / k2;
    let inv = 0.5 * (1.0 + r * r) * (tr.width + (kap1 + kap3) / (kap1 * kap3));
    1.0 / inv
}

/// In-well phase `phi` of the normalized eigenfunction, so that inside the
/// well `psi(x) = |C11| sqrt(1 + kappa1^2/k2^2) cos(k2 x + phi)`.
/// `phi = -atan(kappa1/k2)`, in `(-pi/2, 0)`.
fn phase_inner(tr: &ThreeRegion, units: &UnitSystem, energy: f64) -> f64 {
    -(tr.kappa1(units, energy) / tr.k2(units, energy)).atan()
}

/// The four matched amplitudes of the normalized eigenfunction: left tail
/// `c11 e^{kappa1 x}`, in-well `c21 cos(k2 x) + c22 sin(k2 x)`, right tail
/// `c32 e^{-kappa3 x}`, positions measured from the left interface. Only
/// meaningful at a dispersion root (checked).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MatchingCoefficients {
    pub c11: f64,
    pub c21: f64,
    pub c22: f64,
    pub c32: f64,
}

pub fn matching_coefficients(
    profile: &PotentialProfile,
    units: &UnitSystem,
    energy: f64,
) -> Result<MatchingCoefficients> {
    let tr = profile.as_three_region()?;
    verify_root(&tr, units, energy)?;
    let c11 = normalization_unchecked(&tr, units, energy).sqrt();
    Ok(coefficients_inner(&tr, units, energy, c11))
}

fn coefficients_inner(
    tr: &ThreeRegion,
    units: &UnitSystem,
    energy: f64,
    c11: f64,
) -> MatchingCoefficients {
    let kap1 = tr.kappa1(units, energy);
    let k2 = tr.k2(units, energy);
    let kap3 = tr.kappa3(units, energy);
    let a = tr.width;
    let r = kap1 / k2;
    let c21 = c11;
    let c22 = r * c11;
    let c32 = c11 * (kap3 * a).exp() * ((k2 * a).cos() + r * (k2 * a).sin());
    MatchingCoefficients { c11, c21, c22, c32 }
}

/// Normalized eigenfunction value at `x` (true position, not well-relative).
/// Real and continuous with continuous derivative; sign fixed by `C11 > 0`.
pub fn wavefunction(
    profile: &PotentialProfile,
    units: &UnitSystem,
    state: &BoundState,
    x: f64,
) -> Result<f64> {
    let tr = profile.as_three_region()?;
    verify_root(&tr, units, state.energy)?;
    let c11 = normalization_unchecked(&tr, units, state.energy).sqrt();
    let co = coefficients_inner(&tr, units, state.energy, c11);
    let kap1 = tr.kappa1(units, state.energy);
    let k2 = tr.k2(units, state.energy);
    let kap3 = tr.kappa3(units, state.energy);
    let xi = x - tr.x0;
    Ok(if xi < 0.0 {
        co.c11 * (kap1 * xi).exp()
    } else if xi <= tr.width {
        co.c21 * (k2 * xi).cos() + co.c22 * (k2 * xi).sin()
    } else {
        co.c32 * (-kap3 * xi).exp()
    })
}

/// `|C11|^2` by direct quadrature of the three normalization integrals of
/// the unnormalized solution (left tail, well, right tail), with the
/// infinite tails truncated at 40 decay lengths. Shares no algebra with
/// [`normalization`]; used to certify the closed form.
pub fn normalization_by_quadrature(
    profile: &PotentialProfile,
    units: &UnitSystem,
    energy: f64,
) -> Result<f64> {
    let tr = profile.as_three_region()?;
    verify_root(&tr, units, energy)?;
    let co = coefficients_inner(&tr, units, energy, 1.0);
    let kap1 = tr.kappa1(units, energy);
    let k2 = tr.k2(units, energy);
    let kap3 = tr.kappa3(units, energy);
    let a = tr.width;
    let tol = 1e-13;
    let left = adaptive_simpson(&|x: f64| (2.0 * kap1 * x).exp(), -40.0 / kap1, 0.0, tol);
    let well = adaptive_simpson(
        &|x: f64| {
            let v = co.c21 * (k2 * x).cos() + co.c22 * (k2 * x).sin();
            v * v
        },
        0.0,
        a,
        tol,
    );
    let right = adaptive_simpson(
        &|x: f64| {
            let v = co.c32 * (-kap3 * x).exp();
            v * v
        },
        a,
        a + 40.0 / kap3,
        tol,
    );
    Ok(1.0 / (left + well + right))
}
