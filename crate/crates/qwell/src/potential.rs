//! Piecewise-constant potential profiles, unit system, and per-region
//! wavenumbers. Every other module consumes these types.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QwellError, Result};

/// Physical constants entering the Schrödinger equation.
///
/// All quantities in the crate are plain `f64` in whatever unit system makes
/// `hbar` and `mass` come out as the numbers stored here. The default is the
/// dimensionless convention `hbar = m = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

impl UnitSystem {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        for (what, value) in [("hbar", hbar), ("mass", mass)] {
            if !value.is_finite() {
                return Err(QwellError::NonFinite { what, value });
            }
            if value <= 0.0 {
                return Err(QwellError::NonPositive { what, value });
            }
        }
        Ok(Self { hbar, mass })
    }

    /// `hbar^2 / 2m`, the kinetic prefactor.
    pub fn kinetic_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

/// A potential that is constant on each of `N >= 2` regions.
///
/// `boundaries` holds the `N-1` interface positions in strictly increasing
/// order; `values[i]` is the potential of region `i`, with regions numbered
/// left to right. The first and last regions are semi-infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile {
    boundaries: Vec<f64>,
    values: Vec<f64>,
}

impl PotentialProfile {
    /// Validates and builds a profile. Reports the first violated rule:
    /// boundary/value count mismatch, non-finite entries, or boundaries out
    /// of order.
    pub fn new(boundaries: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != boundaries.len() + 1 {
            return Err(QwellError::RegionCountMismatch {
                boundaries: boundaries.len(),
                values: values.len(),
            });
        }
        if boundaries.is_empty() {
            return Err(QwellError::RegionCountMismatch { boundaries: 0, values: values.len() });
        }
        for &b in &boundaries {
            if !b.is_finite() {
                return Err(QwellError::NonFinite { what: "boundary position", value: b });
            }
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(QwellError::NonFinite { what: "potential value", value: v });
            }
        }
        for i in 1..boundaries.len() {
            if boundaries[i] <= boundaries[i - 1] {
                return Err(QwellError::UnorderedBoundaries { index: i });
            }
        }
        Ok(Self { boundaries, values })
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn region_count(&self) -> usize {
        self.values.len()
    }

    pub fn first_boundary(&self) -> f64 {
        self.boundaries[0]
    }

    pub fn last_boundary(&self) -> f64 {
        *self.boundaries.last().unwrap()
    }

    /// Region index containing `x`. Boundary points belong to the region on
    /// their right, so indices run 0..N-1 and `region_at` is monotone in `x`.
    pub fn region_at(&self, x: f64) -> usize {
        self.boundaries.partition_point(|&b| b <= x)
    }

    /// Potential value at position `x`.
    pub fn value_at(&self, x: f64) -> f64 {
        self.values[self.region_at(x)]
    }

    /// Width of interior region `i` (first and last regions are infinite).
    pub fn region_width(&self, i: usize) -> Result<f64> {
        if i == 0 || i + 1 >= self.values.len() {
            return Err(QwellError::NoSuchRegion { region: i, count: self.values.len() });
        }
        Ok(self.boundaries[i] - self.boundaries[i - 1])
    }

    /// Smallest potential over all regions: no eigenvalue can lie below it.
    pub fn global_min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Smaller of the two semi-infinite outer potentials: the continuum edge.
    /// Bound states live strictly below this.
    pub fn outer_min(&self) -> f64 {
        self.values[0].min(*self.values.last().unwrap())
    }

    pub(crate) fn as_three_region(&self) -> Result<ThreeRegion> {
        if self.region_count() != 3 {
            return Err(QwellError::UnsupportedRegionCount {
                found: self.region_count(),
                required: 3,
            });
        }
        Ok(ThreeRegion {
            u1: self.values[0],
            u2: self.values[1],
            u3: self.values[2],
            x0: self.boundaries[0],
            width: self.boundaries[1] - self.boundaries[0],
        })
    }
}

/// The three-region well `U1 | U2 | U3` with interfaces at `x0` and
/// `x0 + width`, unpacked for the closed-form modules. Positions handed to
/// those formulas are measured from `x0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ThreeRegion {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub x0: f64,
    pub width: f64,
}

impl ThreeRegion {
    /// Open energy interval that can hold bound states: oscillatory in the
    /// well, decaying on both sides.
    pub fn window(&self) -> (f64, f64) {
        (self.u2, self.u1.min(self.u3))
    }

    pub fn check_window(&self, energy: f64) -> Result<()> {
        let (low, high) = self.window();
        if !(energy > low && energy < high) {
            return Err(QwellError::EnergyOutsideWindow { energy, low, high });
        }
        Ok(())
    }

    /// Decay constant of the left outer region, `sqrt(2m(U1-E))/hbar`.
    pub fn kappa1(&self, units: &UnitSystem, e: f64) -> f64 {
        (2.0 * units.mass * (self.u1 - e)).sqrt() / units.hbar
    }

    /// Oscillation wavenumber inside the well, `sqrt(2m(E-U2))/hbar`.
    pub fn k2(&self, units: &UnitSystem, e: f64) -> f64 {
        (2.0 * units.mass * (e - self.u2)).sqrt() / units.hbar
    }

    /// Decay constant of the right outer region, `sqrt(2m(U3-E))/hbar`.
    pub fn kappa3(&self, units: &UnitSystem, e: f64) -> f64 {
        (2.0 * units.mass * (self.u3 - e)).sqrt() / units.hbar
    }
}

/// Oscillatory or exponential character of the solution in one region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveKind {
    /// `E > U`: solutions `e^{+-ikx}`.
    Propagating,
    /// `E < U`: solutions `e^{+-kappa x}`.
    Evanescent,
}

/// Wavenumber of one region at one energy.
///
/// `magnitude` is `sqrt(2m|E-U|)/hbar`; `complex_value` is the conventional
/// complex wavenumber, real `k` for a propagating region and `i*kappa` for an
/// evanescent one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionWaveNumber {
    pub kind: WaveKind,
    pub magnitude: f64,
    pub complex_value: Complex64,
}

impl RegionWaveNumber {
    /// Exponential growth rate `q` such that the region's solutions are
    /// `e^{+-qx}`: `ik` for a propagating region, real `kappa` for an
    /// evanescent one. This is the variable the transfer matrices cascade.
    pub fn exponent(&self) -> Complex64 {
        match self.kind {
            WaveKind::Propagating => Complex64::new(0.0, self.magnitude),
            WaveKind::Evanescent => Complex64::new(self.magnitude, 0.0),
        }
    }
}

/// Wavenumber of region `region` at energy `energy`. `energy` exactly equal
/// to the region's potential makes the wavenumber zero and every downstream
/// formula degenerate, so that case is an error.
pub fn wavenumber(
    profile: &PotentialProfile,
    units: &UnitSystem,
    region: usize,
    energy: f64,
) -> Result<RegionWaveNumber> {
    let count = profile.region_count();
    if region >= count {
        return Err(QwellError::NoSuchRegion { region, count });
    }
    if !energy.is_finite() {
        return Err(QwellError::NonFinite { what: "energy", value: energy });
    }
    let u = profile.values()[region];
    if energy == u {
        return Err(QwellError::DegenerateWavenumber { region, energy });
    }
    let magnitude = (2.0 * units.mass * (energy - u).abs()).sqrt() / units.hbar;
    let (kind, complex_value) = if energy > u {
        (WaveKind::Propagating, Complex64::new(magnitude, 0.0))
    } else {
        (WaveKind::Evanescent, Complex64::new(0.0, magnitude))
    };
    Ok(RegionWaveNumber { kind, magnitude, complex_value })
}

/// JSON-facing profile description:
/// `{"boundaries":[...], "potentials":[...], "hbar":1.0, "mass":1.0}`.
/// `hbar` and `mass` default to 1 when omitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub boundaries: Vec<f64>,
    pub potentials: Vec<f64>,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
}

fn one() -> f64 {
    1.0
}

impl ProfileConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile config serializes")
    }

    /// Validates and splits into the solver-facing pair.
    pub fn into_parts(self) -> Result<(PotentialProfile, UnitSystem)> {
        let units = UnitSystem::new(self.hbar, self.mass)?;
        let profile = PotentialProfile::new(self.boundaries, self.potentials)?;
        Ok((profile, units))
    }
}
