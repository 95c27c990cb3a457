//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, QwellError>;

#[derive(Debug, Error)]
pub enum QwellError {
    #[error("region boundaries must be strictly increasing (boundary {index} breaks the order)")]
    UnorderedBoundaries { index: usize },

    #[error("profile has {boundaries} boundaries and {values} potential values; values must number boundaries + 1")]
    RegionCountMismatch { boundaries: usize, values: usize },

    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("{what} = {value} is out of range: {requirement}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("operation supports only {required}-region profiles, this one has {found} regions")]
    UnsupportedRegionCount { found: usize, required: usize },

    #[error("region index {region} out of bounds for a profile with {count} regions")]
    NoSuchRegion { region: usize, count: usize },

    #[error("energy {energy} equals the potential of region {region}; the wavenumber there is zero")]
    DegenerateWavenumber { region: usize, energy: f64 },

    #[error("interface requires a nonzero wavenumber on its right side")]
    DegenerateInterface,

    #[error("energy {energy} lies outside the bound-state window ({low}, {high})")]
    EnergyOutsideWindow { energy: f64, low: f64, high: f64 },

    #[error("energy {energy} is not a bound state (dispersion residual {residual} exceeds tolerance)")]
    NotABoundState { energy: f64, residual: f64 },

    #[error("position {x} lies outside the well interior ({low}, {high})")]
    OutsideWell { x: f64, low: f64, high: f64 },

    #[error("trial field has a node at x = {x}; the wave impedance has a pole there")]
    ImpedancePole { x: f64 },

    #[error("input-impedance denominator vanished: the load is resonant with the line section")]
    ResonantLoad,

    #[error("diagonal Green's function pole at x = {x}: side impedances coincide, the energy is an eigenvalue")]
    GreensPoleAtEigenvalue { x: f64 },

    #[error("epsilon schedule is invalid: {reason}")]
    BadEpsSchedule { reason: &'static str },

    #[error("{what} did not converge: {detail}")]
    ConvergenceFailure { what: &'static str, detail: String },

    #[error("invalid profile JSON: {0}")]
    Json(#[from] serde_json::Error),
}
