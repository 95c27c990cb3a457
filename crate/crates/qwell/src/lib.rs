//! Bound states of one-dimensional piecewise-constant quantum wells.
//!
//! The crate computes the discrete spectrum of
//!
//! ```text
//!     -(hbar^2 / 2m) psi''(x) + U(x) psi(x) = E psi(x)
//! ```
//!
//! for a potential `U(x)` that is constant on each of `N` regions separated
//! by `N-1` boundaries, with the outer regions extending to infinity. Three
//! independent routes to the same spectrum are provided, plus a
//! finite-difference solver used purely as a cross-check:
//!
//! * [`classical`]: wavefunction matching at the interfaces of a three-region
//!   well, the transcendental dispersion relation in pole-free form, and
//!   closed-form normalized eigenfunctions.
//! * [`transfer`]: 2x2 interface/propagation matrices cascaded over any
//!   number of regions; bound states sit where the `(1,1)` entry of the
//!   total matrix vanishes.
//! * [`impedance`]: transmission-line style wave impedances `Z = (hbar/im)
//!   psi'/psi`, the input-impedance transformation, and the closed-form
//!   in-well density.
//! * [`greens`]: the diagonal Green's function built from side impedances at
//!   complex energy `E - i*eps`, whose `eps -> 0` limit recovers `|psi(x)|^2`.
//! * [`oracle`]: a self-contained Sturm-sequence tridiagonal eigensolver on a
//!   hard-wall grid, sharing no formulas with the methods it checks.
//!
//! Energies, lengths and masses are plain `f64` in whatever unit system makes
//! `hbar` and `mass` come out as the numbers stored in [`potential::UnitSystem`];
//! the default is `hbar = m = 1`.

pub mod classical;
pub mod error;
pub mod greens;
pub mod impedance;
pub mod oracle;
pub mod potential;
pub mod quad;
pub mod rootfind;
pub mod spectrum;
pub mod transfer;

pub use error::{QwellError, Result};
pub use potential::{PotentialProfile, ProfileConfig, UnitSystem};
