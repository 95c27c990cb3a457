//! Bound states from cascaded 2x2 transfer matrices.
//!
//! Each region's solutions are written on the basis `e^{+qx}`, `e^{-qx}` in
//! local coordinates (`q = ik` in propagating regions, real `kappa` in
//! evanescent ones), with amplitudes referred to the region's left edge. An
//! interface maps the amplitude pair of the left region to the right region,
//! a uniform stretch of length `L` multiplies the pair by
//! `diag(e^{qL}, e^{-qL})`, and the total matrix is the left-to-right
//! operator product
//!
//! ```text
//!     T = I_{N-2,N-1} P_{N-2} ... P_1 I_{01}
//! ```
//!
//! A bound state requires the coefficient of the growing solution in the
//! last region to vanish for a purely decaying start in the first, which is
//! the condition `T_11 = 0`.
//!
//! Long evanescent stretches make the raw entries span hundreds of orders of
//! magnitude, so the N-region path tracks an overall scale factor in log
//! space ([`ScaledTransferMatrix`]) and renormalizes after every factor. The
//! residual's zero set is unchanged: the factored-out scale is always a
//! positive real.

use num_complex::Complex64;

use crate::error::{QwellError, Result};
use crate::potential::{wavenumber, PotentialProfile, UnitSystem};

/// 2x2 complex matrix acting on (growing, decaying) amplitude pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl TransferMatrix {
    pub const IDENTITY: TransferMatrix = TransferMatrix {
        m11: Complex64::new(1.0, 0.0),
        m12: Complex64::new(0.0, 0.0),
        m21: Complex64::new(0.0, 0.0),
        m22: Complex64::new(1.0, 0.0),
    };

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.m11
            .norm()
            .max(self.m12.norm())
            .max(self.m21.norm())
            .max(self.m22.norm())
    }

    pub fn scaled(&self, factor: Complex64) -> TransferMatrix {
        TransferMatrix {
            m11: self.m11 * factor,
            m12: self.m12 * factor,
            m21: self.m21 * factor,
            m22: self.m22 * factor,
        }
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }
}

/// Operator composition: `(a * b)` applies `b` first.
impl std::ops::Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        TransferMatrix {
            m11: self.m11 * rhs.m11 + self.m12 * rhs.m21,
            m12: self.m11 * rhs.m12 + self.m12 * rhs.m22,
            m21: self.m21 * rhs.m11 + self.m22 * rhs.m21,
            m22: self.m21 * rhs.m12 + self.m22 * rhs.m22,
        }
    }
}

/// Amplitude map across a potential step, from the region with wavenumber
/// exponent `q_left` into the one with `q_right`:
///
/// ```text
///     (1/2) [[(ql+qr)/qr, (qr-ql)/qr], [(qr-ql)/qr, (ql+qr)/qr]]
/// ```
///
/// Its determinant is `ql/qr`.
pub fn interface_matrix(q_left: Complex64, q_right: Complex64) -> Result<TransferMatrix> {
    if q_right == Complex64::new(0.0, 0.0) {
        return Err(QwellError::DegenerateInterface);
    }
    let sum = (q_left + q_right) / (2.0 * q_right);
    let diff = (q_right - q_left) / (2.0 * q_right);
    Ok(TransferMatrix { m11: sum, m12: diff, m21: diff, m22: sum })
}

/// Amplitude map across a uniform stretch of length `length >= 0`:
/// `diag(e^{q L}, e^{-q L})`, unimodular by construction.
pub fn propagation_matrix(q: Complex64, length: f64) -> TransferMatrix {
    let e = (q * length).exp();
    TransferMatrix {
        m11: e,
        m12: Complex64::new(0.0, 0.0),
        m21: Complex64::new(0.0, 0.0),
        m22: 1.0 / e,
    }
}

fn region_exponents(
    profile: &PotentialProfile,
    units: &UnitSystem,
    energy: f64,
) -> Result<Vec<Complex64>> {
    (0..profile.region_count())
        .map(|r| Ok(wavenumber(profile, units, r, energy)?.exponent()))
        .collect()
}

/// Unscaled total transfer matrix across all regions. Safe for short
/// profiles; prefer [`total_transfer_scaled`] when evanescent growth can
/// overflow.
pub fn total_transfer(
    profile: &PotentialProfile,
    units: &UnitSystem,
    energy: f64,
) -> Result<TransferMatrix> {
    let q = region_exponents(profile, units, energy)?;
    let n = q.len();
    let mut t = interface_matrix(q[0], q[1])?;
    for j in 1..n - 1 {
        let width = profile.region_width(j)?;
        t = propagation_matrix(q[j], width) * t;
        t = interface_matrix(q[j], q[j + 1])? * t;
    }
    Ok(t)
}

/// A transfer matrix with its overall magnitude factored out:
/// the true matrix is `matrix * e^{log_scale}` with `log_scale` real, and
/// `matrix` is kept at unit max-norm.
#[derive(Debug, Clone, Copy)]
pub struct ScaledTransferMatrix {
    pub matrix: TransferMatrix,
    pub log_scale: f64,
}

impl ScaledTransferMatrix {
    pub const IDENTITY: ScaledTransferMatrix = ScaledTransferMatrix {
        matrix: TransferMatrix::IDENTITY,
        log_scale: 0.0,
    };

    /// Wraps a raw matrix, pulling its max-norm into the log scale.
    pub fn renormalized(matrix: TransferMatrix, log_scale: f64) -> ScaledTransferMatrix {
        let s = matrix.max_norm();
        if s > 0.0 && s.is_finite() {
            ScaledTransferMatrix {
                matrix: matrix.scaled(Complex64::new(1.0 / s, 0.0)),
                log_scale: log_scale + s.ln(),
            }
        } else {
            ScaledTransferMatrix { matrix, log_scale }
        }
    }

    /// Composition with renormalization; `rhs` acts first.
    pub fn compose(self, rhs: &ScaledTransferMatrix) -> ScaledTransferMatrix {
        ScaledTransferMatrix::renormalized(self.matrix * rhs.matrix, self.log_scale + rhs.log_scale)
    }

    /// The matrix with the scale multiplied back in. Overflows for large
    /// `log_scale`; meant for short cascades and tests.
    pub fn value(&self) -> TransferMatrix {
        self.matrix.scaled(Complex64::new(self.log_scale.exp(), 0.0))
    }
}

/// Propagation across length `length` with the growing exponential's
/// magnitude pre-split into the log scale, so entries never overflow.
pub fn propagation_scaled(q: Complex64, length: f64) -> ScaledTransferMatrix {
    let w = q * length;
    let shift = w.re;
    ScaledTransferMatrix {
        matrix: TransferMatrix {
            m11: (w - shift).exp(),
            m12: Complex64::new(0.0, 0.0),
            m21: Complex64::new(0.0, 0.0),
            m22: (-w - shift).exp(),
        },
        log_scale: shift,
    }
}

/// Total transfer matrix in renormalized form, usable for any region count
/// and evanescent depth.
pub fn total_transfer_scaled(
    profile: &PotentialProfile,
    units: &UnitSystem,
    energy: f64,
) -> Result<ScaledTransferMatrix> {
    let q = region_exponents(profile, units, energy)?;
    let n = q.len();
    let mut t = ScaledTransferMatrix::renormalized(interface_matrix(q[0], q[1])?, 0.0);
    for j in 1..n - 1 {
        let width = profile.region_width(j)?;
        t = propagation_scaled(q[j], width).compose(&t);
        t = ScaledTransferMatrix::renormalized(interface_matrix(q[j], q[j + 1])?, 0.0).compose(&t);
    }
    Ok(t)
}

/// Bound-state residual from the transfer cascade.
///
/// For the three-region well the entry `T_11` is rescaled by `2 k2 kappa3`,
/// which makes it exactly the classical dispersion residual
/// `k2(kappa1+kappa3)cos(k2 a) + (kappa1 kappa3 - k2^2)sin(k2 a)`: real,
/// bounded, pole-free. For other region counts the renormalized `T_11` is
/// returned; its zero set on the window (split at interior potential values
/// by the callers that scan it) marks the bound states.
pub fn bound_state_residual_tm(
    profile: &PotentialProfile,
    units: &UnitSystem,
    energy: f64,
) -> Result<f64> {
    let low = profile.global_min();
    let high = profile.outer_min();
    if !(energy > low && energy < high) {
        return Err(QwellError::EnergyOutsideWindow { energy, low, high });
    }
    if profile.region_count() == 3 {
        let t = total_transfer(profile, units, energy)?;
        let k2 = wavenumber(profile, units, 1, energy)?.magnitude;
        let kap3 = wavenumber(profile, units, 2, energy)?.magnitude;
        Ok((t.m11 * 2.0 * k2 * kap3).re)
    } else {
        Ok(total_transfer_scaled(profile, units, energy)?.matrix.m11.re)
    }
}
