//! Full-spectrum solving with a uniform entry point for all three methods.
//!
//! The classical and impedance solvers are specific to three-region wells;
//! the transfer-matrix solver accepts any piecewise-constant profile. Its
//! search window spans from the deepest region value up to the lower outer
//! wall, and is cut at every interior region value inside that window:
//! the cascade residual has `1/q` poles where the energy crosses a region
//! value, and scanning across one would manufacture sign changes that are
//! not roots. A true eigenvalue sitting exactly on an interior region value
//! (a measure-zero coincidence) is not representable here and is skipped.

use crate::classical::{self, BoundState, Method};
use crate::error::Result;
use crate::impedance;
use crate::potential::{PotentialProfile, UnitSystem};
use crate::rootfind::find_roots;
use crate::transfer;

/// Fewest bracketing samples spent on one sub-window of a cut search range.
const MIN_WINDOW_RESOLUTION: usize = 32;

/// Whether `method` can solve `profile` at all.
pub fn supports(profile: &PotentialProfile, method: Method) -> bool {
    matches!(method, Method::Transfer) || profile.region_count() == 3
}

/// All bound states of `profile` by the requested method, ascending in
/// energy. `resolution` is the number of bracketing samples across the
/// search window, as in [`classical::find_bound_states`].
pub fn eigenvalues(
    profile: &PotentialProfile,
    units: &UnitSystem,
    method: Method,
    resolution: usize,
) -> Result<Vec<BoundState>> {
    match method {
        Method::Classical => classical::find_bound_states(profile, units, resolution),
        Method::Impedance => impedance_states(profile, units, resolution),
        Method::Transfer => transfer_states(profile, units, resolution),
    }
}

fn impedance_states(
    profile: &PotentialProfile,
    units: &UnitSystem,
    resolution: usize,
) -> Result<Vec<BoundState>> {
    let (low, high) = classical::energy_window(profile)?;
    if !(low < high) {
        return Ok(Vec::new());
    }
    let roots = find_roots(
        |e| impedance::bound_state_residual_imp(profile, units, e),
        low,
        high,
        resolution,
        classical::ROOT_REL_TOL,
    )?;
    roots
        .into_iter()
        .enumerate()
        .map(|(index, energy)| {
            let norm = classical::normalization(profile, units, energy)?;
            let phase = impedance::real_phase(impedance::phases(profile, units, energy)?.phi_left);
            Ok(BoundState {
                energy,
                method: Method::Impedance,
                index,
                norm_constant: Some(norm),
                phase: Some(phase),
            })
        })
        .collect()
}

fn transfer_states(
    profile: &PotentialProfile,
    units: &UnitSystem,
    resolution: usize,
) -> Result<Vec<BoundState>> {
    let low = profile.global_min();
    let high = profile.outer_min();
    if !(low < high) {
        return Ok(Vec::new());
    }

    // cut the window at interior region values strictly inside it
    let mut cuts: Vec<f64> = profile.values()[1..profile.region_count() - 1]
        .iter()
        .copied()
        .filter(|&u| low < u && u < high)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(low);
    edges.extend(cuts);
    edges.push(high);

    let span = high - low;
    let mut energies = Vec::new();
    for pair in edges.windows(2) {
        let share = (resolution as f64 * (pair[1] - pair[0]) / span).ceil() as usize;
        energies.extend(find_roots(
            |e| transfer::bound_state_residual_tm(profile, units, e),
            pair[0],
            pair[1],
            share.max(MIN_WINDOW_RESOLUTION),
            classical::ROOT_REL_TOL,
        )?);
    }
    Ok(energies
        .into_iter()
        .enumerate()
        .map(|(index, energy)| BoundState {
            energy,
            method: Method::Transfer,
            index,
            norm_constant: None,
            phase: None,
        })
        .collect())
}
