//! Sample tables for the wavefunction command.
//!
//! The sampled domain spans the well plus ten decay lengths of tail on
//! each side at the chosen state's energy. The classical source emits the
//! signed wavefunction and its square; the impedance and greens sources
//! are density-only (their `psi` cells stay empty). Both closed-form
//! density sources are defined inside the well; in the tails the density
//! continues as the matched pure exponential, anchored at the well-edge
//! value.

use qwell::classical::{self, Method};
use qwell::potential::wavenumber;
use qwell::{greens, impedance, spectrum};
use qwell::{PotentialProfile, UnitSystem};

use crate::report::csv_number;
use crate::{CliError, CliResult};

#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum SampleKind {
    Classical,
    Impedance,
    Greens,
}

struct SampleRow {
    x: f64,
    psi: Option<f64>,
    density: f64,
}

pub struct SampleTable {
    rows: Vec<SampleRow>,
}

impl SampleTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,psi,density\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                csv_number(row.x),
                row.psi.map(csv_number).unwrap_or_default(),
                csv_number(row.density),
            ));
        }
        out
    }
}

fn numerical(e: qwell::QwellError) -> CliError {
    CliError::Numerical(e.to_string())
}

pub fn sample_state(
    profile: &PotentialProfile,
    units: &UnitSystem,
    kind: SampleKind,
    state_index: usize,
    n_samples: usize,
    resolution: usize,
    eps_schedule: Option<&[f64]>,
) -> CliResult<SampleTable> {
    if profile.region_count() != 3 {
        return Err(CliError::Usage(format!(
            "wavefunction sampling needs a three-region profile; this one has {} regions \
             (energies for general profiles come from solve --method transfer)",
            profile.region_count()
        )));
    }
    if n_samples < 2 {
        return Err(CliError::Usage(format!(
            "--samples must be at least 2, got {n_samples}"
        )));
    }
    if let Some(schedule) = eps_schedule {
        let decreasing = schedule.windows(2).all(|w| w[0] > w[1]);
        if schedule.len() < 2 || !decreasing || schedule.iter().any(|&e| !(e > 0.0)) {
            return Err(CliError::Usage(
                "--eps-schedule needs at least two positive, strictly decreasing values".into(),
            ));
        }
    }

    let solve_method = match kind {
        SampleKind::Impedance => Method::Impedance,
        _ => Method::Classical,
    };
    let states = spectrum::eigenvalues(profile, units, solve_method, resolution).map_err(numerical)?;
    let Some(state) = states.get(state_index) else {
        return Err(CliError::Usage(format!(
            "state index {state_index} out of range: this profile has {} bound state{}{}",
            states.len(),
            if states.len() == 1 { "" } else { "s" },
            if states.is_empty() {
                String::new()
            } else {
                format!(" (valid indices 0..={})", states.len() - 1)
            }
        )));
    };

    let energy = state.energy;
    let x0 = profile.first_boundary();
    let x1 = profile.last_boundary();
    let kappa1 = wavenumber(profile, units, 0, energy).map_err(numerical)?.magnitude;
    let kappa3 = wavenumber(profile, units, 2, energy).map_err(numerical)?.magnitude;
    let lo = x0 - 10.0 / kappa1;
    let hi = x1 + 10.0 / kappa3;
    log::debug!("sampling state {state_index} at E = {energy} over [{lo}, {hi}]");

    let schedule = eps_schedule.unwrap_or(&greens::DEFAULT_EPS_SCHEDULE);
    // tail anchors for the density-only sources
    let (edge_left, edge_right) = match kind {
        SampleKind::Classical => (0.0, 0.0),
        SampleKind::Impedance => (
            impedance::well_density(profile, units, state, x0).map_err(numerical)?,
            impedance::well_density(profile, units, state, x1).map_err(numerical)?,
        ),
        SampleKind::Greens => (
            greens::eigenfunction_density(profile, units, x0, energy, schedule)
                .map_err(numerical)?,
            greens::eigenfunction_density(profile, units, x1, energy, schedule)
                .map_err(numerical)?,
        ),
    };

    let mut rows = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let x = lo + (hi - lo) * i as f64 / (n_samples - 1) as f64;
        let row = match kind {
            SampleKind::Classical => {
                let psi = classical::wavefunction(profile, units, state, x).map_err(numerical)?;
                SampleRow {
                    x,
                    psi: Some(psi),
                    density: psi * psi,
                }
            }
            SampleKind::Impedance => {
                let density = if x < x0 {
                    edge_left * (-2.0 * kappa1 * (x0 - x)).exp()
                } else if x > x1 {
                    edge_right * (-2.0 * kappa3 * (x - x1)).exp()
                } else {
                    impedance::well_density(profile, units, state, x).map_err(numerical)?
                };
                SampleRow {
                    x,
                    psi: None,
                    density,
                }
            }
            SampleKind::Greens => {
                let density = if x <= x0 {
                    edge_left * (-2.0 * kappa1 * (x0 - x)).exp()
                } else if x >= x1 {
                    edge_right * (-2.0 * kappa3 * (x - x1)).exp()
                } else {
                    greens::eigenfunction_density(profile, units, x, energy, schedule)
                        .map_err(numerical)?
                };
                SampleRow {
                    x,
                    psi: None,
                    density,
                }
            }
        };
        rows.push(row);
    }
    Ok(SampleTable { rows })
}
