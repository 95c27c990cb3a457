//! Report assembly and rendering for the solve and compare commands.
//!
//! A report is one JSON document (or, for solve, optionally a CSV table)
//! holding everything a run produced: the profile echo, per-method state
//! lists with residuals, pairwise deltas between methods, closed-form vs
//! quadrature normalization checks, and the finite-difference comparison.
//! Every tolerance verdict lands in `passed`; the process exit code
//! follows it.

use serde::Serialize;

use qwell::classical::{self, BoundState, Method};
use qwell::{oracle, spectrum, transfer};
use qwell::{impedance, PotentialProfile, ProfileConfig, QwellError, UnitSystem};

use crate::{CliError, CliResult};

/// Largest eigenvalue disagreement tolerated between analytic methods.
pub const PAIRWISE_TOL: f64 = 1e-10;
/// Largest disagreement tolerated against the finite-difference solver.
pub const ORACLE_TOL: f64 = 1e-4;
/// Relative tolerance for closed-form vs quadrature normalization.
pub const NORMALIZATION_TOL: f64 = 1e-10;
/// Points per embedded well-density grid.
const GRID_SAMPLES: usize = 33;

#[derive(Serialize)]
pub struct RunReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    pub profile: ProfileConfig,
    pub summary: String,
    pub methods: Vec<MethodReport>,
    pub pairwise: Vec<PairwiseCheck>,
    pub normalization: Vec<NormalizationCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub wavefunctions: Vec<SampleGrid>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
}

#[derive(Serialize)]
pub struct MethodReport {
    pub method: &'static str,
    pub supported: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub states: Vec<StateReport>,
}

#[derive(Serialize)]
pub struct StateReport {
    pub index: usize,
    pub energy: f64,
    pub method: &'static str,
    /// Value of this method's own bound-state residual at the root.
    pub residual: f64,
    pub norm_constant: Option<f64>,
    pub phase: Option<f64>,
}

#[derive(Serialize)]
pub struct PairwiseCheck {
    pub method_a: &'static str,
    pub method_b: &'static str,
    pub count_a: usize,
    pub count_b: usize,
    /// Over states with matching indices; absent when either list is empty.
    pub max_abs_delta: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct NormalizationCheck {
    pub index: usize,
    pub energy: f64,
    pub closed_form: f64,
    pub quadrature: f64,
    pub relative_delta: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct OracleReport {
    pub n_points: usize,
    pub margin: f64,
    pub step: f64,
    pub e_cut: f64,
    pub count: usize,
    pub energies: Vec<f64>,
    /// True when any eigenvector still carries weight at the hard walls.
    pub tail_warning: bool,
    pub deltas: Vec<OracleDelta>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct OracleDelta {
    pub method: &'static str,
    pub count_method: usize,
    pub max_abs_delta: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct SampleGrid {
    pub index: usize,
    pub energy: f64,
    pub x: Vec<f64>,
    pub density: Vec<f64>,
}

pub struct OracleOptions {
    pub n_points: usize,
}

fn numerical(e: QwellError) -> CliError {
    CliError::Numerical(e.to_string())
}

pub fn build(
    profile: &PotentialProfile,
    units: &UnitSystem,
    methods: &[Method],
    resolution: usize,
    oracle_opts: Option<OracleOptions>,
    no_meta: bool,
    args: Vec<String>,
) -> CliResult<RunReport> {
    let mut method_reports = Vec::with_capacity(methods.len());
    for &method in methods {
        method_reports.push(run_method(profile, units, method, resolution)?);
    }
    let pairwise = pairwise_checks(&method_reports);
    let reference = method_reports.iter().find(|r| r.supported);
    let normalization = match reference {
        Some(r) if profile.region_count() == 3 => normalization_checks(profile, units, &r.states)?,
        _ => Vec::new(),
    };
    let oracle = match oracle_opts {
        Some(opts) => oracle_section(profile, units, opts.n_points, &method_reports)?,
        None => None,
    };
    let wavefunctions = match reference {
        Some(r) if profile.region_count() == 3 => sample_grids(profile, units, &r.states)?,
        _ => Vec::new(),
    };
    let n_states = reference.map_or(0, |r| r.states.len());
    let summary = if n_states == 0 {
        "0 states, trivially consistent".to_string()
    } else {
        format!("{n_states} bound states")
    };
    log::info!("{summary}");
    let passed = pairwise.iter().all(|c| c.passed)
        && normalization.iter().all(|c| c.passed)
        && oracle.as_ref().is_none_or(|o| o.passed);
    let meta = (!no_meta).then(|| Meta {
        tool: "qwell",
        version: env!("CARGO_PKG_VERSION"),
        command: args,
    });
    Ok(RunReport {
        meta,
        profile: echo(profile, units),
        summary,
        methods: method_reports,
        pairwise,
        normalization,
        oracle,
        wavefunctions,
        passed,
    })
}

fn echo(profile: &PotentialProfile, units: &UnitSystem) -> ProfileConfig {
    ProfileConfig {
        boundaries: profile.boundaries().to_vec(),
        potentials: profile.values().to_vec(),
        hbar: units.hbar,
        mass: units.mass,
    }
}

fn run_method(
    profile: &PotentialProfile,
    units: &UnitSystem,
    method: Method,
    resolution: usize,
) -> CliResult<MethodReport> {
    if !spectrum::supports(profile, method) {
        return Ok(MethodReport {
            method: method.name(),
            supported: false,
            note: Some(format!(
                "unsupported: {method} needs a three-region profile, this one has {} regions",
                profile.region_count()
            )),
            states: Vec::new(),
        });
    }
    let states = spectrum::eigenvalues(profile, units, method, resolution).map_err(numerical)?;
    log::debug!("{method}: {} states", states.len());
    let states = states
        .into_iter()
        .map(|s| {
            let residual = residual_of(profile, units, method, s.energy).map_err(numerical)?;
            Ok(StateReport {
                index: s.index,
                energy: s.energy,
                method: method.name(),
                residual,
                norm_constant: s.norm_constant,
                phase: s.phase,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(MethodReport {
        method: method.name(),
        supported: true,
        note: None,
        states,
    })
}

fn residual_of(
    profile: &PotentialProfile,
    units: &UnitSystem,
    method: Method,
    energy: f64,
) -> qwell::Result<f64> {
    match method {
        Method::Classical => classical::dispersion_residual(profile, units, energy),
        Method::Transfer => transfer::bound_state_residual_tm(profile, units, energy),
        Method::Impedance => impedance::bound_state_residual_imp(profile, units, energy),
    }
}

fn pairwise_checks(reports: &[MethodReport]) -> Vec<PairwiseCheck> {
    let mut checks = Vec::new();
    for i in 0..reports.len() {
        for j in i + 1..reports.len() {
            let (a, b) = (&reports[i], &reports[j]);
            if !a.supported || !b.supported {
                continue;
            }
            let common = a.states.len().min(b.states.len());
            let max_abs_delta = (common > 0).then(|| {
                a.states
                    .iter()
                    .zip(&b.states)
                    .map(|(x, y)| (x.energy - y.energy).abs())
                    .fold(0.0, f64::max)
            });
            let passed = a.states.len() == b.states.len()
                && max_abs_delta.is_none_or(|m| m <= PAIRWISE_TOL);
            checks.push(PairwiseCheck {
                method_a: a.method,
                method_b: b.method,
                count_a: a.states.len(),
                count_b: b.states.len(),
                max_abs_delta,
                tolerance: PAIRWISE_TOL,
                passed,
            });
        }
    }
    checks
}

fn normalization_checks(
    profile: &PotentialProfile,
    units: &UnitSystem,
    states: &[StateReport],
) -> CliResult<Vec<NormalizationCheck>> {
    states
        .iter()
        .map(|s| {
            let closed = classical::normalization(profile, units, s.energy).map_err(numerical)?;
            let quadrature =
                classical::normalization_by_quadrature(profile, units, s.energy).map_err(numerical)?;
            let relative_delta = (closed - quadrature).abs() / closed;
            Ok(NormalizationCheck {
                index: s.index,
                energy: s.energy,
                closed_form: closed,
                quadrature,
                relative_delta,
                tolerance: NORMALIZATION_TOL,
                passed: relative_delta <= NORMALIZATION_TOL,
            })
        })
        .collect()
}

fn oracle_section(
    profile: &PotentialProfile,
    units: &UnitSystem,
    n_points: usize,
    reports: &[MethodReport],
) -> CliResult<Option<OracleReport>> {
    let low = profile.global_min();
    let high = profile.outer_min();
    if !(low < high) {
        // no energy window, nothing for the grid to find
        return Ok(None);
    }
    let reference = reports.iter().find(|r| r.supported);
    let margin_energy = reference
        .and_then(|r| r.states.last())
        .map_or(0.5 * (low + high), |s| s.energy);
    let margin =
        oracle::suggested_margin(profile, units, margin_energy, n_points).map_err(numerical)?;
    let problem = oracle::discretize(profile, units, n_points, margin).map_err(numerical)?;
    let e_cut = high - 1e-9 * high.abs().max(1.0);
    let discrete = oracle::eigenvalues_below(&problem, e_cut).map_err(numerical)?;
    let energies: Vec<f64> = discrete.iter().map(|s| s.energy).collect();
    let tail_warning = discrete.iter().any(|s| s.tail_warning);
    let deltas: Vec<OracleDelta> = reports
        .iter()
        .filter(|r| r.supported)
        .map(|r| {
            let common = r.states.len().min(energies.len());
            let max_abs_delta = (common > 0).then(|| {
                r.states
                    .iter()
                    .zip(&energies)
                    .map(|(s, &e)| (s.energy - e).abs())
                    .fold(0.0, f64::max)
            });
            OracleDelta {
                method: r.method,
                count_method: r.states.len(),
                max_abs_delta,
                tolerance: ORACLE_TOL,
                passed: r.states.len() == energies.len()
                    && max_abs_delta.is_none_or(|m| m <= ORACLE_TOL),
            }
        })
        .collect();
    let passed = deltas.iter().all(|d| d.passed);
    Ok(Some(OracleReport {
        n_points,
        margin,
        step: problem.h(),
        e_cut,
        count: energies.len(),
        energies,
        tail_warning,
        deltas,
        passed,
    }))
}

fn sample_grids(
    profile: &PotentialProfile,
    units: &UnitSystem,
    states: &[StateReport],
) -> CliResult<Vec<SampleGrid>> {
    let x0 = profile.first_boundary();
    let x1 = profile.last_boundary();
    states
        .iter()
        .map(|s| {
            let state = BoundState {
                energy: s.energy,
                method: Method::Classical,
                index: s.index,
                norm_constant: None,
                phase: None,
            };
            let mut xs = Vec::with_capacity(GRID_SAMPLES);
            let mut density = Vec::with_capacity(GRID_SAMPLES);
            for i in 0..GRID_SAMPLES {
                let x = x0 + (x1 - x0) * i as f64 / (GRID_SAMPLES - 1) as f64;
                let psi = classical::wavefunction(profile, units, &state, x).map_err(numerical)?;
                xs.push(x);
                density.push(psi * psi);
            }
            Ok(SampleGrid {
                index: s.index,
                energy: s.energy,
                x: xs,
                density,
            })
        })
        .collect()
}

/// 17 significant digits, lossless for f64 round trips.
pub fn csv_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV table for the solve command. Single-method runs list one state per
/// row with the method's residual; multi-method runs put the methods side
/// by side as energy columns, plus the closed-form extras when some method
/// provides them.
pub fn solve_csv(report: &RunReport, single: bool) -> String {
    let mut out = String::new();
    if single {
        let r = &report.methods[0];
        out.push_str("index,energy,residual,norm_constant,phase\n");
        for s in &r.states {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.index,
                csv_number(s.energy),
                csv_number(s.residual),
                s.norm_constant.map(csv_number).unwrap_or_default(),
                s.phase.map(csv_number).unwrap_or_default(),
            ));
        }
        return out;
    }
    let supported: Vec<&MethodReport> = report.methods.iter().filter(|r| r.supported).collect();
    let extras = supported
        .iter()
        .find(|r| r.states.iter().any(|s| s.norm_constant.is_some()));
    let mut header = vec!["index".to_string()];
    header.extend(supported.iter().map(|r| r.method.to_string()));
    if extras.is_some() {
        header.push("norm_constant".to_string());
        header.push("phase".to_string());
    }
    out.push_str(&header.join(","));
    out.push('\n');
    let rows = supported.iter().map(|r| r.states.len()).max().unwrap_or(0);
    for i in 0..rows {
        let mut cells = vec![i.to_string()];
        for r in &supported {
            cells.push(
                r.states
                    .get(i)
                    .map(|s| csv_number(s.energy))
                    .unwrap_or_default(),
            );
        }
        if let Some(r) = extras {
            let state = r.states.get(i);
            cells.push(
                state
                    .and_then(|s| s.norm_constant)
                    .map(csv_number)
                    .unwrap_or_default(),
            );
            cells.push(
                state
                    .and_then(|s| s.phase)
                    .map(csv_number)
                    .unwrap_or_default(),
            );
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
