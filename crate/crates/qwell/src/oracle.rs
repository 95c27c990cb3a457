//! Brute-force finite-difference eigensolver used to cross-check the
//! analytic methods.
//!
//! The operator `-(hbar^2/2m) d^2/dx^2 + U` is discretized with central
//! second differences on a uniform grid, truncated by hard walls (Dirichlet
//! conditions) well outside the outermost potential steps. Two details keep
//! the eigenvalue error at O(h^2) despite the discontinuities:
//!
//! * the grid is snapped so the first and last steps fall exactly on nodes
//!   (`h` divides their distance), and
//! * each node sees the cell average of `U` over `[x - h/2, x + h/2]`
//!   instead of the pointwise value, which restores second-order behaviour
//!   at interior steps that cannot all be snapped at once.
//!
//! Eigenvalues come from Sturm-sequence bisection on the tridiagonal
//! operator and eigenvectors from inverse iteration. Nothing here shares
//! machinery with the matching, transfer, or impedance solvers; that is the
//! point.

use crate::error::{QwellError, Result};
use crate::potential::{PotentialProfile, UnitSystem};

const BISECT_ITERS: usize = 200;
const INVERSE_ITERS: usize = 6;

/// Symmetric tridiagonal discretization of the Hamiltonian on a uniform
/// grid with Dirichlet walls at `x_min` and `x_max`. The matrix acts on the
/// `n_points - 2` interior nodes; the wall values are identically zero.
#[derive(Debug, Clone)]
pub struct DiscretizedProblem {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    /// `hbar^2/(m h^2) + <U>_i` on interior nodes `1..n_points-1`.
    diagonal: Vec<f64>,
    /// `-hbar^2/(2 m h^2)`, uniform.
    offdiagonal: f64,
}

impl DiscretizedProblem {
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Grid step.
    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    /// Coordinate of full-grid node `i` in `0..n_points`. The matrix row
    /// `j` corresponds to node `j + 1`.
    pub fn node(&self, i: usize) -> f64 {
        self.x_min + self.h() * i as f64
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn offdiagonal(&self) -> f64 {
        self.offdiagonal
    }
}

/// One discrete eigenpair. The eigenvector holds the interior-node values,
/// scaled so the trapezoidal sum `sum psi_i^2 h` equals one (the wall
/// values are exactly zero, so the end weights drop out).
#[derive(Debug, Clone)]
pub struct DiscreteState {
    pub energy: f64,
    pub eigenvector: Vec<f64>,
    /// Set when the normalized density at either first or last interior
    /// node exceeds 1e-10, i.e. the margin was too small to contain the
    /// decay tail and the hard walls are biasing this state.
    pub tail_warning: bool,
}

/// Average of the piecewise-constant potential over `[x - h/2, x + h/2]`.
fn cell_average(profile: &PotentialProfile, x: f64, h: f64) -> f64 {
    let lo = x - 0.5 * h;
    let hi = x + 0.5 * h;
    let values = profile.values();
    let mut acc = 0.0;
    let mut cursor = lo;
    for (j, &b) in profile.boundaries().iter().enumerate() {
        if b <= cursor {
            continue;
        }
        if b >= hi {
            break;
        }
        acc += values[j] * (b - cursor);
        cursor = b;
    }
    acc += values[profile.region_at(cursor)] * (hi - cursor);
    acc / h
}

/// Build the step-snapped finite-difference problem. `margin` is the
/// requested distance from the outermost steps to the hard walls; the
/// realized margins differ by up to one step because the grid is aligned
/// to the potential, not to the walls.
pub fn discretize(
    profile: &PotentialProfile,
    units: &UnitSystem,
    n_points: usize,
    margin: f64,
) -> Result<DiscretizedProblem> {
    if n_points < 64 {
        return Err(QwellError::OutOfRange {
            what: "n_points",
            value: n_points as f64,
            requirement: "at least 64",
        });
    }
    if !margin.is_finite() {
        return Err(QwellError::NonFinite {
            what: "margin",
            value: margin,
        });
    }
    if margin <= 0.0 {
        return Err(QwellError::NonPositive {
            what: "margin",
            value: margin,
        });
    }

    let first = profile.first_boundary();
    let width = profile.last_boundary() - first;
    let segments = n_points - 1;
    // snap: choose h = width/k with k the step count closest to the
    // unsnapped spacing, then spend the remaining nodes on the margins
    let h0 = (width + 2.0 * margin) / segments as f64;
    let k = ((width / h0).round() as usize).clamp(1, segments);
    let h = width / k as f64;
    let margin_nodes_left = (segments - k) / 2;
    let x_min = first - margin_nodes_left as f64 * h;
    let x_max = x_min + segments as f64 * h;

    let kinetic = units.kinetic_scale() / (h * h);
    let diagonal = (1..n_points - 1)
        .map(|i| 2.0 * kinetic + cell_average(profile, x_min + h * i as f64, h))
        .collect();
    Ok(DiscretizedProblem {
        x_min,
        x_max,
        n_points,
        diagonal,
        offdiagonal: -kinetic,
    })
}

/// Number of eigenvalues strictly below `lambda`, by counting negative
/// pivots of the LDL^T factorization of `T - lambda I` (Sturm sequence).
pub fn sturm_count(problem: &DiscretizedProblem, lambda: f64) -> usize {
    let e2 = problem.offdiagonal * problem.offdiagonal;
    // keeps e2/q representable after a near-zero pivot
    let pivot_floor = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * e2);
    let mut count = 0;
    let mut q = 1.0f64;
    for (i, &d) in problem.diagonal.iter().enumerate() {
        let coupling = if i == 0 { 0.0 } else { e2 / q };
        q = d - lambda - coupling;
        if q.abs() < pivot_floor {
            q = -pivot_floor;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All discrete eigenvalues below `e_cut`, ascending, each isolated by
/// bisection on the Sturm count.
pub fn eigenvalues_only(problem: &DiscretizedProblem, e_cut: f64) -> Result<Vec<f64>> {
    if !e_cut.is_finite() {
        return Err(QwellError::NonFinite {
            what: "e_cut",
            value: e_cut,
        });
    }
    // Gershgorin: interior rows give lambda >= min_i (d_i - 2|e|), which is
    // exactly the smallest cell-averaged potential
    let lower = problem
        .diagonal
        .iter()
        .fold(f64::INFINITY, |m, &d| m.min(d))
        + 2.0 * problem.offdiagonal;
    let total = sturm_count(problem, e_cut);
    let mut out = Vec::with_capacity(total);
    for index in 0..total {
        let mut lo = lower;
        let mut hi = e_cut;
        for _ in 0..BISECT_ITERS {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * f64::EPSILON * mid.abs().max(1.0) {
                break;
            }
            if sturm_count(problem, mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// Eigenpairs below `e_cut`: bisected eigenvalues plus inverse-iteration
/// eigenvectors, trapezoid-normalized, with a post-hoc margin check.
pub fn eigenvalues_below(problem: &DiscretizedProblem, e_cut: f64) -> Result<Vec<DiscreteState>> {
    let h = problem.h();
    let states = eigenvalues_only(problem, e_cut)?
        .into_iter()
        .map(|energy| {
            let mut v = inverse_iteration(problem, energy);
            // unit l2 norm becomes unit trapezoid integral
            let scale = 1.0 / h.sqrt();
            for x in v.iter_mut() {
                *x *= scale;
            }
            let tail = v[0] * v[0];
            let tail = tail.max(v[v.len() - 1] * v[v.len() - 1]);
            DiscreteState {
                energy,
                eigenvector: v,
                tail_warning: tail > 1e-10,
            }
        })
        .collect();
    Ok(states)
}

/// Margin heuristic: forty decay lengths of the slowest outer tail at the
/// shallowest state `e_top`, capped so the implied grid step stays near
/// 1.4e-3 length units per node at the given `n_points` (and never below
/// one well width).
pub fn suggested_margin(
    profile: &PotentialProfile,
    units: &UnitSystem,
    e_top: f64,
    n_points: usize,
) -> Result<f64> {
    let outer = profile.outer_min();
    if !(e_top < outer) {
        return Err(QwellError::EnergyOutsideWindow {
            energy: e_top,
            low: profile.global_min(),
            high: outer,
        });
    }
    let width = profile.last_boundary() - profile.first_boundary();
    let values = profile.values();
    let kappa_of = |u: f64| (2.0 * units.mass * (u - e_top)).sqrt() / units.hbar;
    let kappa_min = kappa_of(values[0]).min(kappa_of(values[values.len() - 1]));
    let cap = ((1.4e-3 * (n_points - 1) as f64 - width) / 2.0).max(width);
    Ok((40.0 / kappa_min).min(cap))
}

/// deterministic start vector with no symmetry, so inverse iteration never
/// begins orthogonal to an even or odd target state
fn seeded_start(n: usize) -> Vec<f64> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

fn l2_normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

fn residual_norm(problem: &DiscretizedProblem, lambda: f64, v: &[f64]) -> f64 {
    let n = v.len();
    let e = problem.offdiagonal;
    let d = &problem.diagonal;
    let mut acc = 0.0;
    for i in 0..n {
        let mut r = (d[i] - lambda) * v[i];
        if i > 0 {
            r += e * v[i - 1];
        }
        if i + 1 < n {
            r += e * v[i + 1];
        }
        acc += r * r;
    }
    acc.sqrt()
}

fn inverse_iteration(problem: &DiscretizedProblem, lambda: f64) -> Vec<f64> {
    let lu = ShiftedTridiagonalLu::factor(&problem.diagonal, problem.offdiagonal, lambda);
    let mut v = seeded_start(problem.diagonal.len());
    l2_normalize(&mut v);
    let scale = problem
        .diagonal
        .iter()
        .fold(0.0f64, |m, &d| m.max((d - lambda).abs()))
        + 2.0 * problem.offdiagonal.abs();
    let target = (8.0 * f64::EPSILON * scale).max(1e-10);
    for _ in 0..INVERSE_ITERS {
        lu.solve(&mut v);
        l2_normalize(&mut v);
        if residual_norm(problem, lambda, &v) <= target {
            break;
        }
    }
    let imax = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap();
    if v[imax] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
    v
}

/// Partial-pivoting LU of `T - lambda I` for a symmetric tridiagonal `T`
/// with uniform off-diagonal. Row swaps introduce a second superdiagonal.
struct ShiftedTridiagonalLu {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper1: Vec<f64>,
    upper2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedTridiagonalLu {
    fn factor(diagonal: &[f64], off: f64, lambda: f64) -> Self {
        let n = diagonal.len();
        let mut lower = vec![off; n.saturating_sub(1)];
        let mut diag: Vec<f64> = diagonal.iter().map(|&d| d - lambda).collect();
        let mut upper1 = vec![off; n.saturating_sub(1)];
        let mut upper2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let scale = diag.iter().fold(0.0f64, |m, &d| m.max(d.abs())) + 2.0 * off.abs();
        // exact singularity is welcome in inverse iteration; nudge the
        // pivot instead of failing
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        for i in 0..n.saturating_sub(1) {
            if diag[i].abs() >= lower[i].abs() {
                if diag[i] == 0.0 {
                    diag[i] = tiny;
                }
                let m = lower[i] / diag[i];
                lower[i] = m;
                diag[i + 1] -= m * upper1[i];
            } else {
                let m = diag[i] / lower[i];
                diag[i] = lower[i];
                lower[i] = m;
                let next_diag = diag[i + 1];
                diag[i + 1] = upper1[i] - m * next_diag;
                upper1[i] = next_diag;
                if i + 2 < n {
                    upper2[i] = upper1[i + 1];
                    upper1[i + 1] = -m * upper2[i];
                }
                swapped[i] = true;
            }
        }
        if let Some(last) = diag.last_mut() {
            if *last == 0.0 {
                *last = tiny;
            }
        }
        ShiftedTridiagonalLu {
            lower,
            diag,
            upper1,
            upper2,
            swapped,
        }
    }

    fn solve(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                rhs.swap(i, i + 1);
            }
            rhs[i + 1] -= self.lower[i] * rhs[i];
        }
        rhs[n - 1] /= self.diag[n - 1];
        if n >= 2 {
            rhs[n - 2] = (rhs[n - 2] - self.upper1[n - 2] * rhs[n - 1]) / self.diag[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            rhs[i] =
                (rhs[i] - self.upper1[i] * rhs[i + 1] - self.upper2[i] * rhs[i + 2]) / self.diag[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{find_bound_states, wavefunction, DEFAULT_RESOLUTION};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    const PET_ENERGIES: [f64; 4] = [
        -9.108322717867747,
        -6.465789337116572,
        -2.197655362612720,
        3.280997092284737,
    ];

    fn pet_profile() -> (PotentialProfile, UnitSystem) {
        (
            PotentialProfile::new(vec![0.0, 2.0], vec![5.0, -10.0, 8.0]).unwrap(),
            UnitSystem::default(),
        )
    }

    #[test]
    fn zero_potential_box_matches_discrete_and_continuum_spectra() {
        let profile = PotentialProfile::new(vec![0.0, 1.0], vec![0.0, 0.0, 0.0]).unwrap();
        let units = UnitSystem::default();
        let problem = discretize(&profile, &units, 1001, 1.0).unwrap();
        let h = problem.h();
        let length = problem.x_max() - problem.x_min();
        let interior = problem.n_points() - 2;
        let energies = eigenvalues_only(&problem, 10.0).unwrap();
        assert_eq!(energies.len(), 4);
        for (j, &e) in energies.iter().enumerate() {
            let mode = (j + 1) as f64;
            // exact spectrum of the discrete Dirichlet Laplacian
            let discrete =
                (1.0 - (mode * PI / (interior + 1) as f64).cos()) / (h * h);
            assert_abs_diff_eq!(e, discrete, epsilon = 1e-10 * discrete.max(1.0));
            let continuum = 0.5 * (mode * PI / length).powi(2);
            assert!(
                (e - continuum).abs() < continuum * (mode * PI * h / length).powi(2),
                "mode {mode}: {e} vs {continuum}"
            );
        }
    }

    #[test]
    fn eigenvalues_converge_at_second_order() {
        let (profile, units) = pet_profile();
        // margin 3 with these node counts makes h exactly 4e-3, 2e-3, 1e-3
        let mut errors = Vec::new();
        let mut steps = Vec::new();
        for n in [2001usize, 4001, 8001] {
            let problem = discretize(&profile, &units, n, 3.0).unwrap();
            steps.push(problem.h());
            let e0 = eigenvalues_only(&problem, 5.0).unwrap()[0];
            errors.push((e0 - PET_ENERGIES[0]).abs());
        }
        assert_abs_diff_eq!(steps[0], 4e-3, epsilon = 1e-15);
        assert_abs_diff_eq!(steps[1], 2e-3, epsilon = 1e-15);
        for pair in errors.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!(
                (3.5..=4.5).contains(&ratio),
                "halving the step scaled the error by {ratio}, errors {errors:?}"
            );
        }
        let order = (errors[0] / errors[2]).ln() / (steps[0] / steps[2]).ln();
        assert!((1.7..=2.3).contains(&order), "fitted order {order}");
    }

    #[test]
    fn symmetric_profile_eigenvectors_alternate_parity() {
        let profile = PotentialProfile::new(vec![0.0, 1.7], vec![6.0, -4.0, 6.0]).unwrap();
        let units = UnitSystem::default();
        let problem = discretize(&profile, &units, 2001, 3.0).unwrap();
        // the margin split must come out even or mirroring is off-grid
        let center = 0.5 * (problem.x_min() + problem.x_max());
        assert_abs_diff_eq!(center, 0.85, epsilon = 1e-12);
        let states = eigenvalues_below(&problem, 6.0).unwrap();
        assert_eq!(states.len(), 3);
        for (j, state) in states.iter().enumerate() {
            let v = &state.eigenvector;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let peak = v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            for i in 0..v.len() {
                let mirrored = sign * v[v.len() - 1 - i];
                assert!(
                    (v[i] - mirrored).abs() < 1e-6 * peak,
                    "state {j} node {i}: {} vs {}",
                    v[i],
                    mirrored
                );
            }
        }
    }

    #[test]
    fn state_count_and_energies_match_the_analytic_solver() {
        let (profile, units) = pet_profile();
        let margin = suggested_margin(&profile, &units, PET_ENERGIES[3], 20001).unwrap();
        // the step cap binds here: (1.4e-3 * 20000 - 2) / 2
        assert_abs_diff_eq!(margin, 13.0, epsilon = 1e-12);
        let problem = discretize(&profile, &units, 20001, margin).unwrap();
        let energies = eigenvalues_only(&problem, 5.0).unwrap();
        let analytic = find_bound_states(&profile, &units, DEFAULT_RESOLUTION).unwrap();
        assert_eq!(energies.len(), analytic.len());
        for (fd, exact) in energies.iter().zip(&analytic) {
            assert_abs_diff_eq!(fd, &exact.energy, epsilon = 5e-4);
        }
    }

    #[test]
    fn sturm_count_is_monotone_in_the_cutoff() {
        let (profile, units) = pet_profile();
        let problem = discretize(&profile, &units, 2001, 3.0).unwrap();
        let mut last = 0;
        for cut in [-10.0, -8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 5.0] {
            let count = sturm_count(&problem, cut);
            assert!(count >= last, "count dropped at cutoff {cut}");
            last = count;
        }
        assert_eq!(last, 4);
    }

    #[test]
    fn inverse_iteration_leaves_small_residuals() {
        let (profile, units) = pet_profile();
        let problem = discretize(&profile, &units, 4001, 3.0).unwrap();
        for state in eigenvalues_below(&problem, 5.0).unwrap() {
            let mut v = state.eigenvector.clone();
            l2_normalize(&mut v);
            let res = residual_norm(&problem, state.energy, &v);
            assert!(res < 1e-8, "residual {res} at E = {}", state.energy);
        }
    }

    #[test]
    fn undersized_margin_raises_the_tail_warning() {
        let (profile, units) = pet_profile();
        let tight = discretize(&profile, &units, 1001, 0.5).unwrap();
        let states = eigenvalues_below(&tight, 5.0).unwrap();
        assert!(states.iter().all(|s| s.tail_warning));
        let margin = suggested_margin(&profile, &units, PET_ENERGIES[3], 20001).unwrap();
        let roomy = discretize(&profile, &units, 20001, margin).unwrap();
        let states = eigenvalues_below(&roomy, 5.0).unwrap();
        assert_eq!(states.len(), 4);
        assert!(states.iter().all(|s| !s.tail_warning));
    }

    #[test]
    fn eigenvector_density_matches_classical_density_pointwise() {
        let (profile, units) = pet_profile();
        let problem = discretize(&profile, &units, 8001, 3.0).unwrap();
        let discrete = eigenvalues_below(&problem, 5.0).unwrap();
        let analytic = find_bound_states(&profile, &units, DEFAULT_RESOLUTION).unwrap();
        assert_eq!(discrete.len(), analytic.len());
        for (fd, exact) in discrete.iter().zip(&analytic) {
            let mut worst = 0.0f64;
            for (j, &value) in fd.eigenvector.iter().enumerate() {
                let x = problem.node(j + 1);
                let psi = wavefunction(&profile, &units, exact, x).unwrap();
                worst = worst.max((value * value - psi * psi).abs());
            }
            assert!(
                worst < 5e-4,
                "density mismatch {worst} for state at {}",
                fd.energy
            );
        }
    }

    #[test]
    fn discretize_validates_its_inputs() {
        let (profile, units) = pet_profile();
        assert!(matches!(
            discretize(&profile, &units, 63, 1.0),
            Err(QwellError::OutOfRange { .. })
        ));
        assert!(matches!(
            discretize(&profile, &units, 1001, 0.0),
            Err(QwellError::NonPositive { .. })
        ));
        assert!(matches!(
            discretize(&profile, &units, 1001, f64::NAN),
            Err(QwellError::NonFinite { .. })
        ));
        assert!(matches!(
            eigenvalues_only(&discretize(&profile, &units, 1001, 1.0).unwrap(), f64::NAN),
            Err(QwellError::NonFinite { .. })
        ));
    }

    #[test]
    fn suggested_margin_switches_between_decay_rule_and_step_cap() {
        let (profile, units) = pet_profile();
        // deep state: forty decay lengths fit under the cap
        let kappa = (2.0f64 * (5.0 + 9.1)).sqrt();
        let margin = suggested_margin(&profile, &units, -9.1, 20001).unwrap();
        assert_abs_diff_eq!(margin, 40.0 / kappa, epsilon = 1e-12);
        // shallow state: the cap binds
        let margin = suggested_margin(&profile, &units, 4.9, 20001).unwrap();
        assert_abs_diff_eq!(margin, 13.0, epsilon = 1e-12);
        assert!(matches!(
            suggested_margin(&profile, &units, 5.0, 20001),
            Err(QwellError::EnergyOutsideWindow { .. })
        ));
    }

    #[test]
    fn grid_snaps_the_outer_steps_onto_nodes() {
        let profile =
            PotentialProfile::new(vec![0.0, 1.0, 1.5, 2.5], vec![10.0, -8.0, 2.0, -8.0, 10.0])
                .unwrap();
        let units = UnitSystem::default();
        let problem = discretize(&profile, &units, 5001, 2.9).unwrap();
        let h = problem.h();
        let from_min = (0.0 - problem.x_min()) / h;
        let span = 2.5 / h;
        assert_abs_diff_eq!(from_min, from_min.round(), epsilon = 1e-9);
        assert_abs_diff_eq!(span, span.round(), epsilon = 1e-9);
    }

    #[test]
    fn cell_average_blends_values_across_a_step() {
        let (profile, _) = pet_profile();
        // cell centered on the step at 0 sees half of each side
        assert_abs_diff_eq!(cell_average(&profile, 0.0, 0.1), -2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(cell_average(&profile, 1.0, 0.1), -10.0, epsilon = 1e-12);
        // quarter overlap with the right wall
        assert_abs_diff_eq!(
            cell_average(&profile, 2.0 - 0.025, 0.1),
            0.75 * -10.0 + 0.25 * 8.0,
            epsilon = 1e-12
        );
        // a wide cell spans the whole well
        assert_abs_diff_eq!(
            cell_average(&profile, 1.0, 4.0),
            (5.0 + 2.0 * -10.0 + 8.0) / 4.0,
            epsilon = 1e-12
        );
    }
}
