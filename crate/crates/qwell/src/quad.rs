//! Adaptive Simpson quadrature, used by the normalization cross-checks.

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by adaptive
/// Simpson subdivision with the standard one-step Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn integrates_sine_over_half_period() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, PI, 1e-12);
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-11);
    }

    #[test]
    fn cubic_polynomials_are_exact() {
        let v = adaptive_simpson(&|x: f64| 3.0 * x * x * x - x + 1.0, -1.0, 2.0, 1e-14);
        let exact = 3.0 / 4.0 * (16.0 - 1.0) - 0.5 * (4.0 - 1.0) + 3.0;
        assert_abs_diff_eq!(v, exact, epsilon = 1e-12);
    }

    #[test]
    fn oscillatory_integrand_meets_tolerance() {
        let v = adaptive_simpson(&|x: f64| (10.0 * x).cos().powi(2), 0.0, 3.0, 1e-12);
        let exact = 1.5 + (60.0f64).sin() / 40.0;
        assert_abs_diff_eq!(v, exact, epsilon = 1e-10);
    }

    #[test]
    fn degenerate_interval_is_zero() {
        assert_eq!(adaptive_simpson(&|x: f64| x.exp(), 2.0, 2.0, 1e-12), 0.0);
    }
}
