//! Scalar root location: uniform bracketing followed by bisection.
//!
//! All three bound-state residuals are continuous real functions on an open
//! energy window, so sign-change bracketing plus bisection is exhaustive up
//! to the scan resolution and needs no derivatives.

use crate::error::{QwellError, Result};

/// Hard cap on bisection steps; 200 halvings exhaust f64 resolution on any
/// window many times over.
const MAX_BISECT: usize = 200;

/// Finds roots of `f` on the open interval `(lo, hi)`.
///
/// The interval is sampled at `resolution` points placed at half-step
/// offsets, so the endpoints themselves are never evaluated. Each sign
/// change between consecutive samples is narrowed by bisection until the
/// bracket width drops below `rel_tol * max(1, |E|)`. Roots come back
/// sorted ascending. Samples at which `f` errors are retried once with a
/// tiny offset and otherwise skipped, so isolated degenerate points do not
/// abort a scan.
pub fn find_roots<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    resolution: usize,
    rel_tol: f64,
) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if resolution < 2 {
        return Err(QwellError::OutOfRange {
            what: "resolution",
            value: resolution as f64,
            requirement: "at least 2 scan points",
        });
    }
    if !(hi > lo) {
        return Ok(Vec::new());
    }
    let step = (hi - lo) / resolution as f64;
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..resolution {
        let x = lo + (i as f64 + 0.5) * step;
        let fx = match f(x) {
            Ok(v) => v,
            // a degenerate sample (for instance an energy hitting a region
            // potential exactly) is nudged off the bad point once
            Err(_) => match f(x + 1e-9 * step) {
                Ok(v) => v,
                Err(_) => {
                    prev = None;
                    continue;
                }
            },
        };
        if !fx.is_finite() {
            prev = None;
            continue;
        }
        if fx == 0.0 {
            roots.push(x);
            prev = Some((x, fx));
            continue;
        }
        if let Some((px, pfx)) = prev {
            if pfx != 0.0 && (pfx < 0.0) != (fx < 0.0) {
                roots.push(bisect(&mut f, px, x, pfx, rel_tol)?);
            }
        }
        prev = Some((x, fx));
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 10.0 * rel_tol * a.abs().max(1.0));
    Ok(roots)
}

/// Bisection on a bracket with `f(lo) = flo` of known sign and a sign change
/// somewhere in `(lo, hi)`. Stops when the bracket width is below
/// `rel_tol * max(1, |mid|)`.
fn bisect<F>(f: &mut F, mut lo: f64, mut hi: f64, flo: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let neg_low = flo < 0.0;
    for _ in 0..MAX_BISECT {
        let mid = 0.5 * (lo + hi);
        if hi - lo < rel_tol * mid.abs().max(1.0) || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == neg_low {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(QwellError::ConvergenceFailure {
        what: "bisection",
        detail: format!("bracket [{lo}, {hi}] failed to shrink below tolerance"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn finds_all_sine_roots_in_interval() {
        let roots = find_roots(|x| Ok(x.sin()), 0.5, 10.0, 2048, 1e-12).unwrap();
        assert_eq!(roots.len(), 3);
        for (root, expect) in roots.iter().zip([PI, 2.0 * PI, 3.0 * PI]) {
            assert_abs_diff_eq!(root, &expect, epsilon = 1e-11);
        }
    }

    #[test]
    fn respects_relative_tolerance_at_large_roots() {
        let target = 1.0e6;
        let roots = find_roots(|x| Ok(x - target), 9.0e5, 1.1e6, 64, 1e-12).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - target).abs() < 1e-12 * target * 2.0);
    }

    #[test]
    fn empty_or_inverted_interval_yields_no_roots() {
        assert!(find_roots(|x| Ok(x), 1.0, 1.0, 16, 1e-12).unwrap().is_empty());
        assert!(find_roots(|x| Ok(x), 2.0, 1.0, 16, 1e-12).unwrap().is_empty());
    }

    #[test]
    fn exact_zero_sample_is_reported_once() {
        // resolution 10 on (0,1) samples x = 0.05, 0.15, ...; f = x - 0.25
        // hits zero exactly at the third sample on many platforms; either
        // way exactly one root must come back
        let roots = find_roots(|x| Ok(x - 0.25), 0.0, 1.0, 10, 1e-14).unwrap();
        assert_eq!(roots.len(), 1);
        assert_abs_diff_eq!(roots[0], 0.25, epsilon = 1e-13);
    }

    #[test]
    fn rejects_undersized_resolution() {
        assert!(find_roots(|x| Ok(x), 0.0, 1.0, 1, 1e-12).is_err());
    }

    #[test]
    fn skips_isolated_error_samples() {
        // f errors on a single interior point; the two roots either side of
        // it must still be found
        let roots = find_roots(
            |x| {
                if (x - 0.55).abs() < 0.04 {
                    Err(QwellError::NonFinite { what: "probe", value: x })
                } else {
                    Ok((x - 0.3) * (x - 0.8))
                }
            },
            0.0,
            1.0,
            10,
            1e-12,
        )
        .unwrap();
        assert_eq!(roots.len(), 2);
        assert_abs_diff_eq!(roots[0], 0.3, epsilon = 1e-11);
        assert_abs_diff_eq!(roots[1], 0.8, epsilon = 1e-11);
    }
}
