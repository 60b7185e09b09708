//! 1-D adaptive Simpson quadrature and a polar-grid disc average with a
//! Richardson consistency check.

use crate::error::{Error, Result};

/// Adaptive Simpson on [a, b] to the given absolute tolerance.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    simpson_step(f, a, b, fa, fm, fb, simpson_rule(a, b, fa, fm, fb), tol, 50)
}

#[inline]
fn simpson_rule(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
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
    let left = simpson_rule(a, m, fa, flm, fm);
    let right = simpson_rule(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Average of f over the disc of radius r around (cx, cy), by a midpoint
/// tensor grid in polar coordinates. The grid is refined once and the two
/// levels compared; disagreement beyond `tol` is reported as a numerical
/// error rather than silently accepted.
pub fn disc_average(
    f: &dyn Fn(f64, f64) -> f64,
    cx: f64,
    cy: f64,
    r: f64,
    base_resolution: usize,
    tol: f64,
) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::input("disc_average needs r > 0"));
    }
    let n = base_resolution.max(16);
    let coarse = polar_grid_average(f, cx, cy, r, n);
    let fine = polar_grid_average(f, cx, cy, r, 2 * n);
    if (coarse - fine).abs() > tol.max(1e-14) {
        // one extra refinement before giving up
        let finer = polar_grid_average(f, cx, cy, r, 4 * n);
        if (fine - finer).abs() > tol.max(1e-14) {
            return Err(Error::numerical(format!(
                "disc average failed its Richardson check: {coarse} vs {fine} vs {finer}"
            )));
        }
        return Ok(finer);
    }
    Ok(fine)
}

fn polar_grid_average(f: &dyn Fn(f64, f64) -> f64, cx: f64, cy: f64, r: f64, n: usize) -> f64 {
    // midpoint rule in (ρ², θ): uniform in ρ² makes each cell equal-area
    let mut acc = 0.0;
    let n_theta = 2 * n;
    for i in 0..n {
        let rho = r * (((i as f64 + 0.5) / n as f64).sqrt());
        for j in 0..n_theta {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n_theta as f64;
            acc += f(cx + rho * theta.cos(), cy + rho * theta.sin());
        }
    }
    acc / (n * n_theta) as f64
}
