//! Finitely supported functions on ℤ, their torus symbols, and Toeplitz
//! compressions to centered windows [−M, M]. This is the ℤ-window model used
//! by the Følner/Szegő experiments; no infinite object exists at runtime.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::matrix::ComplexMatrix;

/// A function on ℤ supported in [−M, M]; values stored at offset +M.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFunction {
    radius: usize,
    values: Vec<Complex64>,
}

impl LatticeFunction {
    pub fn new(radius: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != 2 * radius + 1 {
            return Err(Error::input("lattice function needs 2M+1 values"));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::input("lattice function values must be finite"));
        }
        Ok(LatticeFunction { radius, values })
    }

    /// Builds from (position, value) pairs; radius is the largest |position|.
    pub fn from_pairs(pairs: &[(i64, Complex64)]) -> Result<Self> {
        let radius = pairs.iter().map(|&(n, _)| n.unsigned_abs() as usize).max().unwrap_or(0);
        let mut values = vec![Complex64::new(0.0, 0.0); 2 * radius + 1];
        for &(n, z) in pairs {
            values[(n + radius as i64) as usize] += z;
        }
        LatticeFunction::new(radius, values)
    }

    pub fn delta(n: i64) -> Self {
        Self::from_pairs(&[(n, Complex64::new(1.0, 0.0))]).expect("delta is finite")
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// f(n), zero outside the support window.
    #[inline]
    pub fn value(&self, n: i64) -> Complex64 {
        let idx = n + self.radius as i64;
        if idx < 0 || idx as usize >= self.values.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[idx as usize]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

/// L_p norm on the torus of the symbol Σ f(n) z^n, by the periodic trapezoid
/// rule on a uniform grid (p = ∞ reports the grid maximum). Exact up to
/// machine precision for even integer p once the grid resolves the degree.
pub fn torus_norm(f: &LatticeFunction, p: Exponent, quadrature_points: usize) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let min_points = 16 * (2 * f.radius() + 1);
    if quadrature_points < min_points {
        return Err(Error::input(format!(
            "torus_norm needs at least {min_points} quadrature points for support radius {}",
            f.radius()
        )));
    }
    let m = f.radius() as i64;
    let mut acc = 0.0;
    let mut max = 0.0_f64;
    for k in 0..quadrature_points {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (quadrature_points as f64);
        let mut val = Complex64::new(0.0, 0.0);
        for n in -m..=m {
            let phase = Complex64::new(0.0, theta * n as f64).exp();
            val += f.value(n) * phase;
        }
        let a = val.norm();
        max = max.max(a);
        if !p.is_infinite() {
            acc += a.powf(p.value());
        }
    }
    if p.is_infinite() {
        Ok(max)
    } else {
        Ok((acc / quadrature_points as f64).powf(1.0 / p.value()))
    }
}

/// The compressed operator P_M λ(f) P_M as a dense (2M+1)×(2M+1) matrix with
/// entries f(s − t), s, t ∈ [−M, M].
pub fn toeplitz_compression(f: &LatticeFunction, window_radius: usize) -> ComplexMatrix {
    let size = 2 * window_radius + 1;
    let m = window_radius as i64;
    ComplexMatrix::from_fn(size, size, |s, t| f.value((s as i64 - m) - (t as i64 - m)))
        .expect("finite by construction")
}
