//! Singular value decomposition by one-sided Jacobi rotations.
//!
//! One-sided Jacobi resolves small singular values to high relative accuracy,
//! which matters here because trace-norm sums are dominated by their tails.
//! Cost is O(n^3) per sweep with typically 6-12 sweeps.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Thin SVD: `input = left · diag(singular_values) · right^H`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// m×k, orthonormal columns (k = min(m, n)).
    pub left: ComplexMatrix,
    /// Nonnegative, sorted descending.
    pub singular_values: Vec<f64>,
    /// n×k, orthonormal columns.
    pub right: ComplexMatrix,
}

const MAX_SWEEPS: usize = 64;
// Pairwise rotation threshold, relative to the column norms; the absolute
// floor keeps the test meaningful for denormal-scale columns.
const PAIR_TOL: f64 = 1e-13;
const ABS_FLOOR: f64 = 1e-300;

pub fn svd(a: &ComplexMatrix) -> Result<SvdResult> {
    if a.rows() >= a.cols() {
        jacobi_tall(a)
    } else {
        let r = jacobi_tall(&a.conj_transpose())?;
        Ok(SvdResult {
            left: r.right,
            singular_values: r.singular_values,
            right: r.left,
        })
    }
}

#[inline]
fn dotc(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re + x.im * y.im;
        im += x.re * y.im - x.im * y.re;
    }
    Complex64::new(re, im)
}

#[inline]
fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.re * z.re + z.im * z.im).sum()
}

/// Applies the rotation pair (u, v) -> (c·u − s·φ̄·v, s·u + c·φ̄·v) in place.
#[inline]
fn rotate(u: &mut [Complex64], v: &mut [Complex64], c: f64, s: f64, phase_conj: Complex64) {
    for (x, y) in u.iter_mut().zip(v.iter_mut()) {
        let t = phase_conj * *y;
        let nx = Complex64::new(c * x.re - s * t.re, c * x.im - s * t.im);
        let ny = Complex64::new(s * x.re + c * t.re, s * x.im + c * t.im);
        *x = nx;
        *y = ny;
    }
}

/// Column-major working store: `data[j*stride .. j*stride+stride]` is column j.
struct Columns {
    data: Vec<Complex64>,
    stride: usize,
}

impl Columns {
    fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.stride..(j + 1) * self.stride]
    }

    fn col_pair_mut(&mut self, i: usize, j: usize) -> (&mut [Complex64], &mut [Complex64]) {
        debug_assert!(i < j);
        let (a, b) = self.data.split_at_mut(j * self.stride);
        (
            &mut a[i * self.stride..(i + 1) * self.stride],
            &mut b[..self.stride],
        )
    }
}

fn jacobi_tall(a: &ComplexMatrix) -> Result<SvdResult> {
    let m = a.rows();
    let n = a.cols();

    let mut work = Columns {
        data: vec![Complex64::new(0.0, 0.0); m * n],
        stride: m,
    };
    for i in 0..m {
        for j in 0..n {
            work.data[j * m + i] = a.get(i, j);
        }
    }
    let mut vacc = Columns {
        data: vec![Complex64::new(0.0, 0.0); n * n],
        stride: n,
    };
    for j in 0..n {
        vacc.data[j * n + j] = Complex64::new(1.0, 0.0);
    }

    let mut norms: Vec<f64> = (0..n).map(|j| norm_sqr(work.col(j))).collect();
    // columns below rounding noise of the whole matrix are treated as zero;
    // rotating them against real columns never converges
    let zero_floor = norms.iter().sum::<f64>() * 1e-30;

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        // refresh cached norms once per sweep to stop incremental drift
        for (j, nj) in norms.iter_mut().enumerate() {
            *nj = norm_sqr(work.col(j));
        }
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in (i + 1)..n {
                let alpha = norms[i];
                let beta = norms[j];
                if alpha <= zero_floor || beta <= zero_floor {
                    continue;
                }
                let gamma = dotc(work.col(i), work.col(j));
                let g = gamma.norm();
                if g <= ABS_FLOOR || g * g <= PAIR_TOL * PAIR_TOL * alpha * beta {
                    continue;
                }
                rotated = true;
                let phase_conj = (gamma / g).conj();
                // small-|t| root of t^2 - 2τt - 1 = 0; the large root rotates
                // by near-90° and defeats cyclic convergence
                let tau = (alpha - beta) / (2.0 * g);
                let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = -sign / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                {
                    let (u, v) = work.col_pair_mut(i, j);
                    rotate(u, v, c, s, phase_conj);
                }
                {
                    let (u, v) = vacc.col_pair_mut(i, j);
                    rotate(u, v, c, s, phase_conj);
                }
                let shift = 2.0 * c * s * g;
                let (na, nb) = (
                    c * c * alpha + s * s * beta - shift,
                    s * s * alpha + c * c * beta + shift,
                );
                norms[i] = na;
                norms[j] = nb;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::numerical("jacobi svd did not converge"));
    }

    let mut sigmas: Vec<f64> = (0..n).map(|j| norm_sqr(work.col(j)).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigmas[j].total_cmp(&sigmas[i]));

    let mut left = vec![Complex64::new(0.0, 0.0); m * n];
    let mut right = vec![Complex64::new(0.0, 0.0); n * n];
    let mut zero_cols: Vec<usize> = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        let sigma = sigmas[src];
        if sigma * sigma > zero_floor && sigma > ABS_FLOOR {
            let col = work.col(src);
            for i in 0..m {
                left[i * n + dst] = col[i] / sigma;
            }
        } else {
            zero_cols.push(dst);
        }
        let vcol = vacc.col(src);
        for i in 0..n {
            right[i * n + dst] = vcol[i];
        }
    }
    sigmas.sort_by(|a, b| b.total_cmp(a));
    if !zero_cols.is_empty() {
        complete_orthonormal(&mut left, m, n, &zero_cols);
        for &j in &zero_cols {
            sigmas[j] = 0.0;
        }
    }

    Ok(SvdResult {
        left: ComplexMatrix::new(m, n, left)?,
        singular_values: sigmas,
        right: ComplexMatrix::new(n, n, right)?,
    })
}

/// Fills the listed columns of `left` (m×n, row-major) with unit vectors
/// orthogonal to every other column, via Gram-Schmidt over the standard basis.
fn complete_orthonormal(left: &mut [Complex64], m: usize, n: usize, targets: &[usize]) {
    let filled: Vec<usize> = (0..n).filter(|j| !targets.contains(j)).collect();
    let mut done: Vec<usize> = filled;
    for &target in targets {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for cand in 0..m {
            let mut v = vec![Complex64::new(0.0, 0.0); m];
            v[cand] = Complex64::new(1.0, 0.0);
            // two GS passes for numerical safety
            for _ in 0..2 {
                for &j in &done {
                    let mut ip = Complex64::new(0.0, 0.0);
                    for i in 0..m {
                        ip += left[i * n + j].conj() * v[i];
                    }
                    for i in 0..m {
                        v[i] -= ip * left[i * n + j];
                    }
                }
            }
            let nrm = norm_sqr(&v).sqrt();
            if best.as_ref().map_or(true, |(bn, _)| nrm > *bn) {
                best = Some((nrm, v));
            }
            if nrm > 0.9 {
                break;
            }
        }
        let (nrm, v) = best.expect("rank < m guarantees a candidate");
        for i in 0..m {
            left[i * n + target] = v[i] / nrm;
        }
        done.push(target);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruction_residual(a: &ComplexMatrix, r: &SvdResult) -> f64 {
        let k = r.singular_values.len();
        let mut entries = vec![c(0.0, 0.0); k * k];
        for (i, &s) in r.singular_values.iter().enumerate() {
            entries[i * k + i] = c(s, 0.0);
        }
        let sigma = ComplexMatrix::new(k, k, entries).unwrap();
        let rebuilt = r.left.mul(&sigma).unwrap().mul(&r.right.conj_transpose()).unwrap();
        crate::matrix::max_abs_diff(a, &rebuilt).unwrap()
    }

    fn orthonormality_residual(u: &ComplexMatrix) -> f64 {
        let g = u.conj_transpose().mul(u).unwrap();
        crate::matrix::max_abs_diff(&g, &ComplexMatrix::identity(u.cols())).unwrap()
    }

    #[test]
    fn identity_three() {
        let r = svd(&ComplexMatrix::identity(3)).unwrap();
        for &s in &r.singular_values {
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rank_one_projection() {
        let r = svd(&ComplexMatrix::matrix_unit(2, 2, 0, 0)).unwrap();
        assert!((r.singular_values[0] - 1.0).abs() < 1e-14);
        assert!(r.singular_values[1].abs() < 1e-14);
        assert!(orthonormality_residual(&r.left) < 1e-12);
        assert!(orthonormality_residual(&r.right) < 1e-12);
    }

    #[test]
    fn triangular_ones_two_by_two() {
        // singular values of [[1,0],[1,1]] are (1+√5)/2 and (√5−1)/2:
        // eigenvalues of T^T T = [[2,1],[1,1]] are (3±√5)/2.
        let t = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = svd(&t).unwrap();
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((r.singular_values[0] - phi).abs() < 1e-12);
        assert!((r.singular_values[1] - (phi - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn random_reconstruction() {
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(m, n) in &[(5usize, 5usize), (8, 3), (3, 8), (16, 16)] {
            let a = ComplexMatrix::from_fn(m, n, |_, _| {
                c(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                )
            })
            .unwrap();
            let r = svd(&a).unwrap();
            let scale = r.singular_values[0].max(1.0);
            assert!(reconstruction_residual(&a, &r) < 1e-11 * scale);
            assert!(orthonormality_residual(&r.left) < 1e-12);
            assert!(orthonormality_residual(&r.right) < 1e-12);
            for w in r.singular_values.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }
}
