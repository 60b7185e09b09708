//! Schatten p-(quasi)norms, Plancherel-normalized group L_p norms,
//! Hölder-dual alignment and the S_1 polar factorization.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::matrix::ComplexMatrix;
use crate::svd::{svd, SvdResult};

/// (Σ σ_k^p)^{1/p} for p < ∞, max σ_k for p = ∞. Factoring out the largest
/// value keeps σ^p away from overflow/underflow for extreme exponents.
pub fn norm_from_singular_values(sigmas: &[f64], p: Exponent) -> f64 {
    let top = sigmas.iter().copied().fold(0.0, f64::max);
    if top <= 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return top;
    }
    let pv = p.value();
    let sum: f64 = sigmas.iter().map(|&s| (s / top).powf(pv)).sum();
    top * sum.powf(1.0 / pv)
}

pub fn schatten_norm(a: &ComplexMatrix, p: Exponent) -> Result<f64> {
    let dec = svd(a)?;
    Ok(norm_from_singular_values(&dec.singular_values, p))
}

/// L_p norm of a d×d element under the Plancherel trace (1/d)·Tr, i.e.
/// d^{-1/p}·‖x‖_{S_p}; the operator norm when p = ∞. The normalization makes
/// λ_e have norm one for every p.
pub fn group_lp_norm(x: &ComplexMatrix, p: Exponent, group_order: usize) -> Result<f64> {
    if x.rows() != group_order || x.cols() != group_order {
        return Err(Error::input(format!(
            "group_lp_norm: matrix is {}x{}, expected {}x{}",
            x.rows(),
            x.cols(),
            group_order,
            group_order
        )));
    }
    normalized_schatten_norm(x, p, group_order)
}

/// d^{-1/p}·‖x‖_{S_p} with an explicit normalization dimension d; used both
/// for L_p(LG) norms (d = matrix size) and for amplified spaces S_p^N ⊗ L_p(LG)
/// (matrix size N·d, normalization d).
pub fn normalized_schatten_norm(x: &ComplexMatrix, p: Exponent, d: usize) -> Result<f64> {
    let raw = schatten_norm(x, p)?;
    if p.is_infinite() {
        Ok(raw)
    } else {
        Ok(raw * (d as f64).powf(-p.recip()))
    }
}

/// Result of Hölder-dual alignment.
#[derive(Debug, Clone)]
pub struct DualAlignment {
    /// A matrix X with ‖X‖_q = 1 and Re Tr(X^H Z) = ‖Z‖_{q'}.
    pub witness: ComplexMatrix,
    /// The attained value ‖Z‖_{q'}.
    pub attained: f64,
    /// Set when Z vanished and the canonical unit element was returned.
    pub degenerate: bool,
}

/// For q ≥ 1 builds the norming element of the Hölder pairing: from Z = UΣV^H,
/// X = U·diag(g(σ))·V^H with g(σ) = (σ/‖σ‖_{q'})^{q'/q}·‖σ‖_{q'}^{... } chosen so
/// that ‖X‖_q = 1 and Re Tr(X^H Z) = ‖Z‖_{q'}; X = UV^H for q = ∞ and the top
/// singular dyad for q = 1. Z = 0 yields a flagged E_11 so estimator loops
/// never abort mid-iteration.
pub fn dual_align(z: &ComplexMatrix, q: Exponent) -> Result<DualAlignment> {
    if !q.is_dualizable() {
        return Err(Error::input("dual_align requires q >= 1"));
    }
    let dec = svd(z)?;
    let top = dec.singular_values[0];
    if top <= 1e-300 {
        return Ok(DualAlignment {
            witness: ComplexMatrix::matrix_unit(z.rows(), z.cols(), 0, 0),
            attained: 0.0,
            degenerate: true,
        });
    }
    let qd = q.dual()?;
    let attained = norm_from_singular_values(&dec.singular_values, qd);
    let witness = if q.is_infinite() {
        dec.left.mul(&dec.right.conj_transpose())?
    } else if q.value() == 1.0 {
        let u1 = dec.left.column(0);
        let v1: Vec<Complex64> = dec.right.column(0).iter().map(|z| z.conj()).collect();
        ComplexMatrix::outer(&u1, &v1)
    } else {
        // g(σ_k) = s_k^{q'/q} / ‖s‖_{q'}^{q'/q} with s_k = σ_k/σ_max is scale-free
        let e = qd.value() / q.value();
        let scaled: Vec<f64> = dec.singular_values.iter().map(|&s| s / top).collect();
        let denom = norm_from_singular_values(&scaled, qd).powf(e);
        let gains: Vec<f64> = scaled.iter().map(|&s| s.powf(e) / denom).collect();
        scaled_dyad_sum(&dec, &gains)?
    };
    Ok(DualAlignment {
        witness,
        attained,
        degenerate: false,
    })
}

/// U·diag(w)·V^H for the given diagonal weights.
fn scaled_dyad_sum(dec: &SvdResult, weights: &[f64]) -> Result<ComplexMatrix> {
    let m = dec.left.rows();
    let n = dec.right.rows();
    let k = weights.len();
    ComplexMatrix::from_fn(m, n, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, &w) in weights.iter().enumerate().take(k) {
            if w != 0.0 {
                acc += dec.left.get(i, t) * dec.right.get(j, t).conj() * w;
            }
        }
        acc
    })
}

/// Splits A = B·C with B = U|A|^{1/p1}-type and C = |A|^{1/p2}-type factors
/// (from the polar data), so that ‖B‖_{p1}·‖C‖_{p2} = ‖A‖_1. Requires the
/// exact Hölder split 1/p1 + 1/p2 = 1 with p1, p2 ∈ (1, ∞).
pub fn s1_factorize(a: &ComplexMatrix, p1: Exponent, p2: Exponent) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if p1.is_infinite() || p2.is_infinite() || p1.value() <= 1.0 || p2.value() <= 1.0 {
        return Err(Error::input("s1_factorize requires p1, p2 in (1, inf)"));
    }
    if (p1.recip() + p2.recip() - 1.0).abs() > 1e-12 {
        return Err(Error::input("s1_factorize requires 1/p1 + 1/p2 = 1"));
    }
    let dec = svd(a)?;
    let b_weights: Vec<f64> = dec.singular_values.iter().map(|&s| s.powf(p1.recip())).collect();
    let c_weights: Vec<f64> = dec.singular_values.iter().map(|&s| s.powf(p2.recip())).collect();
    // B = U σ^{1/p1} V^H, C = V σ^{1/p2} V^H; B·C = U σ V^H = A.
    let b = scaled_dyad_sum(&dec, &b_weights)?;
    let k = dec.singular_values.len();
    let n = dec.right.rows();
    let c = ComplexMatrix::from_fn(n, n, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 0..k {
            if c_weights[t] != 0.0 {
                acc += dec.right.get(i, t) * dec.right.get(j, t).conj() * c_weights[t];
            }
        }
        acc
    })?;
    Ok((b, c))
}
