//! The intertwining unitary between Schur and Fourier multipliers on finite
//! groups, exact verification of the transference identity, the witness-lift
//! inequality check, and Følner/Toeplitz compression scans on ℤ.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::{holder_consistent, Exponent};
use crate::groups::{project_onto_group_algebra, FiniteGroup};
use crate::lattice::{torus_norm, toeplitz_compression, LatticeFunction};
use crate::matrix::{max_abs_diff, ComplexMatrix};
use crate::normest::{
    complex_gaussian_matrix, estimate_multilinear_norm, estimate_multilinear_norm_with_starts,
    restart_rng, witness_objective, EstimatorConfig, MultilinearMap, NormEstimate, SchurMap,
};
use crate::schatten::schatten_norm;
use crate::symbols::{schur_apply, tilde_lift, SymbolTensor};

/// π(x) = U(x ⊗ 1)U* for U = Σ_s p_s ⊗ λ_s, i.e. the linear extension of
/// π(E_{st}) = E_{st} ⊗ λ_{st⁻¹}, as a d²×d² block matrix (block index
/// outer, λ index inner).
pub fn intertwiner_pi(group: &FiniteGroup, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = group.order();
    if x.rows() != d || x.cols() != d {
        return Err(Error::input("intertwiner_pi: matrix size must equal group order"));
    }
    let big = d * d;
    let mut entries = vec![Complex64::new(0.0, 0.0); big * big];
    for s in 0..d {
        for t in 0..d {
            let coeff = x.get(s, t);
            if coeff.re == 0.0 && coeff.im == 0.0 {
                continue;
            }
            let u = group.quotient(s, t);
            for b in 0..d {
                let a = group.mul(u, b);
                entries[(s * d + a) * big + (t * d + b)] = coeff;
            }
        }
    }
    ComplexMatrix::new(big, big, entries)
}

/// The multiplicative amplification T_φ^{(d)} acting on d×d block matrices
/// with blocks in the group algebra: block (a, b) of the output is
/// Σ_{paths} T_φ(X_1[a, c_1], …, X_n[c_{n−1}, b]), each T_φ evaluated through
/// the coefficient functions of the blocks. Inputs must lie in M_d ⊗ LG;
/// the estimator upholds this through `project_input`.
pub fn amplified_fourier_apply(
    group: &FiniteGroup,
    phi: &SymbolTensor,
    inputs: &[ComplexMatrix],
) -> Result<ComplexMatrix> {
    let d = group.order();
    let n = phi.arity();
    if phi.axis() != d {
        return Err(Error::input("amplified_fourier_apply: symbol axis must equal group order"));
    }
    if inputs.len() != n {
        return Err(Error::input("amplified_fourier_apply: arity mismatch"));
    }
    let big = d * d;
    for x in inputs {
        if x.rows() != big || x.cols() != big {
            return Err(Error::input("amplified_fourier_apply: inputs must be d²×d²"));
        }
    }
    let e = group.identity();
    // coefficient function of block (a, b) of input k: g(u) = X_k(a·d + u, b·d + e)
    let block_coeffs = |k: usize, a: usize, b: usize| -> Vec<Complex64> {
        (0..d).map(|u| inputs[k].get(a * d + u, b * d + e)).collect()
    };

    let mut out = vec![Complex64::new(0.0, 0.0); big * big];
    let mut path = vec![0usize; n - 1];
    for a in 0..d {
        for b in 0..d {
            let mut coeff = vec![Complex64::new(0.0, 0.0); d];
            loop {
                // blocks along the path a -> c_1 -> ... -> c_{n-1} -> b
                let mut gs: Vec<Vec<Complex64>> = Vec::with_capacity(n);
                for k in 0..n {
                    let row = if k == 0 { a } else { path[k - 1] };
                    let col = if k == n - 1 { b } else { path[k] };
                    gs.push(block_coeffs(k, row, col));
                }
                accumulate_fourier(phi, &gs, group, &mut coeff);
                if n == 1 {
                    break;
                }
                let mut done = true;
                for slot in path.iter_mut().rev() {
                    *slot += 1;
                    if *slot < d {
                        done = false;
                        break;
                    }
                    *slot = 0;
                }
                if done {
                    break;
                }
            }
            // write λ(coeff) into the (a, b) block
            for s in 0..d {
                for t in 0..d {
                    out[(a * d + s) * big + (b * d + t)] = coeff[group.quotient(s, t)];
                }
            }
        }
    }
    ComplexMatrix::new(big, big, out)
}

/// coeff[s] += Σ_{t_1⋯t_n = s} φ(t) Π g_k(t_k)
fn accumulate_fourier(phi: &SymbolTensor, gs: &[Vec<Complex64>], group: &FiniteGroup, coeff: &mut [Complex64]) {
    let n = phi.arity();
    let d = group.order();
    let mut idx = vec![0usize; n];
    loop {
        let mut prod = phi.values()[phi.flat_index(&idx)];
        if prod.re != 0.0 || prod.im != 0.0 {
            let mut s = group.identity();
            for (k, g) in gs.iter().enumerate() {
                prod *= g[idx[k]];
                s = group.mul(s, idx[k]);
            }
            coeff[s] += prod;
        }
        let mut done = true;
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < d {
                done = false;
                break;
            }
            *slot = 0;
        }
        if done {
            break;
        }
    }
}

/// The amplified Fourier multiplier as an estimator map over the subspace
/// M_d ⊗ LG of d²×d² matrices. Plancherel-normalized norms cancel along
/// Hölder tuples, so objectives are computed with plain Schatten norms and
/// coincide with the normalized-norm objectives.
#[derive(Debug, Clone)]
pub struct AmplifiedFourierMap {
    group: Arc<FiniteGroup>,
    symbol: SymbolTensor,
}

impl AmplifiedFourierMap {
    pub fn new(group: Arc<FiniteGroup>, symbol: SymbolTensor) -> Result<Self> {
        if symbol.axis() != group.order() {
            return Err(Error::input("AmplifiedFourierMap: symbol axis must equal group order"));
        }
        Ok(AmplifiedFourierMap { group, symbol })
    }
}

impl MultilinearMap for AmplifiedFourierMap {
    fn num_inputs(&self) -> usize {
        self.symbol.arity()
    }

    fn input_dims(&self, _slot: usize) -> (usize, usize) {
        let d = self.group.order();
        (d * d, d * d)
    }

    fn output_dims(&self) -> (usize, usize) {
        let d = self.group.order();
        (d * d, d * d)
    }

    fn apply(&self, inputs: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        amplified_fourier_apply(&self.group, &self.symbol, inputs)
    }

    fn project_input(&self, _slot: usize, x: ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.group.order();
        if x.rows() != d * d || x.cols() != d * d {
            return Err(Error::input("project_input: wrong dimensions"));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); d * d * d * d];
        for a in 0..d {
            for b in 0..d {
                let block = ComplexMatrix::from_fn(d, d, |s, t| x.get(a * d + s, b * d + t))?;
                let proj = project_onto_group_algebra(&self.group, &block)?;
                for s in 0..d {
                    for t in 0..d {
                        out[(a * d + s) * (d * d) + (b * d + t)] = proj.get(s, t);
                    }
                }
            }
        }
        ComplexMatrix::new(d * d, d * d, out)
    }

    fn input_basis(&self, _slot: usize) -> Result<Vec<ComplexMatrix>> {
        let d = self.group.order();
        if d * d * d > crate::normest::MAX_GENERIC_BASIS {
            return Err(Error::input(format!(
                "amplified map basis d^3 = {} exceeds cap {}; use smaller groups",
                d * d * d,
                crate::normest::MAX_GENERIC_BASIS
            )));
        }
        // E_{ab} ⊗ λ_u, an orthogonal basis of M_d ⊗ LG (each of norm √d)
        let mut basis = Vec::with_capacity(d * d * d);
        for a in 0..d {
            for b in 0..d {
                for u in 0..d {
                    let m = ComplexMatrix::from_fn(d * d, d * d, |row, col| {
                        let (ra, rs) = (row / d, row % d);
                        let (cb, ct) = (col / d, col % d);
                        if ra == a && cb == b && rs == self.group.mul(u, ct) {
                            Complex64::new(1.0, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })?;
                    basis.push(m);
                }
            }
        }
        Ok(basis)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntertwinerReport {
    pub group: String,
    pub arity: usize,
    pub max_residual: f64,
    pub inputs_tested: usize,
    pub identity_ok: bool,
}

/// Residual of T_φ^{(d)} ∘ π^{×n} = π ∘ M_{φ̃} on one input batch.
pub fn check_intertwining(
    group: &FiniteGroup,
    phi: &SymbolTensor,
    inputs: &[ComplexMatrix],
) -> Result<f64> {
    if phi.axis() != group.order() {
        return Err(Error::input("check_intertwining: symbol axis must equal group order"));
    }
    let lifted: Vec<ComplexMatrix> = inputs
        .iter()
        .map(|x| intertwiner_pi(group, x))
        .collect::<Result<_>>()?;
    let lhs = amplified_fourier_apply(group, phi, &lifted)?;
    let lifted_tilde = tilde_lift(phi, group)?;
    let refs: Vec<&ComplexMatrix> = inputs.iter().collect();
    let rhs = intertwiner_pi(group, &schur_apply(&lifted_tilde, &refs)?)?;
    max_abs_diff(&lhs, &rhs)
}

/// Runs `batches` randomized symbol/input batches of the given arity and
/// reports the worst residual.
pub fn intertwining_report(
    group: &FiniteGroup,
    arity: usize,
    batches: usize,
    seed: u64,
) -> Result<IntertwinerReport> {
    let d = group.order();
    let mut max_residual: f64 = 0.0;
    for batch in 0..batches {
        let mut rng = restart_rng(seed, batch as u64);
        let phi = SymbolTensor::from_fn(arity, d, |_| {
            use rand_distr::Distribution;
            let re: f64 = rand_distr::StandardNormal.sample(&mut rng);
            let im: f64 = rand_distr::StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })?;
        let inputs: Vec<ComplexMatrix> = (0..arity).map(|_| complex_gaussian_matrix(&mut rng, d, d)).collect();
        let r = check_intertwining(group, &phi, &inputs)?;
        max_residual = max_residual.max(r);
    }
    Ok(IntertwinerReport {
        group: group.descriptor().to_string(),
        arity,
        max_residual,
        inputs_tested: batches,
        identity_ok: max_residual < 1e-10,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferReport {
    pub group: String,
    pub arity: usize,
    pub input_exponents: Vec<Exponent>,
    pub output_exponent: Exponent,
    /// Estimated ‖M_φ̃‖ over full Schatten slots.
    pub schur_estimate: f64,
    /// Estimated ‖T_φ^{(d)}‖ over M_d ⊗ LG with Plancherel-normalized norms.
    pub fourier_estimate: f64,
    /// |objective of the π-lifted best Schur witnesses − schur_estimate|.
    pub lift_gap: f64,
    /// Set if fourier_estimate + 1e−6 < schur_estimate, which the witness
    /// lift makes impossible up to floating point.
    pub violation: bool,
    pub seed: u64,
}

/// Estimates both sides of the transference inequality at amplification
/// level d and verifies that the best Schur witnesses lift through π to a
/// Fourier-side configuration attaining the same objective.
pub fn transfer_inequality_check(
    group: &Arc<FiniteGroup>,
    phi: &SymbolTensor,
    input_exponents: &[Exponent],
    output_exponent: Exponent,
    cfg: &EstimatorConfig,
) -> Result<TransferReport> {
    if !holder_consistent(input_exponents, output_exponent) {
        return Err(Error::input(
            "transfer check requires the Hölder relation 1/p = sum 1/p_i (norm normalizations cancel only then)",
        ));
    }
    let tilde = tilde_lift(phi, group)?;
    let schur_map = SchurMap::new(tilde)?;
    let est_m = estimate_multilinear_norm(&schur_map, input_exponents, output_exponent, cfg)?;

    let lifted: Vec<ComplexMatrix> = est_m
        .witnesses
        .iter()
        .map(|w| intertwiner_pi(group, w))
        .collect::<Result<_>>()?;
    let famp = AmplifiedFourierMap::new(group.clone(), phi.clone())?;
    let lifted_objective = witness_objective(&famp, &lifted, input_exponents, output_exponent)?;
    let lift_gap = (lifted_objective - est_m.value).abs();

    let est_t = estimate_multilinear_norm_with_starts(
        &famp,
        input_exponents,
        output_exponent,
        cfg,
        &[lifted],
    )?;
    let violation = est_t.value + 1e-6 < est_m.value;
    Ok(TransferReport {
        group: group.descriptor().to_string(),
        arity: phi.arity(),
        input_exponents: input_exponents.to_vec(),
        output_exponent,
        schur_estimate: est_m.value,
        fourier_estimate: est_t.value,
        lift_gap,
        violation,
        seed: cfg.seed,
    })
}

/// Fine-grained access to both sides, for callers that want the witnesses.
pub fn transfer_estimates(
    group: &Arc<FiniteGroup>,
    phi: &SymbolTensor,
    input_exponents: &[Exponent],
    output_exponent: Exponent,
    cfg: &EstimatorConfig,
) -> Result<(NormEstimate, NormEstimate)> {
    let tilde = tilde_lift(phi, group)?;
    let schur_map = SchurMap::new(tilde)?;
    let est_m = estimate_multilinear_norm(&schur_map, input_exponents, output_exponent, cfg)?;
    let lifted: Vec<ComplexMatrix> = est_m
        .witnesses
        .iter()
        .map(|w| intertwiner_pi(group, w))
        .collect::<Result<_>>()?;
    let famp = AmplifiedFourierMap::new(group.clone(), phi.clone())?;
    let est_t =
        estimate_multilinear_norm_with_starts(&famp, input_exponents, output_exponent, cfg, &[lifted])?;
    Ok((est_m, est_t))
}

#[derive(Debug, Clone, Serialize)]
pub struct FolnerRow {
    pub window: usize,
    pub compression: f64,
    pub torus: f64,
    pub gap: f64,
}

/// Dense Schatten norms are only attempted up to this window size; larger
/// windows must use one of the structured routes (p ∈ {2, 4, ∞}).
const MAX_DENSE_WINDOW: usize = 1200;

/// Normalized compression norms (2M+1)^{-1/p} ‖P_M λ(f) P_M‖_p against the
/// torus norm of the symbol, one row per window radius. The contraction
/// property is asserted per row and violations surface as numerical errors.
pub fn folner_scan(f: &LatticeFunction, p: Exponent, windows: &[usize]) -> Result<Vec<FolnerRow>> {
    if !(p.value() >= 1.0) {
        return Err(Error::input("folner_scan requires p in [1, inf]"));
    }
    let quad = (16 * (2 * f.radius() + 1)).max(8192);
    let torus = torus_norm(f, p, quad)?;
    let mut rows = Vec::with_capacity(windows.len());
    for &m in windows {
        let compression = compression_norm(f, p, m)?;
        if compression > torus * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::numerical(format!(
                "compression {compression} exceeds torus norm {torus} at window {m}"
            )));
        }
        rows.push(FolnerRow {
            window: m,
            compression,
            torus,
            gap: torus - compression,
        });
    }
    Ok(rows)
}

/// (2M+1)^{-1/p} ‖P_M λ(f) P_M‖_p with structured fast paths: closed-form
/// Frobenius count at p = 2, Gram-band Frobenius at p = 4, band power
/// iteration at p = ∞, dense SVD otherwise (small windows only).
pub fn compression_norm(f: &LatticeFunction, p: Exponent, window_radius: usize) -> Result<f64> {
    let length = 2 * window_radius + 1;
    if p.is_infinite() {
        return banded_operator_norm(f, window_radius);
    }
    if p.value() == 2.0 {
        let r = f.radius() as i64;
        let mut fro_sq = 0.0;
        for u in -r..=r {
            let overlap = (length as i64 - u.abs()).max(0) as f64;
            fro_sq += f.value(u).norm_sqr() * overlap;
        }
        return Ok((fro_sq / length as f64).sqrt());
    }
    if p.value() == 4.0 {
        let gram_fro_sq = gram_band_frobenius_sq(f, window_radius);
        return Ok((gram_fro_sq / length as f64).powf(0.25));
    }
    if length > MAX_DENSE_WINDOW {
        return Err(Error::input(format!(
            "window {window_radius} needs a dense SVD for p = {p}; only p in {{2, 4, inf}} scale past {MAX_DENSE_WINDOW}"
        )));
    }
    let a = toeplitz_compression(f, window_radius);
    let raw = schatten_norm(&a, p)?;
    Ok(raw * (length as f64).powf(-p.recip()))
}

/// ‖A^H A‖_F² for the banded compression A, summing only over the band.
fn gram_band_frobenius_sq(f: &LatticeFunction, window_radius: usize) -> f64 {
    let l = (2 * window_radius + 1) as i64;
    let r = f.radius() as i64;
    let mut total = 0.0;
    for t in 0..l {
        let lo = (t - 2 * r).max(0);
        let hi = (t + 2 * r).min(l - 1);
        for tp in lo..=hi {
            // B(t,t') = Σ_s conj(f(s−t)) f(s−t') over admissible s
            let s_lo = (t - r).max(tp - r).max(0);
            let s_hi = (t + r).min(tp + r).min(l - 1);
            let mut b = Complex64::new(0.0, 0.0);
            for s in s_lo..=s_hi {
                b += f.value(s - t).conj() * f.value(s - tp);
            }
            total += b.norm_sqr();
        }
    }
    total
}

/// Largest singular value of the banded compression by power iteration on
/// A^H A; deterministic seeded start, conservative iteration cap. The
/// returned value can only undershoot, which keeps the contraction check
/// honest.
fn banded_operator_norm(f: &LatticeFunction, window_radius: usize) -> Result<f64> {
    let l = 2 * window_radius + 1;
    let r = f.radius() as i64;
    let band: Vec<Complex64> = (-r..=r).map(|u| f.value(u)).collect();
    if band.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return Ok(0.0);
    }

    let forward = |x: &[Complex64], y: &mut [Complex64]| {
        // y[s] = Σ_u f(u) x[s−u]
        for (s, ys) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &fu) in band.iter().enumerate() {
                let u = k as i64 - r;
                let t = s as i64 - u;
                if t >= 0 && (t as usize) < l {
                    acc += fu * x[t as usize];
                }
            }
            *ys = acc;
        }
    };
    let adjoint = |x: &[Complex64], y: &mut [Complex64]| {
        // y[t] = Σ_u conj(f(u)) x[t+u]
        for (t, yt) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &fu) in band.iter().enumerate() {
                let u = k as i64 - r;
                let s = t as i64 + u;
                if s >= 0 && (s as usize) < l {
                    acc += fu.conj() * x[s as usize];
                }
            }
            *yt = acc;
        }
    };

    let mut rng = restart_rng(toeplist_seed(), 0);
    let mut x = crate::normest::complex_gaussian_vector(&mut rng, l);
    crate::normest::normalize_vector(&mut x);
    let mut ax = vec![Complex64::new(0.0, 0.0); l];
    let mut back = vec![Complex64::new(0.0, 0.0); l];
    let iters = (6 * l).clamp(2000, 40_000);
    let mut lambda = 0.0_f64;
    let mut stall = 0;
    for _ in 0..iters {
        forward(&x, &mut ax);
        let new_lambda = ax.iter().map(|z| z.norm_sqr()).sum::<f64>();
        adjoint(&ax, &mut back);
        let n = crate::normest::normalize_vector(&mut back);
        if n <= 0.0 {
            return Ok(0.0);
        }
        std::mem::swap(&mut x, &mut back);
        if (new_lambda - lambda).abs() <= 1e-15 * new_lambda.max(1e-300) {
            stall += 1;
            if stall > 16 {
                lambda = new_lambda;
                break;
            }
        } else {
            stall = 0;
        }
        lambda = new_lambda;
    }
    Ok(lambda.sqrt())
}

fn toeplist_seed() -> u64 {
    0x746f65706c
}
