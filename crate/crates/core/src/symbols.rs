//! Multiplier symbols on finite index sets (dense tensors) and on ℝⁿ/ℤⁿ
//! (callback evaluators), the tilde-lift between Fourier and Schur symbols,
//! the multilinear evaluators themselves, multiplicative amplification,
//! middle-slice reduction, translation and mollification.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::{lambda_matrix, FiniteGroup, GroupFunction};
use crate::matrix::ComplexMatrix;

/// Dense tensors are capped at 2^24 entries; arities stay tiny at desk scale.
pub const MAX_TENSOR_ENTRIES: usize = 1 << 24;

/// A dense symbol on X^arity for a finite index set X of size `axis`,
/// row-major in the multi-index.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolTensor {
    arity: usize,
    axis: usize,
    values: Vec<Complex64>,
}

impl SymbolTensor {
    pub fn new(arity: usize, axis: usize, values: Vec<Complex64>) -> Result<Self> {
        let len = tensor_len(arity, axis)?;
        if values.len() != len {
            return Err(Error::input(format!(
                "symbol tensor needs {len} values for arity {arity}, axis {axis}"
            )));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::input("symbol values must be finite"));
        }
        Ok(SymbolTensor { arity, axis, values })
    }

    pub fn from_fn(arity: usize, axis: usize, mut f: impl FnMut(&[usize]) -> Complex64) -> Result<Self> {
        let len = tensor_len(arity, axis)?;
        let mut idx = vec![0usize; arity];
        let mut values = Vec::with_capacity(len);
        loop {
            values.push(f(&idx));
            if !advance(&mut idx, axis) {
                break;
            }
        }
        SymbolTensor::new(arity, axis, values)
    }

    pub fn constant(arity: usize, axis: usize, z: Complex64) -> Result<Self> {
        let len = tensor_len(arity, axis)?;
        SymbolTensor::new(arity, axis, vec![z; len])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.arity);
        let mut flat = 0usize;
        for &i in idx {
            debug_assert!(i < self.axis);
            flat = flat * self.axis + i;
        }
        flat
    }

    #[inline]
    pub fn value(&self, idx: &[usize]) -> Complex64 {
        self.values[self.flat_index(idx)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn tensor_len(arity: usize, axis: usize) -> Result<usize> {
    if arity == 0 || axis == 0 {
        return Err(Error::input("symbol tensor needs positive arity and axis"));
    }
    let mut len = 1usize;
    for _ in 0..arity {
        len = len
            .checked_mul(axis)
            .filter(|&l| l <= MAX_TENSOR_ENTRIES)
            .ok_or_else(|| Error::input(format!("symbol tensor axis {axis}^{arity} exceeds entry cap")))?;
    }
    Ok(len)
}

/// Odometer over multi-indices; returns false after wrapping past the end.
#[inline]
fn advance(idx: &mut [usize], axis: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < axis {
            return true;
        }
        *slot = 0;
    }
    false
}

/// A symbol given by a pure evaluator on real tuples (for ℝⁿ symbols) or
/// integer tuples passed as reals (for ℤⁿ and index symbols).
#[derive(Clone)]
pub struct SymbolFunction {
    arity: usize,
    descriptor: String,
    evaluator: Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>,
}

impl SymbolFunction {
    pub fn new(
        arity: usize,
        descriptor: impl Into<String>,
        evaluator: Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>,
    ) -> Self {
        SymbolFunction {
            arity,
            descriptor: descriptor.into(),
            evaluator,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn eval(&self, args: &[f64]) -> Complex64 {
        debug_assert_eq!(args.len(), self.arity);
        (self.evaluator)(args)
    }

    /// Samples the evaluator on the integer window [−N, N]^arity.
    pub fn materialize_window(&self, window_radius: usize) -> Result<SymbolTensor> {
        let axis = 2 * window_radius + 1;
        let n = window_radius as f64;
        let mut args = vec![0.0; self.arity];
        SymbolTensor::from_fn(self.arity, axis, |idx| {
            for (a, &i) in args.iter_mut().zip(idx) {
                *a = i as f64 - n;
            }
            self.eval(&args)
        })
    }
}

impl std::fmt::Debug for SymbolFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymbolFunction")
            .field("arity", &self.arity)
            .field("descriptor", &self.descriptor)
            .finish()
    }
}

/// φ̃(s_0, …, s_n) = φ(s_0 s_1⁻¹, …, s_{n−1} s_n⁻¹): lifts an n-variable
/// Fourier symbol on G to the (n+1)-variable Schur symbol.
pub fn tilde_lift(phi: &SymbolTensor, group: &FiniteGroup) -> Result<SymbolTensor> {
    if phi.axis() != group.order() {
        return Err(Error::input("tilde_lift: symbol axis must equal group order"));
    }
    let n = phi.arity();
    let mut diffs = vec![0usize; n];
    SymbolTensor::from_fn(n + 1, phi.axis(), |idx| {
        for k in 0..n {
            diffs[k] = group.quotient(idx[k], idx[k + 1]);
        }
        phi.value(&diffs)
    })
}

/// The same lift for symbols on ℤ restricted to a centered window:
/// φ̃(λ_0, …, λ_n) = φ(λ_0 − λ_1, …, λ_{n−1} − λ_n) with λ_i ∈ [−N, N].
pub fn tilde_lift_window(phi: &SymbolFunction, window_radius: usize) -> Result<SymbolTensor> {
    let n = phi.arity();
    let axis = 2 * window_radius + 1;
    let offset = window_radius as f64;
    let mut args = vec![0.0; n];
    SymbolTensor::from_fn(n + 1, axis, |idx| {
        for k in 0..n {
            args[k] = (idx[k] as f64 - offset) - (idx[k + 1] as f64 - offset);
        }
        phi.eval(&args)
    })
}

/// The multilinear Schur multiplier:
/// M_φ(A_1, …, A_n)(t_0, t_n) = Σ_{t_1..t_{n−1}} φ(t_0, …, t_n) Π A_k(t_{k−1}, t_k).
pub fn schur_apply(phi: &SymbolTensor, inputs: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let n = phi.arity().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| {
        Error::input("schur_apply needs a symbol of arity >= 2")
    })?;
    if inputs.len() != n {
        return Err(Error::input(format!(
            "schur_apply: symbol of arity {} takes {} inputs, got {}",
            phi.arity(),
            n,
            inputs.len()
        )));
    }
    let d = phi.axis();
    for a in inputs {
        if a.rows() != d || a.cols() != d {
            return Err(Error::input("schur_apply: inputs must be square of the symbol axis size"));
        }
    }
    if n == 1 {
        // linear case: entrywise multiplication
        let a = inputs[0];
        return ComplexMatrix::from_fn(d, d, |i, j| phi.value(&[i, j]) * a.get(i, j));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    let mut idx = vec![0usize; n + 1];
    loop {
        let coeff = phi.values()[phi.flat_index(&idx)];
        if coeff.re != 0.0 || coeff.im != 0.0 {
            let mut prod = coeff;
            for (k, a) in inputs.iter().enumerate() {
                prod *= a.get(idx[k], idx[k + 1]);
                if prod.re == 0.0 && prod.im == 0.0 {
                    break;
                }
            }
            out[idx[0] * d + idx[n]] += prod;
        }
        if !advance(&mut idx, d) {
            break;
        }
    }
    ComplexMatrix::new(d, d, out)
}

/// The multilinear Fourier multiplier on a finite group:
/// T_φ(λ(f_1), …, λ(f_n)) = Σ φ(t_1, …, t_n) f_1(t_1)⋯f_n(t_n) λ(t_1⋯t_n),
/// returned as its d×d λ-matrix.
pub fn fourier_apply(phi: &SymbolTensor, inputs: &[&GroupFunction], group: &FiniteGroup) -> Result<ComplexMatrix> {
    let n = phi.arity();
    if inputs.len() != n {
        return Err(Error::input(format!(
            "fourier_apply: arity {} needs {} inputs, got {}",
            n,
            n,
            inputs.len()
        )));
    }
    if phi.axis() != group.order() {
        return Err(Error::input("fourier_apply: symbol axis must equal group order"));
    }
    for f in inputs {
        if !f.matches(group) {
            return Err(Error::input("fourier_apply: group mismatch"));
        }
    }
    let coeffs = fourier_coefficients(phi, inputs, group)?;
    let gf = GroupFunction::new(Arc::new(group.clone()), coeffs)?;
    lambda_matrix(group, &gf)
}

/// Coefficient function of T_φ(λ(f_1), …, λ(f_n)): g(s) = Σ_{t_1⋯t_n = s} φ·Πf_i.
pub fn fourier_coefficients(
    phi: &SymbolTensor,
    inputs: &[&GroupFunction],
    group: &FiniteGroup,
) -> Result<Vec<Complex64>> {
    let n = phi.arity();
    if inputs.len() != n || phi.axis() != group.order() {
        return Err(Error::input("fourier_coefficients: arity/axis mismatch"));
    }
    let d = group.order();
    let mut out = vec![Complex64::new(0.0, 0.0); d];
    let mut idx = vec![0usize; n];
    loop {
        let mut prod = phi.values()[phi.flat_index(&idx)];
        if prod.re != 0.0 || prod.im != 0.0 {
            let mut s = group.identity();
            for (k, f) in inputs.iter().enumerate() {
                prod *= f.value(idx[k]);
                s = group.mul(s, idx[k]);
            }
            out[s] += prod;
        }
        if !advance(&mut idx, d) {
            break;
        }
    }
    Ok(out)
}

/// Multiplicative amplification of a Schur symbol: the symbol on
/// (X × {1..N})^{n+1} constant along the new coordinates. With the flat
/// index (i, s) ↦ i·axis + s this realizes M_φ^{(N)} on Kronecker blocks:
/// applying it to α_k ⊗ v_k gives (α_1⋯α_n) ⊗ M_φ(v_1, …, v_n).
pub fn amplify_schur(phi: &SymbolTensor, amplification: usize) -> Result<SymbolTensor> {
    if amplification == 0 {
        return Err(Error::input("amplification level must be >= 1"));
    }
    let d = phi.axis();
    let big = d
        .checked_mul(amplification)
        .filter(|&x| x <= 4096)
        .ok_or_else(|| Error::input("amplified axis exceeds size cap 4096"))?;
    if amplification == 1 {
        return Ok(phi.clone());
    }
    let mut base = vec![0usize; phi.arity()];
    SymbolTensor::from_fn(phi.arity(), big, |idx| {
        for (b, &i) in base.iter_mut().zip(idx) {
            *b = i % d;
        }
        phi.value(&base)
    })
}

/// Freezes the middle coordinate of an arity-3 Schur symbol:
/// H_j(s, t) = φ̃(s, j, t).
pub fn slice_middle(phitilde: &SymbolTensor, j: usize) -> Result<SymbolTensor> {
    if phitilde.arity() != 3 {
        return Err(Error::input("slice_middle expects an arity-3 symbol"));
    }
    if j >= phitilde.axis() {
        return Err(Error::input("slice_middle: index out of range"));
    }
    let axis = phitilde.axis();
    SymbolTensor::from_fn(2, axis, |idx| phitilde.value(&[idx[0], j, idx[1]]))
}

/// Embeds a rank-one pair into bilinear Schur inputs through row/column j:
/// B(s, r) = δ_{r,j} b(s), C(r, t) = δ_{r,j} c(t). Then
/// M_φ̃(B, C) = M_{φ̃(·,j,·)}(b cᵀ) exactly, and ‖B‖_p = ‖b‖_2, ‖C‖_p = ‖c‖_2
/// for every exponent.
pub fn rank_one_lift(b: &[Complex64], c: &[Complex64], j: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let d = b.len();
    if c.len() != d {
        return Err(Error::input("rank_one_lift: vector lengths differ"));
    }
    if j >= d {
        return Err(Error::input("rank_one_lift: index out of range"));
    }
    let bm = ComplexMatrix::from_fn(d, d, |s, r| if r == j { b[s] } else { Complex64::new(0.0, 0.0) })?;
    let cm = ComplexMatrix::from_fn(d, d, |r, t| if r == j { c[t] } else { Complex64::new(0.0, 0.0) })?;
    Ok((bm, cm))
}

/// Entrywise translation φ'(s_1, …, s_n) = φ(r_0 s_1 r_1⁻¹, …, r_{n−1} s_n r_n⁻¹),
/// chosen so that T_φ(λ_{r_0} x_1 λ_{r_1}^*, …) = λ_{r_0} T_{φ'}(x_1, …, x_n) λ_{r_n}^*.
pub fn translate_symbol(phi: &SymbolTensor, group: &FiniteGroup, anchors: &[usize]) -> Result<SymbolTensor> {
    let n = phi.arity();
    if anchors.len() != n + 1 {
        return Err(Error::input(format!(
            "translate_symbol: arity {n} needs {} anchors",
            n + 1
        )));
    }
    if phi.axis() != group.order() {
        return Err(Error::input("translate_symbol: symbol axis must equal group order"));
    }
    if anchors.iter().any(|&r| r >= group.order()) {
        return Err(Error::input("translate_symbol: anchor out of range"));
    }
    let mut args = vec![0usize; n];
    SymbolTensor::from_fn(n, phi.axis(), |idx| {
        for k in 0..n {
            args[k] = group.mul(group.mul(anchors[k], idx[k]), group.inv(anchors[k + 1]));
        }
        phi.value(&args)
    })
}

/// Coordinate-wise mollification of a symbol by a probability weight:
/// the weight-average of translated symbols, with the index pattern
///   n = 1:  φ_w(s) = Σ_t φ(s t⁻¹) w(t)
///   n ≥ 2:  φ_w(s_1,…,s_n) = Σ_{t_1..t_n} φ(t_1⁻¹s_1t_2, …, t_{n−2}⁻¹s_{n−2}t_{n−1},
///                                           t_{n−1}⁻¹s_{n−1}, s_n t_n⁻¹) Π w(t_j).
pub fn mollify_symbol(phi: &SymbolTensor, group: &FiniteGroup, weight: &GroupFunction) -> Result<SymbolTensor> {
    if phi.axis() != group.order() {
        return Err(Error::input("mollify_symbol: symbol axis must equal group order"));
    }
    if !weight.matches(group) {
        return Err(Error::input("mollify_symbol: weight group mismatch"));
    }
    let mut total = 0.0;
    for w in weight.values() {
        if w.im.abs() > 1e-12 || w.re < -1e-12 {
            return Err(Error::input("mollify_symbol: weight must be nonnegative"));
        }
        total += w.re;
    }
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::input("mollify_symbol: weight must sum to 1"));
    }

    let n = phi.arity();
    let d = group.order();
    let mut args = vec![0usize; n];
    let mut t = vec![0usize; n];
    SymbolTensor::from_fn(n, d, |s| {
        let mut acc = Complex64::new(0.0, 0.0);
        for slot in t.iter_mut() {
            *slot = 0;
        }
        loop {
            let mut w = Complex64::new(1.0, 0.0);
            for &tj in t.iter() {
                w *= weight.value(tj);
            }
            if w.re != 0.0 || w.im != 0.0 {
                if n == 1 {
                    args[0] = group.mul(s[0], group.inv(t[0]));
                } else {
                    for k in 0..n - 2 {
                        args[k] = group.mul(group.mul(group.inv(t[k]), s[k]), t[k + 1]);
                    }
                    args[n - 2] = group.mul(group.inv(t[n - 2]), s[n - 2]);
                    args[n - 1] = group.mul(s[n - 1], group.inv(t[n - 1]));
                }
                acc += phi.value(&args) * w;
            }
            if !advance(&mut t, d) {
                break;
            }
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_tensor(rng: &mut ChaCha8Rng, arity: usize, axis: usize) -> SymbolTensor {
        SymbolTensor::from_fn(arity, axis, |_| {
            c(StandardNormal.sample(rng), StandardNormal.sample(rng))
        })
        .unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(d, d, |_, _| {
            c(StandardNormal.sample(rng), StandardNormal.sample(rng))
        })
        .unwrap()
    }

    #[test]
    fn tilde_lift_of_constant_is_constant() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let phi = SymbolTensor::constant(1, 3, c(2.5, -1.0)).unwrap();
        let lifted = tilde_lift(&phi, &g).unwrap();
        assert!(lifted.values().iter().all(|&z| (z - c(2.5, -1.0)).norm() < 1e-15));
    }

    #[test]
    fn tilde_lift_of_delta_is_diagonal_indicator() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let e = g.identity();
        let phi = SymbolTensor::from_fn(1, 3, |i| if i[0] == e { c(1.0, 0.0) } else { c(0.0, 0.0) }).unwrap();
        let lifted = tilde_lift(&phi, &g).unwrap();
        for s in 0..3 {
            for t in 0..3 {
                let want = if s == t { 1.0 } else { 0.0 };
                assert_eq!(lifted.value(&[s, t]), c(want, 0.0));
            }
        }
    }

    #[test]
    fn tilde_lift_matches_defining_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = FiniteGroup::cyclic(4).unwrap();
        let phi = random_tensor(&mut rng, 2, 4);
        let lifted = tilde_lift(&phi, &g).unwrap();
        for s0 in 0..4 {
            for s1 in 0..4 {
                for s2 in 0..4 {
                    let want = phi.value(&[g.quotient(s0, s1), g.quotient(s1, s2)]);
                    assert_eq!(lifted.value(&[s0, s1, s2]), want);
                }
            }
        }
    }

    #[test]
    fn schur_with_unit_symbol_is_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 3);
        let b = random_matrix(&mut rng, 3);
        let one = SymbolTensor::constant(3, 3, c(1.0, 0.0)).unwrap();
        let got = schur_apply(&one, &[&a, &b]).unwrap();
        let want = a.mul(&b).unwrap();
        assert!(crate::matrix::max_abs_diff(&got, &want).unwrap() < 1e-12);
    }

    #[test]
    fn linear_schur_is_entrywise() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_matrix(&mut rng, 4);
        let phi = random_tensor(&mut rng, 2, 4);
        let got = schur_apply(&phi, &[&a]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((got.get(i, j) - phi.value(&[i, j]) * a.get(i, j)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn bilinear_schur_hand_example() {
        // d = 2, φ(i,j,k) = i+j+k on 0/1 indices, A = B = all-ones:
        // entry (t0, t2) = Σ_{t1} (t0+t1+t2) = 2t0 + 2t2 + 1
        let phi = SymbolTensor::from_fn(3, 2, |i| c((i[0] + i[1] + i[2]) as f64, 0.0)).unwrap();
        let ones = ComplexMatrix::ones(2, 2);
        let got = schur_apply(&phi, &[&ones, &ones]).unwrap();
        for t0 in 0..2 {
            for t2 in 0..2 {
                let want = (2 * t0 + 2 * t2 + 1) as f64;
                assert_eq!(got.get(t0, t2), c(want, 0.0));
            }
        }
    }

    #[test]
    fn fourier_with_unit_symbol_is_product_of_lambdas() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let f1 = GroupFunction::from_fn(g.clone(), |_| c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))).unwrap();
        let f2 = GroupFunction::from_fn(g.clone(), |_| c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))).unwrap();
        let one = SymbolTensor::constant(2, 4, c(1.0, 0.0)).unwrap();
        let got = fourier_apply(&one, &[&f1, &f2], &g).unwrap();
        let want = lambda_matrix(&g, &f1).unwrap().mul(&lambda_matrix(&g, &f2).unwrap()).unwrap();
        assert!(crate::matrix::max_abs_diff(&got, &want).unwrap() < 1e-12);
    }

    #[test]
    fn linear_fourier_scales_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = Arc::new(FiniteGroup::cyclic(5).unwrap());
        let f = GroupFunction::from_fn(g.clone(), |_| c(StandardNormal.sample(&mut rng), 0.0)).unwrap();
        let phi = random_tensor(&mut rng, 1, 5);
        let got = fourier_apply(&phi, &[&f], &g).unwrap();
        let scaled = GroupFunction::from_fn(g.clone(), |s| phi.value(&[s]) * f.value(s)).unwrap();
        let want = lambda_matrix(&g, &scaled).unwrap();
        assert!(crate::matrix::max_abs_diff(&got, &want).unwrap() < 1e-12);
    }

    #[test]
    fn bilinear_fourier_matches_exhaustive_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let f1 = GroupFunction::from_fn(g.clone(), |_| c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))).unwrap();
        let f2 = GroupFunction::from_fn(g.clone(), |_| c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))).unwrap();
        let phi = random_tensor(&mut rng, 2, 2);
        let got = fourier_apply(&phi, &[&f1, &f2], &g).unwrap();
        let mut want = ComplexMatrix::zeros(2, 2);
        for t1 in 0..2 {
            for t2 in 0..2 {
                let coeff = phi.value(&[t1, t2]) * f1.value(t1) * f2.value(t2);
                let l = lambda_matrix(&g, &GroupFunction::delta(g.clone(), g.mul(t1, t2)).unwrap()).unwrap();
                want = want.add(&l.scale(coeff)).unwrap();
            }
        }
        assert!(crate::matrix::max_abs_diff(&got, &want).unwrap() < 1e-12);
    }

    #[test]
    fn amplification_level_one_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let phi = random_tensor(&mut rng, 3, 2);
        let amp = amplify_schur(&phi, 1).unwrap();
        assert_eq!(amp, phi);
    }

    #[test]
    fn amplification_on_elementary_tensors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = 2;
        let n_amp = 3;
        let phi = random_tensor(&mut rng, 3, d);
        let amp = amplify_schur(&phi, n_amp).unwrap();
        let a1 = random_matrix(&mut rng, n_amp);
        let a2 = random_matrix(&mut rng, n_amp);
        let v1 = random_matrix(&mut rng, d);
        let v2 = random_matrix(&mut rng, d);
        let lhs = schur_apply(&amp, &[&a1.kron(&v1), &a2.kron(&v2)]).unwrap();
        let rhs = a1.mul(&a2).unwrap().kron(&schur_apply(&phi, &[&v1, &v2]).unwrap());
        assert!(crate::matrix::max_abs_diff(&lhs, &rhs).unwrap() < 1e-12);
    }

    #[test]
    fn amplification_extends_bilinearly() {
        // random non-elementary block inputs agree with the bilinear
        // extension of the elementary-tensor rule
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let d = 2;
        let n_amp = 2;
        let phi = random_tensor(&mut rng, 3, d);
        let amp = amplify_schur(&phi, n_amp).unwrap();
        let x = random_matrix(&mut rng, d * n_amp);
        let y = random_matrix(&mut rng, d * n_amp);
        let lhs = schur_apply(&amp, &[&x, &y]).unwrap();
        // expand x, y in the elementary-tensor basis E_{ij} ⊗ E_{st}
        let mut rhs = ComplexMatrix::zeros(d * n_amp, d * n_amp);
        for i in 0..n_amp {
            for j in 0..n_amp {
                for k in 0..n_amp {
                    for l in 0..n_amp {
                        let alpha = ComplexMatrix::matrix_unit(n_amp, n_amp, i, j);
                        let beta = ComplexMatrix::matrix_unit(n_amp, n_amp, k, l);
                        let xs = ComplexMatrix::from_fn(d, d, |s, t| x.get(i * d + s, j * d + t)).unwrap();
                        let ys = ComplexMatrix::from_fn(d, d, |s, t| y.get(k * d + s, l * d + t)).unwrap();
                        let term = alpha
                            .mul(&beta)
                            .unwrap()
                            .kron(&schur_apply(&phi, &[&xs, &ys]).unwrap());
                        rhs = rhs.add(&term).unwrap();
                    }
                }
            }
        }
        assert!(crate::matrix::max_abs_diff(&lhs, &rhs).unwrap() < 1e-11);
    }

    #[test]
    fn slice_of_constant_is_constant() {
        let one = SymbolTensor::constant(3, 4, c(1.0, 0.0)).unwrap();
        let s = slice_middle(&one, 2).unwrap();
        assert!(s.values().iter().all(|&z| z == c(1.0, 0.0)));
        assert!(slice_middle(&one, 4).is_err());
    }

    #[test]
    fn slice_matches_frozen_middle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let phit = random_tensor(&mut rng, 3, 3);
        for j in 0..3 {
            let s = slice_middle(&phit, j).unwrap();
            for a in 0..3 {
                for b in 0..3 {
                    assert_eq!(s.value(&[a, b]), phit.value(&[a, j, b]));
                }
            }
        }
    }

    #[test]
    fn rank_one_lift_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let d = 4;
        let phit = random_tensor(&mut rng, 3, d);
        let mut b: Vec<Complex64> = (0..d)
            .map(|_| c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        let mut cc: Vec<Complex64> = (0..d)
            .map(|_| c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        let nb = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nc = cc.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in b.iter_mut() {
            *z /= nb;
        }
        for z in cc.iter_mut() {
            *z /= nc;
        }
        let j = 2;
        let (bm, cm) = rank_one_lift(&b, &cc, j).unwrap();
        let lhs = schur_apply(&phit, &[&bm, &cm]).unwrap();
        let rhs = schur_apply(&slice_middle(&phit, j).unwrap(), &[&ComplexMatrix::outer(&b, &cc)]).unwrap();
        assert!(crate::matrix::max_abs_diff(&lhs, &rhs).unwrap() < 1e-12);
        // rank-one inputs have unit Schatten norm at every exponent
        for p in [1.0, 2.0, 3.0] {
            let p = crate::exponent::Exponent::new(p).unwrap();
            assert!((crate::schatten::schatten_norm(&bm, p).unwrap() - 1.0).abs() < 1e-10);
            assert!((crate::schatten::schatten_norm(&cm, p).unwrap() - 1.0).abs() < 1e-10);
        }
        assert!((crate::schatten::schatten_norm(&bm, crate::exponent::Exponent::INFINITY).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn translation_identity_at_identity_anchors() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = FiniteGroup::cyclic(4).unwrap();
        let phi = random_tensor(&mut rng, 2, 4);
        let e = g.identity();
        let t = translate_symbol(&phi, &g, &[e, e, e]).unwrap();
        assert_eq!(t, phi);
    }

    #[test]
    fn translation_covariance_linear_exhaustive() {
        // T_φ(λ_{r0} x λ_{r1}^*) = λ_{r0} T_{φ'}(x) λ_{r1}^* for x = λ(δ_1)
        let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let phi = SymbolTensor::from_fn(1, 4, |i| c((i[0] * i[0]) as f64 * 0.3 - 1.0, 0.5 * i[0] as f64)).unwrap();
        let f = GroupFunction::delta(g.clone(), 1).unwrap();
        for r0 in 0..4 {
            for r1 in 0..4 {
                let phi_t = translate_symbol(&phi, &g, &[r0, r1]).unwrap();
                // left side: conjugated input is λ(δ_{r0 · 1 · r1^{-1}}), scaled symbol picks it up
                let conj_in = GroupFunction::delta(g.clone(), g.mul(g.mul(r0, 1), g.inv(r1))).unwrap();
                let lhs = fourier_apply(&phi, &[&conj_in], &g).unwrap();
                let lam_r0 = lambda_matrix(&g, &GroupFunction::delta(g.clone(), r0).unwrap()).unwrap();
                let lam_r1 = lambda_matrix(&g, &GroupFunction::delta(g.clone(), r1).unwrap()).unwrap();
                let rhs = lam_r0
                    .mul(&fourier_apply(&phi_t, &[&f], &g).unwrap())
                    .unwrap()
                    .mul(&lam_r1.conj_transpose())
                    .unwrap();
                assert!(crate::matrix::max_abs_diff(&lhs, &rhs).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn translation_covariance_bilinear_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let phi = random_tensor(&mut rng, 2, 3);
        let x1 = GroupFunction::from_fn(g.clone(), |_| c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))).unwrap();
        let x2 = GroupFunction::from_fn(g.clone(), |_| c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))).unwrap();
        let lam = |s: usize| lambda_matrix(&g, &GroupFunction::delta(g.clone(), s).unwrap()).unwrap();
        for &(r0, r1, r2) in &[(1usize, 2usize, 0usize), (2, 1, 1), (0, 2, 2)] {
            let phi_t = translate_symbol(&phi, &g, &[r0, r1, r2]).unwrap();
            // LHS: T_φ applied to conjugated inputs λ_{r_{i-1}} x_i λ_{r_i}^*
            // realized on coefficient functions: (λ_{a} λ(f) λ_b^*) = λ(f(a^{-1}·s·b))
            let conj1 = GroupFunction::from_fn(g.clone(), |s| x1.value(g.mul(g.mul(g.inv(r0), s), r1))).unwrap();
            let conj2 = GroupFunction::from_fn(g.clone(), |s| x2.value(g.mul(g.mul(g.inv(r1), s), r2))).unwrap();
            let lhs = fourier_apply(&phi, &[&conj1, &conj2], &g).unwrap();
            let rhs = lam(r0)
                .mul(&fourier_apply(&phi_t, &[&x1, &x2], &g).unwrap())
                .unwrap()
                .mul(&lam(r2).conj_transpose())
                .unwrap();
            assert!(crate::matrix::max_abs_diff(&lhs, &rhs).unwrap() < 1e-12);
        }
    }

    #[test]
    fn mollify_with_point_mass_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let phi = random_tensor(&mut rng, 2, 4);
        let w = GroupFunction::delta(g.clone(), g.identity()).unwrap();
        let m = mollify_symbol(&phi, &g, &w).unwrap();
        assert!(m.values().iter().zip(phi.values()).all(|(a, b)| (a - b).norm() < 1e-14));
    }

    #[test]
    fn mollify_constant_symbol_is_unchanged() {
        let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let phi = SymbolTensor::constant(2, 4, c(1.5, 0.25)).unwrap();
        let w = GroupFunction::from_fn(g.clone(), |_| c(0.25, 0.0)).unwrap();
        let m = mollify_symbol(&phi, &g, &w).unwrap();
        assert!(m.values().iter().all(|&z| (z - c(1.5, 0.25)).norm() < 1e-13));
    }

    #[test]
    fn mollify_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let phi = random_tensor(&mut rng, 2, 4);
        use rand::Rng;
        let raw: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        let w = GroupFunction::from_fn(g.clone(), |s| c(raw[s] / total, 0.0)).unwrap();
        let m = mollify_symbol(&phi, &g, &w).unwrap();
        // independent direct evaluation of the weight-average
        for s1 in 0..4 {
            for s2 in 0..4 {
                let mut want = c(0.0, 0.0);
                for t1 in 0..4 {
                    for t2 in 0..4 {
                        let a1 = g.mul(g.inv(t1), s1);
                        let a2 = g.mul(s2, g.inv(t2));
                        want += phi.value(&[a1, a2]) * w.value(t1) * w.value(t2);
                    }
                }
                assert!((m.value(&[s1, s2]) - want).norm() < 1e-12);
            }
        }
        // negative weights are rejected
        let bad = GroupFunction::from_fn(g.clone(), |s| c(if s == 0 { 1.5 } else { -0.5 / 3.0 }, 0.0)).unwrap();
        assert!(mollify_symbol(&phi, &g, &bad).is_err());
    }
}
