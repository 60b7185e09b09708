//! Heuristic lower-bound estimation of multilinear map norms between
//! Schatten classes: alternating Hölder-dual ascent with seeded random
//! restarts, a specialized rank-one search for linear S_1 → S_1 Schur
//! multipliers, and a brute-force sampling oracle for tiny instances.
//!
//! Only lower bounds are certified: every reported value is attained by the
//! reported witnesses, and re-evaluating the map on them reproduces it.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::matrix::ComplexMatrix;
use crate::schatten::{dual_align, norm_from_singular_values, schatten_norm};
use crate::svd::svd;
use crate::symbols::{schur_apply, SymbolTensor};

/// Generic fallback for the partial adjoint enumerates an input basis; this
/// caps the enumeration (matrix-unit bases up to 16×16 slots).
pub const MAX_GENERIC_BASIS: usize = 256;

const ZERO_OBJECTIVE: f64 = 1e-280;

/// A multilinear map between matrix spaces, as seen by the estimator.
/// Implementations may expose a closed-form partial adjoint, restrict their
/// inputs to a subspace (`project_input` + `input_basis`), or fall back to
/// basis enumeration.
pub trait MultilinearMap: Sync {
    fn num_inputs(&self) -> usize;
    fn input_dims(&self, slot: usize) -> (usize, usize);
    fn output_dims(&self) -> (usize, usize);
    fn apply(&self, inputs: &[ComplexMatrix]) -> Result<ComplexMatrix>;

    /// Matrix Φ with Tr(Φ^H x) = Tr(y^H T(..., x at slot, ...)) for x in the
    /// admissible subspace. `None` requests the generic basis fallback.
    fn partial_adjoint(
        &self,
        _slot: usize,
        _inputs: &[ComplexMatrix],
        _y: &ComplexMatrix,
    ) -> Option<Result<ComplexMatrix>> {
        None
    }

    /// Projection onto the admissible input subspace for a slot. Identity by
    /// default (the whole matrix space).
    fn project_input(&self, _slot: usize, x: ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(x)
    }

    /// Orthogonal (not necessarily normalized) basis of the admissible input
    /// subspace, used by the generic partial adjoint.
    fn input_basis(&self, slot: usize) -> Result<Vec<ComplexMatrix>> {
        let (r, c) = self.input_dims(slot);
        if r * c > MAX_GENERIC_BASIS {
            return Err(Error::input(format!(
                "generic partial adjoint capped at {MAX_GENERIC_BASIS} basis elements; slot is {r}x{c}"
            )));
        }
        let mut basis = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                basis.push(ComplexMatrix::matrix_unit(r, c, i, j));
            }
        }
        Ok(basis)
    }
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct EstimatorConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            restarts: 32,
            max_iters: 200,
            rel_tol: 1e-8,
            seed: 42,
        }
    }
}

impl EstimatorConfig {
    pub fn with_seed(seed: u64) -> Self {
        EstimatorConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 || !(self.rel_tol > 0.0) {
            return Err(Error::input("estimator config fields must be positive"));
        }
        Ok(())
    }
}

/// A certified lower bound: `value` is attained by `witnesses`, and
/// `objective_check` records the independent re-evaluation of the map on them.
#[derive(Debug, Clone)]
pub struct NormEstimate {
    pub value: f64,
    pub witnesses: Vec<ComplexMatrix>,
    pub dual_witness: Option<ComplexMatrix>,
    pub objective_check: f64,
    pub restarts_used: usize,
    pub iterations: usize,
    pub seed: u64,
    pub converged: bool,
    pub method: String,
}

/// Per-restart RNG: a single 64-bit seed split by the ChaCha stream counter,
/// so parallel restarts reproduce independently of scheduling and restart
/// schedules nest (restarts 0..k are a prefix of 0..2k).
pub fn restart_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    })
    .expect("gaussian entries are finite")
}

pub fn complex_gaussian_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect()
}

pub fn normalize_vector(v: &mut [Complex64]) -> f64 {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    n
}

struct RestartOutcome {
    value: f64,
    witnesses: Vec<ComplexMatrix>,
    dual_witness: Option<ComplexMatrix>,
    iterations: usize,
    converged: bool,
}

/// ‖T(xs)‖_p / Π ‖x_i‖_{p_i}; the canonical objective the estimates certify.
pub fn witness_objective(
    map: &dyn MultilinearMap,
    xs: &[ComplexMatrix],
    in_ps: &[Exponent],
    out_p: Exponent,
) -> Result<f64> {
    let z = map.apply(xs)?;
    let num = schatten_norm(&z, out_p)?;
    let mut denom = 1.0;
    for (x, &p) in xs.iter().zip(in_ps) {
        denom *= schatten_norm(x, p)?;
    }
    if denom <= ZERO_OBJECTIVE {
        return Ok(0.0);
    }
    Ok(num / denom)
}

fn normalized_or_none(map: &dyn MultilinearMap, slot: usize, x: ComplexMatrix, p: Exponent) -> Result<Option<ComplexMatrix>> {
    let x = map.project_input(slot, x)?;
    let n = schatten_norm(&x, p)?;
    if n <= ZERO_OBJECTIVE {
        return Ok(None);
    }
    Ok(Some(x.scale(Complex64::new(1.0 / n, 0.0))))
}

fn generic_partial(
    map: &dyn MultilinearMap,
    slot: usize,
    xs: &[ComplexMatrix],
    y: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let basis = map.input_basis(slot)?;
    let (r, c) = map.input_dims(slot);
    let mut phi = ComplexMatrix::zeros(r, c);
    let mut probe: Vec<ComplexMatrix> = xs.to_vec();
    for b in basis {
        let norm_sq = b.entries().iter().map(|z| z.norm_sqr()).sum::<f64>();
        probe[slot] = b;
        let image = map.apply(&probe)?;
        let pairing = y.tr_adjoint_product(&image)?;
        let b = std::mem::replace(&mut probe[slot], ComplexMatrix::zeros(1, 1));
        phi = phi.add(&b.scale(pairing.conj() / norm_sq))?;
        probe[slot] = b;
    }
    Ok(phi)
}

fn partial_adjoint(
    map: &dyn MultilinearMap,
    slot: usize,
    xs: &[ComplexMatrix],
    y: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    match map.partial_adjoint(slot, xs, y) {
        Some(res) => res,
        None => generic_partial(map, slot, xs, y),
    }
}

/// One ascent run from the given (already admissible, unit-norm) starts.
fn dual_ascent_run(
    map: &dyn MultilinearMap,
    in_ps: &[Exponent],
    out_p: Exponent,
    mut xs: Vec<ComplexMatrix>,
    cfg: &EstimatorConfig,
) -> Result<RestartOutcome> {
    let out_dual = out_p.dual()?;
    let mut best_value = 0.0;
    let mut best_xs = xs.clone();
    let mut best_y = None;
    let mut prev = -1.0;
    let mut iterations = 0;
    let mut converged = false;

    for it in 0..cfg.max_iters {
        iterations = it + 1;
        let z = map.apply(&xs)?;
        let dec = svd(&z)?;
        let obj = norm_from_singular_values(&dec.singular_values, out_p);
        if obj <= ZERO_OBJECTIVE {
            break;
        }
        let align = dual_align(&z, out_dual)?;
        if obj > best_value {
            best_value = obj;
            best_xs = xs.clone();
            best_y = Some(align.witness.clone());
        }
        if prev >= 0.0 && obj - prev <= cfg.rel_tol * obj.abs().max(1e-30) {
            converged = true;
            break;
        }
        prev = obj;
        for slot in 0..xs.len() {
            let phi = partial_adjoint(map, slot, &xs, &align.witness)?;
            let phi = map.project_input(slot, phi)?;
            let al = dual_align(&phi, in_ps[slot])?;
            if !al.degenerate {
                if let Some(next) = normalized_or_none(map, slot, al.witness, in_ps[slot])? {
                    xs[slot] = next;
                }
            }
        }
    }

    Ok(RestartOutcome {
        value: best_value,
        witnesses: best_xs,
        dual_witness: best_y,
        iterations,
        converged,
    })
}

/// Coordinate-wise polish on the unit spheres: for each slot, each matrix
/// entry is nudged along ±δ and ±iδ (plus a few random directions), keeping
/// improvements greedily and shrinking δ on stalls. Shared by the p < 1 path
/// and the brute-force oracle.
fn polish_tuple(
    map: &dyn MultilinearMap,
    in_ps: &[Exponent],
    out_p: Exponent,
    mut xs: Vec<ComplexMatrix>,
    mut value: f64,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<ComplexMatrix>, f64, bool)> {
    const DIRECTIONS: [Complex64; 4] = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut step = 0.5;
    let mut settled = false;
    let try_candidate = |xs: &mut Vec<ComplexMatrix>,
                             value: &mut f64,
                             slot: usize,
                             candidate: ComplexMatrix|
     -> Result<bool> {
        if let Some(candidate) = normalized_or_none(map, slot, candidate, in_ps[slot])? {
            let mut trial = xs.clone();
            trial[slot] = candidate;
            let v = witness_objective(map, &trial, in_ps, out_p)?;
            if v > *value {
                *value = v;
                *xs = trial;
                return Ok(true);
            }
        }
        Ok(false)
    };
    for _ in 0..steps {
        let mut improved = false;
        for slot in 0..xs.len() {
            let (r, c) = map.input_dims(slot);
            for a in 0..r {
                for b in 0..c {
                    for &dir in &DIRECTIONS {
                        for scale in [step, 0.2 * step, 5.0 * step] {
                            let bump = ComplexMatrix::matrix_unit(r, c, a, b).scale(dir * scale);
                            let candidate = xs[slot].add(&bump)?;
                            improved |= try_candidate(&mut xs, &mut value, slot, candidate)?;
                        }
                    }
                }
            }
            for _ in 0..4 {
                let noise = complex_gaussian_matrix(rng, r, c).scale(Complex64::new(step, 0.0));
                let candidate = xs[slot].add(&noise)?;
                improved |= try_candidate(&mut xs, &mut value, slot, candidate)?;
            }
            // multiplicative moves (I + δG)·X·(I + δH) travel along low-rank
            // manifolds where additive coordinate steps stall at vertices of
            // the S_1 ball
            for _ in 0..6 {
                let left = ComplexMatrix::identity(r)
                    .add(&complex_gaussian_matrix(rng, r, r).scale(Complex64::new(step, 0.0)))?;
                let right = ComplexMatrix::identity(c)
                    .add(&complex_gaussian_matrix(rng, c, c).scale(Complex64::new(step, 0.0)))?;
                let candidate = left.mul(&xs[slot])?.mul(&right)?;
                improved |= try_candidate(&mut xs, &mut value, slot, candidate)?;
            }
        }
        if improved {
            step = (step * 1.3).min(1.0);
        } else {
            step *= 0.5;
            if step < 1e-8 {
                settled = true;
                break;
            }
        }
    }
    Ok((xs, value, settled))
}

fn random_start(
    map: &dyn MultilinearMap,
    in_ps: &[Exponent],
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<ComplexMatrix>>> {
    let mut xs = Vec::with_capacity(in_ps.len());
    for slot in 0..in_ps.len() {
        let (r, c) = map.input_dims(slot);
        // a couple of retries in case projection annihilates the sample
        let mut found = None;
        for _ in 0..4 {
            let g = complex_gaussian_matrix(rng, r, c);
            if let Some(x) = normalized_or_none(map, slot, g, in_ps[slot])? {
                found = Some(x);
                break;
            }
        }
        match found {
            Some(x) => xs.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(xs))
}

fn canonical_witnesses(map: &dyn MultilinearMap, in_ps: &[Exponent]) -> Result<Vec<ComplexMatrix>> {
    let mut out = Vec::with_capacity(in_ps.len());
    for slot in 0..in_ps.len() {
        let (r, c) = map.input_dims(slot);
        let unit = ComplexMatrix::matrix_unit(r, c, 0, 0);
        let w = match normalized_or_none(map, slot, unit, in_ps[slot])? {
            Some(w) => w,
            None => {
                // E_11 projects to zero in this subspace; fall back to the
                // first basis element
                let basis = map.input_basis(slot)?;
                normalized_or_none(map, slot, basis[0].clone(), in_ps[slot])?
                    .ok_or_else(|| Error::input("subspace admits no unit element"))?
            }
        };
        out.push(w);
    }
    Ok(out)
}

fn validate_estimator_inputs(
    map: &dyn MultilinearMap,
    in_ps: &[Exponent],
    out_p: Exponent,
    cfg: &EstimatorConfig,
) -> Result<()> {
    cfg.validate()?;
    if in_ps.len() != map.num_inputs() {
        return Err(Error::input(format!(
            "map takes {} inputs, got {} exponents",
            map.num_inputs(),
            in_ps.len()
        )));
    }
    if let Some(p) = in_ps.iter().find(|p| !p.is_dualizable()) {
        return Err(Error::input(format!("input exponents must be >= 1, got {p}")));
    }
    let _ = out_p; // any positive exponent is allowed on the output
    Ok(())
}

pub fn estimate_multilinear_norm(
    map: &dyn MultilinearMap,
    in_ps: &[Exponent],
    out_p: Exponent,
    cfg: &EstimatorConfig,
) -> Result<NormEstimate> {
    estimate_multilinear_norm_with_starts(map, in_ps, out_p, cfg, &[])
}

/// Like [`estimate_multilinear_norm`], with user-supplied feasible witness
/// tuples included as extra deterministic starts, so the returned value
/// dominates every supplied tuple's objective.
pub fn estimate_multilinear_norm_with_starts(
    map: &dyn MultilinearMap,
    in_ps: &[Exponent],
    out_p: Exponent,
    cfg: &EstimatorConfig,
    warm_starts: &[Vec<ComplexMatrix>],
) -> Result<NormEstimate> {
    validate_estimator_inputs(map, in_ps, out_p, cfg)?;
    let ascent = out_p.is_dualizable();

    // prepare start tuples: seeded random streams, then the warm starts
    let mut starts: Vec<(u64, Option<Vec<ComplexMatrix>>)> =
        (0..cfg.restarts).map(|k| (k as u64, None)).collect();
    for (w, tuple) in warm_starts.iter().enumerate() {
        if tuple.len() != in_ps.len() {
            return Err(Error::input("warm start tuple has wrong arity"));
        }
        let mut normalized = Vec::with_capacity(tuple.len());
        for (slot, x) in tuple.iter().enumerate() {
            let x = normalized_or_none(map, slot, x.clone(), in_ps[slot])?
                .ok_or_else(|| Error::input("warm start witness has zero norm"))?;
            normalized.push(x);
        }
        starts.push((cfg.restarts as u64 + w as u64, Some(normalized)));
    }

    let outcomes: Vec<Result<Option<RestartOutcome>>> = starts
        .into_par_iter()
        .map(|(stream, warm)| -> Result<Option<RestartOutcome>> {
            let mut rng = restart_rng(cfg.seed, stream);
            let xs = match warm {
                Some(xs) => xs,
                None => match random_start(map, in_ps, &mut rng)? {
                    Some(xs) => xs,
                    None => return Ok(None),
                },
            };
            if ascent {
                dual_ascent_run(map, in_ps, out_p, xs, cfg).map(Some)
            } else {
                // no Hölder duality below p = 1: random start plus greedy polish
                let value = witness_objective(map, &xs, in_ps, out_p)?;
                let (xs, value, settled) =
                    polish_tuple(map, in_ps, out_p, xs, value, cfg.max_iters, &mut rng)?;
                Ok(Some(RestartOutcome {
                    value,
                    witnesses: xs,
                    dual_witness: None,
                    iterations: cfg.max_iters,
                    converged: settled,
                }))
            }
        })
        .collect();

    let mut best: Option<RestartOutcome> = None;
    let mut restarts_used = 0;
    for outcome in outcomes {
        let outcome = outcome?;
        restarts_used += 1;
        if let Some(o) = outcome {
            if best.as_ref().map_or(true, |b| o.value > b.value) {
                best = Some(o);
            }
        }
    }

    let method = if ascent {
        "dual-ascent".to_string()
    } else {
        "random-polish (heuristic, no ascent guarantee)".to_string()
    };

    let best = match best {
        Some(b) if b.value > ZERO_OBJECTIVE => b,
        _ => {
            // zero map (or every start annihilated): canonical witnesses
            let witnesses = canonical_witnesses(map, in_ps)?;
            return Ok(NormEstimate {
                value: 0.0,
                witnesses,
                dual_witness: None,
                objective_check: 0.0,
                restarts_used,
                iterations: 0,
                seed: cfg.seed,
                converged: true,
                method,
            });
        }
    };

    let objective_check = witness_objective(map, &best.witnesses, in_ps, out_p)?;
    Ok(NormEstimate {
        value: objective_check,
        witnesses: best.witnesses,
        dual_witness: best.dual_witness,
        objective_check,
        restarts_used,
        iterations: best.iterations,
        seed: cfg.seed,
        converged: best.converged,
        method,
    })
}

/// A Schur multiplier as an estimator map, with the closed-form partial
/// adjoint Tr(Y^H M_φ(…, X at slot, …)) = Tr(Φ^H X).
#[derive(Debug, Clone)]
pub struct SchurMap {
    symbol: SymbolTensor,
}

impl SchurMap {
    pub fn new(symbol: SymbolTensor) -> Result<Self> {
        if symbol.arity() < 2 {
            return Err(Error::input("SchurMap needs a symbol of arity >= 2"));
        }
        Ok(SchurMap { symbol })
    }

    pub fn symbol(&self) -> &SymbolTensor {
        &self.symbol
    }
}

impl MultilinearMap for SchurMap {
    fn num_inputs(&self) -> usize {
        self.symbol.arity() - 1
    }

    fn input_dims(&self, _slot: usize) -> (usize, usize) {
        (self.symbol.axis(), self.symbol.axis())
    }

    fn output_dims(&self) -> (usize, usize) {
        (self.symbol.axis(), self.symbol.axis())
    }

    fn apply(&self, inputs: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        let refs: Vec<&ComplexMatrix> = inputs.iter().collect();
        schur_apply(&self.symbol, &refs)
    }

    fn partial_adjoint(
        &self,
        slot: usize,
        inputs: &[ComplexMatrix],
        y: &ComplexMatrix,
    ) -> Option<Result<ComplexMatrix>> {
        Some(schur_partial_adjoint(&self.symbol, slot, inputs, y))
    }
}

/// Φ(a, b) = conj( Σ_{t: t_slot = a, t_{slot+1} = b} conj(Y(t_0, t_n)) φ(t) Π_{k≠slot} A_k ).
fn schur_partial_adjoint(
    symbol: &SymbolTensor,
    slot: usize,
    inputs: &[ComplexMatrix],
    y: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let n = symbol.arity() - 1;
    let d = symbol.axis();
    if inputs.len() != n || slot >= n {
        return Err(Error::input("schur partial adjoint: arity mismatch"));
    }
    if n == 1 {
        // Φ(a,b) = Y(a,b)·conj(φ(a,b))
        return ComplexMatrix::from_fn(d, d, |a, b| y.get(a, b) * symbol.value(&[a, b]).conj());
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); d * d];
    let mut idx = vec![0usize; n + 1];
    loop {
        let coeff = symbol.values()[symbol.flat_index(&idx)];
        if coeff.re != 0.0 || coeff.im != 0.0 {
            let mut prod = coeff * y.get(idx[0], idx[n]).conj();
            for (k, a) in inputs.iter().enumerate() {
                if k != slot {
                    prod *= a.get(idx[k], idx[k + 1]);
                }
            }
            acc[idx[slot] * d + idx[slot + 1]] += prod;
        }
        // odometer
        let mut done = true;
        for s in idx.iter_mut().rev() {
            *s += 1;
            if *s < d {
                done = false;
                break;
            }
            *s = 0;
        }
        if done {
            break;
        }
    }
    ComplexMatrix::new(d, d, acc.into_iter().map(|z| z.conj()).collect())
}

/// Result of the rank-one S_1 search: the estimate plus the unit vectors
/// (b, c) with witness b·c^H, kept for lifting into bilinear chains.
#[derive(Debug, Clone)]
pub struct S1SchurEstimate {
    pub estimate: NormEstimate,
    pub left: Vec<Complex64>,
    pub right: Vec<Complex64>,
}

/// sup over unit vectors b, c of ‖ψ ∘ (b c^H)‖_1, by triple alternation:
/// align the trace dual Y of the current image, then take the top singular
/// pair of conj(Y) ∘ ψ as the next (b, c). Justified by rank-one extreme
/// points of the S_1 unit ball.
pub fn estimate_s1_schur_norm(psi: &SymbolTensor, cfg: &EstimatorConfig) -> Result<S1SchurEstimate> {
    if psi.arity() != 2 {
        return Err(Error::input("estimate_s1_schur_norm expects an arity-2 symbol"));
    }
    cfg.validate()?;
    let d = psi.axis();

    struct Run {
        value: f64,
        b: Vec<Complex64>,
        c: Vec<Complex64>,
        y: Option<ComplexMatrix>,
        iterations: usize,
        converged: bool,
    }

    let runs: Vec<Result<Run>> = (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|stream| -> Result<Run> {
            let mut rng = restart_rng(cfg.seed, stream);
            let mut b = complex_gaussian_vector(&mut rng, d);
            let mut c = complex_gaussian_vector(&mut rng, d);
            normalize_vector(&mut b);
            normalize_vector(&mut c);
            let mut best = Run {
                value: 0.0,
                b: b.clone(),
                c: c.clone(),
                y: None,
                iterations: 0,
                converged: false,
            };
            let mut prev = -1.0;
            for it in 0..cfg.max_iters {
                best.iterations = it + 1;
                let w = hadamard_rank_one(psi, &b, &c)?;
                let dec = svd(&w)?;
                let obj = dec.singular_values.iter().sum::<f64>();
                let y = dec.left.mul(&dec.right.conj_transpose())?;
                if obj > best.value {
                    best.value = obj;
                    best.b = b.clone();
                    best.c = c.clone();
                    best.y = Some(y.clone());
                }
                if obj <= ZERO_OBJECTIVE {
                    break;
                }
                if prev >= 0.0 && obj - prev <= cfg.rel_tol * obj.max(1e-30) {
                    best.converged = true;
                    break;
                }
                prev = obj;
                // K(s,t) = conj(Y(s,t))·ψ(s,t); maximizing Re(u^H K v) over unit
                // u, v gives the top singular pair; then b = conj(u), c = conj(v)
                let k = ComplexMatrix::from_fn(d, d, |s, t| y.get(s, t).conj() * psi.value(&[s, t]))?;
                let kdec = svd(&k)?;
                b = kdec.left.column(0).iter().map(|z| z.conj()).collect();
                c = kdec.right.column(0).iter().map(|z| z.conj()).collect();
                normalize_vector(&mut b);
                normalize_vector(&mut c);
            }
            Ok(best)
        })
        .collect();

    let mut best: Option<Run> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().map_or(true, |b| run.value > b.value) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");

    let witness = hadamard_rank_one(psi, &best.b, &best.c)?;
    let check = schatten_norm(&witness, Exponent::ONE)?;
    let rank_one = rank_one_matrix(&best.b, &best.c);
    Ok(S1SchurEstimate {
        estimate: NormEstimate {
            value: check,
            witnesses: vec![rank_one],
            dual_witness: best.y,
            objective_check: check,
            restarts_used: cfg.restarts,
            iterations: best.iterations,
            seed: cfg.seed,
            converged: best.converged,
            method: "s1-rank-one-alternation".to_string(),
        },
        left: best.b,
        right: best.c,
    })
}

/// b·c^H as a matrix.
pub fn rank_one_matrix(b: &[Complex64], c: &[Complex64]) -> ComplexMatrix {
    let c_conj: Vec<Complex64> = c.iter().map(|z| z.conj()).collect();
    ComplexMatrix::outer(b, &c_conj)
}

/// ψ ∘ (b c^H).
fn hadamard_rank_one(psi: &SymbolTensor, b: &[Complex64], c: &[Complex64]) -> Result<ComplexMatrix> {
    let d = b.len();
    ComplexMatrix::from_fn(d, d, |s, t| psi.value(&[s, t]) * b[s] * c[t].conj())
}

/// Pure random unit-sphere sampling plus coordinate-wise polishing; refuses
/// anything but tiny instances so oracle quality is never silently degraded.
pub fn brute_force_norm(
    map: &dyn MultilinearMap,
    in_ps: &[Exponent],
    out_p: Exponent,
    samples: usize,
    polish_steps: usize,
    seed: u64,
) -> Result<NormEstimate> {
    if in_ps.len() != map.num_inputs() {
        return Err(Error::input("brute_force_norm: exponent count mismatch"));
    }
    for slot in 0..map.num_inputs() {
        let (r, c) = map.input_dims(slot);
        if r * c > 64 {
            return Err(Error::input(format!(
                "brute_force_norm refuses slot dimension {r}x{c}; the oracle only covers d^2 <= 64"
            )));
        }
    }
    if samples == 0 {
        return Err(Error::input("brute_force_norm needs samples >= 1"));
    }
    if let Some(p) = in_ps.iter().find(|p| !(p.value() > 0.0)) {
        return Err(Error::input(format!("bad exponent {p}")));
    }

    // polish a diverse set of starts: the best sampled tuples, plus fresh
    // random tuples; greedily polishing only the single incumbent tends to
    // sit in the wrong basin
    const TOP_STARTS: usize = 4;
    const FRESH_STARTS: usize = 4;
    let mut rng = restart_rng(seed, 0);
    let mut ranked: Vec<(f64, Vec<ComplexMatrix>)> = Vec::new();
    for _ in 0..samples {
        if let Some(xs) = random_start_any(map, in_ps, &mut rng)? {
            let v = witness_objective(map, &xs, in_ps, out_p)?;
            ranked.push((v, xs));
            ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
            ranked.truncate(TOP_STARTS);
        }
    }
    if ranked.is_empty() {
        return Err(Error::input("sampling produced no admissible tuple"));
    }
    for _ in 0..FRESH_STARTS {
        if let Some(xs) = random_start_any(map, in_ps, &mut rng)? {
            let v = witness_objective(map, &xs, in_ps, out_p)?;
            ranked.push((v, xs));
        }
    }
    let mut best_value = f64::NEG_INFINITY;
    let mut best_xs = None;
    let mut any_settled = false;
    for (k, (v, xs)) in ranked.into_iter().enumerate() {
        let mut polish_rng = restart_rng(seed, 1 + k as u64);
        let (xs, value, settled) = polish_tuple(map, in_ps, out_p, xs, v, polish_steps, &mut polish_rng)?;
        any_settled |= settled;
        if value > best_value {
            best_value = value;
            best_xs = Some(xs);
        }
    }
    let xs = best_xs.expect("ranked was nonempty");
    let value = best_value;
    let settled = any_settled;

    let objective_check = witness_objective(map, &xs, in_ps, out_p)?;
    Ok(NormEstimate {
        value: objective_check,
        witnesses: xs,
        dual_witness: None,
        objective_check,
        restarts_used: samples,
        iterations: polish_steps,
        seed,
        converged: settled || value <= ZERO_OBJECTIVE,
        method: "brute-force-sampling".to_string(),
    })
}

/// Like `random_start` but tolerates quasi-norms (p < 1) since the oracle
/// normalizes by raw Schatten quasi-norms.
fn random_start_any(
    map: &dyn MultilinearMap,
    in_ps: &[Exponent],
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<ComplexMatrix>>> {
    let mut xs = Vec::with_capacity(in_ps.len());
    for slot in 0..in_ps.len() {
        let (r, c) = map.input_dims(slot);
        let g = complex_gaussian_matrix(rng, r, c);
        match normalized_or_none(map, slot, g, in_ps[slot])? {
            Some(x) => xs.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(xs))
}
