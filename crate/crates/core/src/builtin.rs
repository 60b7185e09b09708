//! Built-in multiplier symbols: the bilinear Hilbert transform step symbol,
//! its mollification, anti-triangular slice indicators, the Davies divided
//! difference symbol, and the homogeneous regulated Calderón–Zygmund symbol
//! with its disc mollification.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, disc_average};
use crate::symbols::{SymbolFunction, SymbolTensor};

const QUAD_TOL: f64 = 1e-10;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// h(ξ1, ξ2) = χ_{≥0}(ξ1 − ξ2), the bilinear Hilbert transform symbol.
pub fn bht_h() -> SymbolFunction {
    SymbolFunction::new(
        2,
        "bht-h",
        Arc::new(|args: &[f64]| re(if args[0] - args[1] >= 0.0 { 1.0 } else { 0.0 })),
    )
}

/// The fixed polynomial bump used to mollify h: c·(1/4 − t²)² on
/// |t| ≤ 1/2 − ε with ε = 1e−3, normalized to unit integral. Symmetric and
/// supported strictly inside (−1/2, 1/2).
#[derive(Debug, Clone, Copy)]
pub struct Bump {
    half_width: f64,
    scale: f64,
}

impl Default for Bump {
    fn default() -> Self {
        Bump::new(0.5 - 1e-3)
    }
}

impl Bump {
    pub fn new(half_width: f64) -> Self {
        assert!(half_width > 0.0 && half_width < 0.5, "bump must live strictly inside (-1/2, 1/2)");
        let raw = |t: f64| {
            let q = 0.25 - t * t;
            q * q
        };
        let total = adaptive_simpson(&raw, -half_width, half_width, QUAD_TOL * 1e-2);
        Bump {
            half_width,
            scale: 1.0 / total,
        }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn density(&self, t: f64) -> f64 {
        if t.abs() > self.half_width {
            0.0
        } else {
            let q = 0.25 - t * t;
            self.scale * q * q
        }
    }

    /// ∫_{x}^{∞} bump, the upper tail mass.
    fn upper_tail(&self, x: f64) -> f64 {
        if x <= -self.half_width {
            1.0
        } else if x >= self.half_width {
            0.0
        } else {
            adaptive_simpson(&|t| self.density(t), x, self.half_width, QUAD_TOL)
        }
    }
}

/// H(s1, s2) = ∫ h(s1 + t, −t + s2) bump(t) dt, the mollified step. The value
/// depends only on s1 − s2 and equals the upper tail mass of the bump from
/// (s2 − s1)/2. On integers it reproduces h off the diagonal; on the diagonal
/// any symmetric bump averages the jump to 1/2, which is what gets reported.
pub fn mollified_h(bump: Bump) -> SymbolFunction {
    SymbolFunction::new(
        2,
        "bht-H",
        Arc::new(move |args: &[f64]| re(bump.upper_tail(0.5 * (args[1] - args[0])))),
    )
}

/// H_j(s, t) = χ_{≥0}(s + t − 2j), the anti-triangular slice indicator.
pub fn h_j_indicator(j: i64) -> SymbolFunction {
    SymbolFunction::new(
        2,
        format!("hj:{j}"),
        Arc::new(move |args: &[f64]| re(if args[0] + args[1] - 2.0 * j as f64 >= 0.0 { 1.0 } else { 0.0 })),
    )
}

/// Validates a Davies sequence 0 = λ_0 < λ_1 < … < λ_N.
fn validate_lambdas(lambdas: &[f64]) -> Result<()> {
    if lambdas.len() < 2 {
        return Err(Error::input("davies symbol needs at least two lambda values"));
    }
    if lambdas[0] != 0.0 {
        return Err(Error::input("davies sequence must start at lambda_0 = 0"));
    }
    if lambdas.windows(2).any(|w| !(w[0] < w[1])) || lambdas.iter().any(|x| !x.is_finite()) {
        return Err(Error::input("davies sequence must be strictly increasing and finite"));
    }
    Ok(())
}

/// The Davies symbol φ(i, j) = (λ_i − λ_j)/(λ_i + λ_j) on index pairs, with
/// the 0/0 diagonal entry at i = j = 0 set to 0 (so the diagonal vanishes
/// identically). Arguments are indices into the λ-sequence.
pub fn davies_phi(lambdas: Vec<f64>) -> Result<SymbolFunction> {
    validate_lambdas(&lambdas)?;
    let n = lambdas.len();
    let lam = Arc::new(lambdas);
    let lam2 = lam.clone();
    Ok(SymbolFunction::new(
        2,
        format!("davies:{}", n - 1),
        Arc::new(move |args: &[f64]| {
            let i = args[0].round() as i64;
            let j = args[1].round() as i64;
            if i < 0 || j < 0 || i as usize >= lam2.len() || j as usize >= lam2.len() {
                return re(0.0);
            }
            let (a, b) = (lam2[i as usize], lam2[j as usize]);
            if a == 0.0 && b == 0.0 {
                re(0.0)
            } else {
                re((a - b) / (a + b))
            }
        }),
    ))
}

/// The default Davies sequence (0, 1, 2, 4, …, 2^{N−1}): geometric spacing,
/// already rational so no further approximation step is needed.
pub fn default_davies_lambdas(n: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(n + 1);
    v.push(0.0);
    for i in 0..n {
        v.push((2.0_f64).powi(i as i32));
    }
    v
}

/// Materializes ψ(i, j) = (1 + φ(i, j))/2 on the full (N+1)-point index set;
/// this is the slice symbol m̃(·, 0, ·) of the regulated symbol below, since
/// m̃(s, 0, t) = s/(s+t) = (1 + φ(s,t))/2 for s, t > 0.
pub fn davies_half_symbol(lambdas: &[f64]) -> Result<SymbolTensor> {
    validate_lambdas(lambdas)?;
    let phi = davies_phi(lambdas.to_vec())?;
    let axis = lambdas.len();
    SymbolTensor::from_fn(2, axis, |idx| {
        let v = phi.eval(&[idx[0] as f64, idx[1] as f64]);
        re(0.5 * (1.0 + v.re))
    })
}

/// Choice of homogeneous extension of the Calderón–Zygmund symbol off the
/// quadrant {s > 0, t < 0} where the formula s/(s−t) pins it down.
#[derive(Clone)]
pub enum CircleExtension {
    /// Cosine smoothstep from 1 at angle 0 down to 0 at angle 3π/2, traversed
    /// counterclockwise over the complement of the defining quadrant.
    Smoothstep,
    /// User-supplied profile on the complementary arc, parametrized by the
    /// counterclockwise angle u ∈ (0, 3π/2) from the positive s-axis. Should
    /// match the boundary values 1 at u → 0 and 0 at u → 3π/2 to keep the
    /// symbol continuous away from the origin.
    Profile(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for CircleExtension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CircleExtension::Smoothstep => write!(f, "Smoothstep"),
            CircleExtension::Profile(_) => write!(f, "Profile(..)"),
        }
    }
}

fn circle_profile(extension: &CircleExtension, theta: f64) -> f64 {
    // theta in (-π, π]
    if (-std::f64::consts::FRAC_PI_2..=0.0).contains(&theta) {
        // the quadrant arc: m(cosθ, sinθ) = cosθ/(cosθ − sinθ)
        let c = theta.cos();
        let s = theta.sin();
        return c / (c - s);
    }
    // counterclockwise distance from angle 0
    let u = if theta > 0.0 { theta } else { theta + 2.0 * std::f64::consts::PI };
    match extension {
        CircleExtension::Smoothstep => 0.5 * (1.0 + (2.0 * u / 3.0).cos()),
        CircleExtension::Profile(p) => p(u),
    }
}

/// The homogeneous symbol m: determined by m(s, t) = s/(s−t) on the quadrant
/// {s > 0, t < 0}, extended over the rest of the circle by the chosen
/// profile, homogeneous of degree zero, and regulated at the origin (the
/// value at 0 is the disc average, which by homogeneity is the circle
/// average of the profile).
pub fn cz_m(extension: CircleExtension) -> SymbolFunction {
    let ext = extension.clone();
    // circle average = disc average for a homogeneous function
    let average = adaptive_simpson(
        &|theta| circle_profile(&ext, theta),
        -std::f64::consts::PI,
        std::f64::consts::PI,
        QUAD_TOL * 1e-2,
    ) / (2.0 * std::f64::consts::PI);
    SymbolFunction::new(
        2,
        "cz-m",
        Arc::new(move |args: &[f64]| {
            let (s, t) = (args[0], args[1]);
            if s == 0.0 && t == 0.0 {
                return re(average);
            }
            re(circle_profile(&extension, t.atan2(s)))
        }),
    )
}

/// m_r(s1, s2): the average of m over the disc of radius r centered at
/// (s1, s2). Continuous and bounded; converges to m pointwise away from the
/// rays of discontinuity as r → 0, and reproduces the regulated value at the
/// origin for every r.
pub fn cz_m_r(r: f64, base_resolution: usize, extension: CircleExtension) -> Result<SymbolFunction> {
    if r <= 0.0 {
        return Err(Error::input("cz_m_r needs r > 0"));
    }
    let m = cz_m(extension);
    Ok(SymbolFunction::new(
        2,
        format!("cz-m-r:{r}"),
        Arc::new(move |args: &[f64]| {
            let f = |x: f64, y: f64| m.eval(&[x, y]).re;
            let avg = disc_average(&f, args[0], args[1], r, base_resolution, 1e-6)
                .unwrap_or_else(|_| polfallback(&f, args[0], args[1], r));
            re(avg)
        }),
    ))
}

fn polfallback(f: &dyn Fn(f64, f64) -> f64, cx: f64, cy: f64, r: f64) -> f64 {
    // last-resort fixed fine grid if the Richardson check stalls on a
    // discontinuity ray; keeps the evaluator total
    let n = 256;
    let mut acc = 0.0;
    for i in 0..n {
        let rho = r * (((i as f64 + 0.5) / n as f64).sqrt());
        for j in 0..(2 * n) {
            let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / (2 * n) as f64;
            acc += f(cx + rho * th.cos(), cy + rho * th.sin());
        }
    }
    acc / (n * 2 * n) as f64
}

/// Parses CLI symbol descriptors: "bht-h", "bht-H", "hj:j", "davies:2^i:N",
/// "cz-m". Returns the corresponding evaluator.
pub fn parse_symbol_descriptor(desc: &str) -> Result<SymbolFunction> {
    let desc = desc.trim();
    match desc {
        "bht-h" => return Ok(bht_h()),
        "bht-H" => return Ok(mollified_h(Bump::default())),
        "cz-m" => return Ok(cz_m(CircleExtension::Smoothstep)),
        _ => {}
    }
    if let Some(j) = desc.strip_prefix("hj:") {
        let j: i64 = j.parse().map_err(|_| Error::input(format!("bad slice index in '{desc}'")))?;
        return Ok(h_j_indicator(j));
    }
    if let Some(rest) = desc.strip_prefix("davies:") {
        let (kind, n) = rest
            .split_once(':')
            .ok_or_else(|| Error::input(format!("davies descriptor needs a size: '{desc}'")))?;
        if kind != "2^i" {
            return Err(Error::input(format!("unknown davies sequence '{kind}'")));
        }
        let n: usize = n.parse().map_err(|_| Error::input(format!("bad davies size in '{desc}'")))?;
        return davies_phi(default_davies_lambdas(n));
    }
    Err(Error::input(format!("unknown symbol descriptor '{desc}'")))
}
