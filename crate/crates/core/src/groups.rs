//! Finite groups given by Cayley tables, functions on them, and the left
//! regular representation λ with its Plancherel normalization.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

pub const MAX_GROUP_ORDER: usize = 4096;
/// Group law is checked exhaustively up to this order, by sampling above it.
const EXHAUSTIVE_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>, // row-major: table[s*order + t] = s∘t
    identity: usize,
    inverse: Vec<u32>,
    descriptor: String,
}

impl FiniteGroup {
    /// Validates the table as a group law (closure, identity, inverses,
    /// associativity) and derives the identity/inverse data.
    pub fn from_table(order: usize, table: Vec<u32>, descriptor: impl Into<String>) -> Result<Self> {
        if order == 0 {
            return Err(Error::input("group order must be positive"));
        }
        if order > MAX_GROUP_ORDER {
            return Err(Error::input(format!("group order {order} exceeds cap {MAX_GROUP_ORDER}")));
        }
        if table.len() != order * order {
            return Err(Error::input("cayley table has wrong size"));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(Error::input("cayley table entry out of range"));
        }
        let mul = |s: usize, t: usize| table[s * order + t] as usize;

        let mut identity = None;
        'outer: for e in 0..order {
            for t in 0..order {
                if mul(e, t) != t || mul(t, e) != t {
                    continue 'outer;
                }
            }
            identity = Some(e);
            break;
        }
        let identity = identity.ok_or_else(|| Error::input("table has no identity element"))?;

        let mut inverse = vec![u32::MAX; order];
        for s in 0..order {
            let inv = (0..order).find(|&t| mul(s, t) == identity && mul(t, s) == identity);
            match inv {
                Some(t) => inverse[s] = t as u32,
                None => return Err(Error::input(format!("element {s} has no inverse"))),
            }
        }

        if order <= EXHAUSTIVE_ORDER {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                            return Err(Error::input("table is not associative"));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6d736d74);
            let samples = EXHAUSTIVE_ORDER * EXHAUSTIVE_ORDER * EXHAUSTIVE_ORDER;
            for _ in 0..samples {
                let a = rng.random_range(0..order);
                let b = rng.random_range(0..order);
                let c = rng.random_range(0..order);
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    return Err(Error::input("table is not associative"));
                }
            }
        }

        Ok(FiniteGroup {
            order,
            table,
            identity,
            inverse,
            descriptor: descriptor.into(),
        })
    }

    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::input("cyclic group needs m >= 1"));
        }
        let table: Vec<u32> = (0..m)
            .flat_map(|a| (0..m).map(move |b| ((a + b) % m) as u32))
            .collect();
        Self::from_table(m, table, format!("cyclic:{m}"))
    }

    /// Dihedral group of order 2m; index a + m·b encodes r^a s^b.
    pub fn dihedral(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::input("dihedral group needs m >= 1"));
        }
        let order = 2 * m;
        let mut table = vec![0u32; order * order];
        for a1 in 0..m {
            for b1 in 0..2 {
                for a2 in 0..m {
                    for b2 in 0..2 {
                        // (r^{a1} s^{b1})(r^{a2} s^{b2}) = r^{a1 + (-1)^{b1} a2} s^{b1+b2}
                        let a = if b1 == 0 { (a1 + a2) % m } else { (a1 + m - a2 % m) % m };
                        let b = (b1 + b2) % 2;
                        table[(a1 + m * b1) * order + (a2 + m * b2)] = (a + m * b) as u32;
                    }
                }
            }
        }
        Self::from_table(order, table, format!("dihedral:{m}"))
    }

    /// Direct product; index a·|H| + b.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let order = g
            .order
            .checked_mul(h.order)
            .filter(|&d| d <= MAX_GROUP_ORDER)
            .ok_or_else(|| Error::input("product order exceeds cap"))?;
        let mut table = vec![0u32; order * order];
        for a1 in 0..g.order {
            for b1 in 0..h.order {
                for a2 in 0..g.order {
                    for b2 in 0..h.order {
                        let a = g.mul(a1, a2);
                        let b = h.mul(b1, b2);
                        table[(a1 * h.order + b1) * order + (a2 * h.order + b2)] = (a * h.order + b) as u32;
                    }
                }
            }
        }
        Self::from_table(order, table, format!("product:{},{}", g.descriptor, h.descriptor))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    #[inline]
    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.table[s * self.order + t] as usize
    }

    #[inline]
    pub fn inv(&self, s: usize) -> usize {
        self.inverse[s] as usize
    }

    /// s·t⁻¹, the difference entering kernels of the form f(st⁻¹).
    #[inline]
    pub fn quotient(&self, s: usize, t: usize) -> usize {
        self.mul(s, self.inv(t))
    }
}

/// A complex function on a finite group, kept with its group so convolution
/// and λ never mix domains.
#[derive(Debug, Clone)]
pub struct GroupFunction {
    group: Arc<FiniteGroup>,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::input("group function length must equal group order"));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::input("group function values must be finite"));
        }
        Ok(GroupFunction { group, values })
    }

    pub fn from_fn(group: Arc<FiniteGroup>, f: impl FnMut(usize) -> Complex64) -> Result<Self> {
        let values = (0..group.order()).map(f).collect();
        Self::new(group, values)
    }

    /// The point mass δ_s.
    pub fn delta(group: Arc<FiniteGroup>, s: usize) -> Result<Self> {
        if s >= group.order() {
            return Err(Error::input("delta: element out of range"));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); group.order()];
        values[s] = Complex64::new(1.0, 0.0);
        Ok(GroupFunction { group, values })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, s: usize) -> Complex64 {
        self.values[s]
    }

    pub fn matches(&self, group: &FiniteGroup) -> bool {
        std::ptr::eq(self.group.as_ref(), group) || *self.group.as_ref() == *group
    }

    /// Convolution (f⋆g)(t) = Σ_s f(s) g(s⁻¹t).
    pub fn convolve(&self, other: &GroupFunction) -> Result<GroupFunction> {
        if !other.matches(self.group.as_ref()) {
            return Err(Error::input("convolve: group mismatch"));
        }
        let g = self.group.as_ref();
        let d = g.order();
        let mut values = vec![Complex64::new(0.0, 0.0); d];
        for (t, out) in values.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 0..d {
                acc += self.values[s] * other.values[g.mul(g.inv(s), t)];
            }
            *out = acc;
        }
        GroupFunction::new(self.group.clone(), values)
    }

    /// The involution f*(s) = conj(f(s⁻¹)).
    pub fn involution(&self) -> GroupFunction {
        let g = self.group.as_ref();
        let values = (0..g.order()).map(|s| self.values[g.inv(s)].conj()).collect();
        GroupFunction {
            group: self.group.clone(),
            values,
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// The left regular representation: (λ(f))_{s,t} = f(s·t⁻¹).
pub fn lambda_matrix(group: &FiniteGroup, f: &GroupFunction) -> Result<ComplexMatrix> {
    if !f.matches(group) {
        return Err(Error::input("lambda_matrix: group mismatch"));
    }
    let d = group.order();
    ComplexMatrix::from_fn(d, d, |s, t| f.value(group.quotient(s, t)))
}

/// Coefficient recovery for elements of the group algebra: if y = Σ g(u) λ_u
/// then g(u) = y(u, e).
pub fn lambda_coefficients(group: &FiniteGroup, y: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let d = group.order();
    if y.rows() != d || y.cols() != d {
        return Err(Error::input("lambda_coefficients: size mismatch"));
    }
    let e = group.identity();
    Ok((0..d).map(|u| y.get(group.mul(u, e), e)).collect())
}

/// Orthogonal projection of an arbitrary d×d matrix onto the span of the λ_u
/// (the group von Neumann algebra), in the Frobenius inner product:
/// coefficient g(u) = (1/d) Σ_b x(u·b, b).
pub fn project_onto_group_algebra(group: &FiniteGroup, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = group.order();
    if x.rows() != d || x.cols() != d {
        return Err(Error::input("project_onto_group_algebra: size mismatch"));
    }
    let mut coeff = vec![Complex64::new(0.0, 0.0); d];
    for (u, cu) in coeff.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for b in 0..d {
            acc += x.get(group.mul(u, b), b);
        }
        *cu = acc / d as f64;
    }
    ComplexMatrix::from_fn(d, d, |s, t| coeff[group.quotient(s, t)])
}

/// Parses group spec strings: "cyclic:m", "dihedral:m",
/// "product:cyclic:a,cyclic:b" (two atomic factors).
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("product:") {
        let parts: Vec<&str> = rest.splitn(2, ',').collect();
        if parts.len() != 2 {
            return Err(Error::input(format!("product spec needs two factors: '{spec}'")));
        }
        let g = parse_atomic_spec(parts[0])?;
        let h = parse_atomic_spec(parts[1])?;
        return FiniteGroup::direct_product(&g, &h);
    }
    parse_atomic_spec(spec)
}

fn parse_atomic_spec(spec: &str) -> Result<FiniteGroup> {
    let spec = spec.trim();
    let (kind, m) = spec
        .split_once(':')
        .ok_or_else(|| Error::input(format!("bad group spec '{spec}'")))?;
    let m: usize = m
        .parse()
        .map_err(|_| Error::input(format!("bad group size in '{spec}'")))?;
    match kind {
        "cyclic" => FiniteGroup::cyclic(m),
        "dihedral" => FiniteGroup::dihedral(m),
        other => Err(Error::input(format!("unknown group kind '{other}'"))),
    }
}
