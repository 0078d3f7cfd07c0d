//! Complex polynomials and rational functions.
//!
//! Polynomials are stored by ascending powers. Roots are found with an
//! Aberth–Ehrlich simultaneous iteration; nearly coincident roots are merged
//! into a single root carrying the summed multiplicity.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

pub const MAX_DEGREE: usize = 64;
/// Residual tolerance `|p(r)| <= ROOT_TOL * Σ|p_j||r|^j` for accepted roots.
pub const ROOT_TOL: f64 = 1e-10;
/// Roots closer than this (relative to `max(1, |r|)`) are always merged.
pub const CLUSTER_TOL: f64 = 1e-7;
/// Roots closer than this are merged when the merged centre still passes
/// the residual test.
const LOOSE_CLUSTER_TOL: f64 = 1e-3;
pub const COPRIME_TOL: f64 = 1e-10;
/// `|Q(z)| <= POLE_TOL * Σ|q_j||z|^j` is reported as a pole.
pub const POLE_TOL: f64 = 1e-13;
/// Coefficients below this fraction of the largest one count as zero when
/// computing supports.
pub const SUPPORT_TOL: f64 = 1e-14;

const MAX_ITER: usize = 500;
const MAX_RESTARTS: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct ComplexPoly {
    /// `coeffs[j]` multiplies `z^j`; empty for the zero polynomial, otherwise
    /// the last entry is nonzero.
    coeffs: Vec<C64>,
}

impl TryFrom<Vec<[f64; 2]>> for ComplexPoly {
    type Error = Error;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self> {
        ComplexPoly::new(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

impl From<ComplexPoly> for Vec<[f64; 2]> {
    fn from(p: ComplexPoly) -> Self {
        p.coeffs.iter().map(|c| [c.re, c.im]).collect()
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({:.6e}, {:.6e})", c.re, c.im)?;
        }
        write!(f, "]")
    }
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<C64>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::DegreeTooLarge(coeffs.len() - 1));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite polynomial coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c]).expect("constant polynomial")
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// `c z^k`.
    pub fn monomial(c: C64, k: usize) -> Result<Self> {
        let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `lead * Π (z - r)^m`.
    pub fn from_roots(roots: &[Root], lead: C64) -> Result<Self> {
        let mut p = Self::constant(lead);
        for r in roots {
            let lin = Self::new(vec![-r.value, C64::new(1.0, 0.0)])?;
            for _ in 0..r.multiplicity {
                p = p.mul(&lin)?;
            }
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> C64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: C64) -> C64 {
        horner(&self.coeffs, z)
    }

    /// `Σ |c_j| |z|^j`, the natural rounding scale of `eval(z)`.
    pub fn scale_at(&self, z: C64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * j as f64)
            .collect();
        Self::new(coeffs).expect("derivative keeps degree bound")
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|j| self.coeff(j) + other.coeff(j)).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|j| self.coeff(j) - other.coeff(j)).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect()).expect("scaling keeps degree")
    }

    /// Coefficients of `p(ω z)`.
    pub fn rotate(&self, omega: C64) -> Self {
        let mut w = C64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * w;
                w *= omega;
                v
            })
            .collect();
        Self::new(coeffs).expect("rotation keeps degree")
    }

    /// Number of exactly vanishing low-order coefficients (order of the zero at 0).
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .take_while(|c| **c == C64::new(0.0, 0.0))
            .count()
    }

    /// `p(z) / z^m`, assuming the low `m` coefficients vanish.
    pub fn shift_down(&self, m: usize) -> Self {
        Self::new(self.coeffs.iter().skip(m).copied().collect()).expect("shift keeps degree")
    }

    /// `z^deg p(1/z)`.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().copied().collect()).expect("reverse keeps degree")
    }

    /// Indices of coefficients that are nonzero relative to the largest one.
    pub fn support(&self) -> Vec<usize> {
        let cutoff = SUPPORT_TOL * self.max_coeff();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > cutoff)
            .map(|(j, _)| j)
            .collect()
    }

    /// First `count` Taylor coefficients at `w`: `p(w + h) = Σ t_k h^k`.
    pub fn taylor_at(&self, w: C64, count: usize) -> Vec<C64> {
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            if work.is_empty() {
                out.push(C64::new(0.0, 0.0));
                continue;
            }
            // synthetic division by (z - w): remainder is the next coefficient
            let n = work.len();
            let mut q = vec![C64::new(0.0, 0.0); n.saturating_sub(1)];
            let mut acc = C64::new(0.0, 0.0);
            for j in (0..n).rev() {
                acc = acc * w + work[j];
                if j > 0 {
                    q[j - 1] = acc;
                }
            }
            out.push(acc);
            work = q;
        }
        out
    }
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
}

/// All roots of `p` with multiplicities summing to `deg p`.
pub fn poly_roots(p: &ComplexPoly) -> Result<Vec<Root>> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::InvalidInput(
            "root finding needs degree >= 1".into(),
        ));
    }
    let mut roots = Vec::new();
    let m0 = p.valuation();
    if m0 > 0 {
        roots.push(Root {
            value: C64::new(0.0, 0.0),
            multiplicity: m0,
        });
    }
    let q = p.shift_down(m0);
    let qdeg = q.degree().unwrap_or(0);
    if qdeg == 0 {
        return Ok(roots);
    }
    let lead = q.leading();
    let monic: Vec<C64> = q.coeffs().iter().map(|c| c / lead).collect();
    if qdeg == 1 {
        roots.push(Root {
            value: -monic[0],
            multiplicity: 1,
        });
        return Ok(roots);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for attempt in 0..MAX_RESTARTS {
        let approx = aberth(&monic, attempt, &mut rng);
        let found = cluster(&q, &approx);
        if found
            .iter()
            .all(|r| q.eval(r.value).norm() <= ROOT_TOL * q.scale_at(r.value).max(f64::MIN_POSITIVE))
        {
            roots.extend(found);
            return Ok(roots);
        }
    }
    Err(Error::RootsNotConverged {
        poly: p.to_string(),
    })
}

fn aberth(monic: &[C64], attempt: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let n = monic.len() - 1;
    let dcoeffs: Vec<C64> = monic
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * j as f64)
        .collect();
    let scale_at = |z: C64| {
        let r = z.norm();
        monic.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    };

    // geometric mean of root moduli, kept away from zero
    let radius = monic[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let mut theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.7 / n as f64;
            let mut r = radius;
            if attempt > 0 {
                theta += rng.gen_range(-0.5..0.5);
                r *= 1.0 + rng.gen_range(-0.3..0.3);
            }
            C64::from_polar(r, theta)
        })
        .collect();
    let mut done = vec![false; n];
    let rounding = 4.0 * (n as f64 + 1.0) * f64::EPSILON;

    for _ in 0..MAX_ITER {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let pz = horner(monic, z[k]);
            if pz.norm() <= rounding * scale_at(z[k]) {
                done[k] = true;
                continue;
            }
            let dpz = horner(&dcoeffs, z[k]);
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let ratio = if dpz.norm() > 0.0 {
                pz / dpz
            } else {
                C64::new(1e-8 * radius, 1e-8 * radius)
            };
            let denom = C64::new(1.0, 0.0) - ratio * s;
            let w = if denom.norm() > 0.0 { ratio / denom } else { ratio };
            z[k] -= w;
            if w.norm() <= 2.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                done[k] = true;
            }
        }
        if done.iter().all(|d| *d) {
            break;
        }
    }
    z
}

/// Merge close approximations into roots with multiplicity and polish the
/// merged centres with Newton steps on the matching derivative.
fn cluster(p: &ComplexPoly, approx: &[C64]) -> Vec<Root> {
    let mut groups: Vec<(C64, usize)> = approx.iter().map(|z| (*z, 1)).collect();

    let close = |a: C64, b: C64, tol: f64| (a - b).norm() <= tol * 1f64.max(a.norm()).max(b.norm());

    // tight pass: unconditional single linkage
    loop {
        let mut merged = false;
        'outer: for i in 0..groups.len() {
            for j in (i + 1)..groups.len() {
                if close(groups[i].0, groups[j].0, CLUSTER_TOL) {
                    let (a, ma) = groups[i];
                    let (b, mb) = groups.remove(j);
                    let m = ma + mb;
                    groups[i] = (polish(p, (a * ma as f64 + b * mb as f64) / m as f64, m), m);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }

    // loose pass: merge only if the merged centre is a genuine root
    loop {
        let mut merged = false;
        'outer2: for i in 0..groups.len() {
            for j in (i + 1)..groups.len() {
                if close(groups[i].0, groups[j].0, LOOSE_CLUSTER_TOL) {
                    let (a, ma) = groups[i];
                    let (b, mb) = groups[j];
                    let m = ma + mb;
                    let c = polish(p, (a * ma as f64 + b * mb as f64) / m as f64, m);
                    if p.eval(c).norm() <= ROOT_TOL * p.scale_at(c) {
                        groups.remove(j);
                        groups[i] = (c, m);
                        merged = true;
                        break 'outer2;
                    }
                }
            }
        }
        if !merged {
            break;
        }
    }

    groups
        .into_iter()
        .map(|(value, multiplicity)| Root {
            value: polish(p, value, multiplicity),
            multiplicity,
        })
        .collect()
}

/// Newton iteration on `p^(m-1)`, which has a simple root at an m-fold root
/// of `p`. The refined point is kept only if it lowers `|p^(m-1)|`.
fn polish(p: &ComplexPoly, start: C64, m: usize) -> C64 {
    let f = p.nth_derivative(m - 1);
    let df = f.derivative();
    let mut z = start;
    for _ in 0..8 {
        let d = df.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = f.eval(z) / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    let limit = LOOSE_CLUSTER_TOL * start.norm().max(1.0);
    if (z - start).norm() <= limit && f.eval(z).norm() <= f.eval(start).norm() {
        z
    } else {
        start
    }
}

/// True iff no root of `q` is (numerically) a root of `p`.
pub fn coprime_check(p: &ComplexPoly, q: &ComplexPoly) -> Result<bool> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if q.degree() == Some(0) || p.degree() == Some(0) {
        return Ok(true);
    }
    Ok(common_root(p, &poly_roots(q)?).is_none())
}

fn common_root(p: &ComplexPoly, q_roots: &[Root]) -> Option<C64> {
    let deg = p.degree().unwrap_or(0) as i32;
    let pmax = p.max_coeff();
    q_roots
        .iter()
        .map(|r| r.value)
        .find(|&r| {
            let scale = pmax * r.norm().max(1.0).powi(deg);
            p.eval(r).norm() <= COPRIME_TOL * scale
        })
}

/// Largest `k` such that `R(e^{2πi/k} z) = c R(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryOrder {
    Finite(usize),
    Unbounded,
}

impl SymmetryOrder {
    pub fn finite(self) -> Option<usize> {
        match self {
            SymmetryOrder::Finite(k) => Some(k),
            SymmetryOrder::Unbounded => None,
        }
    }
}

/// gcd of all index differences inside `supp P` and inside `supp Q`.
pub fn support_gcd(p: &ComplexPoly, q: &ComplexPoly) -> SymmetryOrder {
    let mut g = 0usize;
    for poly in [p, q] {
        let supp = poly.support();
        if let Some(&first) = supp.first() {
            for &j in &supp[1..] {
                g = gcd(g, j - first);
            }
        }
    }
    if g == 0 {
        SymmetryOrder::Unbounded
    } else {
        SymmetryOrder::Finite(g)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub location: C64,
    pub order: usize,
}

/// `P/Q` with `P, Q` coprime and the poles of `Q` cached.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalFn {
    num: ComplexPoly,
    den: ComplexPoly,
    poles: Vec<Pole>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Evaluation {
    Value(C64),
    Pole,
}

impl Evaluation {
    pub fn value(self) -> Option<C64> {
        match self {
            Evaluation::Value(v) => Some(v),
            Evaluation::Pole => None,
        }
    }

    pub fn is_pole(self) -> bool {
        matches!(self, Evaluation::Pole)
    }
}

impl RationalFn {
    pub fn new(num: ComplexPoly, den: ComplexPoly) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let poles: Vec<Pole> = if den.degree() == Some(0) {
            Vec::new()
        } else {
            poly_roots(&den)?
                .into_iter()
                .map(|r| Pole {
                    location: r.value,
                    order: r.multiplicity,
                })
                .collect()
        };
        if num.degree() != Some(0) {
            let as_roots: Vec<Root> = poles
                .iter()
                .map(|p| Root {
                    value: p.location,
                    multiplicity: p.order,
                })
                .collect();
            if let Some(r) = common_root(&num, &as_roots) {
                return Err(Error::NotCoprime {
                    root: format!("{r}"),
                });
            }
        }
        Ok(Self { num, den, poles })
    }

    pub fn num(&self) -> &ComplexPoly {
        &self.num
    }

    pub fn den(&self) -> &ComplexPoly {
        &self.den
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn max_pole_order(&self) -> usize {
        self.poles.iter().map(|p| p.order).max().unwrap_or(0)
    }
}

/// `P(z)/Q(z)`, or [`Evaluation::Pole`] when `Q(z)` vanishes to rounding
/// accuracy.
pub fn rational_eval(r: &RationalFn, z: C64) -> Evaluation {
    let q = r.den.eval(z);
    if q.norm() <= POLE_TOL * r.den.scale_at(z) {
        return Evaluation::Pole;
    }
    Evaluation::Value(r.num.eval(z) / q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sorted(mut roots: Vec<Root>) -> Vec<Root> {
        roots.sort_by(|a, b| {
            (a.value.re, a.value.im)
                .partial_cmp(&(b.value.re, b.value.im))
                .unwrap()
        });
        roots
    }

    #[test]
    fn roots_of_z2_plus_1() {
        let p = ComplexPoly::from_real(&[1.0, 0.0, 1.0]).unwrap();
        let r = sorted(poly_roots(&p).unwrap());
        assert_eq!(r.len(), 2);
        assert!((r[0].value - c(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1].value - c(0.0, 1.0)).norm() < 1e-14);
        assert!(r.iter().all(|x| x.multiplicity == 1));
    }

    #[test]
    fn perfect_cube_is_one_triple_root() {
        let p = ComplexPoly::from_real(&[-8.0, 12.0, -6.0, 1.0]).unwrap();
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 3);
        assert!((r[0].value - c(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn z4_plus_1_has_four_simple_roots() {
        let p = ComplexPoly::from_real(&[1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 4);
        for root in &r {
            assert_eq!(root.multiplicity, 1);
            // direct evaluation oracle
            assert!(p.eval(root.value).norm() < 1e-12);
        }
        for j in 0..4 {
            let expect = C64::from_polar(1.0, std::f64::consts::PI * (2 * j + 1) as f64 / 4.0);
            assert!(r.iter().any(|x| (x.value - expect).norm() < 1e-12));
        }
    }

    #[test]
    fn roots_at_origin_are_exact() {
        let p = ComplexPoly::from_real(&[0.0, 0.0, 1.0, 1.0]).unwrap();
        let r = poly_roots(&p).unwrap();
        let zero = r.iter().find(|x| x.value.norm() == 0.0).unwrap();
        assert_eq!(zero.multiplicity, 2);
        assert!(r.iter().any(|x| (x.value + 1.0).norm() < 1e-14));
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(poly_roots(&ComplexPoly::one()).is_err());
        assert_eq!(poly_roots(&ComplexPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn degree_cap() {
        let coeffs = vec![c(1.0, 0.0); 66];
        assert_eq!(ComplexPoly::new(coeffs), Err(Error::DegreeTooLarge(65)));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = ComplexPoly::from_real(&[1.0, 2.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.degree(), Some(1));
        assert!(ComplexPoly::from_real(&[0.0, 0.0]).unwrap().is_zero());
    }

    #[test]
    fn coprime_examples() {
        let z = ComplexPoly::from_real(&[0.0, 1.0]).unwrap();
        let q = ComplexPoly::from_real(&[1.0, 0.0, 1.0]).unwrap();
        assert!(coprime_check(&z, &q).unwrap());

        let p = ComplexPoly::from_real(&[-1.0, 1.0]).unwrap();
        let q = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        assert!(!coprime_check(&p, &q).unwrap());

        // (z + 1e-15)(z + 2): the root near 0 is within tolerance of p's zero
        let q = ComplexPoly::from_real(&[2e-15, 2.0 + 1e-15, 1.0]).unwrap();
        assert!(!coprime_check(&z, &q).unwrap());
    }

    #[test]
    fn rational_eval_examples() {
        let r = RationalFn::new(
            ComplexPoly::from_real(&[0.0, 1.0]).unwrap(),
            ComplexPoly::from_real(&[1.0, 0.0, 1.0]).unwrap(),
        )
        .unwrap();
        assert_eq!(rational_eval(&r, c(1.0, 0.0)), Evaluation::Value(c(0.5, 0.0)));
        assert_eq!(rational_eval(&r, c(0.0, 1.0)), Evaluation::Pole);
        assert_eq!(rational_eval(&r, c(0.0, 0.0)), Evaluation::Value(c(0.0, 0.0)));
    }

    #[test]
    fn rational_rejects_common_factor() {
        let err = RationalFn::new(
            ComplexPoly::from_real(&[-1.0, 1.0]).unwrap(),
            ComplexPoly::from_real(&[-1.0, 0.0, 1.0]).unwrap(),
        );
        assert!(matches!(err, Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn support_gcd_examples() {
        let z = ComplexPoly::from_real(&[0.0, 1.0]).unwrap();
        let q2 = ComplexPoly::from_real(&[1.0, 0.0, 1.0]).unwrap();
        let q4 = ComplexPoly::from_real(&[1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let q1 = ComplexPoly::from_real(&[1.0, 2.0, 1.0]).unwrap();
        assert_eq!(support_gcd(&z, &q2), SymmetryOrder::Finite(2));
        assert_eq!(support_gcd(&z, &q4), SymmetryOrder::Finite(4));
        assert_eq!(support_gcd(&z, &q1), SymmetryOrder::Finite(1));
        assert_eq!(support_gcd(&z, &ComplexPoly::one()), SymmetryOrder::Unbounded);
    }

    #[test]
    fn taylor_coefficients() {
        // (z-1)^2 (z+3) around 1: h^2 (h + 4) -> [0, 0, 4, 1]
        let p = ComplexPoly::from_roots(
            &[
                Root { value: c(1.0, 0.0), multiplicity: 2 },
                Root { value: c(-3.0, 0.0), multiplicity: 1 },
            ],
            c(1.0, 0.0),
        )
        .unwrap();
        let t = p.taylor_at(c(1.0, 0.0), 5);
        let expect = [0.0, 0.0, 4.0, 1.0, 0.0];
        for (a, b) in t.iter().zip(expect) {
            assert!((a - c(b, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn json_pairs_round_trip() {
        let p = ComplexPoly::new(vec![c(0.0, 0.0), c(1.0, -2.0)]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[0.0,0.0],[1.0,-2.0]]");
        let back: ComplexPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
