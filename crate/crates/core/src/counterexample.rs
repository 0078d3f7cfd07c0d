//! Critical-density vanishing functions and the two unstable examples.
//!
//! A vanisher is `f = Σ_j a_j φ_j` where each `φ_j` periodizes a single
//! shifted generator over `ℤ` (with alternating signs when the system size
//! is odd). The coefficients solve `f(x_l) = (-1)^l` at interior nodes, which
//! forces sign changes and hence a periodic zero set of critical density.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::frames::{
    bloch_bounds, sampling_verdict, BlochBounds, FrameReport, FrameVerdict, SamplingOptions,
    DEFAULT_BLOCH_GRID, EPS_FRAME,
};
use crate::generator::{
    gaussian_combination, hsec_combination, hsec_transform, make_generator, Generator,
    GeneratorClass, GeneratorSummary,
};
use crate::linalg::{condition_number, CMatrix, Lu};
use crate::poly::ComplexPoly;
use crate::sets::{SeparatedSet, SetRepr};
use crate::spectral::{
    fourier_quadrature, fourier_residue, stability_check, xi_check, PoleCollision, ShiftSet,
    StabilityVerdict, XiReport, DEFAULT_GRID,
};
use crate::synthesis::{synthesize, Coefficients, SisFunction};
use crate::{Error, Result, C64};

pub const MAX_CONDITION: f64 = 1e12;
pub const MAX_ATTEMPTS: usize = 8;
/// Zero-search grid points per unit length.
pub const SEARCH_GRID: usize = 1 << 14;
/// Envelope level at which periodization sums are cut; the solved
/// coefficients can amplify truncation error by several orders.
const BASIS_TAIL: f64 = 1e-20;
pub const DEFAULT_SEED: u64 = 0x00c0_ffee;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VanisherCase {
    Case1Even,
    Case2Odd,
    Gaussian,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanisherSolution {
    #[serde(skip)]
    g: Generator,
    pub generator: GeneratorSummary,
    pub case_tag: VanisherCase,
    pub n: usize,
    pub alpha: f64,
    pub b: Vec<f64>,
    pub nodes: Vec<f64>,
    /// `a_1..a_N`; for the Gaussian case `a0` is stored separately.
    pub coeffs: Vec<f64>,
    pub a0: Option<f64>,
    /// Alternating-sign periodization (period 2, `f(x+1) = -f(x)`).
    pub signed: bool,
    pub period: f64,
    pub zeros: Vec<f64>,
    pub zero_set: SeparatedSet,
    pub max_residual: f64,
    pub node_residual: f64,
    pub max_bracket: f64,
    pub condition: f64,
    pub attempts: usize,
    /// The construction goes beyond the cases worked out in the source
    /// argument (Gaussian class with odd `N`).
    pub extrapolated: bool,
}

impl VanisherSolution {
    pub fn generator(&self) -> &Generator {
        &self.g
    }

    /// `f = Σ_n s_n G(· - n)` with `s_n = 1` or `(-1)^n`.
    pub fn function(&self) -> Result<SisFunction> {
        periodization(&self.g, self.signed)
    }

    /// `(x, f(x))` on `samples` points of one period.
    pub fn trace(&self, samples: usize) -> Result<Vec<(f64, f64)>> {
        let f = self.function()?;
        (0..samples)
            .map(|i| {
                let x = self.period * i as f64 / samples as f64;
                synthesize(&f, x).map(|v| (x, v.re))
            })
            .collect()
    }
}

fn periodization(g: &Generator, signed: bool) -> Result<SisFunction> {
    let one = C64::new(1.0, 0.0);
    let pattern = if signed { vec![one, -one] } else { vec![one] };
    let f = SisFunction::new(g.clone(), SeparatedSet::integers(), Coefficients::Pattern(pattern))?;
    let rho = g.decay().radius_for(BASIS_TAIL);
    Ok(f.with_radius(rho))
}

fn validate_shifts(b: &[f64]) -> Result<()> {
    for (j, &bj) in b.iter().enumerate() {
        if !(bj > 0.0 && bj.is_finite()) {
            return Err(Error::InvalidInput(format!("b_{} = {bj} must be positive", j + 1)));
        }
        if j > 0 && !(bj > b[j - 1]) {
            return Err(Error::InvalidInput("b must be strictly increasing".into()));
        }
        for (k, &bk) in b.iter().enumerate().take(j) {
            let d = bj - bk;
            if (d - d.round()).abs() < 1e-9 {
                return Err(Error::InvalidInput(format!(
                    "b_{} - b_{} = {d} is an integer",
                    j + 1,
                    k + 1
                )));
            }
        }
    }
    Ok(())
}

pub fn build_vanisher(case: VanisherCase, n: usize, b: &[f64], alpha: f64) -> Result<VanisherSolution> {
    build_vanisher_seeded(case, n, b, alpha, DEFAULT_SEED)
}

pub fn build_vanisher_seeded(
    case: VanisherCase,
    n: usize,
    b: &[f64],
    alpha: f64,
    seed: u64,
) -> Result<VanisherSolution> {
    if b.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} shifts, got {}", b.len())));
    }
    validate_shifts(b)?;
    match case {
        VanisherCase::Case1Even if n == 0 || !n.is_multiple_of(2) => {
            return Err(Error::InvalidInput(format!("case1_even needs a positive even N, got {n}")))
        }
        VanisherCase::Case2Odd if n % 2 != 1 => {
            return Err(Error::InvalidInput(format!("case2_odd needs an odd N, got {n}")))
        }
        _ => {}
    }
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let basis: Vec<Generator> = match case {
        VanisherCase::Gaussian => std::iter::once(Generator::gaussian(alpha))
            .chain(b.iter().map(|&bj| gaussian_combination(alpha, zero, &[one], &[bj])))
            .collect::<Result<_>>()?,
        _ => b
            .iter()
            .map(|&bj| hsec_combination(alpha, &[one], &[C64::new(bj, 0.0)]))
            .collect::<Result<_>>()?,
    };
    let m = basis.len();
    // an odd system needs the alternating periodization to close up
    let signed = m % 2 == 1;
    let extrapolated = case == VanisherCase::Gaussian && n % 2 == 1;
    let phis: Vec<SisFunction> = basis
        .iter()
        .map(|g| periodization(g, signed))
        .collect::<Result<_>>()?;
    let eval_phi = |j: usize, x: f64| synthesize(&phis[j], x).map(|v| v.re);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spacing = 1.0 / (m as f64 + 1.0);
    let mut attempt = 0;
    let (nodes, a, condition) = loop {
        let nodes: Vec<f64> = (1..=m)
            .map(|l| {
                let jitter = if attempt == 0 {
                    0.0
                } else {
                    rng.gen_range(-0.25 * spacing..0.25 * spacing)
                };
                l as f64 * spacing + jitter
            })
            .collect();
        let mut mat = CMatrix::zeros(m, m);
        for (l, &x) in nodes.iter().enumerate() {
            for j in 0..m {
                mat.set(l, j, C64::new(eval_phi(j, x)?, 0.0));
            }
        }
        let condition = condition_number(&mat)?;
        attempt += 1;
        if condition <= MAX_CONDITION {
            if let Ok(lu) = Lu::new(&mat) {
                let rhs: Vec<C64> = (1..=m).map(|l| C64::new(sign(l), 0.0)).collect();
                let mut a = lu.solve(&rhs);
                for _ in 0..3 {
                    let r: Vec<C64> = mat.matvec(&a).iter().zip(&rhs).map(|(x, y)| y - x).collect();
                    for (aj, dj) in a.iter_mut().zip(lu.solve(&r)) {
                        *aj += dj;
                    }
                }
                let a: Vec<f64> = a.iter().map(|z| z.re).collect();
                break (nodes, a, condition);
            }
        }
        if attempt >= MAX_ATTEMPTS {
            return Err(Error::SingularSystem {
                attempts: attempt,
                condition,
                matrix: mat.to_string().trim_end().replace('\n', "; "),
            });
        }
    };

    let g = match case {
        VanisherCase::Gaussian => {
            let rest: Vec<C64> = a[1..].iter().map(|&x| C64::new(x, 0.0)).collect();
            gaussian_combination(alpha, C64::new(a[0], 0.0), &rest, b)?
        }
        _ => {
            let ac: Vec<C64> = a.iter().map(|&x| C64::new(x, 0.0)).collect();
            let bc: Vec<C64> = b.iter().map(|&x| C64::new(x, 0.0)).collect();
            hsec_combination(alpha, &ac, &bc)?
        }
    };
    let f = periodization(&g, signed)?;
    let fx = |x: f64| synthesize(&f, x).map(|v| v.re);

    let mut node_residual: f64 = 0.0;
    for (l, &x) in nodes.iter().enumerate() {
        node_residual = node_residual.max((fx(x)? - sign(l + 1)).abs());
    }

    let (zeros, max_bracket) = find_zeros(&fx, m)?;
    let period = if signed { 2.0 } else { 1.0 };
    let mut offsets = zeros.clone();
    if signed {
        offsets.extend(zeros.iter().map(|z| z + 1.0));
    }
    let mut max_residual: f64 = 0.0;
    for &z in &offsets {
        max_residual = max_residual.max(fx(z)?.abs());
    }
    let zero_set = SeparatedSet::periodic(&offsets, period)?;

    let (coeffs, a0) = match case {
        VanisherCase::Gaussian => (a[1..].to_vec(), Some(a[0])),
        _ => (a, None),
    };
    Ok(VanisherSolution {
        generator: g.summary(),
        g,
        case_tag: case,
        n,
        alpha,
        b: b.to_vec(),
        nodes,
        coeffs,
        a0,
        signed,
        period,
        zeros: offsets,
        zero_set,
        max_residual,
        node_residual,
        max_bracket,
        condition,
        attempts: attempt,
        extrapolated,
    })
}

fn sign(l: usize) -> f64 {
    if l.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Zeros in `[0, 1)` by sign changes on a fine grid plus bisection; at least
/// `expected` must be found.
fn find_zeros(f: &(dyn Fn(f64) -> Result<f64> + Sync), expected: usize) -> Result<(Vec<f64>, f64)> {
    let n = SEARCH_GRID;
    let h = 1.0 / n as f64;
    let vals: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|i| f(i as f64 * h))
        .collect::<Result<_>>()?;
    let mut zeros = Vec::new();
    let mut max_bracket: f64 = 0.0;
    for i in 0..n {
        let (v0, v1) = (vals[i], vals[i + 1]);
        if v0 == 0.0 {
            zeros.push(i as f64 * h);
            continue;
        }
        if v0 * v1 >= 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (i as f64 * h, (i + 1) as f64 * h);
        let mut flo = v0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = f(mid)?;
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (fm > 0.0) == (flo > 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        max_bracket = max_bracket.max(hi - lo);
        let z = if f(lo)?.abs() <= f(hi)?.abs() { lo } else { hi };
        zeros.push(if z >= 1.0 { 0.0 } else { z });
    }
    zeros.sort_by(f64::total_cmp);
    zeros.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if zeros.len() >= 2 && zeros[0] < 1e-12 && 1.0 - zeros[zeros.len() - 1] < 1e-12 {
        zeros.pop();
    }
    if zeros.len() < expected {
        let (lo, hi) = vals
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
        return Err(Error::MissingSignChanges {
            found: zeros.len(),
            expected,
            diagnostics: format!("{} grid points on [0, 1], f ranges over [{lo:.3e}, {hi:.3e}]", n + 1),
        });
    }
    Ok((zeros, max_bracket))
}

#[derive(Clone, Debug, Serialize)]
pub struct NonuniquenessReport {
    pub stability: StabilityVerdict,
    pub frame: FrameReport,
    pub confirmed: bool,
}

/// Stable integer shifts, yet the zero set is not a sampling set.
pub fn verify_nonuniqueness(v: &VanisherSolution) -> Result<NonuniquenessReport> {
    let stability = stability_check(&v.g, DEFAULT_GRID)?;
    let mut opts = SamplingOptions::for_generator(&v.g);
    opts.check_stability = false;
    let mut frame = sampling_verdict(&v.g, &v.zero_set, &SeparatedSet::integers(), &opts)?;
    frame.stability_verified = Some(stability.stable);
    let confirmed = stability.stable && frame.verdict == FrameVerdict::NotSampling;
    Ok(NonuniquenessReport {
        stability,
        frame,
        confirmed,
    })
}

/// Adds points to a periodic set (at midpoints of its widest gaps, over a
/// suitably enlarged period) until its density equals `target`.
pub fn densify(set: &SeparatedSet, target: f64) -> Result<SeparatedSet> {
    let SetRepr::Periodic { offsets, period } = set.repr() else {
        return Err(Error::InvalidInput("densify needs a periodic set".into()));
    };
    let n = offsets.len() as f64;
    let (m, extra) = (1..=1000usize)
        .find_map(|m| {
            let e = (target * period - n) * m as f64;
            let r = e.round();
            ((e - r).abs() < 1e-9 && r >= 1.0).then_some((m, r as usize))
        })
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "density {target} is not reachable from {} by adding points",
                n / period
            ))
        })?;
    let big = period * m as f64;
    let mut pts: Vec<f64> = (0..m)
        .flat_map(|k| offsets.iter().map(move |o| o + k as f64 * period))
        .collect();
    for _ in 0..extra {
        pts.sort_by(f64::total_cmp);
        let mut best = (pts[pts.len() - 1], pts[0] + big - pts[pts.len() - 1]);
        for w in pts.windows(2) {
            if w[1] - w[0] > best.1 {
                best = (w[0], w[1] - w[0]);
            }
        }
        pts.push((best.0 + best.1 / 2.0).rem_euclid(big));
    }
    SeparatedSet::periodic(&pts, big)
}

#[derive(Clone, Debug, Serialize)]
pub struct RestoredSampling {
    pub set: SeparatedSet,
    pub density: f64,
    pub frame: FrameReport,
    pub bloch: BlochBounds,
    /// The exact lower bound clears `EPS_FRAME`.
    pub restored: bool,
}

/// Raises the zero set's density to `target`, reruns the sampling sweep and
/// computes the exact periodic bounds.
pub fn restore_sampling(v: &VanisherSolution, target: f64) -> Result<RestoredSampling> {
    let set = densify(&v.zero_set, target)?;
    let mut opts = SamplingOptions::for_generator(&v.g);
    opts.check_stability = false;
    let frame = sampling_verdict(&v.g, &set, &SeparatedSet::integers(), &opts)?;
    let bloch = bloch_bounds(&v.g, &set, DEFAULT_BLOCH_GRID)?;
    Ok(RestoredSampling {
        density: target,
        restored: bloch.a > EPS_FRAME,
        set,
        frame,
        bloch,
    })
}

/// `U(z) e^{-z²/2}` with `U(z) = A + e^{-1/2}/(e^{z-i}-1) - e^{i}/(e^{z-1-i}-1)`
/// and `A` fixed by `∫H = 0`.
pub fn hdef_generator() -> Result<(Generator, C64)> {
    let i = C64::new(0.0, 1.0);
    let w1 = i.exp();
    let w2 = (1.0 + i).exp();
    let c1 = (-0.5 + i).exp();
    let c2 = (1.0 + 2.0 * i).exp();
    let one = C64::new(1.0, 0.0);
    let q = ComplexPoly::new(vec![w1 * w2, -(w1 + w2), one])?;
    let p0 = ComplexPoly::new(vec![-c1 * w2 + c2 * w1, c1 - c2])?;
    let u0 = make_generator(GeneratorClass::C, 1.0, p0.clone(), q.clone())?;
    let a = -fourier_quadrature(&u0, 0.0)?.value / TAU.sqrt();
    let p = q.scale(a).add(&p0)?;
    Ok((make_generator(GeneratorClass::C, 1.0, p, q)?, a))
}

#[derive(Clone, Debug, Serialize)]
pub struct HdefReport {
    pub a_constant: C64,
    pub integral: C64,
    /// `(n, Ĥ(n))` for `|n| <= 3`.
    pub transform_at_integers: Vec<(i64, C64)>,
    pub max_abs_transform: f64,
    pub stability: StabilityVerdict,
    pub xi: XiReport,
    pub passes: bool,
}

pub fn verify_hdef_example() -> Result<HdefReport> {
    let (h, a) = hdef_generator()?;
    let transform_at_integers: Vec<(i64, C64)> = (-3..=3)
        .map(|n| fourier_quadrature(&h, n as f64).map(|s| (n, s.value)))
        .collect::<Result<_>>()?;
    let integral = transform_at_integers[3].1;
    let max_abs_transform = transform_at_integers
        .iter()
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    let stability = stability_check(&h, DEFAULT_GRID)?;
    let xi = xi_check(&h, ShiftSet::Integers);
    let passes = integral.norm() < 1e-10
        && max_abs_transform < 1e-8
        && !stability.stable
        && !xi.xi_prime
        && !xi.xi_triple_prime;
    Ok(HdefReport {
        a_constant: a,
        integral,
        transform_at_integers,
        max_abs_transform,
        stability,
        xi,
        passes,
    })
}

/// `𝓗 - T_1 𝓗` at `α = 1`.
pub fn hsec_difference() -> Result<Generator> {
    hsec_combination(
        1.0,
        &[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)],
        &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    )
}

/// `(1 - e^{-2πit}) 𝓗̂(t)`, with the phase reduced modulo 1 so the factor
/// vanishes exactly at integers.
pub fn hsec_difference_transform(t: f64) -> C64 {
    let frac = t - t.round();
    let factor = C64::new(1.0 - (TAU * frac).cos(), (TAU * frac).sin());
    factor * hsec_transform(1.0, t)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExgReport {
    pub max_abs_periodization: f64,
    pub tail_bound: f64,
    pub closed_form_at_integers: Vec<(i64, C64)>,
    pub residue_at_integers: Vec<(i64, C64)>,
    pub stability: StabilityVerdict,
    pub xi: XiReport,
    pub witness: Option<PoleCollision>,
    pub passes: bool,
}

pub fn verify_exg_example() -> Result<ExgReport> {
    let h = hsec_difference()?;
    let f = periodization(&h, false)?;
    let mut max_abs: f64 = 0.0;
    for i in 0..=1000 {
        max_abs = max_abs.max(synthesize(&f, i as f64 / 1000.0)?.norm());
    }
    let closed_form_at_integers: Vec<(i64, C64)> =
        (-3..=3).map(|n| (n, hsec_difference_transform(n as f64))).collect();
    let residue_at_integers: Vec<(i64, C64)> = (-3..=3i64)
        .filter(|n| *n != 0)
        .map(|n| fourier_residue(&h, n as f64).map(|s| (n, s.value)))
        .collect::<Result<_>>()?;
    let stability = stability_check(&h, DEFAULT_GRID)?;
    let xi = xi_check(&h, ShiftSet::Integers);
    let witness = xi
        .collisions
        .iter()
        .find(|c| (c.shift - 1.0).abs() < 1e-9 && (c.w_other - C64::new(0.0, 1.0)).norm() < 1e-9)
        .or_else(|| xi.collisions.first())
        .copied();
    let passes = max_abs < 1e-10
        && closed_form_at_integers.iter().all(|(_, v)| v.norm() == 0.0)
        && !stability.stable
        && stability.witness_b == 0.0
        && !xi.xi_triple_prime;
    Ok(ExgReport {
        max_abs_periodization: max_abs,
        tail_bound: f.tail_bound(),
        closed_form_at_integers,
        residue_at_integers,
        stability,
        xi,
        witness,
        passes,
    })
}
