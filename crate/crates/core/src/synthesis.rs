//! Functions `f = Σ c_γ G(· - γ)` with a certified truncation radius, grid
//! norms and the Bessel-type upper bound check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generator::Generator;
use crate::sets::{SeparatedSet, POINT_TOL};
use crate::spectral::wiener_norm;
use crate::{Error, Result, C64};

/// Target size of the certified truncation error.
pub const TAIL_TARGET: f64 = 1e-12;
/// Grid step for the `L^p` norm estimates.
pub const GRID_STEP: f64 = 1.0 / 64.0;
/// Relative slack allowed for grid-norm error in the Bessel check.
pub const BESSEL_SLACK: f64 = 1.01;

#[derive(Clone, Debug, PartialEq)]
pub enum Coefficients {
    /// Finitely many `(γ, c_γ)`; all other coefficients vanish.
    Finite(Vec<(f64, C64)>),
    /// `c_γ = pattern[index(γ) mod len]`, using the set's global indexing.
    Pattern(Vec<C64>),
}

impl Coefficients {
    fn sup(&self) -> f64 {
        match self {
            Coefficients::Finite(v) => v.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max),
            Coefficients::Pattern(v) => v.iter().map(|c| c.norm()).fold(0.0, f64::max),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SisFunction {
    g: Generator,
    gamma: SeparatedSet,
    coeffs: Coefficients,
    rho: f64,
    tail_bound: f64,
    window: (f64, f64),
}

impl SisFunction {
    /// Uses the default truncation radius, whose certificate is `TAIL_TARGET`.
    pub fn new(g: Generator, gamma: SeparatedSet, coeffs: Coefficients) -> Result<Self> {
        let coeffs = match coeffs {
            Coefficients::Finite(mut v) => {
                for (x, _) in &v {
                    if gamma.points_in(*x, *x).is_empty() {
                        return Err(Error::InvalidInput(format!(
                            "coefficient location {x} is not a point of the shift set"
                        )));
                    }
                }
                v.sort_by(|a, b| a.0.total_cmp(&b.0));
                Coefficients::Finite(v)
            }
            Coefficients::Pattern(v) if v.is_empty() => {
                return Err(Error::InvalidInput("empty coefficient pattern".into()))
            }
            other => other,
        };
        let rho = default_radius(&g, gamma.separation(), coeffs.sup());
        let mut f = Self {
            g,
            gamma,
            coeffs,
            rho,
            tail_bound: 0.0,
            window: (f64::NEG_INFINITY, f64::INFINITY),
        };
        f.tail_bound = f.bound_for(rho);
        Ok(f)
    }

    pub fn with_radius(mut self, rho: f64) -> Self {
        self.rho = rho.max(self.g.decay().monotone_from());
        self.tail_bound = self.bound_for(self.rho);
        self
    }

    pub fn with_window(mut self, lo: f64, hi: f64) -> Self {
        self.window = (lo, hi);
        self
    }

    fn bound_for(&self, rho: f64) -> f64 {
        let c = self.coeffs.sup();
        if c == 0.0 {
            return 0.0;
        }
        2.0 * c * self.g.decay().lattice_tail(rho, self.gamma.separation())
    }

    pub fn generator(&self) -> &Generator {
        &self.g
    }

    pub fn gamma(&self) -> &SeparatedSet {
        &self.gamma
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }
}

/// Smallest radius whose two-sided envelope tail is at most `TAIL_TARGET`.
fn default_radius(g: &Generator, sep: f64, cmax: f64) -> f64 {
    let env = g.decay();
    let start = env.monotone_from();
    if cmax == 0.0 {
        return start;
    }
    let excess = |rho: f64| 2.0 * cmax * env.lattice_tail(rho, sep) - TAIL_TARGET;
    let mut hi = start.max(1.0);
    while excess(hi) > 0.0 {
        hi *= 2.0;
    }
    if excess(start) <= 0.0 {
        return start;
    }
    let mut lo = start;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// `Σ_{|γ - x| <= ρ} c_γ G(x - γ)`; differs from the full series by at most
/// `f.tail_bound()`.
pub fn synthesize(f: &SisFunction, x: f64) -> Result<C64> {
    let (lo, hi) = f.window;
    if !(x >= lo - POINT_TOL && x <= hi + POINT_TOL) {
        return Err(Error::OutsideWindow { x, lo, hi });
    }
    let rho = f.rho;
    let mut sum = C64::new(0.0, 0.0);
    match &f.coeffs {
        Coefficients::Finite(v) => {
            let start = v.partition_point(|(p, _)| *p < x - rho);
            for (p, c) in &v[start..] {
                if *p > x + rho {
                    break;
                }
                sum += c * f.g.eval_real(x - p);
            }
        }
        Coefficients::Pattern(pat) => {
            let len = pat.len() as i64;
            for (idx, p) in f.gamma.indexed_points_in(x - rho, x + rho) {
                sum += pat[idx.rem_euclid(len) as usize] * f.g.eval_real(x - p);
            }
        }
    }
    Ok(sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormIndex {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "inf")]
    Inf,
}

impl NormIndex {
    pub const ALL: [NormIndex; 3] = [NormIndex::One, NormIndex::Two, NormIndex::Inf];

    pub fn norm(self, values: impl Iterator<Item = f64>, weight: f64) -> f64 {
        match self {
            NormIndex::One => values.sum::<f64>() * weight,
            NormIndex::Two => (values.map(|v| v * v).sum::<f64>() * weight).sqrt(),
            NormIndex::Inf => values.fold(0.0, f64::max),
        }
    }

    /// `1/q'` with `q' = p/(p-1)`.
    pub fn dual_reciprocal(self) -> f64 {
        match self {
            NormIndex::One => 0.0,
            NormIndex::Two => 0.5,
            NormIndex::Inf => 1.0,
        }
    }
}

/// Trapezoid (`p < ∞`) or grid-max (`p = ∞`) estimate of `‖f‖_p` on `[lo, hi]`.
pub fn grid_norm(f: &SisFunction, lo: f64, hi: f64, p: NormIndex) -> Result<f64> {
    let n = ((hi - lo) / GRID_STEP).ceil() as usize;
    let h = (hi - lo) / n as f64;
    let vals: Vec<f64> = (0..=n)
        .map(|i| synthesize(f, lo + i as f64 * h).map(|v| v.norm()))
        .collect::<Result<_>>()?;
    // endpoints carry half weight in the trapezoid rule
    let end = [vals[0], vals[n]];
    Ok(match p {
        NormIndex::Inf => p.norm(vals.into_iter(), h),
        NormIndex::One => {
            NormIndex::One.norm(vals.into_iter(), h) - 0.5 * h * (end[0] + end[1])
        }
        NormIndex::Two => {
            let s: f64 = vals.iter().map(|v| v * v).sum::<f64>() - 0.5 * (end[0].powi(2) + end[1].powi(2));
            (s * h).sqrt()
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BesselReport {
    pub p: NormIndex,
    pub trials: usize,
    pub covering_constant: usize,
    pub wiener_norm: f64,
    pub max_ratio: f64,
    pub ratios: Vec<f64>,
    pub slack: f64,
    pub passes: bool,
}

/// Random finitely supported coefficients on `Γ ∩ [-8, 8]`, compared with
/// `N(Γ)^{1/q'} ‖G‖_W ‖c‖_p`.
pub fn bessel_bound_check(
    g: &Generator,
    gamma: &SeparatedSet,
    trials: usize,
    p: NormIndex,
    seed: u64,
) -> Result<BesselReport> {
    let support = gamma.points_in(-8.0, 8.0);
    if support.is_empty() {
        return Err(Error::EmptyRestriction { count: 0, needed: 1 });
    }
    let n_cov = gamma.covering_constant();
    let w = wiener_norm(g);
    let env = g.decay();
    let reach = env.radius_for(1e-14).max(1.0);
    let (lo, hi) = (support[0] - reach, support[support.len() - 1] + reach);
    let scale = (n_cov as f64).powf(p.dual_reciprocal()) * w;

    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9 * trial as u64));
            let coeffs: Vec<(f64, C64)> = support
                .iter()
                .map(|&x| (x, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
                .collect();
            let mags: Vec<f64> = coeffs.iter().map(|(_, c)| c.norm()).collect();
            let c_norm = p.norm(mags.iter().copied(), 1.0);
            let c_sum: f64 = mags.iter().sum();
            let f = SisFunction::new(g.clone(), gamma.clone(), Coefficients::Finite(coeffs))?;
            // what the grid misses: the truncation error plus the mass outside [lo, hi]
            let outside = match p {
                NormIndex::One => 2.0 * c_sum * env.integral_tail(reach),
                NormIndex::Two => c_sum * (2.0 * env.bound(reach) * env.integral_tail(reach)).sqrt(),
                NormIndex::Inf => c_sum * env.bound(reach),
            };
            let f_norm = grid_norm(&f, lo, hi, p)? + outside + f.tail_bound() * (hi - lo).max(1.0);
            Ok(f_norm / (scale * c_norm))
        })
        .collect::<Result<_>>()?;
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(BesselReport {
        p,
        trials,
        covering_constant: n_cov,
        wiener_norm: w,
        max_ratio,
        ratios,
        slack: BESSEL_SLACK,
        passes: max_ratio <= BESSEL_SLACK,
    })
}
