//! Fourier transforms `ĝ(t) = ∫ e^{-2πixt} G(x) dx`, periodized spectra,
//! the shift-stability screen, pole-collision conditions and the Wiener
//! amalgam norm.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generator::{Generator, GeneratorClass};
use crate::quad::{trapezoid, TrapezoidOptions};
use crate::sets::{SeparatedSet, SetRepr};
use crate::{Error, Result, C64};

/// Below this `|t|` the residue formula is replaced by quadrature.
pub const T_MIN: f64 = 1e-3;
pub const EPS_STAB: f64 = 1e-8;
pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_N_MAX: usize = 8;
/// Envelope tail mass left outside the quadrature interval.
const QUAD_TAIL: f64 = 1e-13;
/// Tolerance for `w/w' = e^{αδ}` comparisons.
const COLLISION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    Residue,
    Quadrature,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumSample {
    pub t: f64,
    pub value: C64,
    pub method: SpectrumMethod,
    pub err_est: f64,
}

/// Residues for class K away from `t = 0`, quadrature otherwise.
pub fn fourier_transform(g: &Generator, t: f64) -> Result<SpectrumSample> {
    if g.class() == GeneratorClass::K && t.abs() >= T_MIN {
        fourier_residue(g, t)
    } else {
        fourier_quadrature(g, t)
    }
}

/// `ĝ(t) = (1/α) M[R](s)` at `s = -2πit/α`, with `M[R]` summed over the poles.
pub fn fourier_residue(g: &Generator, t: f64) -> Result<SpectrumSample> {
    if g.class() != GeneratorClass::K {
        return Err(Error::InvalidInput(
            "the residue transform applies to class K only".into(),
        ));
    }
    if t == 0.0 {
        return Err(Error::InvalidInput(
            "the residue transform has a removable singularity at t = 0".into(),
        ));
    }
    let alpha = g.alpha();
    let s = C64::new(0.0, -TAU * t / alpha);
    // choose the branch that keeps |u^s| <= 1 at every pole
    let upper = t < 0.0;
    let r = g.rational();
    let mut total = C64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for pole in r.poles() {
        let w = pole.location;
        let m = pole.order;
        let mut log_w = crate::generator::log_upper(w);
        if !upper {
            log_w.im -= TAU;
        }
        let s_coeffs = regular_part(r.num(), r.den(), w, m);
        let mut res = C64::new(0.0, 0.0);
        for (k, sk) in s_coeffs.iter().enumerate() {
            let j = m - 1 - k;
            let power = ((s - 1.0 - j as f64) * log_w).exp();
            let term = sk * binomial(s - 1.0, j) * power;
            magnitude += term.norm();
            res += term;
        }
        total += res;
    }
    let prefactor = if upper {
        C64::new(0.0, TAU) / (C64::new(1.0, 0.0) - (s * TAU * C64::new(0.0, 1.0)).exp())
    } else {
        C64::new(0.0, -TAU) / (C64::new(1.0, 0.0) - (-s * TAU * C64::new(0.0, 1.0)).exp())
    };
    let value = prefactor * total / alpha;
    let err_est = 1e3 * f64::EPSILON * prefactor.norm() * magnitude / alpha;
    Ok(SpectrumSample {
        t,
        value,
        method: SpectrumMethod::Residue,
        err_est,
    })
}

/// Taylor coefficients `S_0..S_{m-1}` of `(u - w)^m P(u)/Q(u)` at `w`.
fn regular_part(
    p: &crate::poly::ComplexPoly,
    q: &crate::poly::ComplexPoly,
    w: C64,
    m: usize,
) -> Vec<C64> {
    let pt = p.taylor_at(w, m);
    let qt_all = q.taylor_at(w, 2 * m);
    let qt = &qt_all[m..];
    // power-series division pt / qt
    let mut out = vec![C64::new(0.0, 0.0); m];
    for k in 0..m {
        let mut acc = pt[k];
        for i in 1..=k {
            acc -= qt[i] * out[k - i];
        }
        out[k] = acc / qt[0];
    }
    out
}

fn binomial(x: C64, j: usize) -> C64 {
    let mut out = C64::new(1.0, 0.0);
    for i in 0..j {
        out *= (x - i as f64) / (i as f64 + 1.0);
    }
    out
}

/// Half-width of the quadrature interval for an envelope tail below `QUAD_TAIL`.
pub fn quadrature_half_width(g: &Generator) -> f64 {
    let env = g.decay();
    let mut x = env.radius_for(1.0).max(1.0);
    while 2.0 * env.integral_tail(x) > QUAD_TAIL {
        x += 0.5;
    }
    x
}

/// Trapezoid quadrature of `∫ e^{-2πixt} G(x) dx`.
pub fn fourier_quadrature(g: &Generator, t: f64) -> Result<SpectrumSample> {
    let half = quadrature_half_width(g);
    let opts = TrapezoidOptions {
        initial_step: 0.25f64.min(1.0 / (8.0 * t.abs() + 1.0)),
        ..TrapezoidOptions::default()
    };
    let r = trapezoid(
        |x| g.eval_real(x) * C64::new(0.0, -TAU * x * t).exp(),
        half,
        opts,
    )?;
    Ok(SpectrumSample {
        t,
        value: r.value,
        method: SpectrumMethod::Quadrature,
        err_est: r.err_est + 2.0 * g.decay().integral_tail(half),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeriodizedSpectrum {
    pub b: f64,
    /// `max_{|n| <= n_max} |ĝ(n + b)|`.
    pub level: f64,
    pub argmax_n: i64,
    pub n_max: usize,
    /// The spectrum just outside the range is below a tenth of `level`.
    pub tail_certified: bool,
}

/// Size of `ĝ` on the coset `ℤ + b`.
///
/// `ℤ`-shifts are stable iff `ĝ` has no common zero on a coset, so the coset
/// is measured by its largest value.
pub fn periodized_spectrum(g: &Generator, b: f64, n_max: usize) -> Result<PeriodizedSpectrum> {
    let mut n_max = n_max.max(1);
    loop {
        let mut level = 0.0;
        let mut argmax_n = 0i64;
        for n in -(n_max as i64)..=(n_max as i64) {
            let v = fourier_transform(g, n as f64 + b)?.value.norm();
            if v > level {
                level = v;
                argmax_n = n;
            }
        }
        let edge = n_max as f64 + 1.0;
        let outside = fourier_transform(g, edge + b)?
            .value
            .norm()
            .max(fourier_transform(g, -edge + b)?.value.norm());
        let tail_certified = outside < level / 10.0;
        if tail_certified || n_max >= 64 || level == 0.0 {
            return Ok(PeriodizedSpectrum {
                b,
                level,
                argmax_n,
                n_max,
                tail_certified,
            });
        }
        n_max *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub margin: f64,
    pub witness_b: f64,
    pub grid_size: usize,
    pub n_max: usize,
    pub epsilon: f64,
    pub basis: &'static str,
}

pub fn stability_check(g: &Generator, grid_size: usize) -> Result<StabilityVerdict> {
    if grid_size < 16 {
        return Err(Error::InvalidInput(format!(
            "stability grid needs at least 16 points, got {grid_size}"
        )));
    }
    let levels: Vec<PeriodizedSpectrum> = (0..grid_size)
        .into_par_iter()
        .map(|i| periodized_spectrum(g, i as f64 / grid_size as f64, DEFAULT_N_MAX))
        .collect::<Result<_>>()?;
    let worst = levels
        .iter()
        .fold(&levels[0], |acc, x| if x.level < acc.level { x } else { acc });
    let n_max = levels.iter().map(|l| l.n_max).max().unwrap_or(DEFAULT_N_MAX);
    Ok(StabilityVerdict {
        stable: worst.level > EPS_STAB,
        margin: worst.level,
        witness_b: worst.b,
        grid_size,
        n_max,
        epsilon: EPS_STAB,
        basis: "numerical (grid)",
    })
}

/// Shift set used by [`xi_check`].
#[derive(Clone, Copy, Debug)]
pub enum ShiftSet<'a> {
    Integers,
    Set(&'a SeparatedSet),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum XiDoublePrime {
    Evaluated(bool),
    NotEvaluated(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoleCollision {
    pub w: C64,
    pub w_other: C64,
    /// `w = w_other · e^{α·shift}`.
    pub shift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XiReport {
    pub max_order: usize,
    pub top_poles: Vec<C64>,
    pub xi_prime: bool,
    pub xi_triple_prime: bool,
    pub xi_double_prime: XiDoublePrime,
    /// Integer-shift collisions among the top-order poles.
    pub collisions: Vec<PoleCollision>,
    pub implies_stable_integer_shifts: bool,
}

/// `Some(δ)` when `w = w' e^{αδ}` with real `δ`.
fn log_ratio(w: C64, w_other: C64, alpha: f64) -> Option<f64> {
    let ratio = w / w_other;
    if ratio.arg().abs() > COLLISION_TOL {
        return None;
    }
    Some(ratio.norm().ln() / alpha)
}

fn near_lattice(x: f64, period: f64) -> bool {
    let k = (x / period).round();
    (x - k * period).abs() <= COLLISION_TOL * period.max(1.0) * (1.0 + x.abs())
}

pub fn xi_check(g: &Generator, gamma: ShiftSet<'_>) -> XiReport {
    let poles = g.rational().poles();
    let max_order = poles.iter().map(|p| p.order).max().unwrap_or(0);
    let top: Vec<C64> = poles
        .iter()
        .filter(|p| p.order == max_order)
        .map(|p| p.location)
        .collect();
    let alpha = g.alpha();

    let mut collisions = Vec::new();
    let mut isolated_exists = false;
    for (i, &w) in top.iter().enumerate() {
        let mut hit = false;
        for (j, &wo) in top.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(d) = log_ratio(w, wo, alpha) {
                if near_lattice(d, 1.0) {
                    hit = true;
                    collisions.push(PoleCollision {
                        w,
                        w_other: wo,
                        shift: d.round(),
                    });
                }
            }
        }
        isolated_exists |= !hit;
    }
    let xi_prime = top.len() == 1;
    let xi_triple_prime = top.is_empty() || isolated_exists;

    let xi_double_prime = match gamma {
        ShiftSet::Integers => XiDoublePrime::Evaluated(xi_triple_prime),
        ShiftSet::Set(set) => match set.repr() {
            SetRepr::Periodic { offsets, period } => {
                XiDoublePrime::Evaluated(top.is_empty() || top.iter().enumerate().any(|(i, &w)| {
                    offsets.iter().any(|oj| {
                        top.iter().enumerate().all(|(l, &wo)| {
                            l == i
                                || match log_ratio(w, wo, alpha) {
                                    None => true,
                                    Some(d) => !offsets
                                        .iter()
                                        .any(|oi| near_lattice(d - (oi - oj), *period)),
                                }
                        })
                    })
                }))
            }
            SetRepr::Explicit { .. } => XiDoublePrime::NotEvaluated(
                "weak limits of a finite window are not computable",
            ),
        },
    };

    XiReport {
        max_order,
        top_poles: top,
        xi_prime,
        xi_triple_prime,
        xi_double_prime,
        collisions,
        implies_stable_integer_shifts: xi_prime || xi_triple_prime,
    }
}

/// `Σ_k sup_{[k,k+1]} |G|`, each sup from 65 samples plus half the largest
/// jump between neighbouring samples.
pub fn wiener_norm(g: &Generator) -> f64 {
    let env = g.decay();
    let k_max = env.radius_for(1e-16).ceil() as i64 + 1;
    let mut total = 0.0;
    for k in -k_max..k_max {
        let vals: Vec<f64> = (0..=64)
            .map(|i| g.eval_real(k as f64 + i as f64 / 64.0).norm())
            .collect();
        let top = vals.iter().copied().fold(0.0, f64::max);
        let jump = vals.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
        total += top + jump / 2.0;
    }
    // whatever lies beyond ±k_max
    total + 2.0 * env.lattice_tail(k_max as f64, 1.0)
}

/// `(π/2) sech(π² t)` scaled to general `α`; see [`crate::generator::hsec_transform`].
pub fn hsec_closed_form(alpha: f64, t: f64) -> f64 {
    crate::generator::hsec_transform(alpha, t)
}

/// `√(2π/α) e^{-2π²t²/α}`.
pub fn gaussian_closed_form(alpha: f64, t: f64) -> f64 {
    (TAU / alpha).sqrt() * (-2.0 * PI * PI * t * t / alpha).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hsec_at_zero() {
        let g = Generator::hsec(1.0).unwrap();
        let s = fourier_transform(&g, 0.0).unwrap();
        assert_eq!(s.method, SpectrumMethod::Quadrature);
        assert!((s.value.re - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn hsec_residue_vs_closed_form() {
        let g = Generator::hsec(1.0).unwrap();
        for t in [0.1, -0.1, 0.5, 1.7, -2.9] {
            let r = fourier_residue(&g, t).unwrap();
            let q = fourier_quadrature(&g, t).unwrap();
            let want = hsec_closed_form(1.0, t);
            assert!((r.value - C64::new(want, 0.0)).norm() < 1e-12, "t={t}");
            assert!((r.value - q.value).norm() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn gaussian_quadrature() {
        let g = Generator::gaussian(1.0).unwrap();
        for t in [0.0, 0.3, -0.7, 1.2] {
            let s = fourier_transform(&g, t).unwrap();
            assert!((s.value - C64::new(gaussian_closed_form(1.0, t), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn hsec_coset_level() {
        let g = Generator::hsec(1.0).unwrap();
        let p = periodized_spectrum(&g, 0.5, 8).unwrap();
        let want = hsec_closed_form(1.0, 0.5);
        assert!((p.level - want).abs() < 1e-12);
        assert!(p.argmax_n == 0 || p.argmax_n == -1);
    }

    #[test]
    fn hsec_xi() {
        let g = Generator::hsec(1.0).unwrap();
        let x = xi_check(&g, ShiftSet::Integers);
        assert!(!x.xi_prime);
        assert!(x.xi_triple_prime);
        assert!(x.collisions.is_empty());
    }
}
