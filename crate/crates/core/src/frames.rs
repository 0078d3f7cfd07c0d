//! Finite-section sampling analysis.
//!
//! The pre-Gramian `A[λ, γ] = G(λ - γ)` maps shift coefficients to samples.
//! Its sections over growing windows give estimates of the sampling bounds;
//! a window sweep turns those into a verdict.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generator::{Generator, GeneratorClass};
use crate::linalg::{hermitian_eigenvalues, CMatrix, Lu};
use crate::sets::{DensityRadius, SeparatedSet, SetRepr, SetTransform, POINT_TOL};
use crate::spectral::{stability_check, DEFAULT_GRID};
use crate::{Error, Result, C64};

pub const EPS_FRAME: f64 = 1e-6;
/// Relative spread allowed among the last three lower bounds.
pub const CONVERGENCE_SPREAD: f64 = 0.05;
/// Envelope level at which columns beyond the row window are dropped.
pub const COLUMN_TAIL: f64 = 1e-13;
/// Eigenvalues below this multiple of `n·ε·λ_max` are below the solver's
/// resolution and reported as zero.
const RESOLUTION_FACTOR: f64 = 10.0;
/// `λ_min <= RANK_TOL · λ_max` marks a rank-deficient interpolation section.
const RANK_TOL: f64 = 1e-13;
pub const DEFAULT_GABOR_GRID: usize = 64;
pub const DEFAULT_INTERPOLATION_WINDOW: f64 = 20.0;

#[derive(Clone, Debug)]
pub struct PreGramian {
    pub lambda_pts: Vec<f64>,
    pub gamma_pts: Vec<f64>,
    pub entries: CMatrix,
    pub window: f64,
    pub center: f64,
    pub l_ext: f64,
}

/// Column extension: the envelope is below `COLUMN_TAIL` beyond it.
pub fn column_extension(g: &Generator) -> f64 {
    g.decay().radius_for(COLUMN_TAIL).ceil()
}

pub fn pre_gramian(
    g: &Generator,
    lambda: &SeparatedSet,
    gamma: &SeparatedSet,
    window: f64,
) -> Result<PreGramian> {
    pre_gramian_at(g, lambda, gamma, 0.0, window)
}

/// Section centred at `center`: rows `Λ ∩ [c-W, c+W]`, columns
/// `Γ ∩ [c-W-L, c+W+L]`.
pub fn pre_gramian_at(
    g: &Generator,
    lambda: &SeparatedSet,
    gamma: &SeparatedSet,
    center: f64,
    window: f64,
) -> Result<PreGramian> {
    if !(window > 0.0) {
        return Err(Error::InvalidInput(format!("window must be positive, got {window}")));
    }
    let l_ext = column_extension(g);
    let lambda_pts = lambda.points_in(center - window, center + window);
    let gamma_pts = gamma.points_in(center - window - l_ext, center + window + l_ext);
    if lambda_pts.is_empty() || gamma_pts.is_empty() {
        return Err(Error::EmptyRestriction {
            count: lambda_pts.len().min(gamma_pts.len()),
            needed: 1,
        });
    }
    let entries = CMatrix::from_fn(lambda_pts.len(), gamma_pts.len(), |i, j| {
        g.eval_real(lambda_pts[i] - gamma_pts[j])
    });
    Ok(PreGramian {
        lambda_pts,
        gamma_pts,
        entries,
        window,
        center,
        l_ext,
    })
}

/// Default interior margin: where the envelope has dropped by a factor of
/// ten, capped at half the window.
pub fn default_interior_margin(g: &Generator, window: f64) -> f64 {
    let m = match g.class() {
        GeneratorClass::K => 10f64.ln() / g.decay().rate,
        GeneratorClass::C => (2.0 * 10f64.ln() / g.alpha()).sqrt(),
    };
    m.min(window / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameBounds {
    pub a_est: f64,
    pub b_est: f64,
    pub columns: usize,
    pub rows: usize,
    pub residual: f64,
}

/// Extreme eigenvalues of `A_I^* A_I`, where `I` keeps the columns within
/// `W - interior_margin` of the centre.
pub fn lower_frame_bound(pg: &PreGramian, interior_margin: f64) -> Result<FrameBounds> {
    if !(interior_margin < pg.window) {
        return Err(Error::InvalidInput(format!(
            "interior margin {interior_margin} must be below the window {}",
            pg.window
        )));
    }
    let reach = pg.window - interior_margin + POINT_TOL;
    let keep: Vec<usize> = pg
        .gamma_pts
        .iter()
        .enumerate()
        .filter(|(_, &x)| (x - pg.center).abs() <= reach)
        .map(|(j, _)| j)
        .collect();
    if keep.is_empty() {
        return Err(Error::EmptyRestriction { count: 0, needed: 1 });
    }
    let section = pg.entries.select_cols(&keep);
    let (ev, residual) = hermitian_eigenvalues(&section.gram())?;
    let b_est = ev.last().copied().unwrap_or(0.0).max(0.0);
    let floor = RESOLUTION_FACTOR * ev.len() as f64 * f64::EPSILON * b_est;
    let lo = ev[0];
    Ok(FrameBounds {
        a_est: if lo <= floor { 0.0 } else { lo },
        b_est,
        columns: keep.len(),
        rows: section.rows(),
        residual,
    })
}

/// `sup_x Σ_p env(|x - p|)` over a set with the given separation.
fn envelope_row_sum(g: &Generator, sep: f64) -> f64 {
    let env = g.decay();
    let m = env.monotone_from();
    if m == 0.0 {
        return 2.0 * env.lattice_tail(0.0, sep);
    }
    let inner = 2.0 * ((m / sep).floor() + 1.0);
    inner * env.bound(m) + 2.0 * env.lattice_tail(m, sep)
}

/// Schur test bound on `‖A‖²` from the envelope.
pub fn schur_bound(g: &Generator, lambda: &SeparatedSet, gamma: &SeparatedSet) -> f64 {
    envelope_row_sum(g, gamma.separation()) * envelope_row_sum(g, lambda.separation())
}

pub const DEFAULT_BLOCH_GRID: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochBounds {
    pub a: f64,
    pub b: f64,
    /// Bloch parameter attaining `a` on the grid.
    pub xi_min: f64,
    /// Common period of `Λ` and `ℤ`.
    pub period: f64,
    pub grid_size: usize,
}

/// Frame bounds of the full pre-Gramian for periodic `Λ` and `Γ = ℤ`.
///
/// With a common integer period `P`, the operator splits into `|Λ ∩ [0,P)| × P`
/// blocks `M(ξ)[λ, j] = Σ_n G(λ - j - nP) e^{-2πiξn}`, so
/// `A = min_ξ λ_min(M(ξ)^* M(ξ))`; the minimum is taken over a uniform `ξ` grid.
pub fn bloch_bounds(g: &Generator, lambda: &SeparatedSet, grid_size: usize) -> Result<BlochBounds> {
    let SetRepr::Periodic { offsets, period } = lambda.repr() else {
        return Err(Error::InvalidInput("Bloch bounds need a periodic set".into()));
    };
    let m = (1..=1000usize)
        .find(|m| {
            let x = *m as f64 * period;
            (x - x.round()).abs() < 1e-9 && x.round() >= 1.0
        })
        .ok_or_else(|| Error::InvalidInput(format!("period {period} is not commensurate with 1")))?;
    let p = (m as f64 * period).round();
    let cols = p as usize;
    let pts: Vec<f64> = (0..m)
        .flat_map(|k| offsets.iter().map(move |o| o + k as f64 * period))
        .collect();
    let reach = g.decay().radius_for(1e-17 * g.decay().amp.max(1.0)) + p;
    let nmax = (reach / p).ceil() as i64 + 1;
    let block = |xi: f64| -> Result<(f64, f64)> {
        let mat = CMatrix::from_fn(pts.len(), cols, |i, j| {
            (-nmax..=nmax)
                .map(|n| {
                    let x = pts[i] - j as f64 - n as f64 * p;
                    g.eval_real(x) * C64::from_polar(1.0, -std::f64::consts::TAU * xi * n as f64)
                })
                .sum()
        });
        let (vals, _) = hermitian_eigenvalues(&mat.gram())?;
        Ok((vals[0].max(0.0), vals[vals.len() - 1]))
    };
    let samples: Vec<(f64, f64, f64)> = (0..grid_size)
        .into_par_iter()
        .map(|i| {
            let xi = i as f64 / grid_size as f64;
            block(xi).map(|(lo, hi)| (xi, lo, hi))
        })
        .collect::<Result<_>>()?;
    let (xi_min, a, _) = samples
        .iter()
        .copied()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("nonempty grid");
    let b = samples.iter().map(|s| s.2).fold(0.0, f64::max);
    Ok(BlochBounds {
        a,
        b,
        xi_min,
        period: p,
        grid_size,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameVerdict {
    Sampling,
    NotSampling,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdContext {
    pub rule: String,
    pub d_minus_lambda: f64,
    pub d_plus_gamma: f64,
    pub threshold: f64,
    pub hypothesis_holds: bool,
}

pub fn threshold_context(
    g: &Generator,
    lambda: &SeparatedSet,
    gamma: &SeparatedSet,
) -> Result<ThresholdContext> {
    let dl = lambda.beurling_densities(DensityRadius::Exact)?;
    let dg = gamma.beurling_densities(DensityRadius::Exact)?;
    let (rule, threshold) = match g.critical_ratio() {
        Some(r) => ("D-(Lambda) > (q/k) D+(Gamma)".to_string(), r * dg.d_plus),
        None => ("D-(Lambda) > q + 1".to_string(), g.q() as f64 + 1.0),
    };
    Ok(ThresholdContext {
        rule,
        d_minus_lambda: dl.d_minus,
        d_plus_gamma: dg.d_plus,
        threshold,
        hypothesis_holds: dl.d_minus > threshold,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingOptions {
    /// Doubling schedule of window radii; at least three.
    pub windows: Vec<f64>,
    /// `None` selects [`default_interior_margin`] per window.
    pub interior_margin: Option<f64>,
    pub center: f64,
    pub check_stability: bool,
}

impl SamplingOptions {
    pub fn for_generator(g: &Generator) -> Self {
        Self {
            windows: default_schedule(g),
            interior_margin: None,
            center: 0.0,
            check_stability: true,
        }
    }
}

pub fn default_schedule(g: &Generator) -> Vec<f64> {
    match g.class() {
        GeneratorClass::K => vec![10.0, 20.0, 40.0, 80.0],
        GeneratorClass::C => vec![8.0, 16.0, 32.0],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameReport {
    pub windows: Vec<f64>,
    pub lower_bounds: Vec<f64>,
    pub upper_bounds: Vec<f64>,
    pub interior_margins: Vec<f64>,
    pub verdict: FrameVerdict,
    /// Relative spread of the last three lower bounds.
    pub relative_spread: f64,
    pub threshold_context: ThresholdContext,
    /// `None` when the stability screen was not run.
    pub stability_verified: Option<bool>,
    pub epsilon_frame: f64,
    pub convergence_spread: f64,
}

/// Verdict from the last three lower bounds of a doubling schedule.
pub fn classify(lower: &[f64]) -> (FrameVerdict, f64) {
    let last = &lower[lower.len() - 3..];
    let hi = last.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = last.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if last[2] > 0.0 { (hi - lo) / last[2] } else { f64::INFINITY };
    if spread <= CONVERGENCE_SPREAD && last[2] > EPS_FRAME {
        (FrameVerdict::Sampling, spread)
    } else if last[1] <= last[0] / 2.0 && last[2] <= last[1] / 2.0 {
        (FrameVerdict::NotSampling, spread)
    } else {
        (FrameVerdict::Inconclusive, spread)
    }
}

pub fn sampling_verdict(
    g: &Generator,
    lambda: &SeparatedSet,
    gamma: &SeparatedSet,
    opts: &SamplingOptions,
) -> Result<FrameReport> {
    let stability = if opts.check_stability {
        Some(stability_check(g, DEFAULT_GRID)?.stable)
    } else {
        None
    };
    sampling_verdict_inner(g, lambda, gamma, opts, stability)
}

fn sampling_verdict_inner(
    g: &Generator,
    lambda: &SeparatedSet,
    gamma: &SeparatedSet,
    opts: &SamplingOptions,
    stability: Option<bool>,
) -> Result<FrameReport> {
    if opts.windows.len() < 3 {
        return Err(Error::InvalidInput(
            "a window schedule needs at least three entries".into(),
        ));
    }
    let margins: Vec<f64> = opts
        .windows
        .iter()
        .map(|&w| opts.interior_margin.unwrap_or_else(|| default_interior_margin(g, w)))
        .collect();
    let bounds: Vec<FrameBounds> = opts
        .windows
        .iter()
        .zip(&margins)
        .map(|(&w, &m)| {
            let pg = pre_gramian_at(g, lambda, gamma, opts.center, w)?;
            lower_frame_bound(&pg, m)
        })
        .collect::<Result<_>>()?;
    let lower: Vec<f64> = bounds.iter().map(|b| b.a_est).collect();
    let (verdict, relative_spread) = classify(&lower);
    Ok(FrameReport {
        windows: opts.windows.clone(),
        lower_bounds: lower,
        upper_bounds: bounds.iter().map(|b| b.b_est).collect(),
        interior_margins: margins,
        verdict,
        relative_spread,
        threshold_context: threshold_context(g, lambda, gamma)?,
        stability_verified: stability,
        epsilon_frame: EPS_FRAME,
        convergence_spread: CONVERGENCE_SPREAD,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterpolationReport {
    pub max_residual: f64,
    pub interior_nodes: usize,
    pub condition: f64,
    pub max_coefficient: f64,
}

/// Minimum-norm solver for `Σ_λ d_λ G(γ - λ) = y_γ` on a finite section.
#[derive(Clone, Debug)]
pub struct Interpolator {
    g: Generator,
    nodes: Vec<f64>,
    interior: Vec<usize>,
    lambda_pts: Vec<f64>,
    b: CMatrix,
    lu: Lu,
    condition: f64,
    report: FrameReport,
}

impl Interpolator {
    /// Rows `Γ ∩ [-W, W]` (targets vanish outside the interior), columns
    /// `Λ ∩ [-W-L, W+L]`. Requires a sampling verdict for `(Λ, Γ)`.
    pub fn new(
        g: &Generator,
        lambda: &SeparatedSet,
        gamma: &SeparatedSet,
        window: f64,
        opts: &SamplingOptions,
    ) -> Result<Self> {
        let report = sampling_verdict(g, lambda, gamma, opts)?;
        if report.verdict != FrameVerdict::Sampling {
            return Err(Error::Precondition(format!(
                "interpolation needs a sampling configuration, verdict was {:?}",
                report.verdict
            )));
        }
        let pg = pre_gramian_at(g, gamma, lambda, opts.center, window)?;
        let margin = opts
            .interior_margin
            .unwrap_or_else(|| default_interior_margin(g, window));
        let interior: Vec<usize> = pg
            .lambda_pts
            .iter()
            .enumerate()
            .filter(|(_, &x)| (x - opts.center).abs() <= window - margin + POINT_TOL)
            .map(|(i, _)| i)
            .collect();
        let bb = pg.entries.outer_gram();
        let (ev, _) = hermitian_eigenvalues(&bb)?;
        let (lo, hi) = (ev[0], ev[ev.len() - 1]);
        let condition = if lo > 0.0 { (hi / lo).sqrt() } else { f64::INFINITY };
        if lo <= RANK_TOL * hi {
            return Err(Error::RankDeficient { condition });
        }
        Ok(Self {
            g: g.clone(),
            lu: Lu::new(&bb)?,
            nodes: pg.lambda_pts,
            interior,
            lambda_pts: pg.gamma_pts,
            b: pg.entries,
            condition,
            report,
        })
    }

    pub fn interior_nodes(&self) -> Vec<f64> {
        self.interior.iter().map(|&i| self.nodes[i]).collect()
    }

    pub fn frame_report(&self) -> &FrameReport {
        &self.report
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// `target` lists values at [`Self::interior_nodes`].
    pub fn solve(&self, target: &[C64]) -> Result<InterpolationReport> {
        if target.len() != self.interior.len() {
            return Err(Error::InvalidInput(format!(
                "target has {} values, the section has {} interior nodes",
                target.len(),
                self.interior.len()
            )));
        }
        let mut y = vec![C64::new(0.0, 0.0); self.nodes.len()];
        for (&i, t) in self.interior.iter().zip(target) {
            y[i] = *t;
        }
        let d = self.b.adjoint_matvec(&self.lu.solve(&y));
        let mut max_residual: f64 = 0.0;
        for (&i, t) in self.interior.iter().zip(target) {
            let x = self.nodes[i];
            let f: C64 = self
                .lambda_pts
                .iter()
                .zip(&d)
                .map(|(l, c)| c * self.g.eval_real(x - l))
                .sum();
            max_residual = max_residual.max((f - t).norm());
        }
        Ok(InterpolationReport {
            max_residual,
            interior_nodes: self.interior.len(),
            condition: self.condition,
            max_coefficient: d.iter().map(|c| c.norm()).fold(0.0, f64::max),
        })
    }
}

/// One-shot interpolation on the default window; `target` is given at the
/// interior nodes (see [`Interpolator::interior_nodes`]).
pub fn interpolate_demo(
    g: &Generator,
    lambda: &SeparatedSet,
    gamma: &SeparatedSet,
    target: &[C64],
) -> Result<InterpolationReport> {
    let opts = SamplingOptions::for_generator(g);
    Interpolator::new(g, lambda, gamma, DEFAULT_INTERPOLATION_WINDOW, &opts)?.solve(target)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaborVerdict {
    Frame,
    NoFrame,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaborReport {
    pub system: &'static str,
    pub x_grid: Vec<f64>,
    /// Lower bound at the largest window, per shift.
    pub lower_bounds: Vec<f64>,
    pub verdicts: Vec<FrameVerdict>,
    pub inf_lower_bound: f64,
    pub windows: Vec<f64>,
    pub verdict: GaborVerdict,
    pub stability_verified: bool,
    pub caveat: &'static str,
}

/// Gabor schedule: the last three windows of the default sweep.
pub fn gabor_schedule(g: &Generator) -> Vec<f64> {
    let s = default_schedule(g);
    s[s.len() - 3..].to_vec()
}

/// Screens `Λ + x` for `x = i/n` and derives the frame property of
/// `G(g, -Λ × ℤ)`.
pub fn gabor_frame_sweep(
    g: &Generator,
    lambda: &SeparatedSet,
    x_grid_size: usize,
) -> Result<GaborReport> {
    gabor_frame_sweep_with(g, lambda, x_grid_size, &gabor_schedule(g))
}

pub fn gabor_frame_sweep_with(
    g: &Generator,
    lambda: &SeparatedSet,
    x_grid_size: usize,
    windows: &[f64],
) -> Result<GaborReport> {
    if x_grid_size == 0 {
        return Err(Error::InvalidInput("x grid must be nonempty".into()));
    }
    let stable = stability_check(g, DEFAULT_GRID)?.stable;
    let gamma = SeparatedSet::integers();
    let opts = SamplingOptions {
        windows: windows.to_vec(),
        interior_margin: None,
        center: 0.0,
        check_stability: false,
    };
    let x_grid: Vec<f64> = (0..x_grid_size).map(|i| i as f64 / x_grid_size as f64).collect();
    let reports: Vec<FrameReport> = x_grid
        .par_iter()
        .map(|&x| {
            let shifted = lambda.transform(SetTransform::Translate(x))?;
            sampling_verdict_inner(g, &shifted, &gamma, &opts, Some(stable))
        })
        .collect::<Result<_>>()?;
    let lower_bounds: Vec<f64> = reports
        .iter()
        .map(|r| *r.lower_bounds.last().expect("nonempty schedule"))
        .collect();
    let verdicts: Vec<FrameVerdict> = reports.iter().map(|r| r.verdict).collect();
    let verdict = if verdicts.iter().all(|v| *v == FrameVerdict::Sampling) {
        GaborVerdict::Frame
    } else if verdicts.contains(&FrameVerdict::NotSampling) {
        GaborVerdict::NoFrame
    } else {
        GaborVerdict::Inconclusive
    };
    Ok(GaborReport {
        system: "G(g, -Lambda x Z)",
        inf_lower_bound: lower_bounds.iter().copied().fold(f64::INFINITY, f64::min),
        x_grid,
        lower_bounds,
        verdicts,
        windows: windows.to_vec(),
        verdict,
        stability_verified: stable,
        caveat: "frame property screened on a finite grid of shifts x in [0, 1)",
    })
}
