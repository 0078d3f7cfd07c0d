use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use sisampling::counterexample::{
    build_vanisher_seeded, restore_sampling, verify_exg_example, verify_hdef_example,
    verify_nonuniqueness,
};
use sisampling::frames::{
    bloch_bounds, gabor_frame_sweep_with, gabor_schedule, sampling_verdict, schur_bound,
    SamplingOptions, DEFAULT_BLOCH_GRID, DEFAULT_GABOR_GRID,
};
use sisampling::sets::SetRepr;
use sisampling::spectral::{
    fourier_transform, periodized_spectrum, stability_check, xi_check, ShiftSet, DEFAULT_GRID,
    DEFAULT_N_MAX,
};
use sisampling::{Generator, SeparatedSet};

use crate::config::ExperimentConfig;
use crate::output::Artifacts;

pub struct TaskContext<'a> {
    pub cfg: &'a ExperimentConfig,
    pub seed: u64,
    pub csv: bool,
}

fn generator(cfg: &ExperimentConfig) -> Result<Generator> {
    let spec = cfg.generator.as_ref().context("missing [generator] block")?;
    Ok(spec.build()?)
}

fn gamma(cfg: &ExperimentConfig) -> Result<SeparatedSet> {
    Ok(match &cfg.gamma {
        Some(s) => s.build()?,
        None => SeparatedSet::integers(),
    })
}

fn lambda(cfg: &ExperimentConfig) -> Result<SeparatedSet> {
    Ok(cfg.lambda.as_ref().context("missing [lambda] set")?.build()?)
}

fn is_integers(s: &SeparatedSet) -> bool {
    matches!(s.repr(), SetRepr::Periodic { offsets, period }
        if (*period - 1.0).abs() < 1e-12 && offsets.len() == 1 && offsets[0].abs() < 1e-12)
}

pub fn analyze(ctx: &TaskContext, _out: &mut Artifacts) -> Result<Value> {
    let g = generator(ctx.cfg)?;
    let gamma = gamma(ctx.cfg)?;
    let shifts = if is_integers(&gamma) {
        ShiftSet::Integers
    } else {
        ShiftSet::Set(&gamma)
    };
    let grid = ctx.cfg.params.grid.unwrap_or(DEFAULT_GRID);
    Ok(json!({
        "generator": g.summary(),
        "critical_ratio": g.critical_ratio(),
        "xi": xi_check(&g, shifts),
        "stability": stability_check(&g, grid)?,
    }))
}

#[derive(Serialize)]
struct SpectrumRow {
    t: f64,
    re: f64,
    im: f64,
    abs: f64,
    method: String,
    err_est: f64,
}

pub fn spectrum(ctx: &TaskContext, out: &mut Artifacts) -> Result<Value> {
    let g = generator(ctx.cfg)?;
    let p = &ctx.cfg.params;
    let (lo, hi, n) = (p.t_min.unwrap_or(-3.0), p.t_max.unwrap_or(3.0), p.t_count.unwrap_or(241));
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let t = if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
        let s = fourier_transform(&g, t)?;
        rows.push(SpectrumRow {
            t,
            re: s.value.re,
            im: s.value.im,
            abs: s.value.norm(),
            method: serde_json::to_value(s.method)?.as_str().unwrap_or_default().to_string(),
            err_est: s.err_est,
        });
    }
    let peak = rows.iter().map(|r| r.abs).fold(0.0, f64::max);
    if ctx.csv {
        out.csv("spectrum.csv", &rows)?;
    }
    Ok(json!({
        "t_min": lo,
        "t_max": hi,
        "t_count": n,
        "max_abs": peak,
        "value_at_zero": fourier_transform(&g, 0.0)?,
    }))
}

#[derive(Serialize)]
struct LevelRow {
    b: f64,
    level: f64,
    argmax_n: i64,
    tail_certified: bool,
}

pub fn stability(ctx: &TaskContext, out: &mut Artifacts) -> Result<Value> {
    let g = generator(ctx.cfg)?;
    let grid = ctx.cfg.params.grid.unwrap_or(DEFAULT_GRID);
    let verdict = stability_check(&g, grid)?;
    if ctx.csv {
        let rows: Vec<LevelRow> = (0..grid)
            .map(|i| {
                periodized_spectrum(&g, i as f64 / grid as f64, DEFAULT_N_MAX).map(|p| LevelRow {
                    b: p.b,
                    level: p.level,
                    argmax_n: p.argmax_n,
                    tail_certified: p.tail_certified,
                })
            })
            .collect::<sisampling::Result<_>>()?;
        out.csv("periodized_spectrum.csv", rows)?;
    }
    Ok(serde_json::to_value(verdict)?)
}

#[derive(Serialize)]
struct SweepRow {
    window: f64,
    a_est: f64,
    b_est: f64,
    interior_margin: f64,
}

pub fn sampling(ctx: &TaskContext, out: &mut Artifacts) -> Result<Value> {
    let g = generator(ctx.cfg)?;
    let lam = lambda(ctx.cfg)?;
    let gam = gamma(ctx.cfg)?;
    let mut opts = SamplingOptions::for_generator(&g);
    if let Some(w) = &ctx.cfg.params.windows {
        opts.windows = w.clone();
    }
    opts.interior_margin = ctx.cfg.params.interior_margin;
    let report = sampling_verdict(&g, &lam, &gam, &opts)?;
    if ctx.csv {
        let rows = (0..report.windows.len()).map(|i| SweepRow {
            window: report.windows[i],
            a_est: report.lower_bounds[i],
            b_est: report.upper_bounds[i],
            interior_margin: report.interior_margins[i],
        });
        out.csv("frame_sweep.csv", rows)?;
    }
    let bloch = if lam.is_periodic() && is_integers(&gam) {
        bloch_bounds(&g, &lam, DEFAULT_BLOCH_GRID).ok()
    } else {
        None
    };
    Ok(json!({
        "frame": report,
        "schur_upper_bound": schur_bound(&g, &lam, &gam),
        "bloch": bloch,
    }))
}

#[derive(Serialize)]
struct ShiftRow {
    x: f64,
    a_est: f64,
    verdict: String,
}

pub fn gabor(ctx: &TaskContext, out: &mut Artifacts) -> Result<Value> {
    let g = generator(ctx.cfg)?;
    let lam = lambda(ctx.cfg)?;
    let grid = ctx.cfg.params.x_grid.unwrap_or(DEFAULT_GABOR_GRID);
    let windows = ctx.cfg.params.gabor_windows.clone().unwrap_or_else(|| gabor_schedule(&g));
    let report = gabor_frame_sweep_with(&g, &lam, grid, &windows)?;
    if ctx.csv {
        let rows = (0..report.x_grid.len()).map(|i| ShiftRow {
            x: report.x_grid[i],
            a_est: report.lower_bounds[i],
            verdict: serde_json::to_value(report.verdicts[i])
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
        });
        out.csv("gabor_sweep.csv", rows)?;
    }
    Ok(serde_json::to_value(report)?)
}

#[derive(Serialize)]
struct TraceRow {
    x: f64,
    f: f64,
}

pub fn vanisher(ctx: &TaskContext, out: &mut Artifacts) -> Result<Value> {
    let v = ctx.cfg.vanisher.as_ref().context("missing [vanisher] block")?;
    let sol = build_vanisher_seeded(v.case, v.n, &v.b, v.alpha, ctx.seed)?;
    let nonuniqueness = verify_nonuniqueness(&sol)?;
    let restored = match ctx.cfg.params.restore_density {
        Some(d) => Some(restore_sampling(&sol, d)?),
        None => None,
    };
    if ctx.csv {
        let rows = sol.trace(1024)?.into_iter().map(|(x, f)| TraceRow { x, f });
        out.csv("vanisher_trace.csv", rows)?;
    }
    Ok(json!({
        "solution": sol,
        "nonuniqueness": nonuniqueness,
        "restored": restored,
    }))
}

pub fn verify_examples(_ctx: &TaskContext, _out: &mut Artifacts) -> Result<Value> {
    let hdef = verify_hdef_example()?;
    let exg = verify_exg_example()?;
    Ok(json!({
        "all_pass": hdef.passes && exg.passes,
        "hdef": hdef,
        "hsec_difference": exg,
    }))
}
