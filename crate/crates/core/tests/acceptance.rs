use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sisampling::counterexample::{
    build_vanisher, verify_exg_example, verify_hdef_example, verify_nonuniqueness, VanisherCase,
};
use sisampling::frames::{
    gabor_frame_sweep, sampling_verdict, FrameVerdict, GaborVerdict, Interpolator, SamplingOptions,
    DEFAULT_INTERPOLATION_WINDOW,
};
use sisampling::generator::make_generator;
use sisampling::sets::{DensityRadius, SetTransform};
use sisampling::spectral::{
    fourier_quadrature, fourier_residue, fourier_transform, hsec_closed_form, stability_check,
    xi_check, ShiftSet, DEFAULT_GRID,
};
use sisampling::synthesis::{bessel_bound_check, synthesize, NormIndex};
use sisampling::zoo::{class_k_zoo, full_zoo};
use sisampling::{ComplexPoly, Generator, GeneratorClass, SeparatedSet, SymmetryOrder, C64};

type Outcome = Result<(bool, String), String>;

fn symmetry_table() -> Outcome {
    let one = |c: &[f64]| ComplexPoly::from_real(c).map_err(|e| e.to_string());
    let cases = [
        (one(&[1.0, 0.0, 1.0])?, 2, C64::new(-1.0, 0.0)),
        (one(&[1.0, 0.0, 0.0, 0.0, 1.0])?, 4, C64::new(0.0, 1.0)),
        (one(&[1.0, 2.0, 1.0])?, 1, C64::new(1.0, 0.0)),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (q, k, c) in cases {
        let g = make_generator(GeneratorClass::K, 1.0, one(&[0.0, 1.0])?, q).map_err(|e| e.to_string())?;
        let sc = g.sym_const().ok_or("missing symmetry constant")?;
        let err = (sc - c).norm();
        ok &= g.k() == SymmetryOrder::Finite(k) && err <= 1e-12;
        detail.push(format!("k={:?} c={:.3} (err {err:.1e})", g.k(), sc));
    }
    Ok((ok, detail.join(", ")))
}

fn ft_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for z in class_k_zoo().map_err(|e| e.to_string())? {
        if z.generator.q() > 6 {
            continue;
        }
        count += 1;
        for _ in 0..100 {
            let mut t: f64 = rng.gen_range(-3.0..3.0);
            while t.abs() < 1e-3 {
                t = rng.gen_range(-3.0..3.0);
            }
            let r = fourier_residue(&z.generator, t).map_err(|e| e.to_string())?;
            let q = fourier_quadrature(&z.generator, t).map_err(|e| e.to_string())?;
            worst = worst.max((r.value - q.value).norm());
        }
    }
    let h = Generator::hsec(1.0).map_err(|e| e.to_string())?;
    let mut closed: f64 = 0.0;
    for i in 0..100 {
        let t = -3.0 + 6.0 * (i as f64 + 0.5) / 100.0;
        let exact = hsec_closed_form(1.0, t);
        let r = fourier_residue(&h, t).map_err(|e| e.to_string())?.value;
        let q = fourier_quadrature(&h, t).map_err(|e| e.to_string())?.value;
        closed = closed.max((r.re - exact).abs().max(r.im.abs()));
        closed = closed.max((q.re - exact).abs().max(q.im.abs()));
    }
    Ok((
        worst < 1e-9 && closed < 1e-9,
        format!("{count} generators, residue vs quadrature {worst:.1e}, hsec vs closed form {closed:.1e}"),
    ))
}

fn stability_dichotomy() -> Outcome {
    let s = |e: sisampling::Error| e.to_string();
    let hs = stability_check(&Generator::hsec(1.0).map_err(s)?, DEFAULT_GRID).map_err(s)?;
    let gs = stability_check(&Generator::gaussian(1.0).map_err(s)?, DEFAULT_GRID).map_err(s)?;
    let exg = verify_exg_example().map_err(s)?;
    let hdef = verify_hdef_example().map_err(s)?;
    let mut direction = true;
    for z in full_zoo().map_err(s)? {
        let xi = xi_check(&z.generator, ShiftSet::Integers);
        let st = stability_check(&z.generator, DEFAULT_GRID).map_err(s)?;
        direction &= !xi.implies_stable_integer_shifts || st.stable;
    }
    let ok = hs.stable
        && hs.margin > 1e-3
        && gs.stable
        && gs.margin > 1e-3
        && !exg.stability.stable
        && exg.stability.witness_b == 0.0
        && !hdef.stability.stable
        && hdef.stability.witness_b == 0.0
        && hdef.max_abs_transform < 1e-8
        && direction;
    Ok((
        ok,
        format!(
            "margins hsec {:.4} gaussian {:.4}; exg witness b={}, hdef witness b={} max|H^(n)| {:.1e}; xi direction {}",
            hs.margin, gs.margin, exg.stability.witness_b, hdef.stability.witness_b, hdef.max_abs_transform, direction
        ),
    ))
}

fn sampling_threshold() -> Outcome {
    let s = |e: sisampling::Error| e.to_string();
    let g = Generator::hsec(1.0).map_err(s)?;
    let opts = SamplingOptions::for_generator(&g);
    let z = SeparatedSet::integers();
    let dense = sampling_verdict(&g, &SeparatedSet::lattice(0.8, 0.0).map_err(s)?, &z, &opts).map_err(s)?;
    let sparse = sampling_verdict(&g, &SeparatedSet::lattice(2.0, 0.0).map_err(s)?, &z, &opts).map_err(s)?;
    let last = *dense.lower_bounds.last().unwrap();
    let halving = sparse.lower_bounds.windows(2).all(|w| w[1] <= 0.5 * w[0]);
    let ok = dense.verdict == FrameVerdict::Sampling
        && dense.relative_spread <= 0.05
        && last > 1e-3
        && sparse.verdict == FrameVerdict::NotSampling
        && halving;
    Ok((
        ok,
        format!(
            "0.8Z lower {:?} spread {:.2}% -> {:?}; 2Z lower {:?} -> {:?}",
            fmt(&dense.lower_bounds),
            100.0 * dense.relative_spread,
            dense.verdict,
            fmt(&sparse.lower_bounds),
            sparse.verdict
        ),
    ))
}

fn fmt(v: &[f64]) -> Vec<String> {
    v.iter().map(|x| format!("{x:.4e}")).collect()
}

fn sharpness() -> Outcome {
    let s = |e: sisampling::Error| e.to_string();
    let mut ok = true;
    let mut detail = Vec::new();
    for (case, n, b) in [
        (VanisherCase::Case1Even, 2, vec![0.3, 0.8]),
        (VanisherCase::Case2Odd, 3, vec![0.2, 0.7, 1.3]),
    ] {
        let v = build_vanisher(case, n, &b, 1.0).map_err(s)?;
        let d = v.zero_set.beurling_densities(DensityRadius::Exact).map_err(s)?;
        let nu = verify_nonuniqueness(&v).map_err(s)?;
        let this = d.exact
            && (d.d_minus - n as f64).abs() < 1e-12
            && (d.d_plus - n as f64).abs() < 1e-12
            && v.max_residual < 1e-9
            && nu.stability.stable
            && nu.frame.verdict == FrameVerdict::NotSampling;
        ok &= this;
        detail.push(format!(
            "N={n}: density {}, residual {:.1e}, margin {:.3e}, {:?}",
            d.d_minus, v.max_residual, nu.stability.margin, nu.frame.verdict
        ));
    }
    Ok((ok, detail.join("; ")))
}

fn gaussian_sharpness() -> Outcome {
    let s = |e: sisampling::Error| e.to_string();
    let alpha = PI * PI;
    let v = build_vanisher(VanisherCase::Gaussian, 1, &[0.4], alpha).map_err(s)?;
    let d = v.zero_set.beurling_densities(DensityRadius::Exact).map_err(s)?;
    let lam = SeparatedSet::lattice(1.0 / 2.2, 0.0).map_err(s)?;
    let g = v.generator();
    let r = sampling_verdict(g, &lam, &SeparatedSet::integers(), &SamplingOptions::for_generator(g)).map_err(s)?;
    let ok = (d.d_minus - 2.0).abs() < 1e-12
        && (d.d_plus - 2.0).abs() < 1e-12
        && v.max_residual < 1e-9
        && r.verdict == FrameVerdict::Sampling;
    Ok((
        ok,
        format!(
            "alpha=pi^2: zero density {}, residual {:.1e}; (1/2.2)Z lower {:?} -> {:?}",
            d.d_minus,
            v.max_residual,
            fmt(&r.lower_bounds),
            r.verdict
        ),
    ))
}

fn gabor() -> Outcome {
    let s = |e: sisampling::Error| e.to_string();
    let g = Generator::hsec(1.0).map_err(s)?;
    let frame = gabor_frame_sweep(&g, &SeparatedSet::lattice(0.8, 0.0).map_err(s)?, 64).map_err(s)?;
    let v = build_vanisher(VanisherCase::Case1Even, 2, &[0.3, 0.8], 1.0).map_err(s)?;
    let crit = gabor_frame_sweep(v.generator(), &v.zero_set, 64).map_err(s)?;
    let ok = frame.verdict == GaborVerdict::Frame
        && frame.inf_lower_bound > 1e-4
        && crit.verdict == GaborVerdict::NoFrame;
    Ok((
        ok,
        format!(
            "hsec, 0.8Z: {:?} inf {:.4e}; critical zero set: {:?}",
            frame.verdict, frame.inf_lower_bound, crit.verdict
        ),
    ))
}

fn bessel() -> Outcome {
    let s = |e: sisampling::Error| e.to_string();
    let zoo = full_zoo().map_err(s)?;
    let mut worst: f64 = 0.0;
    let mut trials = 0;
    let mut ok = true;
    for (i, z) in zoo.iter().enumerate() {
        for (j, p) in [NormIndex::One, NormIndex::Two, NormIndex::Inf].into_iter().enumerate() {
            let n = if j == 0 { 68 } else { 66 };
            let r = bessel_bound_check(&z.generator, &SeparatedSet::integers(), n, p, (10 * i + j) as u64)
                .map_err(s)?;
            trials += r.trials;
            worst = worst.max(r.max_ratio);
            ok &= r.passes;
        }
    }
    Ok((
        ok,
        format!("{trials} vectors over {} generators, largest ratio to bound {worst:.3}", zoo.len()),
    ))
}

fn interpolation() -> Outcome {
    let s = |e: sisampling::Error| e.to_string();
    let g = Generator::hsec(1.0).map_err(s)?;
    let lam = SeparatedSet::lattice(0.8, 0.0).map_err(s)?;
    let opts = SamplingOptions::for_generator(&g);
    let ip = Interpolator::new(&g, &lam, &SeparatedSet::integers(), DEFAULT_INTERPOLATION_WINDOW, &opts)
        .map_err(s)?;
    let n = ip.interior_nodes().len();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let y: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        worst = worst.max(ip.solve(&y).map_err(s)?.max_residual);
    }
    Ok((worst < 1e-6, format!("20 targets on {n} interior nodes, max residual {worst:.1e}")))
}

fn cross_invariants() -> Outcome {
    let s = |e: sisampling::Error| e.to_string();
    let i = C64::new(0.0, 1.0);
    let mut detail = Vec::new();

    let v = build_vanisher(VanisherCase::Case2Odd, 3, &[0.2, 0.7, 1.3], 1.0).map_err(s)?;
    let f = v.function().map_err(s)?;
    let mut anti: f64 = 0.0;
    for j in 0..1000 {
        let x = j as f64 / 1000.0;
        let a = synthesize(&f, x).map_err(s)?;
        let b = synthesize(&f, x + 1.0).map_err(s)?;
        anti = anti.max((a + b).norm());
    }
    detail.push(format!("antiperiodicity {anti:.1e}"));

    let pts = [C64::new(0.3, 0.2), C64::new(-1.1, 0.5), C64::new(2.0, -0.4)];
    let mut periodic: f64 = 0.0;
    for z in class_k_zoo().map_err(s)? {
        let g = &z.generator;
        let a = g.alpha();
        let shift = 2.0 * PI * i / a;
        let k = g.k().finite().unwrap_or(1) as f64;
        let c = g.sym_const().unwrap_or(C64::new(1.0, 0.0));
        for &p in &pts {
            let base = g.eval(p).value().ok_or("pole")?;
            let full = g.eval(p + shift).value().ok_or("pole")?;
            let part = g.eval(p + shift / k).value().ok_or("pole")?;
            let scale = base.norm().max(1e-300);
            periodic = periodic.max((full - base).norm() / scale);
            periodic = periodic.max((part - c * base).norm() / scale);
        }
    }
    detail.push(format!("class K periodicity/symmetry {periodic:.1e}"));

    let gauss = Generator::gaussian(1.0).map_err(s)?;
    let mut quasi: f64 = 0.0;
    for &p in &pts {
        let base = gauss.eval(p).value().ok_or("pole")?;
        let moved = gauss.eval(p + 2.0 * PI * i).value().ok_or("pole")?;
        let factor = (-2.0 * PI * i * p + 2.0 * PI * PI).exp();
        quasi = quasi.max((moved - factor * base).norm() / (factor * base).norm());
    }
    detail.push(format!("class C quasi-periodicity {quasi:.1e}"));

    let mut herm: f64 = 0.0;
    for z in full_zoo().map_err(s)?.iter().filter(|z| z.generator.is_real()) {
        for t in [0.13, 0.5, 1.7] {
            let a = fourier_transform(&z.generator, t).map_err(s)?.value;
            let b = fourier_transform(&z.generator, -t).map_err(s)?.value;
            herm = herm.max((a - b.conj()).norm());
        }
    }
    detail.push(format!("Hermitian symmetry {herm:.1e}"));

    let base = SeparatedSet::periodic(&[0.0, 0.3, 0.55], 1.0).map_err(s)?;
    let d0 = base.beurling_densities(DensityRadius::Exact).map_err(s)?;
    let mut scaling: f64 = 0.0;
    for a in [0.5, 2.0, 3.7] {
        let d = base
            .transform(SetTransform::Scale(a))
            .map_err(s)?
            .beurling_densities(DensityRadius::Exact)
            .map_err(s)?;
        scaling = scaling.max((d.d_minus - d0.d_minus / a).abs());
        let d = base
            .transform(SetTransform::Translate(a))
            .map_err(s)?
            .beurling_densities(DensityRadius::Exact)
            .map_err(s)?;
        scaling = scaling.max((d.d_plus - d0.d_plus).abs());
    }
    detail.push(format!("density scaling {scaling:.1e}"));

    let ok = anti < 1e-9 && periodic < 1e-10 && quasi < 1e-10 && herm < 1e-10 && scaling < 1e-12;
    Ok((ok, detail.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("symmetry-order table", symmetry_table),
        ("Fourier transform oracle equivalence", ft_oracles),
        ("stability dichotomy", stability_dichotomy),
        ("sampling threshold", sampling_threshold),
        ("critical-density sharpness", sharpness),
        ("Gaussian-class sharpness", gaussian_sharpness),
        ("Gabor sweep", gabor),
        ("Bessel bound", bessel),
        ("interpolation", interpolation),
        ("cross-invariants", cross_invariants),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            n + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
