//! Generators `G(z) = R(e^{αz})` (class K) and `G(z) = e^{-αz²/2} R(e^{αz})`
//! (class C).

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::poly::{
    poly_roots, support_gcd, ComplexPoly, Evaluation, Pole, RationalFn, SymmetryOrder, POLE_TOL,
};
use crate::{Error, Result, C64};

/// Tolerance for a root of `Q` to count as lying on `[0, ∞)`.
pub const REAL_AXIS_TOL: f64 = 1e-9;
/// `|P(0)|` below this fraction of `max|p_j|` counts as `P(0) = 0`.
const ZERO_AT_ORIGIN_TOL: f64 = 1e-12;
/// Relative tolerance for coincident poles in the combination builders.
const COINCIDENT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorClass {
    K,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    Exponential,
    Gaussian,
}

/// Pointwise majorant of `|G(x)|` on the real line.
///
/// Exponential: `amp·e^{-rate|x|}`. Gaussian: `amp·e^{-rate x²/2 + slope|x|}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayEnvelope {
    pub kind: EnvelopeKind,
    pub rate: f64,
    pub amp: f64,
    pub slope: f64,
    pub poly_growth: usize,
}

impl DecayEnvelope {
    pub fn bound(&self, x: f64) -> f64 {
        let x = x.abs();
        match self.kind {
            EnvelopeKind::Exponential => self.amp * (-self.rate * x).exp(),
            EnvelopeKind::Gaussian => self.amp * (-self.rate * x * x / 2.0 + self.slope * x).exp(),
        }
    }

    /// Radius beyond which the envelope is decreasing.
    pub fn monotone_from(&self) -> f64 {
        match self.kind {
            EnvelopeKind::Exponential => 0.0,
            EnvelopeKind::Gaussian => self.slope / self.rate,
        }
    }

    /// Smallest `L >= monotone_from()` with `bound(L) <= eps`.
    pub fn radius_for(&self, eps: f64) -> f64 {
        let l = (self.amp / eps).ln();
        let r = match self.kind {
            EnvelopeKind::Exponential => l / self.rate,
            EnvelopeKind::Gaussian => {
                (self.slope + (self.slope * self.slope + 2.0 * self.rate * l.max(0.0)).sqrt())
                    / self.rate
            }
        };
        r.max(self.monotone_from())
    }

    /// `Σ_{j>=0} bound(x0 + j·step)` for `x0 >= monotone_from()`.
    pub fn lattice_tail(&self, x0: f64, step: f64) -> f64 {
        match self.kind {
            EnvelopeKind::Exponential => self.bound(x0) / (1.0 - (-self.rate * step).exp()),
            EnvelopeKind::Gaussian => {
                let mut sum = 0.0;
                let mut j = 0usize;
                loop {
                    let term = self.bound(x0 + j as f64 * step);
                    sum += term;
                    if term <= sum * 1e-17 || term == 0.0 || j > 1_000_000 {
                        break;
                    }
                    j += 1;
                }
                sum
            }
        }
    }

    /// Upper bound for `∫_X^∞ bound(x) dx`, `X >= monotone_from()`.
    pub fn integral_tail(&self, x: f64) -> f64 {
        match self.kind {
            EnvelopeKind::Exponential => self.bound(x) / self.rate,
            EnvelopeKind::Gaussian => {
                let d = self.rate * x - self.slope;
                if d <= 0.0 {
                    f64::INFINITY
                } else {
                    self.bound(x) / d
                }
            }
        }
    }
}

/// A validated generator together with its cached invariants.
#[derive(Clone, Debug)]
pub struct Generator {
    class: GeneratorClass,
    alpha: f64,
    r: RationalFn,
    k: SymmetryOrder,
    q: usize,
    sym_const: Option<C64>,
    w: Vec<C64>,
    decay: DecayEnvelope,
    // evaluation helpers: P = z^m0 · p_low, and the reversed P, Q
    m0: usize,
    p_low: ComplexPoly,
    p_rev: ComplexPoly,
    q_rev: ComplexPoly,
    deg_diff: i64,
}

/// Serializable snapshot of a generator's invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorSummary {
    pub class: GeneratorClass,
    pub alpha: f64,
    pub p: ComplexPoly,
    pub q_poly: ComplexPoly,
    pub k: SymmetryOrder,
    pub q: usize,
    pub sym_const: Option<C64>,
    pub poles: Vec<Pole>,
    pub log_poles: Vec<C64>,
    pub decay: DecayEnvelope,
}

/// `ln w` with the argument taken in `(0, 2π)`.
pub fn log_upper(w: C64) -> C64 {
    let mut arg = w.im.atan2(w.re);
    if arg <= 0.0 {
        arg += TAU;
    }
    C64::new(w.norm().ln(), arg)
}

pub fn make_generator(
    class: GeneratorClass,
    alpha: f64,
    p: ComplexPoly,
    q: ComplexPoly,
) -> Result<Generator> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")));
    }
    let deg_p = p.degree().ok_or(Error::ZeroPolynomial)?;
    let deg_q = q.degree().ok_or(Error::ZeroPolynomial)?;

    if class == GeneratorClass::K {
        let p0 = p.coeff(0);
        if p0.norm() > ZERO_AT_ORIGIN_TOL * p.max_coeff() {
            return Err(Error::ConditionB {
                value: format!("{p0}"),
            });
        }
        if deg_p < 1 || deg_p >= deg_q {
            return Err(Error::ConditionA { deg_p, deg_q });
        }
    }
    if deg_q >= 1 {
        for root in poly_roots(&q)? {
            let r = root.value;
            if r.im.abs() < REAL_AXIS_TOL && r.re >= -REAL_AXIS_TOL {
                return Err(Error::ConditionC {
                    root: format!("{r}"),
                });
            }
        }
    }
    let r = RationalFn::new(p.clone(), q.clone())?;

    let k = support_gcd(&p, &q);
    if class == GeneratorClass::K && k == SymmetryOrder::Unbounded {
        return Err(Error::UnboundedSymmetry);
    }
    let sym_const = k.finite().map(|k| {
        let j_p = p.support()[0] as f64;
        let j_q = q.support()[0] as f64;
        C64::from_polar(1.0, TAU * (j_p - j_q) / k as f64)
    });

    let w = r
        .poles()
        .iter()
        .flat_map(|pole| std::iter::repeat_n(log_upper(pole.location), pole.order))
        .collect();

    let m0 = p.valuation();
    let mut g = Generator {
        class,
        alpha,
        k,
        q: deg_q,
        sym_const,
        w,
        decay: DecayEnvelope {
            kind: EnvelopeKind::Exponential,
            rate: 1.0,
            amp: 1.0,
            slope: 0.0,
            poly_growth: 0,
        },
        m0,
        p_low: p.shift_down(m0),
        p_rev: p.reversed(),
        q_rev: q.reversed(),
        deg_diff: deg_p as i64 - deg_q as i64,
        r,
    };
    g.decay = g.fit_envelope();
    Ok(g)
}

impl Generator {
    /// The hyperbolic secant generator `𝓗(αx) = e^{αx}/(e^{2αx}+1)`.
    pub fn hsec(alpha: f64) -> Result<Self> {
        hsec_combination(alpha, &[C64::new(1.0, 0.0)], &[C64::new(0.0, 0.0)])
    }

    /// The Gaussian `e^{-αx²/2}`.
    pub fn gaussian(alpha: f64) -> Result<Self> {
        make_generator(GeneratorClass::C, alpha, ComplexPoly::one(), ComplexPoly::one())
    }

    pub fn class(&self) -> GeneratorClass {
        self.class
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rational(&self) -> &RationalFn {
        &self.r
    }

    pub fn k(&self) -> SymmetryOrder {
        self.k
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn sym_const(&self) -> Option<C64> {
        self.sym_const
    }

    /// Log-poles `ln w` with `0 < Im < 2π`, repeated by pole order.
    pub fn log_poles(&self) -> &[C64] {
        &self.w
    }

    pub fn decay(&self) -> &DecayEnvelope {
        &self.decay
    }

    /// `q/k` for class K, `None` otherwise.
    pub fn critical_ratio(&self) -> Option<f64> {
        match (self.class, self.k) {
            (GeneratorClass::K, SymmetryOrder::Finite(k)) => Some(self.q as f64 / k as f64),
            _ => None,
        }
    }

    /// True when `G` is real on the real axis (checked on the coefficients).
    pub fn is_real(&self) -> bool {
        let real = |p: &ComplexPoly| p.coeffs().iter().all(|c| c.im == 0.0);
        real(self.r.num()) && real(self.r.den())
    }

    pub fn summary(&self) -> GeneratorSummary {
        GeneratorSummary {
            class: self.class,
            alpha: self.alpha,
            p: self.r.num().clone(),
            q_poly: self.r.den().clone(),
            k: self.k,
            q: self.q,
            sym_const: self.sym_const,
            poles: self.r.poles().to_vec(),
            log_poles: self.w.clone(),
            decay: self.decay,
        }
    }

    /// `G(z)`, or a pole signal.
    pub fn eval(&self, z: C64) -> Evaluation {
        let y = z * self.alpha;
        let gauss = match self.class {
            GeneratorClass::K => C64::new(0.0, 0.0),
            GeneratorClass::C => -z * z * (self.alpha / 2.0),
        };
        if y.re <= 0.0 {
            let u = y.exp();
            let qv = self.r.den().eval(u);
            if qv.norm() <= POLE_TOL * self.r.den().scale_at(u) {
                return Evaluation::Pole;
            }
            let ratio = self.p_low.eval(u) / qv;
            Evaluation::Value(ratio * (y * self.m0 as f64 + gauss).exp())
        } else {
            let v = (-y).exp();
            let qv = self.q_rev.eval(v);
            if qv.norm() <= POLE_TOL * self.q_rev.scale_at(v) {
                return Evaluation::Pole;
            }
            let ratio = self.p_rev.eval(v) / qv;
            Evaluation::Value(ratio * (y * self.deg_diff as f64 + gauss).exp())
        }
    }

    /// `G(x)` on the real axis, where no poles occur.
    pub fn eval_real(&self, x: f64) -> C64 {
        self.eval(C64::new(x, 0.0))
            .value()
            .expect("condition (C) excludes real-axis poles")
    }

    /// `ln|R(e^y)|` for real `y`, computed without overflow.
    fn log_abs_r(&self, y: f64) -> f64 {
        if y <= 0.0 {
            let u = C64::new(y.exp(), 0.0);
            self.m0 as f64 * y + self.p_low.eval(u).norm().ln() - self.r.den().eval(u).norm().ln()
        } else {
            let v = C64::new((-y).exp(), 0.0);
            self.deg_diff as f64 * y + self.p_rev.eval(v).norm().ln()
                - self.q_rev.eval(v).norm().ln()
        }
    }

    fn fit_envelope(&self) -> DecayEnvelope {
        let a = self.alpha;
        let half = 30f64.max(40.0 / a);
        let samples = 12_001;
        let (kind, rate, slope, growth) = match self.class {
            GeneratorClass::K => {
                let right = (-self.deg_diff) as f64;
                let left = self.m0 as f64;
                (EnvelopeKind::Exponential, a * right.min(left), 0.0, 0)
            }
            GeneratorClass::C => {
                let g = self.deg_diff.max(0) as usize;
                (EnvelopeKind::Gaussian, a, a * g as f64, g)
            }
        };
        // sup of |G(x)| divided by the shape, in log form
        let mut log_sup = f64::NEG_INFINITY;
        for i in 0..samples {
            let x = -half + 2.0 * half * i as f64 / (samples - 1) as f64;
            let shape = match kind {
                EnvelopeKind::Exponential => rate * x.abs(),
                EnvelopeKind::Gaussian => -slope * x.abs(),
            };
            let v = self.log_abs_r(a * x) + shape;
            if v.is_finite() {
                log_sup = log_sup.max(v);
            }
        }
        DecayEnvelope {
            kind,
            rate,
            amp: 1.02 * log_sup.exp(),
            slope,
            poly_growth: growth,
        }
    }
}

/// `Σ a_j 𝓗(α(x - b_j)) = Σ a_j e^{αb_j} u/(u² + e^{2αb_j})` with `u = e^{αx}`.
pub fn hsec_combination(alpha: f64, a: &[C64], b: &[C64]) -> Result<Generator> {
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "hsec combination needs matching nonempty a and b (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    if a.iter().any(|aj| *aj == C64::new(0.0, 0.0)) {
        return Err(Error::InvalidInput("hsec combination coefficient is zero".into()));
    }
    let beta: Vec<C64> = b.iter().map(|bj| (bj * (2.0 * alpha)).exp()).collect();
    for (j, bt) in beta.iter().enumerate() {
        if bt.im.abs() <= REAL_AXIS_TOL * bt.norm() && bt.re <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "e^(2 alpha b_{j}) = {bt} lies on (-inf, 0]"
            )));
        }
        for (l, other) in beta.iter().enumerate().skip(j + 1) {
            if (bt - other).norm() <= COINCIDENT_TOL * bt.norm().max(other.norm()) {
                return Err(Error::InvalidInput(format!(
                    "b_{j} and b_{l} coincide modulo the period"
                )));
            }
        }
    }
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let factor = |bt: C64| ComplexPoly::new(vec![bt, zero, one]);
    let mut q = ComplexPoly::one();
    for bt in &beta {
        q = q.mul(&factor(*bt)?)?;
    }
    let mut p = ComplexPoly::zero();
    for (j, (aj, bj)) in a.iter().zip(b).enumerate() {
        let mut term = ComplexPoly::monomial(aj * (bj * alpha).exp(), 1)?;
        for (l, bt) in beta.iter().enumerate() {
            if l != j {
                term = term.mul(&factor(*bt)?)?;
            }
        }
        p = p.add(&term)?;
    }
    make_generator(GeneratorClass::K, alpha, p, q)
}

/// `e^{-αx²/2} (a0 + Σ a_j/(e^{αx} + e^{αb_j}))` with real `b_j`.
pub fn gaussian_combination(alpha: f64, a0: C64, a: &[C64], b: &[f64]) -> Result<Generator> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "gaussian combination needs matching a and b (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite b".into()));
    }
    if a.iter().any(|aj| *aj == C64::new(0.0, 0.0)) {
        return Err(Error::InvalidInput("gaussian combination coefficient is zero".into()));
    }
    let e: Vec<f64> = b.iter().map(|bj| (alpha * bj).exp()).collect();
    for j in 0..e.len() {
        for l in (j + 1)..e.len() {
            if (e[j] - e[l]).abs() <= COINCIDENT_TOL * e[j].max(e[l]) {
                return Err(Error::InvalidInput(format!("b_{j} and b_{l} coincide")));
            }
        }
    }
    let one = C64::new(1.0, 0.0);
    let lin = |ej: f64| ComplexPoly::new(vec![C64::new(ej, 0.0), one]);
    let mut q = ComplexPoly::one();
    for ej in &e {
        q = q.mul(&lin(*ej)?)?;
    }
    let mut p = q.scale(a0);
    for (j, aj) in a.iter().enumerate() {
        let mut term = ComplexPoly::constant(*aj);
        for (l, el) in e.iter().enumerate() {
            if l != j {
                term = term.mul(&lin(*el)?)?;
            }
        }
        p = p.add(&term)?;
    }
    make_generator(GeneratorClass::C, alpha, p, q)
}

/// Closed-form transform of the hyperbolic secant generator at `α`:
/// `(π/(2α)) sech(π² t/α)`.
pub fn hsec_transform(alpha: f64, t: f64) -> f64 {
    PI / (2.0 * alpha) / (PI * PI * t / alpha).cosh()
}
