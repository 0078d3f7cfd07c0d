//! Separated point sets on the line: periodic patterns and explicit windows.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance for window membership and closed-interval counting.
pub const POINT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetRepr {
    /// `{o_i + mT}` with `0 <= o_0 < ... < o_{n-1} < T`.
    Periodic { offsets: Vec<f64>, period: f64 },
    /// Finitely many sorted points inside `[window.0, window.1]`.
    Explicit { points: Vec<f64>, window: (f64, f64) },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatedSet {
    repr: SetRepr,
    separation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub d_minus: f64,
    pub d_plus: f64,
    pub exact: bool,
    /// Window radius for explicit estimates.
    pub radius: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DensityRadius {
    Exact,
    Radius(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SetTransform {
    Translate(f64),
    Scale(f64),
    Restrict(f64, f64),
}

impl SeparatedSet {
    pub fn periodic(offsets: &[f64], period: f64) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidInput(format!("period must be positive, got {period}")));
        }
        if offsets.is_empty() || offsets.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidInput("periodic set needs finite offsets".into()));
        }
        let mut offs: Vec<f64> = offsets
            .iter()
            .map(|o| {
                let r = o.rem_euclid(period);
                if period - r <= POINT_TOL * period { 0.0 } else { r }
            })
            .collect();
        offs.sort_by(f64::total_cmp);
        let n = offs.len();
        let mut sep = offs[0] + period - offs[n - 1];
        for w in offs.windows(2) {
            sep = sep.min(w[1] - w[0]);
        }
        if !(sep > POINT_TOL) {
            return Err(Error::InvalidInput("offsets are not separated modulo the period".into()));
        }
        Ok(Self {
            repr: SetRepr::Periodic { offsets: offs, period },
            separation: sep,
        })
    }

    /// `step·ℤ + shift`.
    pub fn lattice(step: f64, shift: f64) -> Result<Self> {
        Self::periodic(&[shift], step)
    }

    pub fn integers() -> Self {
        Self::lattice(1.0, 0.0).expect("ℤ is a valid lattice")
    }

    pub fn explicit(points: &[f64], window: (f64, f64)) -> Result<Self> {
        let (a, b) = window;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput(format!("invalid window [{a}, {b}]")));
        }
        if points.is_empty() {
            return Err(Error::InvalidInput("explicit set needs at least one point".into()));
        }
        let mut pts = points.to_vec();
        pts.sort_by(f64::total_cmp);
        for &x in &pts {
            if !(x >= a - POINT_TOL && x <= b + POINT_TOL) {
                return Err(Error::OutsideWindow { x, lo: a, hi: b });
            }
        }
        let sep = pts.windows(2).map(|w| w[1] - w[0]).fold(b - a, f64::min);
        if !(sep > POINT_TOL) {
            return Err(Error::InvalidInput("points are not separated".into()));
        }
        Ok(Self {
            repr: SetRepr::Explicit { points: pts, window },
            separation: sep,
        })
    }

    pub fn repr(&self) -> &SetRepr {
        &self.repr
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.repr, SetRepr::Periodic { .. })
    }

    /// Points in `[lo, hi]` (with tolerance), ascending, each tagged by a
    /// global index: `m·n + i` for the periodic point `o_i + mT`, the list
    /// position for explicit sets.
    pub fn indexed_points_in(&self, lo: f64, hi: f64) -> Vec<(i64, f64)> {
        let lo = lo - POINT_TOL;
        let hi = hi + POINT_TOL;
        match &self.repr {
            SetRepr::Periodic { offsets, period } => {
                let n = offsets.len() as i64;
                let m_lo = ((lo - offsets[n as usize - 1]) / period).floor() as i64;
                let m_hi = ((hi - offsets[0]) / period).ceil() as i64;
                let mut out = Vec::new();
                for m in m_lo..=m_hi {
                    for (i, o) in offsets.iter().enumerate() {
                        let x = o + m as f64 * period;
                        if x >= lo && x <= hi {
                            out.push((m * n + i as i64, x));
                        }
                    }
                }
                out
            }
            SetRepr::Explicit { points, .. } => points
                .iter()
                .enumerate()
                .filter(|(_, &x)| x >= lo && x <= hi)
                .map(|(i, &x)| (i as i64, x))
                .collect(),
        }
    }

    pub fn points_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.indexed_points_in(lo, hi).into_iter().map(|(_, x)| x).collect()
    }

    pub fn transform(&self, op: SetTransform) -> Result<Self> {
        match (op, &self.repr) {
            (SetTransform::Translate(d), SetRepr::Periodic { offsets, period }) => {
                let shifted: Vec<f64> = offsets.iter().map(|o| o + d).collect();
                Self::periodic(&shifted, *period)
            }
            (SetTransform::Translate(d), SetRepr::Explicit { points, window }) => {
                let shifted: Vec<f64> = points.iter().map(|x| x + d).collect();
                Self::explicit(&shifted, (window.0 + d, window.1 + d))
            }
            (SetTransform::Scale(a), _) if !(a > 0.0 && a.is_finite()) => Err(
                Error::InvalidInput(format!("scale factor must be positive, got {a}")),
            ),
            (SetTransform::Scale(a), SetRepr::Periodic { offsets, period }) => {
                let scaled: Vec<f64> = offsets.iter().map(|o| o * a).collect();
                Self::periodic(&scaled, period * a)
            }
            (SetTransform::Scale(a), SetRepr::Explicit { points, window }) => {
                let scaled: Vec<f64> = points.iter().map(|x| x * a).collect();
                Self::explicit(&scaled, (window.0 * a, window.1 * a))
            }
            (SetTransform::Restrict(lo, hi), _) => {
                let (lo, hi) = match &self.repr {
                    SetRepr::Explicit { window, .. } => (lo.max(window.0), hi.min(window.1)),
                    SetRepr::Periodic { .. } => (lo, hi),
                };
                if !(lo < hi) {
                    return Err(Error::EmptyRestriction { count: 0, needed: 2 });
                }
                let pts = self.points_in(lo, hi);
                if pts.len() < 2 {
                    return Err(Error::EmptyRestriction {
                        count: pts.len(),
                        needed: 2,
                    });
                }
                let clamped: Vec<f64> = pts.iter().map(|x| x.clamp(lo, hi)).collect();
                Self::explicit(&clamped, (lo, hi))
            }
        }
    }

    pub fn beurling_densities(&self, radius: DensityRadius) -> Result<DensityReport> {
        match (&self.repr, radius) {
            (SetRepr::Periodic { offsets, period }, _) => {
                let d = offsets.len() as f64 / period;
                Ok(DensityReport {
                    d_minus: d,
                    d_plus: d,
                    exact: true,
                    radius: None,
                })
            }
            (SetRepr::Explicit { window, .. }, DensityRadius::Exact) => {
                self.beurling_densities(DensityRadius::Radius((window.1 - window.0) / 2.0))
            }
            (SetRepr::Explicit { points, window }, DensityRadius::Radius(r)) => {
                let half = (window.1 - window.0) / 2.0;
                if !(r > 0.0) || r > half * (1.0 + 1e-12) {
                    return Err(Error::WindowTooLarge { radius: r, half });
                }
                let r = r.min(half);
                let (lo, hi) = (window.0 + r, window.1 - r);
                // the count is piecewise constant with breakpoints at x ± r
                let mut marks: Vec<f64> = vec![lo, hi];
                for &p in points {
                    marks.extend([p - r, p + r, p]);
                }
                marks.retain(|x| *x >= lo && *x <= hi);
                marks.sort_by(f64::total_cmp);
                let mut centres = marks.clone();
                centres.extend(marks.windows(2).map(|w| (w[0] + w[1]) / 2.0));
                let count = |x: f64| {
                    points
                        .iter()
                        .filter(|&&p| p >= x - r - POINT_TOL && p <= x + r + POINT_TOL)
                        .count()
                };
                let (mut cmin, mut cmax) = (usize::MAX, 0usize);
                for &x in &centres {
                    let c = count(x);
                    cmin = cmin.min(c);
                    cmax = cmax.max(c);
                }
                Ok(DensityReport {
                    d_minus: cmin as f64 / (2.0 * r),
                    d_plus: cmax as f64 / (2.0 * r),
                    exact: false,
                    radius: Some(r),
                })
            }
        }
    }

    /// Largest number of points in a closed unit interval.
    pub fn covering_constant(&self) -> usize {
        let starts: Vec<f64> = match &self.repr {
            SetRepr::Periodic { offsets, .. } => offsets.clone(),
            SetRepr::Explicit { points, .. } => points.clone(),
        };
        starts
            .iter()
            .map(|&x| self.points_in(x, x + 1.0).len())
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_densities() {
        let z = SeparatedSet::integers();
        let d = z.beurling_densities(DensityRadius::Exact).unwrap();
        assert_eq!((d.d_minus, d.d_plus, d.exact), (1.0, 1.0, true));
        let s = SeparatedSet::periodic(&[0.0, 0.3], 1.0).unwrap();
        assert_eq!(s.beurling_densities(DensityRadius::Exact).unwrap().d_minus, 2.0);
        let l = SeparatedSet::lattice(0.8, 0.0).unwrap();
        assert!((l.beurling_densities(DensityRadius::Exact).unwrap().d_plus - 1.25).abs() < 1e-15);
    }

    #[test]
    fn covering_constants() {
        assert_eq!(SeparatedSet::integers().covering_constant(), 2);
        assert_eq!(SeparatedSet::lattice(2.0, 0.0).unwrap().covering_constant(), 1);
        assert_eq!(SeparatedSet::periodic(&[0.0, 0.5], 1.0).unwrap().covering_constant(), 3);
    }

    #[test]
    fn transforms() {
        let t = SeparatedSet::integers().transform(SetTransform::Translate(0.25)).unwrap();
        assert_eq!(t.repr(), &SetRepr::Periodic { offsets: vec![0.25], period: 1.0 });
        let s = SeparatedSet::integers().transform(SetTransform::Scale(0.8)).unwrap();
        assert!((s.beurling_densities(DensityRadius::Exact).unwrap().d_minus - 1.25).abs() < 1e-15);
        let r = SeparatedSet::periodic(&[0.0, 0.3], 1.0)
            .unwrap()
            .transform(SetTransform::Restrict(-5.0, 5.0))
            .unwrap();
        // 11 integers and 10 points of ℤ + 0.3 lie in [-5, 5]
        match r.repr() {
            SetRepr::Explicit { points, .. } => assert_eq!(points.len(), 21),
            _ => panic!("restriction must be explicit"),
        }
        assert!(SeparatedSet::integers().transform(SetTransform::Restrict(0.2, 0.7)).is_err());
    }

    #[test]
    fn explicit_window_density() {
        let r = SeparatedSet::integers().transform(SetTransform::Restrict(-50.0, 50.0)).unwrap();
        let d = r.beurling_densities(DensityRadius::Radius(10.0)).unwrap();
        // closed windows of length 20 hold 20 or 21 integers
        assert_eq!(d.d_minus, 1.0);
        assert_eq!(d.d_plus, 21.0 / 20.0);
        assert!(r.beurling_densities(DensityRadius::Radius(60.0)).is_err());
    }
}
