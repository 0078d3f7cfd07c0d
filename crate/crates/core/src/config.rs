//! Serde wire formats for generators and separated sets.
//!
//! Generators:
//! `{"class": "K", "alpha": 1, "P": [[0,0],[1,0]], "Q": [[1,0],[0,0],[1,0]]}`,
//! `{"hsec_combo": {"a": [1, -1], "b": [0, 1]}, "alpha": 1}`,
//! `{"gauss_combo": {"a0": 1, "a": [0.5], "b": [0.25]}, "alpha": 1}` or
//! `{"preset": "hsec"}`.
//!
//! Sets: `{"periodic": {"offsets": [0, 0.3], "period": 1}}`,
//! `{"lattice": {"step": 0.5}}` or
//! `{"explicit": {"points": [...], "window": [-5, 5]}}`.

use serde::{Deserialize, Serialize};

use crate::generator::{gaussian_combination, hsec_combination, make_generator};
use crate::{ComplexPoly, Error, Generator, GeneratorClass, Result, SeparatedSet, C64};

/// A complex number given either as a bare real or as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CNum {
    Real(f64),
    Pair([f64; 2]),
}

impl From<CNum> for C64 {
    fn from(c: CNum) -> Self {
        match c {
            CNum::Real(x) => C64::new(x, 0.0),
            CNum::Pair([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HsecCombo {
    pub a: Vec<CNum>,
    pub b: Vec<CNum>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussCombo {
    #[serde(default)]
    pub a0: Option<CNum>,
    pub a: Vec<CNum>,
    pub b: Vec<f64>,
}

fn default_alpha() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Explicit {
        class: GeneratorClass,
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(rename = "P")]
        p: ComplexPoly,
        #[serde(rename = "Q")]
        q: ComplexPoly,
    },
    HsecCombo {
        hsec_combo: HsecCombo,
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    GaussCombo {
        gauss_combo: GaussCombo,
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    Preset {
        preset: String,
    },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<Generator> {
        let cvec = |v: &[CNum]| v.iter().map(|&c| C64::from(c)).collect::<Vec<_>>();
        match self {
            Self::Explicit { class, alpha, p, q } => make_generator(*class, *alpha, p.clone(), q.clone()),
            Self::HsecCombo { hsec_combo, alpha } => {
                hsec_combination(*alpha, &cvec(&hsec_combo.a), &cvec(&hsec_combo.b))
            }
            Self::GaussCombo { gauss_combo, alpha } => gaussian_combination(
                *alpha,
                gauss_combo.a0.map_or(C64::new(0.0, 0.0), C64::from),
                &cvec(&gauss_combo.a),
                &gauss_combo.b,
            ),
            Self::Preset { preset } => crate::zoo::by_name(preset),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    Periodic { offsets: Vec<f64>, period: f64 },
    Lattice {
        step: f64,
        #[serde(default)]
        shift: f64,
    },
    Explicit { points: Vec<f64>, window: [f64; 2] },
}

impl SetSpec {
    pub fn build(&self) -> Result<SeparatedSet> {
        match self {
            Self::Periodic { offsets, period } => SeparatedSet::periodic(offsets, *period),
            Self::Lattice { step, shift } => SeparatedSet::lattice(*step, *shift),
            Self::Explicit { points, window } => SeparatedSet::explicit(points, (window[0], window[1])),
        }
    }
}

pub fn parse_generator(json: &str) -> Result<Generator> {
    let spec: GeneratorSpec = serde_json::from_str(json)
        .map_err(|e| Error::InvalidInput(format!("generator config: {e}")))?;
    spec.build()
}

pub fn parse_set(json: &str) -> Result<SeparatedSet> {
    let spec: SetSpec =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("set config: {e}")))?;
    spec.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_generator() {
        let g = parse_generator(r#"{"class":"K","alpha":1,"P":[[0,0],[1,0]],"Q":[[1,0],[0,0],[1,0]]}"#)
            .unwrap();
        let h = Generator::hsec(1.0).unwrap();
        assert!((g.eval_real(0.4) - h.eval_real(0.4)).norm() < 1e-14);
    }

    #[test]
    fn combos_and_presets() {
        let g = parse_generator(r#"{"hsec_combo":{"a":[1,-1],"b":[0,1]}}"#).unwrap();
        assert!(g.eval_real(0.5).norm() < 1e-14);
        parse_generator(r#"{"gauss_combo":{"a0":1,"a":[[0.5,0]],"b":[0.25]},"alpha":2}"#).unwrap();
        parse_generator(r#"{"preset":"gaussian"}"#).unwrap();
        assert!(parse_generator(r#"{"preset":"nope"}"#).is_err());
    }

    #[test]
    fn condition_failures_surface() {
        let e = parse_generator(r#"{"class":"K","alpha":1,"P":[[1,0]],"Q":[[1,0],[0,0],[1,0]]}"#);
        assert!(matches!(e, Err(Error::ConditionB { .. })));
    }

    #[test]
    fn sets() {
        let s = parse_set(r#"{"periodic":{"offsets":[0,0.3],"period":1}}"#).unwrap();
        assert!(s.is_periodic());
        parse_set(r#"{"lattice":{"step":0.5}}"#).unwrap();
        parse_set(r#"{"explicit":{"points":[0,1.5,3],"window":[-1,4]}}"#).unwrap();
        assert!(parse_set(r#"{"periodic":{"offsets":[0]}}"#).is_err());
    }
}
