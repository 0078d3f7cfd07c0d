//! A fixed catalogue of generators used by the tests and the CLI.

use crate::counterexample::{hdef_generator, hsec_difference};
use crate::generator::{gaussian_combination, hsec_combination, make_generator};
use crate::{ComplexPoly, Root, Generator, GeneratorClass, Result, C64};

#[derive(Clone, Debug)]
pub struct ZooEntry {
    pub name: &'static str,
    pub generator: Generator,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn poly(coeffs: &[f64]) -> Result<ComplexPoly> {
    ComplexPoly::from_real(coeffs)
}

fn entry(name: &'static str, generator: Result<Generator>) -> Result<ZooEntry> {
    generator.map(|generator| ZooEntry { name, generator })
}

pub fn class_k_zoo() -> Result<Vec<ZooEntry>> {
    let k = GeneratorClass::K;
    let i = C64::new(0.0, 1.0);
    let w1 = i.exp();
    let w2 = (-2.0 * i).exp();
    vec![
        entry("hsec", Generator::hsec(1.0)),
        entry("hsec_alpha2", Generator::hsec(2.0)),
        entry("z_over_1_plus_z4", make_generator(k, 1.0, poly(&[0.0, 1.0])?, poly(&[1.0, 0.0, 0.0, 0.0, 1.0])?)),
        entry("z_over_1_plus_z_sq", make_generator(k, 1.0, poly(&[0.0, 1.0])?, poly(&[1.0, 2.0, 1.0])?)),
        entry("hsec_pair", hsec_combination(1.0, &[c(1.0), c(1.0)], &[c(0.3), c(0.8)])),
        entry(
            "hsec_triple",
            hsec_combination(1.0, &[c(1.0), c(-0.5), c(0.25)], &[c(0.2), c(0.7), c(1.3)]),
        ),
        entry("hsec_difference", hsec_difference()),
        entry(
            "z2_over_cubic",
            make_generator(k, 1.0, poly(&[0.0, 0.0, 1.0])?, poly(&[1.0, 2.0, 2.0, 1.0])?),
        ),
        entry(
            "complex_poles",
            make_generator(
                k,
                1.0,
                poly(&[0.0, 1.0])?,
                ComplexPoly::from_roots(
                    &[
                        Root { value: w1, multiplicity: 1 },
                        Root { value: w2, multiplicity: 1 },
                    ],
                    c(1.0),
                )?,
            ),
        ),
        entry(
            "triple_pole",
            make_generator(k, 0.5, poly(&[0.0, 2.0, 1.0])?, poly(&[1.0, 3.0, 3.0, 1.0])?),
        ),
    ]
    .into_iter()
    .collect()
}

pub fn class_c_zoo() -> Result<Vec<ZooEntry>> {
    vec![
        entry("gaussian", Generator::gaussian(1.0)),
        entry(
            "gaussian_combo",
            gaussian_combination(1.0, c(1.0), &[c(0.5), c(-0.3)], &[0.25, 0.75]),
        ),
        entry("hdef", hdef_generator().map(|(g, _)| g)),
    ]
    .into_iter()
    .collect()
}

pub fn full_zoo() -> Result<Vec<ZooEntry>> {
    let mut all = class_k_zoo()?;
    all.extend(class_c_zoo()?);
    Ok(all)
}

pub fn by_name(name: &str) -> Result<Generator> {
    full_zoo()?
        .into_iter()
        .find(|e| e.name == name)
        .map(|e| e.generator)
        .ok_or_else(|| crate::Error::InvalidInput(format!("unknown preset {name:?}")))
}
