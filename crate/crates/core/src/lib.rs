//! Sampling and stability analysis for shift-invariant spaces.
//!
//! The crate works with two generator families built from a rational
//! function `R = P/Q`:
//!
//! * class `K(α)`: `G(z) = R(e^{αz})`, exponentially decaying (the
//!   hyperbolic secant `e^x/(e^{2x}+1)` is the prototype);
//! * class `C(α)`: `G(z) = e^{-αz²/2} R(e^{αz})`, Gaussian decaying.
//!
//! On top of exact polynomial/rational arithmetic it offers Fourier
//! transforms (residue sums and quadrature), the integer-shift stability
//! screen, pole-collision conditions, Beurling densities of separated
//! sets, certified synthesis of `Σ c_γ G(x-γ)`, finite-section frame bound
//! estimation, Gabor frame sweeps over semi-regular lattices and the
//! critical-density vanishing constructions.

pub mod config;
pub mod counterexample;
pub mod error;
pub mod frames;
pub mod generator;
pub mod linalg;
pub mod poly;
pub mod quad;
pub mod sets;
pub mod spectral;
pub mod synthesis;
pub mod zoo;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use generator::{DecayEnvelope, Generator, GeneratorClass};
pub use poly::{ComplexPoly, Pole, RationalFn, Root, SymmetryOrder};
pub use sets::{DensityReport, SeparatedSet};
