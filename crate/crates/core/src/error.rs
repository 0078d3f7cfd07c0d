use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial degree {0} exceeds the supported maximum of 64")]
    DegreeTooLarge(usize),

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("root finder did not converge for polynomial {poly}")]
    RootsNotConverged { poly: String },

    #[error("numerator and denominator share a root near {root}")]
    NotCoprime { root: String },

    #[error("condition (A) violated: need 1 <= deg P < deg Q, got deg P = {deg_p}, deg Q = {deg_q}")]
    ConditionA { deg_p: usize, deg_q: usize },

    #[error("condition (B) violated: P(0) = {value} is not zero")]
    ConditionB { value: String },

    #[error("condition (C) violated: Q has a root at {root} on [0, inf)")]
    ConditionC { root: String },

    #[error("symmetry order is unbounded (P and Q are both monomials)")]
    UnboundedSymmetry,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not converge (achieved error estimate {achieved:e})")]
    Quadrature { achieved: f64 },

    #[error("symmetric eigensolver failed: {0}")]
    Eigen(String),

    #[error("window radius {radius} exceeds half the window length {half}")]
    WindowTooLarge { radius: f64, half: f64 },

    #[error("restriction leaves {count} points, need at least {needed}")]
    EmptyRestriction { count: usize, needed: usize },

    #[error("evaluation point {x} is outside the declared window [{lo}, {hi}]")]
    OutsideWindow { x: f64, lo: f64, hi: f64 },

    #[error("generator has a pole on the real line at x = {0}")]
    RealPole(f64),

    #[error("linear system is singular after {attempts} attempts (condition estimate {condition:e}); matrix rows: {matrix}")]
    SingularSystem {
        attempts: usize,
        condition: f64,
        matrix: String,
    },

    #[error("zero search found {found} sign changes, expected at least {expected}: {diagnostics}")]
    MissingSignChanges {
        found: usize,
        expected: usize,
        diagnostics: String,
    },

    #[error("finite section is rank deficient (condition estimate {condition:e})")]
    RankDeficient { condition: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}
