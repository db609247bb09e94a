//! Fredholm modules over `C(X)` and `C(X) ⋊ Z`, their index pairings, and
//! the diagnostics around them.

pub mod choice;
pub mod even;
pub mod odd;
pub mod rave;
pub mod routes;
pub mod summability;
pub mod synthesis;

use thiserror::Error;

use crate::af_embedding::EmbeddingError;
use crate::dynamics::DynamicsError;
use crate::k_theory::KTheoryError;
use crate::symbolic::{Point, SymbolicError, Word};

pub use choice::{choice_eval, ChoiceFunction, ChoiceRegistry, ChoiceRule, ChoiceSpec};
pub use even::{
    even_bp_pairing, even_bp_pairing_of, even_commutator, even_rank_pairing, even_trace_formula, ChoicePair,
};
pub use odd::{
    odd_commutator, odd_fredholm_index, odd_pairing, odd_rank_bound, odd_trace_formula, unbounded_lift_check,
    OddCycleSpec, Side,
};
pub use rave::{rave_af_pairing, rave_fredholm_index};
pub use routes::{routes_agree, EvenRoute, OddInput, OddRoute, RouteRegistry};
pub use summability::{geometric_bound, summability_report, DiracExponent, SummabilityReport, Verdict, WeightedDirac};
pub use synthesis::{synthesize_index, verify_synthesis, ComponentTable, SynthesisDescription};

/// Global sign applied to the even trace formula so it matches the count.
pub const EVEN_CALIBRATION: i64 = 1;
/// Global sign applied to the odd trace formula so it matches the index.
pub const ODD_CALIBRATION: i64 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FredholmError {
    #[error("choice function maps {word:?} to {point:?}, outside its cylinder")]
    CylinderCondition { word: Word, point: Point },
    #[error("unknown choice rule `{0}`")]
    UnknownRule(String),
    #[error("choice rule: {0}")]
    BadRule(String),
    #[error("unknown route `{0}`")]
    UnknownRoute(String),
    #[error("function is not a projection")]
    NotProjection,
    #[error("order {order} must be {expected}")]
    OrderParity { order: usize, expected: &'static str },
    #[error("truncation level {level} is below the required {needed}")]
    LevelTooLow { level: usize, needed: usize },
    #[error("window {window} is too small; need at least {needed}")]
    WindowTooSmall { window: usize, needed: usize },
    #[error("truncated index is not stable: {first} at window {window}, {second} at window {}", window + 2)]
    Unstable { window: usize, first: i64, second: i64 },
    #[error("element is not unitary on the truncation (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("moving non-constant coefficients needs a dynamical system")]
    NoDynamics,
    #[error("trace {re} + {im}i is not an integer")]
    NonInteger { re: f64, im: f64 },
    #[error("route not applicable: {0}")]
    NotApplicable(String),
    #[error("target cannot be realized: {0}")]
    Unrealizable(String),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    KTheory(#[from] KTheoryError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// Round a trace value that must be an integer.
pub fn integer_value(z: crate::linalg::C64, tol: f64) -> Result<i64, FredholmError> {
    let r = z.re.round();
    if (z.re - r).abs() > tol || z.im.abs() > tol {
        return Err(FredholmError::NonInteger { re: z.re, im: z.im });
    }
    Ok(r as i64)
}
