//! Crate-wide error type.
//!
//! Panics are reserved for violated internal invariants (out-of-range
//! coefficient access, order bookkeeping bugs); everything a caller can
//! trigger with legitimate but unusable input surfaces as an `Error`.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Reciprocal or composition asked of a series whose relevant
    /// coefficient blocks the operation.
    #[error("series is not invertible: zero constant term")]
    NotInvertible,

    /// Substitution argument has a nonzero constant term.
    #[error("composition argument has a nonzero constant term")]
    NonzeroConstantTerm,

    /// Bell polynomial called with a malformed (p, q, argument-list) triple.
    #[error("bell polynomial arguments invalid: {0}")]
    BellArguments(String),

    /// Input document could not be interpreted.
    #[error("malformed field document: {0}")]
    Document(String),

    /// Tangency condition fails on one side: no odd-order first nonzero
    /// x-derivative of the normal component within the declared order.
    #[error("not a tangential singularity at this order ({side} side: {detail})")]
    NotTangential { side: &'static str, detail: String },

    /// Contact-sign condition fails: the flow bends away from the switching
    /// line instead of turning back.
    #[error("visible contact ({side} side)")]
    VisibleContact { side: &'static str },

    /// Both components cross the switching line in the same direction.
    #[error("no first-return (same crossing direction)")]
    NoFirstReturn,

    /// A quantity divisible by construction failed its divisibility check.
    #[error("inconsistent field/classification: {0}")]
    InconsistentField(String),

    /// A flow-coefficient depth beyond what the declared order supports.
    #[error("requested depth {requested} too large for truncation order {order} (maximum {max})")]
    DepthTooLarge {
        requested: usize,
        order: usize,
        max: usize,
    },

    /// Requested output order exceeds what the document order can certify.
    #[error(
        "requested order {requested} exceeds the maximum {max} certified by document order {order}"
    )]
    InsufficientOrder {
        requested: usize,
        order: usize,
        max: usize,
    },

    /// The return-map recursion hit a vanishing leading coefficient.
    #[error("degenerate recursion denominator (vanishing leading return-map coefficient)")]
    DegenerateDenominator,

    /// A series claimed to be a half-return map does not start as one.
    #[error("not a half-return map: expansion must start at -x")]
    NotHalfReturnShaped,

    /// Period constants requested for a field whose two half-return maps
    /// disagree.
    #[error("not a center to requested order (first mismatch at index {first_mismatch_index})")]
    NotACenter { first_mismatch_index: usize },

    /// Simulation configuration failed validation.
    #[error("invalid simulation configuration: {0}")]
    BadConfig(String),

    /// Numeric orbit left the validity neighborhood before returning.
    #[error("orbit escaped the validity neighborhood (|x| or |y| exceeded {bound})")]
    OrbitEscaped { bound: f64 },

    /// Step budget exhausted before the return event was located.
    #[error("step budget exhausted before the return event ({max_steps} steps)")]
    StepBudgetExhausted { max_steps: usize },

    /// Initial point outside the half-line where orbits are measured.
    #[error("initial point must satisfy x0 > 0 (got {x0})")]
    NonPositiveStart { x0: f64 },
}
