//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while building states, conditioning
/// mixtures, evaluating measures, or (de)serializing them.
#[derive(Debug, Error)]
pub enum Error {
    /// A state or layout was requested with zero modes.
    #[error("mode count must be at least 1")]
    ZeroModes,

    /// Vector/matrix dimensions do not match the expected 2n layout.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A mode index points outside the state.
    #[error("mode index {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    /// A two-mode operation was given the same mode twice.
    #[error("mode indices must be distinct, got {0} twice")]
    EqualModes(usize),

    /// A matrix that must be symmetric is not (beyond tolerance).
    #[error("matrix is not symmetric: max asymmetry {0:.3e}")]
    NotSymmetric(f64),

    /// A covariance matrix violates the uncertainty relation V + iΩ ⪰ 0.
    #[error("covariance matrix is not physical: min eigenvalue of V + iΩ is {0:.3e}")]
    NotPhysical(f64),

    /// An operation requiring a pure state received a mixed one.
    #[error("state is not pure: symplectic eigenvalue deviates from 1 by {0:.3e}")]
    NotPure(f64),

    /// A covariance matrix that must be invertible is singular.
    #[error("covariance matrix is singular or nearly singular")]
    SingularCovariance,

    /// partial_trace was asked to keep no modes.
    #[error("set of kept modes must be nonempty")]
    EmptyKeepSet,

    /// A mixture was built with no branches, or pruning removed all of them.
    #[error("mixture has no branches")]
    EmptyMixture,

    /// A branch weight is zero or negative.
    #[error("branch weight must be positive, got {0}")]
    NonPositiveWeight(f64),

    /// Branches of one mixture disagree on the mode count.
    #[error("all branches must share one mode count: found {0} and {1}")]
    MixedModeCounts(usize, usize),

    /// An operation requiring a normalized mixture received a subnormalized one.
    #[error("mixture is subnormalized (total weight {0}); renormalize first")]
    NotNormalized(f64),

    /// The measurement functional ℓ is zero or touches unmeasured modes.
    #[error("homodyne functional must be nonzero and supported on the measured modes")]
    BadFunctional,

    /// The acceptance interval is empty (hi < lo).
    #[error("acceptance interval ({lo}, {hi}] is empty")]
    EmptyInterval { lo: f64, hi: f64 },

    /// Post-selection succeeded with probability (numerically) zero.
    #[error("total success probability is zero; nothing to condition on")]
    ZeroSuccessProbability,

    /// A protocol parameter is outside its admissible range.
    #[error("invalid protocol parameter {name}: {reason}")]
    BadParameter { name: &'static str, reason: String },

    /// Number-basis oracle cutoff too small to represent the state.
    #[error("Fock cutoff {cutoff} too small: norm deficit {deficit:.3e} exceeds {tol:.1e}")]
    CutoffTooSmall { cutoff: usize, deficit: f64, tol: f64 },

    /// Underlying file I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A state/mixture file violates the plain-text format.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
