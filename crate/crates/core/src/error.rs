//! Crate-wide error type.

use thiserror::Error;

/// Every failure the engine reports. Variants map one-to-one onto the documented error
/// conditions of the public operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A contract with `debtor = creditor`, a CDS whose participants are not pairwise
    /// distinct, or a negative notional.
    #[error("malformed contract: {0}")]
    MalformedContract(String),
    /// A bank id that does not exist in the system.
    #[error("unknown bank `{0}`")]
    UnknownBank(String),
    /// Invalid system data other than contracts (duplicate ids, negative assets, ...).
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    /// A recovery vector with the wrong length or out-of-range entries.
    #[error("invalid recovery vector: {0}")]
    InvalidVector(String),
    /// An exact comparison was requested on floating vectors.
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    /// Surd arithmetic across different radicands.
    #[error("radicand mismatch: {0}")]
    RadicandMismatch(String),
    /// Text that could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// I/O failure (message only, to keep the error cloneable).
    #[error("i/o error: {0}")]
    Io(String),

    /// The auxiliary graph contains a directed cycle.
    #[error("system is not acyclic")]
    NotAcyclic,
    /// A CDS debtor holds debt contracts or CDSes on several reference banks.
    #[error("dedicated CDS debtor property violated: {0}")]
    NotDedicated(String),
    /// The system violates the non-degeneracy conditions.
    #[error("system is degenerate: {0}")]
    Degenerate(String),
    /// Branch enumeration would exceed the configured cap.
    #[error("too many min-expressions: {count} exceeds the cap of {cap}")]
    TooManyBranches {
        /// Number of min-expressions in the piecewise-linear map.
        count: usize,
        /// Configured maximum.
        cap: usize,
    },
    /// The auxiliary graph has a weakly switched cycle.
    #[error("weakly switched cycle present: {0}")]
    WeaklySwitchedPresent(String),
    /// No exact solver applies to produce a reference solution.
    #[error("no exact reference solution available: {0}")]
    NoExactReference(String),
    /// The witness is not a directed cycle of the graph.
    #[error("not a cycle: {0}")]
    NotACycle(String),
    /// The witness is not strongly switched.
    #[error("cycle is not strongly switched: {0}")]
    NotStronglySwitched(String),

    /// Square root of a negative value during circuit evaluation.
    #[error("negative square-root operand at gate `{0}`")]
    NegativeSqrtOperand(String),
    /// Structural problem in a circuit.
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    /// The circuit does not map the unit cube into itself.
    #[error("circuit is not self-mapping on the unit cube: {0}")]
    NotSelfMapping(String),

    /// Invalid gadget or solver parameter.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    /// Degenerate gadgets are only built on explicit request.
    #[error("gadget kind {0} is degenerate and requires the allow-degenerate flag")]
    DegenerateKindRequiresFlag(String),
    /// The harness solution disagrees with the gadget's arithmetic semantics.
    #[error("gadget semantics mismatch: {0}")]
    SemanticsMismatch(String),
    /// The circuit handed to the compiler is not normalized.
    #[error("circuit is not normalized: {0}")]
    NotNormalized(String),
    /// Internal consistency failure while compiling.
    #[error("compiled network is degenerate: {0}")]
    DegenerateOutput(String),

    /// Attempt to close or extend an already closed fragment cycle.
    #[error("fragment string is already closed")]
    AlreadyClosed,
    /// A g3 fragment is followed by another g3 or a d fragment.
    #[error("g3 fragment at position {0} is followed by a g3 or d fragment")]
    G3FollowedByG3OrD(usize),
    /// Rewriting rule not applicable at the requested position.
    #[error("rule {rule} not applicable at position {position}: {reason}")]
    RuleNotApplicable {
        /// Rule number (0–3).
        rule: u8,
        /// Position in the cycle.
        position: usize,
        /// Human-readable reason.
        reason: String,
    },
    /// Unsupported fragment/follower combination for a transfer map.
    #[error("transfer map context mismatch: {0}")]
    ContextMismatch(String),
    /// The cycle cannot be rewritten to copies of g1a′.
    #[error("fragment cycle not rewritable to canonical form: {0}")]
    NotRewritable(String),
}

impl Error {
    /// Whether the error reports an unmet precondition of the requested solver or
    /// construction (as opposed to invalid input).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotAcyclic
                | Error::NotDedicated(_)
                | Error::Degenerate(_)
                | Error::TooManyBranches { .. }
                | Error::WeaklySwitchedPresent(_)
                | Error::NoExactReference(_)
                | Error::NotNormalized(_)
                | Error::NotSelfMapping(_)
                | Error::G3FollowedByG3OrD(_)
                | Error::RuleNotApplicable { .. }
                | Error::ContextMismatch(_)
                | Error::NotRewritable(_)
        )
    }
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
