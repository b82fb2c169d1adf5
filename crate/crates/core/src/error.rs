use thiserror::Error;

use crate::syntax::SyntaxError;

/// Errors raised across the library.
///
/// Variants fall into three families that the command-line front end maps to
/// distinct exit codes: user errors, resource caps (see [`Error::is_budget`]),
/// and internal invariant violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Ackermann index exceeds the bit budget of {budget} bits")]
    IndexOverflow { budget: u64 },
    #[error("{0} is not a Kuratowski pair")]
    NotAPair(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("formula is not pure: {0}")]
    NotPure(String),
    #[error("not a canonical core formula: {0}")]
    NonCanonical(String),
    #[error("set is not the code of a core formula: {0}")]
    Decode(String),
    #[error("stage V_{0} is too large (V_5 needs the explicit override, nothing above is supported)")]
    StageTooLarge(u32),
    #[error("universe of {size} elements exceeds the cap of {max}")]
    SegmentTooLarge { size: usize, max: usize },
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
    #[error("search budget exhausted after {0} enumeration indices")]
    BudgetExceeded(u64),
    #[error("relation is not an equivalence ({property} fails): {witness}")]
    NotEquivalence { property: String, witness: String },
    #[error("{0} is not an element of the universe")]
    ElementNotInUniverse(String),
    #[error("cardinal of a {cardinality}-element set lives at stage V_{stage} and is too large to build")]
    CardinalTooLarge { stage: u32, cardinality: usize },
    #[error("abstraction objects from universes `{left}` and `{right}` cannot be compared")]
    CrossUniverse { left: String, right: String },
    #[error("literal definition needs {nodes} nodes, budget is {budget}")]
    LiteralTooLarge { nodes: u64, budget: u64 },
    #[error("universe `{0}` is not a V-stage")]
    NotVStage(String),
    #[error("enumeration index {index} exceeds the uniform-mode cap of {max}")]
    IndexTooLarge { index: String, max: u64 },
    #[error("epsilon term depends on quantified variable `{0}`; use uniform mode")]
    EpsDependsOnBoundVariable(String),
    #[error("universe of {size} elements exceeds the cap of {max} for this operation")]
    UniverseTooLarge { size: usize, max: usize },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("free name `{name}` is not allowed here; expected only {allowed}")]
    UnexpectedFreeName { name: String, allowed: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors caused by a resource cap rather than malformed input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::IndexOverflow { .. }
                | Error::StageTooLarge(_)
                | Error::SegmentTooLarge { .. }
                | Error::BudgetExceeded(_)
                | Error::CardinalTooLarge { .. }
                | Error::LiteralTooLarge { .. }
                | Error::IndexTooLarge { .. }
                | Error::UniverseTooLarge { .. }
        )
    }

    /// Stable identifier of the variant, for machine-readable error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::IndexOverflow { .. } => "index_overflow",
            Error::NotAPair(_) => "not_a_pair",
            Error::Syntax(_) => "syntax",
            Error::UnboundVariable(_) => "unbound_variable",
            Error::NotPure(_) => "not_pure",
            Error::NonCanonical(_) => "non_canonical",
            Error::Decode(_) => "decode",
            Error::StageTooLarge(_) => "stage_too_large",
            Error::SegmentTooLarge { .. } => "segment_too_large",
            Error::InvalidUniverse(_) => "invalid_universe",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::NotEquivalence { .. } => "not_equivalence",
            Error::ElementNotInUniverse(_) => "element_not_in_universe",
            Error::CardinalTooLarge { .. } => "cardinal_too_large",
            Error::CrossUniverse { .. } => "cross_universe",
            Error::LiteralTooLarge { .. } => "literal_too_large",
            Error::NotVStage(_) => "not_v_stage",
            Error::IndexTooLarge { .. } => "index_too_large",
            Error::EpsDependsOnBoundVariable(_) => "eps_depends_on_bound_variable",
            Error::UniverseTooLarge { .. } => "universe_too_large",
            Error::Unsupported(_) => "unsupported",
            Error::UnexpectedFreeName { .. } => "unexpected_free_name",
            Error::Invariant(_) => "invariant",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
