use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by an infinitesimal: {0}")]
    DivisionByInfinitesimal(String),
    #[error("comparison undecidable at the current degree budget: {0}")]
    IndeterminateComparison(String),
    #[error("integer overflow converting {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("invalid ellipsoid: {0}")]
    InvalidEllipsoid(String),
    #[error("degenerate orbit: ratio {0} is rational")]
    DegenerateOrbit(String),
    #[error("the zero class (0,0) carries no closed Reeb orbit")]
    ZeroClass,
    #[error("no orbit set matches grading {grading} under the action cap")]
    NotFound { grading: i64 },
    #[error("{count} orbit sets match grading {grading} under the action cap")]
    MultipleMatches { grading: i64, count: usize },
    #[error("S = {s} must exceed d = {d}")]
    SNotLargeEnough { s: String, d: i64 },
    #[error("non-positive area class ({0})")]
    NonPositiveInput(String),
    #[error("b/a = {0} is not an integer >= 2")]
    NonIntegerRatio(String),
    #[error("x = {0} lies outside the fundamental domain for this mode")]
    XOutsideFundamentalDomain(String),
    #[error("regions use different fundamental domains")]
    MixedFundamentalDomain,
    #[error("lambda = {0} must be 1 or at least 2")]
    LambdaOutsideFundamentalDomain(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("a curve needs at least one positive end: {0}")]
    EmptyAsymptotics(String),
    #[error("inclusion cross-check disagrees with the analytic decision at {0}")]
    InclusionCrossCheck(String),
    #[error("search budget of {budget} configurations exceeded ({found} found so far)")]
    SearchBudgetExceeded { budget: usize, found: usize },
    #[error("tie in the merged progressions at entry {0}")]
    TieDetected(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByInfinitesimal(_) => "DivisionByInfinitesimal",
            Error::IndeterminateComparison(_) => "IndeterminateComparison",
            Error::Overflow(_) => "Overflow",
            Error::Parse(_) => "ParseError",
            Error::Validation(_) => "ValidationError",
            Error::InvalidEllipsoid(_) => "InvalidEllipsoid",
            Error::DegenerateOrbit(_) => "DegenerateOrbit",
            Error::ZeroClass => "ZeroClass",
            Error::NotFound { .. } => "NotFound",
            Error::MultipleMatches { .. } => "MultipleMatches",
            Error::SNotLargeEnough { .. } => "SNotLargeEnough",
            Error::NonPositiveInput(_) => "NonPositiveInput",
            Error::NonIntegerRatio(_) => "NonIntegerRatio",
            Error::XOutsideFundamentalDomain(_) => "XOutsideFundamentalDomain",
            Error::MixedFundamentalDomain => "MixedFundamentalDomain",
            Error::LambdaOutsideFundamentalDomain(_) => "LambdaOutsideFundamentalDomain",
            Error::InvalidDomain(_) => "InvalidDomain",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::EmptyAsymptotics(_) => "EmptyAsymptotics",
            Error::InclusionCrossCheck(_) => "InclusionCrossCheck",
            Error::SearchBudgetExceeded { .. } => "SearchBudgetExceeded",
            Error::TieDetected(_) => "TieDetected",
            Error::Unsupported(_) => "Unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
