use thiserror::Error;

/// Failures surfaced by the engine. Law violations of a well-formed input are
/// report content (see [`crate::check::ValidationReport`]), not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("malformed category `{category}`: {detail}")]
    Malformed { category: String, detail: String },
    #[error("size bound exceeded: {what} has {size} (limit {limit})")]
    SizeBound {
        what: String,
        size: usize,
        limit: usize,
    },
    #[error("search budget of {budget} steps exhausted while {what}")]
    BudgetExceeded { what: String, budget: u64 },
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("not a preorder: {0}")]
    NotPreorder(String),
    #[error("relation is not reflexive at `{0}`")]
    NotReflexive(String),
    #[error("relation is not transitive: `{0}` <= `{1}` <= `{2}` but not `{0}` <= `{2}`")]
    NotTransitive(String, String, String),
    #[error("down-sets live in different preorders")]
    PreorderMismatch,
    #[error("functor mismatch: {0}")]
    FunctorMismatch(String),
    #[error("commutation square fails: {0}")]
    SquareFails(String),
    #[error("no universal cocone for the slice at `{0}`")]
    NonCocomplete(String),
    #[error("no universal cone for the slice at `{0}`")]
    NonComplete(String),
    #[error("fast and brute-force Kan paths disagree at `{0}`")]
    KanMismatch(String),
    #[error("invalid nullity structure: {0}")]
    InvalidNullity(String),
    #[error("assumption {0} fails: {1}")]
    Assumption(String, String),
    #[error("comma nullity is not functorial: {0}")]
    NotFunctorial(String),
    #[error("constructed nullity is not invariant: {0}")]
    Invariance(String),
}

impl Error {
    /// Budget and guard failures mean "too big to decide", not "false".
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::Guard(_) | Error::SizeBound { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
