use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("no entry for `{0}`")]
    MissingEntry(String),
    #[error("preference list of `{student}` names unknown school `{school}`")]
    UnknownSchoolInPreference { student: String, school: String },
    #[error("preference list of `{student}` repeats school `{school}`")]
    DuplicateInPreference { student: String, school: String },
    #[error("priority order of `{school}` is not a permutation of the students (`{student}`)")]
    IncompletePriority { school: String, student: String },
    #[error("capacity of `{0}` must be at least 1")]
    NonPositiveCapacity(String),
    #[error("school set must be non-empty")]
    EmptySet,
    #[error("assignment is inconsistent with the problem: {0}")]
    InconsistentAssignment(String),
    #[error("instance too large for exhaustive enumeration ({students} students, {schools} schools)")]
    InstanceTooLarge { students: usize, schools: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("school set is a high-priority set for `{0}`")]
    IsHighPrioritySet(String),
    #[error("permanency-execution period must be at least 1")]
    InvalidPeriod,
    #[error("preference list of `{student}` has {len} schools, cap is {cap}")]
    ListCapExceeded { student: String, len: usize, cap: usize },
    #[error("enumeration needs {needed} items, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("invalid mechanism spec `{0}`")]
    InvalidMechanismSpec(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
