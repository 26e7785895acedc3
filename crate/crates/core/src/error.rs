use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("ambiguous formula at byte {offset}: `->` and `<-` mixed without parentheses")]
    Ambiguity { offset: usize },

    #[error("order relation has a cycle through points {0} and {1}")]
    Cycle(usize, usize),

    #[error("point {point} out of range for a poset with {size} points")]
    PointOutOfRange { point: usize, size: usize },

    #[error("unknown point label `{0}`")]
    UnknownPoint(String),

    #[error("duplicate point label `{0}`")]
    DuplicatePoint(String),

    #[error("poset has {0} points; at most {max} are supported", max = crate::pointset::MAX_POINTS)]
    TooManyPoints(usize),

    #[error("poset is not a co-tree")]
    NotCoTree,

    #[error("poset has no greatest element")]
    NoGreatestElement,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} exceeds the limit of {limit}")]
    LimitExceeded { what: String, limit: u64 },

    #[error("variable `{0}` has no assigned upset")]
    UnassignedVariable(String),

    #[error("set is not an upset of the frame")]
    NotUpset,

    #[error("search budget of {budget} exceeded{}", completed_up_to.map(|n| format!(" (combs C_1..C_{n} fully checked)")).unwrap_or_default())]
    SearchBudgetExceeded {
        budget: u64,
        completed_up_to: Option<usize>,
    },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn budget(budget: u64) -> Self {
        Error::SearchBudgetExceeded {
            budget,
            completed_up_to: None,
        }
    }
}
