use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set must contain at least one element")]
    EmptyGround,
    #[error("element {element} is outside [1, {n}]")]
    InvalidElement { element: usize, n: usize },
    #[error("coalition must be nonempty")]
    EmptyCoalition,
    #[error("malformed solution: {0}")]
    MalformedSolution(String),
    #[error("invalid model parameters: {0}")]
    InvalidModel(String),
    #[error("no family solves this model for n = {n}: {reason}")]
    Unsolvable { n: usize, reason: String },
    #[error("invalid order n = {n}: {reason}")]
    InvalidOrder { n: usize, reason: String },
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("search space of about {estimate} families exceeds the budget of {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("strategy exceeded {limit} queries without stopping")]
    NonTermination { limit: usize },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}
