use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("component {index} is not finite ({value})")]
    InvalidInput { index: usize, value: f64 },

    #[error("component {index} is negative ({value}); use the exp transform for signed inputs")]
    NegativeInput { index: usize, value: f64 },

    #[error("vector must have at least one component")]
    EmptyVector,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("invalid grouping: {0}")]
    InvalidGrouping(String),

    #[error("group {group} has no samples with true class {class}")]
    ConditionCellEmpty { group: String, class: String },

    #[error("metric undefined for group {group} ({reason})")]
    UndefinedCell { group: String, reason: String },

    #[error("metric {metric} can be negative and requires the exp transform")]
    TransformRequired { metric: String },

    #[error("least-squares fit is degenerate: x is constant")]
    DegenerateFit,
}
