use std::fmt;

use serde::Serialize;

/// Non-fatal conditions raised while building groups or evaluating criteria.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Warning {
    /// A sparsity measure was applied to an all-zero vector and returned 0.
    ZeroVector { context: String },
    /// Quantile edges coincided, so fewer bins than requested were produced.
    DegenerateBins {
        column: String,
        requested: usize,
        produced: usize,
    },
    SmallGroup {
        group: String,
        size: usize,
        min_size: usize,
        dropped: bool,
    },
    RowsRejected { count: usize, reason: String },
    /// A group was left out of one class's comparison under the drop policy.
    CellSkipped { group: String, class: String, reason: String },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ZeroVector { context } => write!(f, "zero vector in {context}; sparsity set to 0"),
            Warning::DegenerateBins {
                column,
                requested,
                produced,
            } => write!(
                f,
                "column {column}: requested {requested} quantile bins, produced {produced}"
            ),
            Warning::SmallGroup {
                group,
                size,
                min_size,
                dropped,
            } => write!(
                f,
                "group {group} has {size} rows (< {min_size}){}",
                if *dropped { "; dropped" } else { "" }
            ),
            Warning::RowsRejected { count, reason } => write!(f, "{count} rows rejected: {reason}"),
            Warning::CellSkipped { group, class, reason } => {
                write!(f, "group {group} skipped for class {class}: {reason}")
            }
        }
    }
}
