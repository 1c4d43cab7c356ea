//! Group fairness evaluation through sparsity measures.
//!
//! The classical statistical parity and equalized odds criteria compare
//! per-group quantities with a maximum pairwise difference (MPD). This crate
//! generalises that comparison to any sparsity measure over the full vector
//! of group values: MPD, the Gini Index, or the PQ Index `I_{p,q}`.
//!
//! Modules:
//! - [`sparsity`]: the measures, norms and the positivity transform.
//! - [`verifier`]: randomised checks of the sparsity axioms and theorems.
//! - [`groups`]: evaluation data sets and (intersectional) group construction.
//! - [`metrics`]: the fairness criteria for classification and regression.
//! - [`synthetic`]: seeded scenario generators and a one-feature OLS fit.

pub mod error;
pub mod groups;
pub mod metrics;
pub mod sparsity;
pub mod synthetic;
pub mod verifier;
pub mod warning;

pub use error::{Error, Result};
pub use groups::{
    build_groups, partition, quantile_bins, ClassificationData, GroupId, Grouping, GroupingSpec, Partition, RegressionData,
};
pub use metrics::{Aggregation, CellPolicy, Criterion, MetricReport, PerfMetric, PerfMetricSpec, RateMatrix};
pub use sparsity::{Measure, MeasureSpec, NonNegVector, SparsityValue, Transform};
pub use verifier::{CheckReport, PropertyId};
pub use warning::Warning;
