//! Fairness criteria built on sparsity measures.
//!
//! Every criterion reduces per-group quantities to one vector per class (or
//! per threshold), applies a [`MeasureSpec`] to each vector and combines the
//! results. With [`Measure::Mpd`](crate::Measure::Mpd) the criteria reduce
//! to their classical max-gap forms.

mod classification;
mod ecdf;
mod perf;
mod regression;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparsity::{sparsity, MeasureSpec};
use crate::warning::Warning;

pub use classification::{
    class_rate_matrix, eo_classification_mpd, g_per_group, s_eo_classification, sp_classification, RateMatrix,
};
pub use ecdf::Ecdf;
pub use perf::{PerfMetric, PerfMetricSpec};
pub use regression::{eo_regression, regression_metric_per_group, sp_regression_ks, sp_regression_wasserstein, weak_sp_regression};

/// How per-class values are combined into one number.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    #[default]
    Max,
    Mean,
    Sum,
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "max" => Ok(Aggregation::Max),
            "mean" => Ok(Aggregation::Mean),
            "sum" => Ok(Aggregation::Sum),
            other => Err(Error::InvalidParams(format!("unknown aggregation '{other}'"))),
        }
    }
}

pub fn aggregate(values: &[f64], agg: Aggregation) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidParams("cannot aggregate an empty value list".into()));
    }
    Ok(match agg {
        Aggregation::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Aggregation::Mean => values.iter().sum::<f64>() / values.len() as f64,
        Aggregation::Sum => values.iter().sum(),
    })
}

/// What to do when a group cannot supply a value for one class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellPolicy {
    #[default]
    Error,
    /// Leave the group out of that class's vector and record a warning.
    Drop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    SpClassification,
    EoClassification,
    SEoClassification,
    SpRegressionKs,
    SpRegressionWasserstein,
    SpRegressionWeak,
    EoRegression,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::SpClassification => "sp_classification",
            Criterion::EoClassification => "eo_classification",
            Criterion::SEoClassification => "s_eo_classification",
            Criterion::SpRegressionKs => "sp_regression_ks",
            Criterion::SpRegressionWasserstein => "sp_regression_wasserstein",
            Criterion::SpRegressionWeak => "sp_regression_weak",
            Criterion::EoRegression => "eo_regression",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One measured vector: a class, a (class, condition) pair or a threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub label: String,
    pub vector: Vec<f64>,
    pub value: f64,
    /// Groups left out of this vector under [`CellPolicy::Drop`].
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub excluded_groups: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub criterion: Criterion,
    pub measure: MeasureSpec,
    /// Combination across components; `None` for sup/integral criteria.
    pub aggregation: Option<Aggregation>,
    pub metric: Option<PerfMetricSpec>,
    pub groups: Vec<String>,
    pub components: Vec<Component>,
    /// Thresholds the sup or integral ran over (regression SP only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds_evaluated: Option<usize>,
    pub value: f64,
    pub warnings: Vec<Warning>,
}

/// Measures `vector`, recording a zero-vector warning under `label`.
pub(crate) fn measure_component(
    label: String,
    vector: Vec<f64>,
    spec: &MeasureSpec,
    warnings: &mut Vec<Warning>,
) -> Result<Component> {
    let out = sparsity(&vector, spec)?;
    if out.zero_vector {
        warnings.push(Warning::ZeroVector { context: label.clone() });
    }
    Ok(Component {
        label,
        vector,
        value: out.value,
        excluded_groups: Vec::new(),
    })
}
