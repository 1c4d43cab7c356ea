use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-group performance metric `g` fed to the equalized-odds criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PerfMetric {
    Accuracy,
    /// `(TPR + FPR) / 2`, one-vs-rest for class `y`.
    TprFprAvg,
    F1,
    Auroc,
    CrossEntropy,
    Mse,
    Mae,
    R2,
    /// Mean Gaussian log-likelihood of the residuals with a fixed variance.
    LogLikelihood { variance: f64 },
}

impl PerfMetric {
    pub fn name(&self) -> &'static str {
        match self {
            PerfMetric::Accuracy => "accuracy",
            PerfMetric::TprFprAvg => "tpr_fpr_avg",
            PerfMetric::F1 => "f1",
            PerfMetric::Auroc => "auroc",
            PerfMetric::CrossEntropy => "cross_entropy",
            PerfMetric::Mse => "mse",
            PerfMetric::Mae => "mae",
            PerfMetric::R2 => "r2",
            PerfMetric::LogLikelihood { .. } => "log_likelihood",
        }
    }

    pub fn is_regression(&self) -> bool {
        matches!(
            self,
            PerfMetric::Mse | PerfMetric::Mae | PerfMetric::R2 | PerfMetric::LogLikelihood { .. }
        )
    }

    pub fn needs_scores(&self) -> bool {
        matches!(self, PerfMetric::Auroc | PerfMetric::CrossEntropy)
    }

    /// Metrics whose values can be negative need the exp transform.
    pub fn can_be_negative(&self) -> bool {
        matches!(self, PerfMetric::R2 | PerfMetric::LogLikelihood { .. })
    }
}

impl FromStr for PerfMetric {
    type Err = Error;

    /// Parses a metric name; log-likelihood defaults to unit variance.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        Ok(match norm.as_str() {
            "accuracy" | "acc" => PerfMetric::Accuracy,
            "tpr_fpr_avg" | "tpr_fpr" => PerfMetric::TprFprAvg,
            "f1" => PerfMetric::F1,
            "auroc" | "auc" => PerfMetric::Auroc,
            "cross_entropy" | "ce" => PerfMetric::CrossEntropy,
            "mse" => PerfMetric::Mse,
            "mae" => PerfMetric::Mae,
            "r2" => PerfMetric::R2,
            "log_likelihood" | "loglik" => PerfMetric::LogLikelihood { variance: 1.0 },
            other => return Err(Error::InvalidParams(format!("unknown metric '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerfMetricSpec {
    pub kind: PerfMetric,
    /// One-vs-rest evaluation for accuracy and cross entropy. The rate-based
    /// metrics (TPR/FPR, F1, AUROC) are always one-vs-rest.
    pub per_class: bool,
}

impl PerfMetricSpec {
    pub fn new(kind: PerfMetric) -> Self {
        Self { kind, per_class: false }
    }

    /// Whether `g` changes with the class it is evaluated for.
    pub fn is_class_dependent(&self) -> bool {
        match self.kind {
            PerfMetric::TprFprAvg | PerfMetric::F1 | PerfMetric::Auroc => true,
            PerfMetric::Accuracy | PerfMetric::CrossEntropy => self.per_class,
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let PerfMetric::LogLikelihood { variance } = self.kind {
            if !(variance.is_finite() && variance > 0.0) {
                return Err(Error::InvalidParams(format!("log-likelihood variance must be > 0, got {variance}")));
            }
        }
        Ok(())
    }
}

impl Default for PerfMetricSpec {
    fn default() -> Self {
        Self::new(PerfMetric::TprFprAvg)
    }
}
