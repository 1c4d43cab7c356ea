use std::collections::BTreeMap;

use serde::Serialize;
use sparsefair_core::{
    Aggregation, CellPolicy, GroupingSpec, Measure, MeasureSpec, PerfMetric, PerfMetricSpec, Transform,
};

use crate::args::{AggArg, CriterionArg, CriterionArgs, DataArgs, MeasureArg, Task, TransformArg, UndefinedArg};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Columns {
    pub label: String,
    pub prediction: String,
    pub score_prefix: String,
    pub groups: Vec<String>,
}

/// Fully resolved evaluation settings, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub task: Task,
    pub criterion: CriterionArg,
    pub measure: MeasureSpec,
    pub metric: Option<PerfMetricSpec>,
    pub aggregation: Aggregation,
    pub on_undefined: CellPolicy,
    pub columns: Columns,
    pub classes: Option<Vec<String>>,
    pub bins: BTreeMap<String, usize>,
    pub min_group_size: usize,
    pub drop_small_groups: bool,
    pub seed: u64,
}

pub fn measure_from(arg: MeasureArg, p: f64, q: f64) -> CliResult<Measure> {
    let m = match arg {
        MeasureArg::Mpd => Measure::Mpd,
        MeasureArg::Gini => Measure::Gini,
        MeasureArg::Pq => Measure::Pq { p, q },
    };
    m.validate()?;
    Ok(m)
}

/// Parses `col=k` binning flags.
pub fn parse_bins(flags: &[String]) -> CliResult<BTreeMap<String, usize>> {
    let mut out = BTreeMap::new();
    for flag in flags {
        let (col, k) = flag
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--bins expects COL=K, got '{flag}'")))?;
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--bins {flag}: bin count is not an integer")))?;
        out.insert(col.trim().to_string(), k);
    }
    Ok(out)
}

impl RunConfig {
    pub fn resolve(
        data: &DataArgs,
        crit: &CriterionArgs,
        measure: Option<MeasureArg>,
        group_cols: Vec<String>,
        seed: u64,
    ) -> CliResult<Self> {
        let task = data.task;
        let criterion = crit.criterion;
        match (task, criterion) {
            (Task::Classification, CriterionArg::SpWeak | CriterionArg::SpW) => {
                return Err(CliError::Usage(format!(
                    "criterion {} is only defined for regression",
                    criterion_name(criterion)
                )))
            }
            (Task::Regression, CriterionArg::EoClassic) => {
                return Err(CliError::Usage("criterion eo-classic is only defined for classification".into()))
            }
            _ => {}
        }
        let measure = match (criterion, measure) {
            (CriterionArg::EoClassic, None | Some(MeasureArg::Mpd)) => Measure::Mpd,
            (CriterionArg::EoClassic, Some(_)) => {
                return Err(CliError::Usage(
                    "eo-classic is the max-gap form and only takes --measure mpd; use --criterion eo for other measures".into(),
                ))
            }
            (_, arg) => measure_from(arg.unwrap_or(MeasureArg::Pq), crit.p, crit.q)?,
        };
        let transform = match crit.transform {
            TransformArg::None => Transform::None,
            TransformArg::Exp => Transform::Exp,
        };
        let metric = if criterion == CriterionArg::Eo {
            let kind = match crit.metric {
                Some(PerfMetric::LogLikelihood { .. }) => PerfMetric::LogLikelihood { variance: crit.variance },
                Some(k) => k,
                None if task == Task::Regression => PerfMetric::Mse,
                None => PerfMetric::TprFprAvg,
            };
            if kind.is_regression() != (task == Task::Regression) {
                return Err(CliError::Usage(format!(
                    "metric {} does not apply to {} tasks",
                    kind.name(),
                    task_name(task)
                )));
            }
            let spec = PerfMetricSpec {
                kind,
                per_class: crit.per_class,
            };
            spec.validate()?;
            Some(spec)
        } else {
            None
        };
        let config = RunConfig {
            task,
            criterion,
            measure: MeasureSpec { measure, transform },
            metric,
            aggregation: match crit.agg {
                AggArg::Max => Aggregation::Max,
                AggArg::Mean => Aggregation::Mean,
                AggArg::Sum => Aggregation::Sum,
            },
            on_undefined: match crit.on_undefined {
                UndefinedArg::Error => CellPolicy::Error,
                UndefinedArg::Drop => CellPolicy::Drop,
            },
            columns: Columns {
                label: data.label_col.clone(),
                prediction: data.pred_col.clone(),
                score_prefix: data.score_prefix.clone(),
                groups: group_cols,
            },
            classes: data.classes.clone(),
            bins: parse_bins(&data.bins)?,
            min_group_size: data.min_group_size,
            drop_small_groups: data.drop_small_groups,
            seed,
        };
        config.grouping_spec().validate()?;
        Ok(config)
    }

    pub fn grouping_spec(&self) -> GroupingSpec {
        GroupingSpec {
            attributes: self.columns.groups.clone(),
            bins: self.bins.clone(),
            min_group_size: self.min_group_size,
            drop_small_groups: self.drop_small_groups,
        }
    }

    /// Same settings with other group columns and measure.
    pub fn with_grouping_and_measure(&self, groups: Vec<String>, measure: Measure) -> CliResult<Self> {
        let mut out = self.clone();
        out.columns.groups = groups;
        out.measure.measure = measure;
        out.bins.retain(|col, _| out.columns.groups.contains(col));
        out.grouping_spec().validate()?;
        Ok(out)
    }
}

pub fn criterion_name(c: CriterionArg) -> &'static str {
    match c {
        CriterionArg::Sp => "sp",
        CriterionArg::Eo => "eo",
        CriterionArg::EoClassic => "eo-classic",
        CriterionArg::SpWeak => "sp-weak",
        CriterionArg::SpW => "sp-w",
    }
}

fn task_name(t: Task) -> &'static str {
    match t {
        Task::Classification => "classification",
        Task::Regression => "regression",
    }
}
