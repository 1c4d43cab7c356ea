use serde::Serialize;
use sparsefair_core::groups::GroupInfo;
use sparsefair_core::metrics::{
    class_rate_matrix, eo_classification_mpd, eo_regression, s_eo_classification, sp_classification,
    sp_regression_ks, sp_regression_wasserstein, weak_sp_regression,
};
use sparsefair_core::{MetricReport, PerfMetricSpec, Warning};

use crate::args::{CriterionArg, EvaluateArgs, Task};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::input::{classification_data, group_rows, regression_data, GroupedRows, Table};
use crate::output;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct InputSummary {
    pub path: String,
    pub rows: usize,
    pub rows_used: usize,
    pub rows_rejected: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvaluateReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub input: InputSummary,
    pub groups: Vec<GroupInfo>,
    pub result: MetricReport,
    /// Grouping warnings followed by criterion warnings.
    pub warnings: Vec<Warning>,
}

/// Evaluates the configured criterion on already-grouped rows.
pub fn run_criterion(table: &Table, config: &RunConfig, grouped: &GroupedRows) -> CliResult<MetricReport> {
    let part = &grouped.partition;
    let m = &config.measure;
    let metric = config.metric.unwrap_or_default();
    let report = match config.task {
        Task::Classification => {
            let data = classification_data(table, config, grouped)?;
            match config.criterion {
                CriterionArg::Sp => sp_classification(&class_rate_matrix(&data, part)?, m, config.aggregation)?,
                CriterionArg::Eo => s_eo_classification(&data, part, m, &metric, config.aggregation, config.on_undefined)?,
                CriterionArg::EoClassic => eo_classification_mpd(&data, part, config.on_undefined)?,
                CriterionArg::SpWeak | CriterionArg::SpW => unreachable!("rejected when resolving the config"),
            }
        }
        Task::Regression => {
            let data = regression_data(table, config, grouped)?;
            match config.criterion {
                CriterionArg::Sp => sp_regression_ks(&data, part, m)?,
                CriterionArg::SpW => sp_regression_wasserstein(&data, part, m)?,
                CriterionArg::SpWeak => weak_sp_regression(&data, part, m)?,
                CriterionArg::Eo => {
                    let metric = config.metric.unwrap_or(PerfMetricSpec::new(sparsefair_core::PerfMetric::Mse));
                    eo_regression(&data, part, &metric, m, config.on_undefined)?
                }
                CriterionArg::EoClassic => unreachable!("rejected when resolving the config"),
            }
        }
    };
    Ok(report)
}

pub fn evaluate_table(table: &Table, config: &RunConfig, path: &str) -> CliResult<EvaluateReport> {
    let grouped = group_rows(table, config)?;
    let result = run_criterion(table, config, &grouped)?;
    let mut warnings = grouped.grouping.warnings.clone();
    warnings.extend(result.warnings.iter().cloned());
    Ok(EvaluateReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        input: InputSummary {
            path: path.to_string(),
            rows: table.rows.len(),
            rows_used: grouped.partition.blocks.iter().map(|b| b.rows.len()).sum(),
            rows_rejected: grouped.grouping.rows_rejected,
        },
        groups: grouped.grouping.table.clone(),
        result,
        warnings,
    })
}

pub fn build_report(args: &EvaluateArgs) -> CliResult<EvaluateReport> {
    let config = RunConfig::resolve(
        &args.data,
        &args.criterion,
        args.measure,
        args.group_cols.clone(),
        args.seed,
    )?;
    let table = Table::from_path(&args.input)?;
    evaluate_table(&table, &config, &args.input.display().to_string())
}

pub fn run(args: &EvaluateArgs) -> CliResult<i32> {
    let report = build_report(args)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    output::emit(args.output.as_deref(), "report.json", &output::json_bytes(&report)?)?;
    Ok(0)
}
