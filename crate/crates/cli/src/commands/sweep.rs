use serde::Serialize;
use sparsefair_core::metrics::{class_rate_matrix, sp_classification};
use sparsefair_core::synthetic::{gen_multigroup_cls, multigroup_population};
use sparsefair_core::{Aggregation, Measure, MeasureSpec, MetricReport, Partition, RateMatrix};

use crate::args::{AggArg, SweepArgs, SweepMode};
use crate::commands::evaluate::evaluate_table;
use crate::config::{criterion_name, measure_from, RunConfig};
use crate::error::{CliError, CliResult};
use crate::input::Table;
use crate::output;

/// One plot-ready row: mean and standard error of a criterion over seeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub group_count: usize,
    /// `sp` for the aggregate, `sp[y=1]` for the class-1 component, etc.
    pub criterion: String,
    pub measure: String,
    pub value: f64,
    pub stderr: f64,
    pub seeds: usize,
    /// Grouping attributes in CSV mode; empty for the simulated scenario.
    pub grouping: String,
}

/// Aggregate value followed by each component when there is more than one.
fn named_values(criterion: &str, report: &MetricReport) -> Vec<(String, f64)> {
    let mut out = vec![(criterion.to_string(), report.value)];
    if report.components.len() > 1 {
        out.extend(
            report
                .components
                .iter()
                .map(|c| (format!("{criterion}[{}]", c.label), c.value)),
        );
    }
    out
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn aggregation(arg: AggArg) -> Aggregation {
    match arg {
        AggArg::Max => Aggregation::Max,
        AggArg::Mean => Aggregation::Mean,
        AggArg::Sum => Aggregation::Sum,
    }
}

/// Rows for the multigroup scenario, either from the exact rates or
/// averaged over sampled data sets.
pub fn scenario_rows(args: &SweepArgs) -> CliResult<Vec<SweepRow>> {
    if args.counts.is_empty() {
        return Err(CliError::Usage("--counts is empty".into()));
    }
    let measures = args
        .measures
        .iter()
        .map(|&m| measure_from(m, args.criterion.p, args.criterion.q))
        .collect::<CliResult<Vec<Measure>>>()?;
    let agg = aggregation(args.criterion.agg);
    let mut rows = Vec::new();
    for &count in &args.counts {
        let matrices: Vec<RateMatrix> = match args.mode {
            SweepMode::Population => vec![multigroup_population(count)?],
            SweepMode::Sampled => {
                if args.seeds == 0 || args.per_group == 0 {
                    return Err(CliError::Usage("sampled mode needs --seeds >= 1 and --per-group >= 1".into()));
                }
                (args.seed..args.seed + args.seeds)
                    .map(|s| {
                        let sc = gen_multigroup_cls(args.per_group * count, count, s)?;
                        class_rate_matrix(&sc.data, &Partition::from_ids(sc.data.groups()))
                    })
                    .collect::<sparsefair_core::Result<_>>()?
            }
        };
        for measure in &measures {
            let spec = MeasureSpec::new(*measure, Default::default())?;
            let mut per_seed: Vec<Vec<(String, f64)>> = Vec::new();
            for m in &matrices {
                per_seed.push(named_values("sp", &sp_classification(m, &spec, agg)?));
            }
            for (k, (name, _)) in per_seed[0].iter().enumerate() {
                let values: Vec<f64> = per_seed.iter().map(|s| s[k].1).collect();
                let (value, stderr) = mean_and_stderr(&values);
                rows.push(SweepRow {
                    group_count: count,
                    criterion: name.clone(),
                    measure: measure.to_string(),
                    value,
                    stderr,
                    seeds: values.len(),
                    grouping: String::new(),
                });
            }
        }
    }
    Ok(rows)
}

/// Rows for one CSV evaluated under each grouping in turn.
pub fn grouping_rows(args: &SweepArgs, table: &Table, path: &str) -> CliResult<Vec<SweepRow>> {
    let groupings: Vec<Vec<String>> = args
        .groupings
        .iter()
        .map(|g| g.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
        .filter(|g: &Vec<String>| !g.is_empty())
        .collect();
    if groupings.is_empty() {
        return Err(CliError::Usage("--groupings is empty".into()));
    }
    let base = RunConfig::resolve(
        &args.data,
        &args.criterion,
        args.measures.first().copied(),
        groupings[0].clone(),
        args.seed,
    )?;
    let name = criterion_name(base.criterion);
    let mut rows = Vec::new();
    for grouping in &groupings {
        for &m in &args.measures {
            let config = base.with_grouping_and_measure(grouping.clone(), measure_from(m, args.criterion.p, args.criterion.q)?)?;
            let report = evaluate_table(table, &config, path)?;
            for (criterion, value) in named_values(name, &report.result) {
                rows.push(SweepRow {
                    group_count: report.result.groups.len(),
                    criterion,
                    measure: config.measure.measure.to_string(),
                    value,
                    stderr: 0.0,
                    seeds: 1,
                    grouping: grouping.join(","),
                });
            }
        }
    }
    Ok(rows)
}

pub fn sweep_rows(args: &SweepArgs) -> CliResult<Vec<SweepRow>> {
    match &args.input {
        Some(path) => grouping_rows(args, &Table::from_path(path)?, &path.display().to_string()),
        None => scenario_rows(args),
    }
}

pub fn to_csv(rows: &[SweepRow]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| CliError::Input(e.to_string()))
}

pub fn run(args: &SweepArgs) -> CliResult<i32> {
    let rows = sweep_rows(args)?;
    output::emit(args.output.as_deref(), "sweep.csv", &to_csv(&rows)?)?;
    Ok(0)
}
