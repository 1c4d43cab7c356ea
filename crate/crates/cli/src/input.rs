//! CSV ingestion: a header row, then one row per sample.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use sparsefair_core::{build_groups, partition, ClassificationData, GroupId, Grouping, Partition, RegressionData};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Line number of data row `row` in the file (the header is line 1).
fn line(row: usize) -> usize {
    row + 2
}

impl Table {
    pub fn from_path(path: &Path) -> CliResult<Self> {
        let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
        Self::from_reader(file)
    }

    pub fn from_reader(reader: impl Read) -> CliResult<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if headers.is_empty() || headers.iter().all(String::is_empty) {
            return Err(CliError::Input("input has no header row".into()));
        }
        let mut rows = Vec::new();
        for record in rdr.records() {
            rows.push(record?.iter().map(str::to_string).collect());
        }
        if rows.is_empty() {
            return Err(CliError::Input("input has no data rows".into()));
        }
        Ok(Self { headers, rows })
    }

    pub fn index(&self, name: &str) -> CliResult<usize> {
        self.headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::Input(format!(
                "missing column '{name}' (columns: {})",
                self.headers.join(", ")
            ))
        })
    }

    pub fn column(&self, name: &str) -> CliResult<Vec<String>> {
        let i = self.index(name)?;
        Ok(self.rows.iter().map(|r| r[i].clone()).collect())
    }

    fn numeric(&self, name: &str, rows: &[usize]) -> CliResult<Vec<f64>> {
        let i = self.index(name)?;
        rows.iter()
            .map(|&r| {
                let cell = &self.rows[r][i];
                match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(CliError::Input(format!(
                        "line {}, column '{name}': '{cell}' is not a finite number",
                        line(r)
                    ))),
                }
            })
            .collect()
    }
}

/// Group assignment for the retained rows of a table.
#[derive(Debug, Clone)]
pub struct GroupedRows {
    pub grouping: Grouping,
    /// Table rows with a group, in file order.
    pub rows: Vec<usize>,
    pub ids: Vec<GroupId>,
    pub partition: Partition,
}

pub fn group_rows(table: &Table, config: &RunConfig) -> CliResult<GroupedRows> {
    let mut columns = BTreeMap::new();
    for attr in &config.columns.groups {
        columns.insert(attr.clone(), table.column(attr)?);
    }
    let grouping = build_groups(&columns, &config.grouping_spec())?;
    let (rows, ids): (Vec<usize>, Vec<GroupId>) = grouping
        .assignments
        .iter()
        .enumerate()
        .filter_map(|(r, id)| id.map(|id| (r, id)))
        .unzip();
    if rows.is_empty() {
        return Err(CliError::Input("no rows left after removing missing group values".into()));
    }
    let partition = partition(&ids, &grouping.labels(), &grouping.dropped());
    if partition.is_empty() {
        return Err(CliError::Input("every group was dropped as too small".into()));
    }
    Ok(GroupedRows {
        grouping,
        rows,
        ids,
        partition,
    })
}

/// Numeric labels sort by value, everything else lexicographically.
fn class_order(a: &String, b: &String) -> Ordering {
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => x.total_cmp(&y).then_with(|| a.cmp(b)),
        _ => a.cmp(b),
    }
}

pub fn classification_data(table: &Table, config: &RunConfig, grouped: &GroupedRows) -> CliResult<ClassificationData> {
    let label_col = &config.columns.label;
    let pred_col = &config.columns.prediction;
    let (li, pi) = (table.index(label_col)?, table.index(pred_col)?);
    let classes: Vec<String> = match &config.classes {
        Some(c) => {
            let unique: BTreeSet<&String> = c.iter().collect();
            if c.is_empty() || unique.len() != c.len() {
                return Err(CliError::Usage("--classes must list distinct labels".into()));
            }
            c.clone()
        }
        None => {
            let mut seen: Vec<String> = grouped
                .rows
                .iter()
                .flat_map(|&r| [table.rows[r][li].clone(), table.rows[r][pi].clone()])
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            seen.sort_by(class_order);
            seen
        }
    };
    let lookup: BTreeMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let encode = |col: usize, name: &str| -> CliResult<Vec<usize>> {
        grouped
            .rows
            .iter()
            .map(|&r| {
                let cell = &table.rows[r][col];
                lookup.get(cell.as_str()).copied().ok_or_else(|| {
                    CliError::Input(format!(
                        "line {}, column '{name}': label '{cell}' is not in the class set [{}]",
                        line(r),
                        classes.join(", ")
                    ))
                })
            })
            .collect()
    };
    let y_true = encode(li, label_col)?;
    let y_pred = encode(pi, pred_col)?;

    let score_cols: Vec<String> = classes
        .iter()
        .map(|c| format!("{}{c}", config.columns.score_prefix))
        .collect();
    let present = score_cols.iter().filter(|c| table.headers.contains(c)).count();
    let scores = if present == 0 {
        None
    } else if present < score_cols.len() {
        let missing: Vec<&str> = score_cols
            .iter()
            .filter(|c| !table.headers.contains(c))
            .map(String::as_str)
            .collect();
        return Err(CliError::Input(format!("missing score columns: {}", missing.join(", "))));
    } else {
        let per_class = score_cols
            .iter()
            .map(|c| table.numeric(c, &grouped.rows))
            .collect::<CliResult<Vec<_>>>()?;
        Some(
            (0..grouped.rows.len())
                .map(|i| per_class.iter().map(|col| col[i]).collect())
                .collect(),
        )
    };
    Ok(ClassificationData::new(classes, y_true, y_pred, scores, grouped.ids.clone())?)
}

pub fn regression_data(table: &Table, config: &RunConfig, grouped: &GroupedRows) -> CliResult<RegressionData> {
    let y_true = table.numeric(&config.columns.label, &grouped.rows)?;
    let y_pred = table.numeric(&config.columns.prediction, &grouped.rows)?;
    Ok(RegressionData::new(y_true, y_pred, grouped.ids.clone())?)
}
