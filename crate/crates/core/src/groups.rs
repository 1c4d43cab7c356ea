//! Evaluation data sets and sensitive-group construction.
//!
//! Groups are the cross product of one or more attribute columns, with
//! continuous columns discretised into nearest-rank quantile bins first.
//! Group ids follow the lexicographic order of the attribute tuples, so the
//! same data always yields the same ids regardless of row order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::warning::Warning;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GroupId(pub usize);

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_groups(groups: &[GroupId], n: usize) -> Result<()> {
    if groups.len() != n {
        return Err(Error::InvalidData(format!(
            "group column has {} rows, expected {n}",
            groups.len()
        )));
    }
    Ok(())
}

/// Labels, predictions and optional class scores for a classifier.
///
/// Labels are stored as indices into `classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationData {
    classes: Vec<String>,
    y_true: Vec<usize>,
    y_pred: Vec<usize>,
    scores: Option<Vec<Vec<f64>>>,
    groups: Vec<GroupId>,
}

impl ClassificationData {
    pub fn new(
        classes: Vec<String>,
        y_true: Vec<usize>,
        y_pred: Vec<usize>,
        scores: Option<Vec<Vec<f64>>>,
        groups: Vec<GroupId>,
    ) -> Result<Self> {
        let n = y_true.len();
        if n == 0 {
            return Err(Error::InvalidData("no rows".into()));
        }
        if classes.is_empty() {
            return Err(Error::InvalidData("class set is empty".into()));
        }
        if y_pred.len() != n {
            return Err(Error::InvalidData(format!(
                "y_pred has {} rows, y_true has {n}",
                y_pred.len()
            )));
        }
        check_groups(&groups, n)?;
        let k = classes.len();
        for (row, (&t, &p)) in y_true.iter().zip(&y_pred).enumerate() {
            if t >= k || p >= k {
                return Err(Error::InvalidData(format!("row {row}: label outside the class set")));
            }
        }
        if let Some(scores) = &scores {
            if scores.len() != n {
                return Err(Error::InvalidData(format!("scores have {} rows, expected {n}", scores.len())));
            }
            for (row, s) in scores.iter().enumerate() {
                if s.len() != k {
                    return Err(Error::InvalidData(format!("row {row}: expected {k} scores, got {}", s.len())));
                }
                if s.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
                    return Err(Error::InvalidData(format!("row {row}: scores must lie in [0, 1]")));
                }
                let total: f64 = s.iter().sum();
                if (total - 1.0).abs() > 1e-6 {
                    return Err(Error::InvalidData(format!("row {row}: scores sum to {total}, expected 1")));
                }
            }
        }
        Ok(Self {
            classes,
            y_true,
            y_pred,
            scores,
            groups,
        })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn y_true(&self) -> &[usize] {
        &self.y_true
    }

    pub fn y_pred(&self) -> &[usize] {
        &self.y_pred
    }

    pub fn scores(&self) -> Option<&[Vec<f64>]> {
        self.scores.as_deref()
    }

    pub fn groups(&self) -> &[GroupId] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.y_true.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_true.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }
}

/// Real-valued targets and predictions for a regression model.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionData {
    y_true: Vec<f64>,
    y_pred: Vec<f64>,
    groups: Vec<GroupId>,
}

impl RegressionData {
    pub fn new(y_true: Vec<f64>, y_pred: Vec<f64>, groups: Vec<GroupId>) -> Result<Self> {
        let n = y_true.len();
        if n == 0 {
            return Err(Error::InvalidData("no rows".into()));
        }
        if y_pred.len() != n {
            return Err(Error::InvalidData(format!(
                "y_pred has {} rows, y_true has {n}",
                y_pred.len()
            )));
        }
        check_groups(&groups, n)?;
        for (row, (t, p)) in y_true.iter().zip(&y_pred).enumerate() {
            if !t.is_finite() || !p.is_finite() {
                return Err(Error::InvalidData(format!("row {row}: non-finite value")));
            }
        }
        Ok(Self { y_true, y_pred, groups })
    }

    pub fn y_true(&self) -> &[f64] {
        &self.y_true
    }

    pub fn y_pred(&self) -> &[f64] {
        &self.y_pred
    }

    pub fn groups(&self) -> &[GroupId] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.y_true.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_true.is_empty()
    }
}

/// Which columns define the sensitive groups and how.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupingSpec {
    pub attributes: Vec<String>,
    /// Continuous columns and their requested quantile bin count.
    pub bins: BTreeMap<String, usize>,
    pub min_group_size: usize,
    pub drop_small_groups: bool,
}

impl GroupingSpec {
    pub fn new(attributes: Vec<String>) -> Self {
        Self {
            attributes,
            bins: BTreeMap::new(),
            min_group_size: 1,
            drop_small_groups: false,
        }
    }

    pub fn with_bins(mut self, column: impl Into<String>, k: usize) -> Self {
        self.bins.insert(column.into(), k);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.attributes.is_empty() {
            return Err(Error::InvalidGrouping("at least one attribute is required".into()));
        }
        if self.min_group_size == 0 {
            return Err(Error::InvalidGrouping("min_group_size must be >= 1".into()));
        }
        for (column, &k) in &self.bins {
            if k < 2 {
                return Err(Error::InvalidGrouping(format!("column {column}: bin count must be >= 2")));
            }
            if !self.attributes.contains(column) {
                return Err(Error::InvalidGrouping(format!("binned column {column} is not a grouping attribute")));
            }
        }
        Ok(())
    }
}

/// Output of [`quantile_bins`].
#[derive(Debug, Clone, PartialEq)]
pub struct Binning {
    pub bins: Vec<usize>,
    /// Upper edges of every bin but the last (values `<= edge` go below).
    pub edges: Vec<f64>,
    pub n_bins: usize,
}

impl Binning {
    pub fn is_degenerate(&self, requested: usize) -> bool {
        self.n_bins < requested
    }
}

/// Nearest-rank quantile binning into at most `k` order-respecting bins.
///
/// Edge `j` is the `ceil(j n / k)`-th smallest value. Ties at an edge go to
/// the lower bin, and coinciding edges are merged, so fewer than `k` bins can
/// come back (a constant column yields one).
pub fn quantile_bins(values: &[f64], k: usize) -> Result<Binning> {
    let n = values.len();
    if k < 2 {
        return Err(Error::InvalidGrouping(format!("bin count must be >= 2, got {k}")));
    }
    if n < k {
        return Err(Error::InvalidGrouping(format!("{n} values cannot fill {k} bins")));
    }
    if let Some(row) = values.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidGrouping(format!("row {row}: non-finite value")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let top = sorted[n - 1];
    let mut edges: Vec<f64> = (1..k).map(|j| sorted[(j * n).div_ceil(k) - 1]).collect();
    edges.dedup();
    edges.retain(|&e| e < top);
    let bins = values
        .iter()
        .map(|&x| edges.partition_point(|&e| e < x))
        .collect();
    Ok(Binning {
        n_bins: edges.len() + 1,
        bins,
        edges,
    })
}

/// One attribute value inside a group key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum AttrValue {
    Level(String),
    Bin(usize),
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Level(s) => f.write_str(s),
            AttrValue::Bin(b) => write!(f, "q{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupInfo {
    pub id: GroupId,
    pub label: String,
    pub key: Vec<String>,
    pub population: usize,
    pub below_min_size: bool,
    pub dropped: bool,
}

/// Result of [`build_groups`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grouping {
    pub attributes: Vec<String>,
    /// Per row; `None` when an attribute value is missing.
    #[serde(skip)]
    pub assignments: Vec<Option<GroupId>>,
    pub table: Vec<GroupInfo>,
    pub rows_rejected: usize,
    pub warnings: Vec<Warning>,
}

impl Grouping {
    pub fn labels(&self) -> Vec<String> {
        self.table.iter().map(|g| g.label.clone()).collect()
    }

    pub fn dropped(&self) -> BTreeSet<GroupId> {
        self.table.iter().filter(|g| g.dropped).map(|g| g.id).collect()
    }

    pub fn retained(&self) -> usize {
        self.table.iter().filter(|g| !g.dropped).count()
    }
}

fn is_missing(cell: &str) -> bool {
    cell.trim().is_empty()
}

/// Builds group ids from raw attribute columns.
///
/// `columns` must contain every attribute named in `spec`; cells are raw
/// strings and an empty cell counts as missing, which rejects the row.
pub fn build_groups(columns: &BTreeMap<String, Vec<String>>, spec: &GroupingSpec) -> Result<Grouping> {
    spec.validate()?;
    let attrs: Vec<&Vec<String>> = spec
        .attributes
        .iter()
        .map(|a| {
            columns
                .get(a)
                .ok_or_else(|| Error::InvalidGrouping(format!("missing attribute column {a}")))
        })
        .collect::<Result<_>>()?;
    let n = attrs[0].len();
    if attrs.iter().any(|c| c.len() != n) {
        return Err(Error::InvalidGrouping("attribute columns differ in length".into()));
    }
    let complete: Vec<bool> = (0..n).map(|r| attrs.iter().all(|c| !is_missing(&c[r]))).collect();
    let rows_rejected = complete.iter().filter(|&&ok| !ok).count();
    let mut warnings = Vec::new();
    if rows_rejected > 0 {
        warnings.push(Warning::RowsRejected {
            count: rows_rejected,
            reason: "missing sensitive attribute value".into(),
        });
    }

    // per attribute, the value of each complete row
    let mut values: Vec<Vec<Option<AttrValue>>> = Vec::with_capacity(attrs.len());
    for (name, column) in spec.attributes.iter().zip(&attrs) {
        match spec.bins.get(name) {
            Some(&k) => {
                let mut numeric = Vec::new();
                for (row, cell) in column.iter().enumerate().filter(|(r, _)| complete[*r]) {
                    let x: f64 = cell.trim().parse().map_err(|_| {
                        Error::InvalidGrouping(format!("row {row}, column {name}: '{cell}' is not numeric"))
                    })?;
                    numeric.push(x);
                }
                let binning = quantile_bins(&numeric, k)?;
                if binning.is_degenerate(k) {
                    warnings.push(Warning::DegenerateBins {
                        column: name.clone(),
                        requested: k,
                        produced: binning.n_bins,
                    });
                }
                let mut it = binning.bins.into_iter();
                values.push(
                    complete
                        .iter()
                        .map(|&ok| ok.then(|| AttrValue::Bin(it.next().expect("one bin per complete row"))))
                        .collect(),
                );
            }
            None => values.push(
                column
                    .iter()
                    .zip(&complete)
                    .map(|(cell, &ok)| ok.then(|| AttrValue::Level(cell.trim().to_string())))
                    .collect(),
            ),
        }
    }

    let keys: Vec<Option<Vec<AttrValue>>> = (0..n)
        .map(|r| values.iter().map(|col| col[r].clone()).collect::<Option<Vec<_>>>())
        .collect();
    let mut counts: BTreeMap<Vec<AttrValue>, usize> = BTreeMap::new();
    for key in keys.iter().flatten() {
        *counts.entry(key.clone()).or_default() += 1;
    }
    let ids: BTreeMap<&Vec<AttrValue>, GroupId> = counts.keys().enumerate().map(|(i, k)| (k, GroupId(i))).collect();
    let assignments = keys.iter().map(|k| k.as_ref().map(|k| ids[k])).collect();

    let mut table = Vec::with_capacity(counts.len());
    for (i, (key, &population)) in counts.iter().enumerate() {
        let key: Vec<String> = key.iter().map(ToString::to_string).collect();
        let label = spec
            .attributes
            .iter()
            .zip(&key)
            .map(|(a, v)| format!("{a}={v}"))
            .collect::<Vec<_>>()
            .join(",");
        let below = population < spec.min_group_size;
        let dropped = below && spec.drop_small_groups;
        if below {
            warnings.push(Warning::SmallGroup {
                group: label.clone(),
                size: population,
                min_size: spec.min_group_size,
                dropped,
            });
        }
        table.push(GroupInfo {
            id: GroupId(i),
            label,
            key,
            population,
            below_min_size: below,
            dropped,
        });
    }

    Ok(Grouping {
        attributes: spec.attributes.clone(),
        assignments,
        table,
        rows_rejected,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block {
    pub id: GroupId,
    pub label: String,
    pub rows: Vec<usize>,
}

/// Disjoint row index sets, one per retained group, in group id order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    pub blocks: Vec<Block>,
    /// Rows belonging to excluded groups.
    pub excluded: Vec<usize>,
}

impl Partition {
    /// Partition with numeric labels and nothing excluded.
    pub fn from_ids(ids: &[GroupId]) -> Self {
        partition(ids, &[], &BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.blocks.iter().map(|b| b.label.clone()).collect()
    }
}

/// Splits row indices by group id, leaving out the `exclude`d groups.
///
/// `labels[id]` names group `id`; ids past the end of `labels` are named by
/// their number.
pub fn partition(ids: &[GroupId], labels: &[String], exclude: &BTreeSet<GroupId>) -> Partition {
    let mut rows: BTreeMap<GroupId, Vec<usize>> = BTreeMap::new();
    let mut excluded = Vec::new();
    for (row, id) in ids.iter().enumerate() {
        if exclude.contains(id) {
            excluded.push(row);
        } else {
            rows.entry(*id).or_default().push(row);
        }
    }
    let blocks = rows
        .into_iter()
        .map(|(id, rows)| Block {
            id,
            label: labels.get(id.0).cloned().unwrap_or_else(|| id.to_string()),
            rows,
        })
        .collect();
    Partition { blocks, excluded }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn sizes(b: &Binning) -> Vec<usize> {
        let mut s = vec![0; b.n_bins];
        for &x in &b.bins {
            s[x] += 1;
        }
        s
    }

    #[test]
    fn median_split() {
        let values: Vec<f64> = (1..=10).map(f64::from).collect();
        let b = quantile_bins(&values, 2).unwrap();
        assert_eq!(b.bins, vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn constant_column_collapses() {
        let b = quantile_bins(&[5.0, 5.0, 5.0, 5.0], 3).unwrap();
        assert_eq!(b.n_bins, 1);
        assert!(b.is_degenerate(3));
        assert_eq!(b.bins, vec![0, 0, 0, 0]);
    }

    #[test]
    fn tertiles() {
        let values: Vec<f64> = (1..=9).map(f64::from).collect();
        assert_eq!(sizes(&quantile_bins(&values, 3).unwrap()), vec![3, 3, 3]);
    }

    #[test]
    fn ties_go_to_lower_bin() {
        let b = quantile_bins(&[1.0, 2.0, 2.0, 2.0, 3.0, 4.0], 2).unwrap();
        assert_eq!(b.bins, vec![0, 0, 0, 0, 1, 1]);
    }

    #[test]
    fn binning_preconditions() {
        assert!(quantile_bins(&[1.0, 2.0], 1).is_err());
        assert!(quantile_bins(&[1.0, 2.0], 3).is_err());
        assert!(quantile_bins(&[1.0, f64::NAN], 2).is_err());
    }

    #[test]
    fn two_by_two_cross_product() {
        let mut cols = BTreeMap::new();
        cols.insert("gender".into(), col(&["M", "F", "M", "F", "M"]));
        cols.insert("race".into(), col(&["A", "A", "B", "B", "B"]));
        let g = build_groups(&cols, &GroupingSpec::new(vec!["gender".into(), "race".into()])).unwrap();
        assert_eq!(g.table.len(), 4);
        assert_eq!(
            g.labels(),
            vec!["gender=F,race=A", "gender=F,race=B", "gender=M,race=A", "gender=M,race=B"]
        );
        assert_eq!(
            g.assignments,
            vec![Some(GroupId(2)), Some(GroupId(0)), Some(GroupId(3)), Some(GroupId(1)), Some(GroupId(3))]
        );
    }

    #[test]
    fn binned_intersection_yields_twenty_groups() {
        let n = 200;
        let mut cols = BTreeMap::new();
        cols.insert("gender".into(), (0..n).map(|i| ["M", "F"][i % 2].to_string()).collect());
        cols.insert("race".into(), (0..n).map(|i| ["A", "B"][(i / 2) % 2].to_string()).collect());
        cols.insert("age".into(), (0..n).map(|i| (18 + (i * 7) % 60).to_string()).collect());
        let spec = GroupingSpec::new(vec!["gender".into(), "race".into(), "age".into()]).with_bins("age", 5);
        let g = build_groups(&cols, &spec).unwrap();
        assert_eq!(g.table.len(), 20);
        assert!(g.warnings.is_empty());
    }

    #[test]
    fn single_level_is_one_group() {
        let mut cols = BTreeMap::new();
        cols.insert("site".into(), col(&["x", "x", "x"]));
        let g = build_groups(&cols, &GroupingSpec::new(vec!["site".into()])).unwrap();
        assert_eq!(g.table.len(), 1);
        assert_eq!(g.table[0].population, 3);
    }

    #[test]
    fn missing_values_reject_rows() {
        let mut cols = BTreeMap::new();
        cols.insert("g".into(), col(&["a", "", "b", " "]));
        let g = build_groups(&cols, &GroupingSpec::new(vec!["g".into()])).unwrap();
        assert_eq!(g.rows_rejected, 2);
        assert_eq!(g.assignments, vec![Some(GroupId(0)), None, Some(GroupId(1)), None]);
        assert!(matches!(g.warnings[0], Warning::RowsRejected { count: 2, .. }));
    }

    #[test]
    fn ids_stable_under_row_permutation() {
        let a = col(&["x", "y", "z", "y"]);
        let b = col(&["y", "z", "y", "x"]);
        let ga = build_groups(&BTreeMap::from([("g".to_string(), a)]), &GroupingSpec::new(vec!["g".into()])).unwrap();
        let gb = build_groups(&BTreeMap::from([("g".to_string(), b)]), &GroupingSpec::new(vec!["g".into()])).unwrap();
        assert_eq!(ga.labels(), gb.labels());
        assert_eq!(ga.assignments[1], gb.assignments[0]);
    }

    #[test]
    fn partition_examples() {
        let ids = [GroupId(0), GroupId(1), GroupId(0), GroupId(1)];
        let p = Partition::from_ids(&ids);
        assert_eq!(p.blocks[0].rows, vec![0, 2]);
        assert_eq!(p.blocks[1].rows, vec![1, 3]);

        let one = Partition::from_ids(&[GroupId(0); 3]);
        assert_eq!(one.blocks.len(), 1);
        assert_eq!(one.blocks[0].rows, vec![0, 1, 2]);
    }

    #[test]
    fn drop_small_group_policy() {
        let mut cols = BTreeMap::new();
        cols.insert("g".into(), col(&["a", "a", "b", "a", "a"]));
        let mut spec = GroupingSpec::new(vec!["g".into()]);
        spec.min_group_size = 2;
        spec.drop_small_groups = true;
        let g = build_groups(&cols, &spec).unwrap();
        assert_eq!(g.warnings.len(), 1);
        let ids: Vec<GroupId> = g.assignments.iter().map(|a| a.unwrap()).collect();
        let p = partition(&ids, &g.labels(), &g.dropped());
        assert_eq!(p.blocks.len(), 1);
        assert_eq!(p.blocks[0].rows.len(), 4);
        assert_eq!(p.excluded, vec![2]);

        spec.drop_small_groups = false;
        let kept = build_groups(&cols, &spec).unwrap();
        assert!(kept.dropped().is_empty());
        assert!(kept.table[1].below_min_size);
    }

    #[test]
    fn invalid_specs() {
        assert!(GroupingSpec::new(vec![]).validate().is_err());
        assert!(GroupingSpec::new(vec!["a".into()]).with_bins("a", 1).validate().is_err());
        assert!(GroupingSpec::new(vec!["a".into()]).with_bins("b", 3).validate().is_err());
    }

    #[test]
    fn data_validation() {
        let classes = vec!["0".to_string(), "1".to_string()];
        assert!(ClassificationData::new(classes.clone(), vec![0, 2], vec![0, 1], None, vec![GroupId(0); 2]).is_err());
        assert!(ClassificationData::new(classes.clone(), vec![0], vec![0], Some(vec![vec![0.5, 0.6]]), vec![GroupId(0)]).is_err());
        assert!(ClassificationData::new(classes, vec![0], vec![0], Some(vec![vec![0.4, 0.6]]), vec![GroupId(0)]).is_ok());
        assert!(RegressionData::new(vec![1.0], vec![f64::NAN], vec![GroupId(0)]).is_err());
        assert!(RegressionData::new(vec![1.0, 2.0], vec![1.0], vec![GroupId(0)]).is_err());
    }
}
