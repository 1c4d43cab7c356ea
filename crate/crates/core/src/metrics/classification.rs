use serde::Serialize;

use super::perf::{PerfMetric, PerfMetricSpec};
use super::{aggregate, measure_component, Aggregation, CellPolicy, Component, Criterion, MetricReport};
use crate::error::{Error, Result};
use crate::groups::{ClassificationData, Partition};
use crate::sparsity::MeasureSpec;
use crate::warning::Warning;

const PROB_CLAMP: f64 = 1e-12;

/// `rates[a][y]`: fraction of group `a` predicted as class `y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateMatrix {
    pub groups: Vec<String>,
    pub classes: Vec<String>,
    pub rates: Vec<Vec<f64>>,
}

impl RateMatrix {
    pub fn new(groups: Vec<String>, classes: Vec<String>, rates: Vec<Vec<f64>>) -> Result<Self> {
        if groups.is_empty() || groups.len() != rates.len() {
            return Err(Error::InvalidData("rate matrix needs one row per group".into()));
        }
        for (a, row) in rates.iter().enumerate() {
            if row.len() != classes.len() {
                return Err(Error::InvalidData(format!("rate row {a} has {} entries", row.len())));
            }
            if row.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(Error::InvalidData(format!("rate row {a} has entries outside [0, 1]")));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidData(format!("rate row {a} sums to {total}")));
            }
        }
        Ok(Self { groups, classes, rates })
    }

    pub fn column(&self, class: usize) -> Vec<f64> {
        self.rates.iter().map(|row| row[class]).collect()
    }
}

fn block_rows(partition: &Partition) -> Result<impl Iterator<Item = (&str, &[usize])>> {
    if partition.is_empty() {
        return Err(Error::InvalidData("no retained groups".into()));
    }
    if let Some(b) = partition.blocks.iter().find(|b| b.rows.is_empty()) {
        return Err(Error::InvalidData(format!("group {} is empty", b.label)));
    }
    Ok(partition.blocks.iter().map(|b| (b.label.as_str(), b.rows.as_slice())))
}

pub fn class_rate_matrix(data: &ClassificationData, partition: &Partition) -> Result<RateMatrix> {
    let k = data.n_classes();
    let pred = data.y_pred();
    let mut rates = Vec::with_capacity(partition.len());
    for (_, rows) in block_rows(partition)? {
        let mut counts = vec![0usize; k];
        for &r in rows {
            counts[pred[r]] += 1;
        }
        rates.push(counts.iter().map(|&c| c as f64 / rows.len() as f64).collect());
    }
    Ok(RateMatrix {
        groups: partition.labels(),
        classes: data.classes().to_vec(),
        rates,
    })
}

/// S-statistical parity: sparsity of each class column, combined with `agg`.
pub fn sp_classification(rates: &RateMatrix, measure: &MeasureSpec, agg: Aggregation) -> Result<MetricReport> {
    let mut warnings = Vec::new();
    let components = rates
        .classes
        .iter()
        .enumerate()
        .map(|(y, class)| measure_component(format!("y={class}"), rates.column(y), measure, &mut warnings))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = components.iter().map(|c| c.value).collect();
    Ok(MetricReport {
        criterion: Criterion::SpClassification,
        measure: *measure,
        aggregation: Some(agg),
        metric: None,
        groups: rates.groups.clone(),
        components,
        thresholds_evaluated: None,
        value: aggregate(&values, agg)?,
        warnings,
    })
}

/// Classical equalized odds: the largest gap in `P(f = y | Y = y', A = a)`
/// across groups, over all class pairs `(y, y')`.
pub fn eo_classification_mpd(data: &ClassificationData, partition: &Partition, policy: CellPolicy) -> Result<MetricReport> {
    let k = data.n_classes();
    let classes = data.classes();
    let (truth, pred) = (data.y_true(), data.y_pred());
    let blocks: Vec<(&str, &[usize])> = block_rows(partition)?.collect();
    let measure = MeasureSpec::mpd();
    let mut warnings = Vec::new();
    let mut components = Vec::new();
    for cond in 0..k {
        // per group: predicted-class counts among rows with Y = cond, then their total
        let mut rows_per_group: Vec<Option<Vec<usize>>> = Vec::with_capacity(blocks.len());
        let mut excluded = Vec::new();
        for (label, rows) in &blocks {
            let mut counts = vec![0usize; k];
            let mut n = 0;
            for &r in rows.iter().filter(|&&r| truth[r] == cond) {
                counts[pred[r]] += 1;
                n += 1;
            }
            if n == 0 {
                match policy {
                    CellPolicy::Error => {
                        return Err(Error::ConditionCellEmpty {
                            group: label.to_string(),
                            class: classes[cond].clone(),
                        })
                    }
                    CellPolicy::Drop => {
                        warnings.push(Warning::CellSkipped {
                            group: label.to_string(),
                            class: classes[cond].clone(),
                            reason: "no samples with this true class".into(),
                        });
                        excluded.push(label.to_string());
                        rows_per_group.push(None);
                        continue;
                    }
                }
            }
            counts.push(n);
            rows_per_group.push(Some(counts));
        }
        let present: Vec<&Vec<usize>> = rows_per_group.iter().flatten().collect();
        if present.is_empty() {
            continue;
        }
        for y in 0..k {
            let vector: Vec<f64> = present.iter().map(|c| c[y] as f64 / c[k] as f64).collect();
            let mut comp: Component = measure_component(
                format!("pred={}|true={}", classes[y], classes[cond]),
                vector,
                &measure,
                &mut warnings,
            )?;
            comp.excluded_groups = excluded.clone();
            components.push(comp);
        }
    }
    let values: Vec<f64> = components.iter().map(|c| c.value).collect();
    let value = if values.is_empty() {
        return Err(Error::InvalidData("no class has samples in any retained group".into()));
    } else {
        aggregate(&values, Aggregation::Max)?
    };
    Ok(MetricReport {
        criterion: Criterion::EoClassification,
        measure,
        aggregation: Some(Aggregation::Max),
        metric: None,
        groups: partition.labels(),
        components,
        thresholds_evaluated: None,
        value,
        warnings,
    })
}

fn clamp_prob(p: f64) -> f64 {
    p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)
}

/// Area under the ROC curve by the rank-sum statistic with midranks.
fn auroc(scored: &mut [(f64, bool)]) -> Option<f64> {
    let n_pos = scored.iter().filter(|(_, pos)| *pos).count();
    let n_neg = scored.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < scored.len() {
        let mut j = i;
        while j + 1 < scored.len() && scored[j + 1].0 == scored[i].0 {
            j += 1;
        }
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += midrank * scored[i..=j].iter().filter(|(_, pos)| *pos).count() as f64;
        i = j + 1;
    }
    let n_pos = n_pos as f64;
    Some((rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg as f64))
}

/// `g` for one group and class; `Err` carries the reason it is undefined.
fn g_cell(data: &ClassificationData, rows: &[usize], metric: &PerfMetricSpec, class: usize) -> std::result::Result<f64, String> {
    let (truth, pred) = (data.y_true(), data.y_pred());
    let n = rows.len() as f64;
    let name = &data.classes()[class];
    match metric.kind {
        PerfMetric::Accuracy if metric.per_class => {
            Ok(rows.iter().filter(|&&r| (truth[r] == class) == (pred[r] == class)).count() as f64 / n)
        }
        PerfMetric::Accuracy => Ok(rows.iter().filter(|&&r| truth[r] == pred[r]).count() as f64 / n),
        PerfMetric::TprFprAvg => {
            let (mut pos, mut tp, mut neg, mut fp) = (0usize, 0usize, 0usize, 0usize);
            for &r in rows {
                let hit = pred[r] == class;
                if truth[r] == class {
                    pos += 1;
                    tp += hit as usize;
                } else {
                    neg += 1;
                    fp += hit as usize;
                }
            }
            if pos == 0 {
                return Err(format!("no positives for class {name}; TPR undefined"));
            }
            if neg == 0 {
                return Err(format!("no negatives for class {name}; FPR undefined"));
            }
            Ok((tp as f64 / pos as f64 + fp as f64 / neg as f64) / 2.0)
        }
        PerfMetric::F1 => {
            let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
            for &r in rows {
                match (truth[r] == class, pred[r] == class) {
                    (true, true) => tp += 1,
                    (false, true) => fp += 1,
                    (true, false) => fn_ += 1,
                    (false, false) => {}
                }
            }
            let denom = 2 * tp + fp + fn_;
            if denom == 0 {
                return Err(format!("class {name} neither present nor predicted; F1 undefined"));
            }
            Ok(2.0 * tp as f64 / denom as f64)
        }
        PerfMetric::Auroc => {
            let scores = data.scores().ok_or("AUROC needs scores")?;
            let mut scored: Vec<(f64, bool)> = rows.iter().map(|&r| (scores[r][class], truth[r] == class)).collect();
            auroc(&mut scored).ok_or_else(|| format!("only one side of class {name} present; AUROC undefined"))
        }
        PerfMetric::CrossEntropy => {
            let scores = data.scores().ok_or("cross entropy needs scores")?;
            let total: f64 = if metric.per_class {
                rows.iter()
                    .map(|&r| {
                        let p = clamp_prob(scores[r][class]);
                        if truth[r] == class {
                            -p.ln()
                        } else {
                            -(1.0 - p).ln()
                        }
                    })
                    .sum()
            } else {
                rows.iter().map(|&r| -clamp_prob(scores[r][truth[r]]).ln()).sum()
            };
            Ok(total / n)
        }
        other => Err(format!("{} is a regression metric", other.name())),
    }
}

fn check_classification_metric(data: &ClassificationData, metric: &PerfMetricSpec) -> Result<()> {
    metric.validate()?;
    if metric.kind.is_regression() {
        return Err(Error::InvalidParams(format!(
            "{} is a regression metric",
            metric.kind.name()
        )));
    }
    if metric.kind.needs_scores() && data.scores().is_none() {
        return Err(Error::InvalidParams(format!("{} requires class scores", metric.kind.name())));
    }
    Ok(())
}

/// Per-group values of `metric` for `class`. Undefined cells are errors.
pub fn g_per_group(data: &ClassificationData, partition: &Partition, metric: &PerfMetricSpec, class: usize) -> Result<Vec<f64>> {
    check_classification_metric(data, metric)?;
    if class >= data.n_classes() {
        return Err(Error::InvalidParams(format!("class index {class} out of range")));
    }
    block_rows(partition)?
        .map(|(label, rows)| {
            g_cell(data, rows, metric, class).map_err(|reason| Error::UndefinedCell {
                group: label.to_string(),
                reason,
            })
        })
        .collect()
}

/// S-equalized odds for classifiers: sparsity of per-group `g`, per class.
///
/// Class-independent metrics produce a single component.
pub fn s_eo_classification(
    data: &ClassificationData,
    partition: &Partition,
    measure: &MeasureSpec,
    metric: &PerfMetricSpec,
    agg: Aggregation,
    policy: CellPolicy,
) -> Result<MetricReport> {
    check_classification_metric(data, metric)?;
    let blocks: Vec<(&str, &[usize])> = block_rows(partition)?.collect();
    let classes: Vec<Option<usize>> = if metric.is_class_dependent() {
        (0..data.n_classes()).map(Some).collect()
    } else {
        vec![None]
    };
    let mut warnings = Vec::new();
    let mut components = Vec::new();
    for class in classes {
        let class_label = class.map_or_else(|| "all".to_string(), |y| data.classes()[y].clone());
        let mut vector = Vec::with_capacity(blocks.len());
        let mut excluded = Vec::new();
        for (label, rows) in &blocks {
            match g_cell(data, rows, metric, class.unwrap_or(0)) {
                Ok(v) => vector.push(v),
                Err(reason) => match policy {
                    CellPolicy::Error => {
                        return Err(Error::UndefinedCell {
                            group: label.to_string(),
                            reason,
                        })
                    }
                    CellPolicy::Drop => {
                        warnings.push(Warning::CellSkipped {
                            group: label.to_string(),
                            class: class_label.clone(),
                            reason,
                        });
                        excluded.push(label.to_string());
                    }
                },
            }
        }
        if vector.is_empty() {
            continue;
        }
        let mut comp = measure_component(format!("y={class_label}"), vector, measure, &mut warnings)?;
        comp.excluded_groups = excluded;
        components.push(comp);
    }
    let values: Vec<f64> = components.iter().map(|c| c.value).collect();
    if values.is_empty() {
        return Err(Error::InvalidData("metric undefined for every group".into()));
    }
    Ok(MetricReport {
        criterion: Criterion::SEoClassification,
        measure: *measure,
        aggregation: Some(agg),
        metric: Some(*metric),
        groups: partition.labels(),
        components,
        thresholds_evaluated: None,
        value: aggregate(&values, agg)?,
        warnings,
    })
}
