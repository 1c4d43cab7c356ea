//! Sparsity measures on non-negative vectors.
//!
//! Three measures are provided: the maximum pairwise difference (MPD), the
//! Gini Index and the PQ Index `I_{p,q}`. Larger values mean the mass of the
//! vector is more concentrated, which in the fairness setting means the
//! per-group quantities are less equal.
//!
//! All three return 0 on the all-zero vector. [`sparsity`] reports that case
//! through [`SparsityValue::zero_vector`] so callers can surface a warning.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Above this length sums switch from index order to pairwise summation.
const PAIRWISE_THRESHOLD: usize = 1024;

/// Sums `values` in index order, or pairwise when the slice is long.
pub(crate) fn stable_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_THRESHOLD {
        values.iter().sum()
    } else {
        let (left, right) = values.split_at(values.len() / 2);
        stable_sum(left) + stable_sum(right)
    }
}

/// A vector of finite, non-negative components with at least one entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonNegVector(Vec<f64>);

impl NonNegVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, &value) in components.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::InvalidInput { index, value });
            }
            if value < 0.0 {
                return Err(Error::NegativeInput { index, value });
            }
        }
        Ok(Self(components))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sum(&self) -> f64 {
        stable_sum(&self.0)
    }
}

impl TryFrom<Vec<f64>> for NonNegVector {
    type Error = Error;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        Self::new(value)
    }
}

impl TryFrom<&[f64]> for NonNegVector {
    type Error = Error;

    fn try_from(value: &[f64]) -> Result<Self> {
        Self::new(value.to_vec())
    }
}

/// Which sparsity measure to apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Measure {
    Mpd,
    Gini,
    Pq { p: f64, q: f64 },
}

impl Measure {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Measure::Pq { p, q } => validate_pq(p, q),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Measure::Mpd => "mpd",
            Measure::Gini => "gini",
            Measure::Pq { .. } => "pq",
        }
    }
}

impl Default for Measure {
    fn default() -> Self {
        Measure::Pq { p: 1.0, q: 2.0 }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Pq { p, q } => write!(f, "pq(p={p}, q={q})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Positivity transform applied to raw values before measuring.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    #[default]
    None,
    Exp,
}

/// A measure together with the transform applied to its input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub measure: Measure,
    pub transform: Transform,
}

impl MeasureSpec {
    pub fn new(measure: Measure, transform: Transform) -> Result<Self> {
        measure.validate()?;
        Ok(Self { measure, transform })
    }

    pub const fn mpd() -> Self {
        Self {
            measure: Measure::Mpd,
            transform: Transform::None,
        }
    }

    pub const fn gini() -> Self {
        Self {
            measure: Measure::Gini,
            transform: Transform::None,
        }
    }

    pub fn pq(p: f64, q: f64) -> Result<Self> {
        Self::new(Measure::Pq { p, q }, Transform::None)
    }

    pub fn with_transform(mut self, transform: Transform) -> Self {
        self.transform = transform;
        self
    }
}

/// Result of [`sparsity`]: the value and whether the input was all zeros.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SparsityValue {
    pub value: f64,
    pub zero_vector: bool,
}

fn validate_pq(p: f64, q: f64) -> Result<()> {
    if !(p.is_finite() && q.is_finite()) || p <= 0.0 || q <= p {
        return Err(Error::InvalidParams(format!(
            "PQ index needs 0 < p < q, got p={p}, q={q}"
        )));
    }
    Ok(())
}

/// `(sum_i w_i^p)^(1/p)`, computed on the vector rescaled by its maximum.
pub fn lp_norm(w: &NonNegVector, p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidParams(format!("norm order must be > 0, got {p}")));
    }
    let scale = w.max();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let terms: Vec<f64> = w.as_slice().iter().map(|&x| (x / scale).powf(p)).collect();
    Ok(scale * stable_sum(&terms).powf(1.0 / p))
}

pub fn mpd(w: &NonNegVector) -> f64 {
    w.max() - w.min()
}

/// Gini Index from the pairwise double sum `sum_ij |w_i - w_j| / (2 d sum_i w_i)`.
pub fn gini(w: &NonNegVector) -> f64 {
    let total = w.sum();
    if total == 0.0 {
        return 0.0;
    }
    let xs = w.as_slice();
    let rows: Vec<f64> = xs
        .iter()
        .map(|&a| {
            let row: Vec<f64> = xs.iter().map(|&b| (a - b).abs()).collect();
            stable_sum(&row)
        })
        .collect();
    let d = xs.len() as f64;
    stable_sum(&rows) / (2.0 * d * total)
}

/// Gini Index via the sorted linear form on the L1-normalised vector.
///
/// Independent of [`gini`]; the two must agree to rounding.
pub fn gini_sorted_form(w: &NonNegVector) -> f64 {
    let total = w.sum();
    if total == 0.0 {
        return 0.0;
    }
    let mut sorted: Vec<f64> = w.as_slice().iter().map(|&x| x / total).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let d = sorted.len();
    let terms: Vec<f64> = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (d as f64 + 1.0 - 2.0 * (i as f64 + 1.0)) * x)
        .collect();
    stable_sum(&terms) / d as f64
}

/// PQ Index `1 - d^(1/q - 1/p) * ||w||_p / ||w||_q` for `0 < p < q`.
pub fn pq_index(w: &NonNegVector, p: f64, q: f64) -> Result<f64> {
    validate_pq(p, q)?;
    if w.is_zero() {
        return Ok(0.0);
    }
    let d = w.len() as f64;
    let ratio = lp_norm(w, p)? / lp_norm(w, q)?;
    // equal components can land a few ulps below zero
    Ok((1.0 - d.powf(1.0 / q - 1.0 / p) * ratio).max(0.0))
}

/// Upper bound of the PQ Index for dimension `d`, attained by one-hot vectors.
pub fn pq_max(d: usize, p: f64, q: f64) -> f64 {
    1.0 - (d as f64).powf(1.0 / q - 1.0 / p)
}

/// Maps raw (possibly negative) values into a [`NonNegVector`].
pub fn apply_transform(raw: &[f64], transform: Transform) -> Result<NonNegVector> {
    if raw.is_empty() {
        return Err(Error::EmptyVector);
    }
    if let Some((index, &value)) = raw.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        return Err(Error::InvalidInput { index, value });
    }
    match transform {
        Transform::None => NonNegVector::new(raw.to_vec()),
        Transform::Exp => NonNegVector::new(raw.iter().map(|x| x.exp()).collect()),
    }
}

/// Single entry point: transform, then dispatch on the measure.
pub fn sparsity(raw: &[f64], spec: &MeasureSpec) -> Result<SparsityValue> {
    spec.measure.validate()?;
    let w = apply_transform(raw, spec.transform)?;
    measure_vector(&w, &spec.measure)
}

/// Applies `measure` to an already-validated vector.
pub fn measure_vector(w: &NonNegVector, measure: &Measure) -> Result<SparsityValue> {
    let value = match *measure {
        Measure::Mpd => mpd(w),
        Measure::Gini => gini(w),
        Measure::Pq { p, q } => pq_index(w, p, q)?,
    };
    Ok(SparsityValue {
        value,
        zero_vector: w.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> NonNegVector {
        NonNegVector::new(xs.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Direct double-loop oracle for the PQ formula, no rescaling.
    fn pq_oracle(xs: &[f64], p: f64, q: f64) -> f64 {
        let d = xs.len() as f64;
        let np: f64 = xs.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p);
        let nq: f64 = xs.iter().map(|x| x.powf(q)).sum::<f64>().powf(1.0 / q);
        1.0 - d.powf(1.0 / q - 1.0 / p) * np / nq
    }

    #[test]
    fn lp_norm_examples() {
        assert!(close(lp_norm(&v(&[3.0, 4.0]), 2.0).unwrap(), 5.0, 1e-12));
        assert!(close(lp_norm(&v(&[1.0, 1.0, 1.0]), 1.0).unwrap(), 3.0, 1e-12));
        assert!(close(lp_norm(&v(&[3.0, 1.0]), 1.0).unwrap(), 4.0, 1e-12));
        assert!(close(lp_norm(&v(&[3.0, 1.0]), 2.0).unwrap(), 10f64.sqrt(), 1e-12));
        assert_eq!(lp_norm(&v(&[0.0, 0.0]), 2.0).unwrap(), 0.0);
        assert!(lp_norm(&v(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(matches!(
            NonNegVector::new(vec![1.0, f64::NAN]),
            Err(Error::InvalidInput { index: 1, .. })
        ));
        assert!(matches!(
            NonNegVector::new(vec![f64::INFINITY]),
            Err(Error::InvalidInput { index: 0, .. })
        ));
        assert_eq!(NonNegVector::new(vec![]), Err(Error::EmptyVector));
    }

    #[test]
    fn mpd_examples() {
        assert!(close(mpd(&v(&[0.2, 0.5, 0.3])), 0.3, 1e-15));
        assert_eq!(mpd(&v(&[7.5])), 0.0);
        assert_eq!(mpd(&v(&[1.0, 0.0, 0.5])), 1.0);
    }

    #[test]
    fn gini_examples() {
        assert_eq!(gini(&v(&[1.0, 1.0, 1.0, 1.0])), 0.0);
        assert!(close(gini(&v(&[1.0, 0.0, 0.0])), 2.0 / 3.0, 1e-12));
        assert!(close(gini(&v(&[0.5, 0.3, 0.2])), 0.2, 1e-12));
        assert_eq!(gini(&v(&[0.0, 0.0])), 0.0);
    }

    #[test]
    fn gini_sorted_examples() {
        assert!(close(gini_sorted_form(&v(&[0.5, 0.3, 0.2])), 0.2, 1e-12));
        assert!(close(gini_sorted_form(&v(&[1.0, 0.0, 0.0])), 2.0 / 3.0, 1e-12));
        assert_eq!(gini_sorted_form(&v(&[0.25, 0.25, 0.25, 0.25])), 0.0);
        assert!(close(gini_sorted_form(&v(&[0.2, 0.5, 0.3])), 0.2, 1e-12));
    }

    #[test]
    fn pq_examples() {
        assert!(pq_index(&v(&[1.0, 1.0, 1.0, 1.0]), 1.0, 2.0).unwrap() < 1e-12);
        let one_hot = pq_index(&v(&[1.0, 0.0, 0.0]), 1.0, 2.0).unwrap();
        assert!(close(one_hot, 1.0 - 3f64.powf(-0.5), 1e-12));
        assert!(close(one_hot, 0.4226497308103743, 1e-12));
        let a = pq_index(&v(&[3.0, 1.0]), 1.0, 2.0).unwrap();
        let b = pq_index(&v(&[6.0, 2.0]), 1.0, 2.0).unwrap();
        assert!(close(a, 1.0 - 2.0 / 5f64.sqrt(), 1e-12));
        assert!(close(a, b, 1e-12));
        assert!(close(a, pq_oracle(&[3.0, 1.0], 1.0, 2.0), 1e-12));
    }

    #[test]
    fn pq_parameter_validation() {
        let w = v(&[1.0, 2.0]);
        assert!(matches!(pq_index(&w, 2.0, 2.0), Err(Error::InvalidParams(_))));
        assert!(matches!(pq_index(&w, 2.0, 1.0), Err(Error::InvalidParams(_))));
        assert!(matches!(pq_index(&w, 0.0, 1.0), Err(Error::InvalidParams(_))));
        assert!(MeasureSpec::pq(1.0, 1.0).is_err());
    }

    #[test]
    fn zero_vector_policy() {
        let z = v(&[0.0, 0.0, 0.0]);
        assert_eq!(pq_index(&z, 1.0, 2.0).unwrap(), 0.0);
        for spec in [MeasureSpec::mpd(), MeasureSpec::gini(), MeasureSpec::default()] {
            let out = sparsity(&[0.0, 0.0], &spec).unwrap();
            assert_eq!(out.value, 0.0);
            assert!(out.zero_vector);
        }
    }

    #[test]
    fn transform_examples() {
        let out = apply_transform(&[0.1, 0.4], Transform::Exp).unwrap();
        assert!(close(out.as_slice()[0], 1.1051709180756477, 1e-12));
        assert!(close(out.as_slice()[1], 1.4918246976412703, 1e-12));
        assert_eq!(apply_transform(&[0.0, 0.0], Transform::Exp).unwrap().as_slice(), &[1.0, 1.0]);
        assert!(matches!(
            apply_transform(&[-0.2, 0.3], Transform::None),
            Err(Error::NegativeInput { index: 0, .. })
        ));
    }

    #[test]
    fn sparsity_dispatch() {
        let pq = sparsity(&[0.7, 0.4], &MeasureSpec::default()).unwrap();
        // oracle: 1 - 1.1 / (sqrt(2) * sqrt(0.65))
        assert!(close(pq.value, 0.03523617876226759, 1e-12));
        assert!(!pq.zero_vector);
        assert!(close(sparsity(&[0.7, 0.4], &MeasureSpec::mpd()).unwrap().value, 0.3, 1e-12));
        for spec in [MeasureSpec::mpd(), MeasureSpec::gini(), MeasureSpec::default()] {
            assert!(sparsity(&[0.5, 0.5], &spec).unwrap().value.abs() < 1e-15);
        }
    }

    #[test]
    fn long_vectors_use_pairwise_sum() {
        let xs: Vec<f64> = (0..5000).map(|i| 0.1 + (i % 7) as f64 * 0.01).collect();
        let w = v(&xs);
        let reference: f64 = xs.iter().sum();
        assert!((w.sum() - reference).abs() < 1e-9);
        assert!(close(
            pq_index(&w, 1.0, 2.0).unwrap(),
            pq_oracle(&xs, 1.0, 2.0),
            1e-12
        ));
    }
}
