//! Seeded scenario generators.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, so output
//! is identical across platforms for a given seed. Rows are emitted group by
//! group. Classification scenarios echo the label as the prediction
//! (`y_pred = y_true`); the regression scenario predicts with the true
//! coefficient.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{ClassificationData, GroupId, RegressionData};
use crate::metrics::RateMatrix;

/// Gap between the lowest and highest class-1 rate in the multigroup scenario.
pub const MULTIGROUP_SPREAD: f64 = 0.4;
pub const TWOGROUP_RATES: [f64; 2] = [0.5, 0.8];
pub const REG_FEATURE_MEANS: [f64; 2] = [30.0, 10.0];
pub const REG_FEATURE_VARIANCE: f64 = 4.0;
pub const REG_NOISE_VARIANCES: [f64; 2] = [10.0, 1.0];
pub const REG_COEFFICIENT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Scenario {
    MultigroupCls,
    TwogroupCls,
    TwogroupReg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    pub n: usize,
    /// Only used by [`Scenario::MultigroupCls`].
    pub n_groups: usize,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        let groups = match self.scenario {
            Scenario::MultigroupCls => self.n_groups,
            _ => 2,
        };
        if groups < 2 {
            return Err(Error::InvalidParams(format!("need at least 2 groups, got {groups}")));
        }
        let min_n = if self.scenario == Scenario::TwogroupReg { 4 } else { groups };
        if self.n < min_n {
            return Err(Error::InvalidParams(format!("need n >= {min_n}, got {}", self.n)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationScenario {
    pub data: ClassificationData,
    /// Exact population rates, one row per group, classes `["0", "1"]`.
    pub population: RateMatrix,
}

#[derive(Debug, Clone)]
pub struct RegressionScenario {
    pub data: RegressionData,
    pub x: Vec<f64>,
}

/// Sizes of `n_groups` near-equal groups; the first `n % n_groups` get one extra row.
pub fn group_sizes(n: usize, n_groups: usize) -> Vec<usize> {
    let (base, extra) = (n / n_groups, n % n_groups);
    (0..n_groups).map(|g| base + usize::from(g < extra)).collect()
}

/// Class-1 rates `0.5 + 0.4 * g / (n_groups - 1)`.
pub fn multigroup_rates(n_groups: usize) -> Vec<f64> {
    (0..n_groups)
        .map(|g| 0.5 + MULTIGROUP_SPREAD * g as f64 / (n_groups - 1) as f64)
        .collect()
}

/// Exact class rates of the multigroup scenario, one row per group.
pub fn multigroup_population(n_groups: usize) -> Result<RateMatrix> {
    if n_groups < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 groups, got {n_groups}")));
    }
    population_matrix(&multigroup_rates(n_groups))
}

fn population_matrix(class1: &[f64]) -> Result<RateMatrix> {
    RateMatrix::new(
        (0..class1.len()).map(|g| g.to_string()).collect(),
        vec!["0".into(), "1".into()],
        class1.iter().map(|&p| vec![1.0 - p, p]).collect(),
    )
}

fn binary_labels(sizes: &[usize], class1: &[f64], seed: u64) -> Result<ClassificationData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: usize = sizes.iter().sum();
    let mut y = Vec::with_capacity(n);
    let mut groups = Vec::with_capacity(n);
    for (g, (&size, &p)) in sizes.iter().zip(class1).enumerate() {
        for _ in 0..size {
            y.push(usize::from(rng.random_bool(p)));
            groups.push(GroupId(g));
        }
    }
    ClassificationData::new(vec!["0".into(), "1".into()], y.clone(), y, None, groups)
}

pub fn gen_multigroup_cls(n: usize, n_groups: usize, seed: u64) -> Result<ClassificationScenario> {
    ScenarioSpec { scenario: Scenario::MultigroupCls, n, n_groups, seed }.validate()?;
    Ok(ClassificationScenario {
        data: binary_labels(&group_sizes(n, n_groups), &multigroup_rates(n_groups), seed)?,
        population: multigroup_population(n_groups)?,
    })
}

pub fn gen_twogroup_cls(n: usize, seed: u64) -> Result<ClassificationScenario> {
    ScenarioSpec { scenario: Scenario::TwogroupCls, n, n_groups: 2, seed }.validate()?;
    Ok(ClassificationScenario {
        data: binary_labels(&group_sizes(n, 2), &TWOGROUP_RATES, seed)?,
        population: population_matrix(&TWOGROUP_RATES)?,
    })
}

pub fn gen_twogroup_reg(n: usize, seed: u64) -> Result<RegressionScenario> {
    gen_twogroup_reg_with_noise(n, REG_NOISE_VARIANCES, seed)
}

/// Regression scenario with custom per-group noise variances.
pub fn gen_twogroup_reg_with_noise(n: usize, noise_variances: [f64; 2], seed: u64) -> Result<RegressionScenario> {
    ScenarioSpec { scenario: Scenario::TwogroupReg, n, n_groups: 2, seed }.validate()?;
    if noise_variances.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidParams(format!("noise variances must be >= 0, got {noise_variances:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut x, mut y_true, mut y_pred, mut groups) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (g, size) in group_sizes(n, 2).into_iter().enumerate() {
        let feature = Normal::new(REG_FEATURE_MEANS[g], REG_FEATURE_VARIANCE.sqrt())
            .map_err(|e| Error::InvalidParams(e.to_string()))?;
        let noise = Normal::new(0.0, noise_variances[g].sqrt()).map_err(|e| Error::InvalidParams(e.to_string()))?;
        for _ in 0..size {
            let xi = feature.sample(&mut rng);
            let fit = REG_COEFFICIENT * xi;
            x.push(xi);
            y_pred.push(fit);
            y_true.push(fit + noise.sample(&mut rng));
            groups.push(GroupId(g));
        }
    }
    Ok(RegressionScenario {
        data: RegressionData::new(y_true, y_pred, groups)?,
        x,
    })
}

/// Closed-form one-feature least squares; returns `(intercept, slope)`.
pub fn fit_simple_ols(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::InvalidData(format!("x has {} values, y has {}", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::InvalidData("least squares needs at least 2 points".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidData("least squares inputs must be finite".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx) * (xi - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit);
    }
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    Ok((my - slope * mx, slope))
}
