//! Randomised checks of the six sparsity axioms and the PQ Index theorems.
//!
//! Every check draws its instances from a ChaCha8 stream seeded with the
//! caller's seed, so a report is a pure function of
//! `(property, measure, trials, dim_range, seed)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparsity::{gini, lp_norm, measure_vector, mpd, pq_index, pq_max, Measure, MeasureSpec, NonNegVector};

/// Margin by which a strict inequality must hold.
pub const STRICT_MARGIN: f64 = 1e-12;
/// Tolerance for the equality axioms (scaling, cloning) and norm identities.
pub const EQUALITY_TOL: f64 = 1e-9;
/// Tolerance for exact theorem values (one-hot maximum, constant minimum).
pub const EXACT_TOL: f64 = 1e-12;

const LOW: f64 = 0.01;
const HIGH: f64 = 1.0;
/// Smallest gap between the two components of a sampled Robin Hood transfer.
const MIN_TRANSFER_GAP: f64 = 0.05;
/// Smallest transfer, as a fraction of half the gap.
const MIN_TRANSFER_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyId {
    #[serde(rename = "D1_ROBIN_HOOD")]
    D1RobinHood,
    #[serde(rename = "D2_SCALING")]
    D2Scaling,
    #[serde(rename = "D3_RISING_TIDE")]
    D3RisingTide,
    #[serde(rename = "D4_CLONING")]
    D4Cloning,
    #[serde(rename = "P1_BILL_GATES")]
    P1BillGates,
    #[serde(rename = "P2_BABIES")]
    P2Babies,
    #[serde(rename = "T31_MAX")]
    T31Max,
    #[serde(rename = "T32_MIN")]
    T32Min,
    #[serde(rename = "T33_L2DIST")]
    T33L2Dist,
    #[serde(rename = "T34_TRANSFER")]
    T34Transfer,
    #[serde(rename = "T35_BOUNDS")]
    T35Bounds,
    #[serde(rename = "T36_TRIM")]
    T36Trim,
}

impl PropertyId {
    pub const AXIOMS: [PropertyId; 6] = [
        PropertyId::D1RobinHood,
        PropertyId::D2Scaling,
        PropertyId::D3RisingTide,
        PropertyId::D4Cloning,
        PropertyId::P1BillGates,
        PropertyId::P2Babies,
    ];

    pub const THEOREMS: [PropertyId; 6] = [
        PropertyId::T31Max,
        PropertyId::T32Min,
        PropertyId::T33L2Dist,
        PropertyId::T34Transfer,
        PropertyId::T35Bounds,
        PropertyId::T36Trim,
    ];

    pub fn is_axiom(self) -> bool {
        Self::AXIOMS.contains(&self)
    }

    pub fn code(self) -> &'static str {
        match self {
            PropertyId::D1RobinHood => "D1_ROBIN_HOOD",
            PropertyId::D2Scaling => "D2_SCALING",
            PropertyId::D3RisingTide => "D3_RISING_TIDE",
            PropertyId::D4Cloning => "D4_CLONING",
            PropertyId::P1BillGates => "P1_BILL_GATES",
            PropertyId::P2Babies => "P2_BABIES",
            PropertyId::T31Max => "T31_MAX",
            PropertyId::T32Min => "T32_MIN",
            PropertyId::T33L2Dist => "T33_L2DIST",
            PropertyId::T34Transfer => "T34_TRANSFER",
            PropertyId::T35Bounds => "T35_BOUNDS",
            PropertyId::T36Trim => "T36_TRIM",
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for PropertyId {
    type Err = Error;

    /// Accepts the full id (`D1_ROBIN_HOOD`) or its short prefix (`d1`, `t33`).
    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        let short = upper.split('_').next().unwrap_or("");
        Self::AXIOMS
            .iter()
            .chain(Self::THEOREMS.iter())
            .copied()
            .find(|p| p.code() == upper || p.code().split('_').next() == Some(short))
            .ok_or_else(|| Error::InvalidParams(format!("unknown property id '{s}'")))
    }
}

/// Whether `property` is expected to hold for `measure` (axioms only).
///
/// PQ and Gini satisfy all six axioms; MPD only cloning and Bill Gates.
pub fn expected_to_hold(property: PropertyId, measure: &Measure) -> bool {
    match measure {
        Measure::Mpd => matches!(property, PropertyId::D4Cloning | PropertyId::P1BillGates),
        Measure::Gini | Measure::Pq { .. } => true,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    /// Vectors involved, in the order the relation mentions them.
    pub inputs: Vec<Vec<f64>>,
    /// Scalar parameters of the instance (transfer amount, scale, indices).
    pub parameters: Vec<(String, f64)>,
    /// Measured values, in the order the relation mentions them.
    pub observed: Vec<f64>,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub property: PropertyId,
    pub measure: Option<MeasureSpec>,
    pub trials: usize,
    pub failures: usize,
    pub first_counterexample: Option<Counterexample>,
    pub seed: u64,
    pub dim_range: (usize, usize),
}

impl CheckReport {
    fn new(property: PropertyId, measure: Option<MeasureSpec>, seed: u64, dim_range: (usize, usize)) -> Self {
        Self {
            property,
            measure,
            trials: 0,
            failures: 0,
            first_counterexample: None,
            seed,
            dim_range,
        }
    }

    fn record(&mut self, outcome: Option<Counterexample>) {
        self.trials += 1;
        if let Some(cx) = outcome {
            self.failures += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(cx);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// One sampled axiom instance: the base vector plus indices and amount.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomInstance {
    pub w: Vec<f64>,
    pub i: usize,
    pub j: usize,
    pub alpha: f64,
}

fn validate_run(trials: usize, dim_range: (usize, usize)) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be >= 1".into()));
    }
    let (lo, hi) = dim_range;
    if lo < 2 || lo > hi {
        return Err(Error::InvalidParams(format!(
            "dimension range must satisfy 2 <= d_min <= d_max, got [{lo}, {hi}]"
        )));
    }
    Ok(())
}

fn eval(w: &[f64], measure: &Measure) -> f64 {
    let v = NonNegVector::new(w.to_vec()).expect("sampled vectors are non-negative and finite");
    measure_vector(&v, measure).expect("measure validated up front").value
}

fn pq12(w: &[f64]) -> f64 {
    let v = NonNegVector::new(w.to_vec()).expect("sampled vectors are non-negative and finite");
    pq_index(&v, 1.0, 2.0).expect("p=1, q=2 is valid")
}

/// Uniform on the open interval (lo, hi).
fn open_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return lo + (hi - lo) * u;
        }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| open_uniform(rng, LOW, HIGH)).collect()
}

fn random_dim(rng: &mut ChaCha8Rng, (lo, hi): (usize, usize)) -> usize {
    rng.random_range(lo..=hi)
}

fn distinct_pair(rng: &mut ChaCha8Rng, d: usize) -> (usize, usize) {
    let i = rng.random_range(0..d);
    let mut j = rng.random_range(0..d - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

/// Draws a random instance for `property` (an axiom).
pub fn sample_axiom_instance(property: PropertyId, rng: &mut ChaCha8Rng, dim_range: (usize, usize)) -> AxiomInstance {
    let d = random_dim(rng, dim_range);
    match property {
        PropertyId::D1RobinHood => loop {
            let w = random_vector(rng, d);
            let (a, b) = distinct_pair(rng, d);
            let (i, j) = if w[a] > w[b] { (a, b) } else { (b, a) };
            // near-equal pairs or tiny transfers move the measure by less
            // than the strict margin, so they cannot be decided
            if w[i] - w[j] >= MIN_TRANSFER_GAP {
                let alpha = open_uniform(rng, MIN_TRANSFER_FRACTION, 1.0) * (w[i] - w[j]) / 2.0;
                return AxiomInstance { w, i, j, alpha };
            }
        },
        PropertyId::D2Scaling => AxiomInstance {
            w: random_vector(rng, d),
            i: 0,
            j: 0,
            alpha: open_uniform(rng, 0.1, 10.0),
        },
        PropertyId::D3RisingTide | PropertyId::P1BillGates => {
            let w = random_vector(rng, d);
            let i = rng.random_range(0..d);
            AxiomInstance {
                w,
                i,
                j: 0,
                alpha: open_uniform(rng, LOW, 5.0),
            }
        }
        PropertyId::D4Cloning => AxiomInstance {
            w: random_vector(rng, d),
            i: 0,
            j: 0,
            alpha: 0.0,
        },
        PropertyId::P2Babies => {
            // at least one exact zero, at least one positive entry
            let mut w = random_vector(rng, d);
            let zeros = rng.random_range(1..d);
            let mut idx: Vec<usize> = (0..d).collect();
            for k in 0..zeros {
                let pick = rng.random_range(k..d);
                idx.swap(k, pick);
                w[idx[k]] = 0.0;
            }
            AxiomInstance { w, i: 0, j: 0, alpha: 0.0 }
        }
        _ => unreachable!("{property} is not an axiom"),
    }
}

/// Evaluates one axiom instance; `Some` carries the counterexample.
pub fn evaluate_axiom(property: PropertyId, measure: &Measure, inst: &AxiomInstance) -> Option<Counterexample> {
    let w = &inst.w;
    let base = eval(w, measure);
    let params = |names: &[(&str, f64)]| names.iter().map(|(k, v)| (k.to_string(), *v)).collect::<Vec<_>>();
    match property {
        PropertyId::D1RobinHood => {
            let mut moved = w.clone();
            moved[inst.i] -= inst.alpha;
            moved[inst.j] += inst.alpha;
            let after = eval(&moved, measure);
            (after >= base - STRICT_MARGIN).then(|| Counterexample {
                inputs: vec![w.clone(), moved],
                parameters: params(&[("i", inst.i as f64), ("j", inst.j as f64), ("alpha", inst.alpha)]),
                observed: vec![base, after],
                expected: "S(after transfer) < S(w)".into(),
            })
        }
        PropertyId::D2Scaling => {
            let scaled: Vec<f64> = w.iter().map(|x| x * inst.alpha).collect();
            let after = eval(&scaled, measure);
            ((after - base).abs() > EQUALITY_TOL * base.abs().max(1.0)).then(|| Counterexample {
                inputs: vec![w.clone(), scaled],
                parameters: params(&[("alpha", inst.alpha)]),
                observed: vec![base, after],
                expected: "S(alpha * w) = S(w)".into(),
            })
        }
        PropertyId::D3RisingTide => {
            let raised: Vec<f64> = w.iter().map(|x| x + inst.alpha).collect();
            let after = eval(&raised, measure);
            (after >= base - STRICT_MARGIN).then(|| Counterexample {
                inputs: vec![w.clone(), raised],
                parameters: params(&[("alpha", inst.alpha)]),
                observed: vec![base, after],
                expected: "S(w + alpha) < S(w)".into(),
            })
        }
        PropertyId::D4Cloning => {
            let cloned: Vec<f64> = w.iter().chain(w.iter()).copied().collect();
            let after = eval(&cloned, measure);
            ((after - base).abs() > EQUALITY_TOL * base.abs().max(1.0)).then(|| Counterexample {
                inputs: vec![w.clone(), cloned],
                parameters: Vec::new(),
                observed: vec![base, after],
                expected: "S([w, w]) = S(w)".into(),
            })
        }
        PropertyId::P1BillGates => {
            let w_max = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let beta = (w_max - w[inst.i]) + 1.0;
            let mut boosted = w.clone();
            boosted[inst.i] += beta;
            let mut further = boosted.clone();
            further[inst.i] += inst.alpha;
            let lower = eval(&boosted, measure);
            let upper = eval(&further, measure);
            (upper <= lower + STRICT_MARGIN).then(|| Counterexample {
                inputs: vec![boosted, further],
                parameters: params(&[("i", inst.i as f64), ("beta", beta), ("alpha", inst.alpha)]),
                observed: vec![lower, upper],
                expected: "S(w_i + beta + alpha) > S(w_i + beta)".into(),
            })
        }
        PropertyId::P2Babies => {
            let mut extended = w.clone();
            extended.push(0.0);
            let after = eval(&extended, measure);
            (after <= base + STRICT_MARGIN).then(|| Counterexample {
                inputs: vec![w.clone(), extended],
                parameters: Vec::new(),
                observed: vec![base, after],
                expected: "S([w, 0]) > S(w)".into(),
            })
        }
        _ => unreachable!("{property} is not an axiom"),
    }
}

/// Samples `trials` instances of an axiom and counts violations.
pub fn check_axiom(
    property: PropertyId,
    measure: &MeasureSpec,
    trials: usize,
    dim_range: (usize, usize),
    seed: u64,
) -> Result<CheckReport> {
    if !property.is_axiom() {
        return Err(Error::InvalidParams(format!("{property} is not an axiom")));
    }
    validate_run(trials, dim_range)?;
    measure.measure.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new(property, Some(*measure), seed, dim_range);
    for _ in 0..trials {
        let inst = sample_axiom_instance(property, &mut rng, dim_range);
        report.record(evaluate_axiom(property, &measure.measure, &inst));
    }
    Ok(report)
}

/// Hand-built instance tried first by [`counterexample_search`].
fn canonical_instance(property: PropertyId) -> AxiomInstance {
    match property {
        PropertyId::D1RobinHood => AxiomInstance {
            w: vec![4.0, 3.0, 1.0, 0.0],
            i: 1,
            j: 2,
            alpha: 0.5,
        },
        PropertyId::D2Scaling => AxiomInstance {
            w: vec![1.0, 0.0],
            i: 0,
            j: 0,
            alpha: 2.0,
        },
        PropertyId::D3RisingTide => AxiomInstance {
            w: vec![1.0, 0.0],
            i: 0,
            j: 0,
            alpha: 1.0,
        },
        PropertyId::P1BillGates => AxiomInstance {
            w: vec![1.0, 0.0],
            i: 1,
            j: 0,
            alpha: 1.0,
        },
        _ => AxiomInstance {
            w: vec![1.0, 0.0],
            i: 0,
            j: 0,
            alpha: 0.0,
        },
    }
}

/// Directed search for a violation of an axiom, stopping at the first hit.
///
/// Step 0 tries a hand-built instance; later steps sample, and for Robin
/// Hood the transfer is restricted to interior components when possible.
pub fn counterexample_search(
    property: PropertyId,
    measure: &MeasureSpec,
    budget: usize,
    dim_range: (usize, usize),
    seed: u64,
) -> Result<CheckReport> {
    if !property.is_axiom() {
        return Err(Error::InvalidParams(format!("{property} is not an axiom")));
    }
    validate_run(budget, dim_range)?;
    measure.measure.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new(property, Some(*measure), seed, dim_range);
    for step in 0..budget {
        let inst = if step == 0 {
            canonical_instance(property)
        } else {
            let mut inst = sample_axiom_instance(property, &mut rng, dim_range);
            if property == PropertyId::D1RobinHood {
                steer_interior(&mut inst, &mut rng);
            }
            inst
        };
        report.record(evaluate_axiom(property, &measure.measure, &inst));
        if report.failures > 0 {
            break;
        }
    }
    Ok(report)
}

/// Moves a Robin Hood transfer onto two components strictly between the
/// extremes, where MPD cannot see it.
fn steer_interior(inst: &mut AxiomInstance, rng: &mut ChaCha8Rng) {
    let d = inst.w.len();
    if d < 4 {
        return;
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| inst.w[a].total_cmp(&inst.w[b]));
    let interior = &order[1..d - 1];
    let a = interior[rng.random_range(0..interior.len())];
    let b = interior[rng.random_range(0..interior.len())];
    let (i, j) = if inst.w[a] >= inst.w[b] { (a, b) } else { (b, a) };
    if inst.w[i] - inst.w[j] >= MIN_TRANSFER_GAP {
        inst.i = i;
        inst.j = j;
        inst.alpha = open_uniform(rng, MIN_TRANSFER_FRACTION, 1.0) * (inst.w[i] - inst.w[j]) / 2.0;
    }
}

/// (p, q) pairs cycled through by the PQ theorem checks.
pub const PQ_PAIRS: [(f64, f64); 3] = [(1.0, 2.0), (0.5, 1.5), (1.0, 3.0)];

/// Left side of the L2-distance identity: `|| w/||w||_2 - d^(-1/2) 1 ||_2`.
pub fn l2_distance_to_uniform(w: &[f64]) -> f64 {
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let center = (w.len() as f64).powf(-0.5);
    w.iter()
        .map(|x| {
            let diff = x / norm - center;
            diff * diff
        })
        .sum::<f64>()
        .sqrt()
}

/// Largest transfer `c` from the unique maximum `w[0]` that keeps it the
/// maximum after spreading `c / (d - 1)` over the rest, capped by the
/// equal-index threshold.
pub fn transfer_bound(w: &[f64]) -> f64 {
    let d = w.len() as f64;
    let rest = &w[1..];
    let rest_max = rest.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rest_mean = rest.iter().sum::<f64>() / (d - 1.0);
    let keep_max = (w[0] - rest_max) * (d - 1.0) / d;
    let equal_index = (w[0] - rest_mean) * 2.0 * (d - 1.0) * (d - 1.0) / (d * d - d + 1.0);
    keep_max.min(equal_index)
}

/// Applies the max-to-rest transfer of size `c`.
pub fn transfer_from_max(w: &[f64], c: f64) -> Vec<f64> {
    let share = c / (w.len() as f64 - 1.0);
    std::iter::once(w[0] - c).chain(w[1..].iter().map(|x| x + share)).collect()
}

fn theorem_trial(property: PropertyId, trial: usize, rng: &mut ChaCha8Rng, dim_range: (usize, usize)) -> Option<Counterexample> {
    let d = random_dim(rng, dim_range);
    match property {
        PropertyId::T31Max => {
            let (p, q) = PQ_PAIRS[trial % PQ_PAIRS.len()];
            let mut w = vec![0.0; d];
            let k = rng.random_range(0..d);
            w[k] = open_uniform(rng, LOW, 100.0);
            let one_hot = pq_index(&NonNegVector::new(w.clone()).ok()?, p, q).ok()?;
            let dense = random_vector(rng, d);
            let dense_value = pq_index(&NonNegVector::new(dense.clone()).ok()?, p, q).ok()?;
            let bound = pq_max(d, p, q);
            let ok = (one_hot - bound).abs() <= EXACT_TOL && dense_value <= bound + EXACT_TOL;
            (!ok).then(|| Counterexample {
                inputs: vec![w, dense],
                parameters: vec![("p".into(), p), ("q".into(), q)],
                observed: vec![one_hot, dense_value, bound],
                expected: "I(one-hot) = 1 - d^(1/q-1/p) >= I(w)".into(),
            })
        }
        PropertyId::T32Min => {
            let (p, q) = PQ_PAIRS[trial % PQ_PAIRS.len()];
            let c = open_uniform(rng, LOW, 100.0);
            let constant = vec![c; d];
            let at_constant = pq_index(&NonNegVector::new(constant.clone()).ok()?, p, q).ok()?;
            let w = random_vector(rng, d);
            let at_random = pq_index(&NonNegVector::new(w.clone()).ok()?, p, q).ok()?;
            let non_constant = w.iter().any(|&x| x != w[0]);
            let ok = at_constant < EXACT_TOL && (!non_constant || at_random > 0.0);
            (!ok).then(|| Counterexample {
                inputs: vec![constant, w],
                parameters: vec![("p".into(), p), ("q".into(), q)],
                observed: vec![at_constant, at_random],
                expected: "I(c * 1) = 0 < I(w) for non-constant w".into(),
            })
        }
        PropertyId::T33L2Dist => {
            let w = random_vector(rng, d);
            let lhs = l2_distance_to_uniform(&w);
            let rhs = (2.0 * pq12(&w)).sqrt();
            ((lhs - rhs).abs() > EQUALITY_TOL).then(|| Counterexample {
                inputs: vec![w],
                parameters: Vec::new(),
                observed: vec![lhs, rhs],
                expected: "||w/||w||_2 - d^(-1/2) 1||_2 = sqrt(2 I_12(w))".into(),
            })
        }
        PropertyId::T34Transfer => {
            let mut w = random_vector(rng, d);
            let rest_max = w[1..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            w[0] = rest_max + open_uniform(rng, 0.05, HIGH);
            let c = open_uniform(rng, 0.0, 1.0) * transfer_bound(&w);
            let moved = transfer_from_max(&w, c);
            let before = pq12(&w);
            let after = pq12(&moved);
            (after >= before - STRICT_MARGIN).then(|| Counterexample {
                inputs: vec![w, moved],
                parameters: vec![("c".into(), c)],
                observed: vec![before, after],
                expected: "I_12(after transfer) < I_12(w)".into(),
            })
        }
        PropertyId::T35Bounds => {
            let w = random_vector(rng, d);
            let v = NonNegVector::new(w.clone()).ok()?;
            let l2 = lp_norm(&v, 2.0).ok()?;
            let g = gini(&v);
            let m = mpd(&v);
            let pq = pq12(&w);
            let slack_gini_mpd = d as f64 * m / (2.0 * l2) - g;
            let slack_mpd_pq = 2.0 * l2 * (2.0 * pq).sqrt() - m;
            let slack_pq_gini = g - pq;
            let ok = [slack_gini_mpd, slack_mpd_pq, slack_pq_gini]
                .iter()
                .all(|&s| s >= -EXACT_TOL);
            (!ok).then(|| Counterexample {
                inputs: vec![w],
                parameters: Vec::new(),
                observed: vec![slack_gini_mpd, slack_mpd_pq, slack_pq_gini],
                expected: "all three slacks >= 0".into(),
            })
        }
        PropertyId::T36Trim => {
            let (p, q) = PQ_PAIRS[trial % PQ_PAIRS.len()];
            let d = d.max(3);
            trim_trial(rng, d, p, q)
        }
        _ => unreachable!("{property} is not a theorem"),
    }
}

/// Builds two vectors sharing max, min and q-norm; checks that the PQ
/// ordering carries over to the trimmed interiors and that MPD is equal.
fn trim_trial(rng: &mut ChaCha8Rng, d: usize, p: f64, q: f64) -> Option<Counterexample> {
    let hi = 1.0;
    let lo = open_uniform(rng, 0.0, 0.1);
    let interior = d - 2;
    let u: Vec<f64> = (0..interior).map(|_| open_uniform(rng, 0.2, 0.9)).collect();
    let qnorm = |xs: &[f64]| xs.iter().map(|x| x.powf(q)).sum::<f64>().powf(1.0 / q);
    let target = qnorm(&u);
    let v = (0..64).find_map(|_| {
        let raw: Vec<f64> = (0..interior).map(|_| open_uniform(rng, 0.2, 0.9)).collect();
        let scale = target / qnorm(&raw);
        let scaled: Vec<f64> = raw.iter().map(|x| x * scale).collect();
        scaled.iter().all(|&x| x > lo && x < hi).then_some(scaled)
    })?;
    let assemble = |mid: &[f64]| {
        let mut w = vec![hi];
        w.extend_from_slice(mid);
        w.push(lo);
        w
    };
    let w1 = assemble(&u);
    let w2 = assemble(&v);
    let pq_of = |xs: &[f64]| pq_index(&NonNegVector::new(xs.to_vec()).expect("valid"), p, q).expect("valid");
    let (i1, i2) = (pq_of(&w1), pq_of(&w2));
    let (t1, t2) = (pq_of(&u), pq_of(&v));
    let same_mpd = (mpd(&NonNegVector::new(w1.clone()).ok()?) - mpd(&NonNegVector::new(w2.clone()).ok()?)).abs() <= EXACT_TOL;
    let ordered = if (i1 - i2).abs() < EXACT_TOL {
        true
    } else if i1 < i2 {
        t1 < t2
    } else {
        t2 < t1
    };
    (!(ordered && same_mpd)).then(|| Counterexample {
        inputs: vec![w1, w2],
        parameters: vec![("p".into(), p), ("q".into(), q)],
        observed: vec![i1, i2, t1, t2],
        expected: "I(w1) < I(w2) implies I(trim w1) < I(trim w2); MPD(w1) = MPD(w2)".into(),
    })
}

/// Randomised check of one PQ Index theorem.
pub fn check_theorem(property: PropertyId, trials: usize, dim_range: (usize, usize), seed: u64) -> Result<CheckReport> {
    if property.is_axiom() {
        return Err(Error::InvalidParams(format!("{property} is not a theorem")));
    }
    validate_run(trials, dim_range)?;
    let measure = match property {
        PropertyId::T33L2Dist | PropertyId::T34Transfer | PropertyId::T35Bounds => Some(MeasureSpec::default()),
        _ => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new(property, measure, seed, dim_range);
    for trial in 0..trials {
        report.record(theorem_trial(property, trial, &mut rng, dim_range));
    }
    Ok(report)
}
