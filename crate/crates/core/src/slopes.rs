//! Internal and external slopes.
//!
//! A slope is the dominating ratio reached by the greedy set minus the mean
//! ratio of a uniformly random member subset of the same size. The mean is
//! computed by enumerating all subsets when there are few enough of them and
//! by seeded Monte Carlo sampling otherwise; the [`Estimator`] record says
//! which one produced a given number.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::community::{Community, CoverageView};
use crate::domsets::{greedy_local, Criterion, Mode};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EstimatorParams {
    /// Monte Carlo sample count.
    pub samples: usize,
    /// Largest subset count that is enumerated exactly.
    pub enumeration_cap: u64,
    /// Global seed; each community derives its own stream from it.
    pub seed: u64,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        EstimatorParams {
            samples: 10_000,
            enumeration_cap: 100_000,
            seed: 0,
        }
    }
}

impl EstimatorParams {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::InvalidParameter(format!(
                "samples must be at least 2, got {}",
                self.samples
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Estimator {
    Exact {
        subsets: u64,
    },
    MonteCarlo {
        samples: usize,
        seed: u64,
        std_error: f64,
    },
}

impl Estimator {
    pub fn std_error(&self) -> f64 {
        match *self {
            Estimator::Exact { .. } => 0.0,
            Estimator::MonteCarlo { std_error, .. } => std_error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expectation {
    pub value: f64,
    pub estimator: Estimator,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeResult {
    pub kind: Mode,
    /// Size of the greedy set, and of the random subsets it is compared to.
    pub subset_size: usize,
    pub observed_ratio: f64,
    pub expected_ratio: f64,
    pub slope: f64,
    pub estimator: Estimator,
}

/// Seed of the random stream for one community and mode. Depends only on
/// the inputs, so results do not depend on scheduling.
pub fn stream_seed(global: u64, community_id: &str, mode: Mode) -> u64 {
    // FNV-1a over the id, then a splitmix64 finalizer
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in community_id.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let tag = match mode {
        Mode::Internal => 0x49,
        Mode::External => 0x45,
    };
    splitmix(global ^ splitmix(h ^ tag))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Binomial coefficient, or `None` once it exceeds `cap`.
fn binomial_capped(n: usize, k: usize, cap: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Mean dominating ratio of a uniformly random `size`-subset of the
/// community. `None` for the external mode on a closed community.
pub fn expected_ratio(
    graph: &Graph,
    community: &Community,
    size: usize,
    mode: Mode,
    params: &EstimatorParams,
) -> Result<Option<Expectation>> {
    params.validate()?;
    if size == 0 || size > community.len() {
        return Err(Error::InvalidParameter(format!(
            "subset size {size} outside [1, {}]",
            community.len()
        )));
    }
    if mode == Mode::External && community.is_closed() {
        return Ok(None);
    }
    let view = CoverageView::new(graph, community);
    let seed = stream_seed(params.seed, community.id(), mode);
    Ok(Some(expectation_local(&view, size, mode, params, seed)))
}

fn expectation_local(
    view: &CoverageView,
    size: usize,
    mode: Mode,
    params: &EstimatorParams,
    seed: u64,
) -> Expectation {
    let mut counter = Coverage::new(view, mode);
    match binomial_capped(view.len(), size, params.enumeration_cap) {
        Some(subsets) => {
            let mut total: u128 = 0;
            let n = view.len();
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                total += counter.count(&idx) as u128;
                let mut i = size;
                while i > 0 && idx[i - 1] == n - size + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..size {
                    idx[j] = idx[j - 1] + 1;
                }
            }
            let denom = subsets as u128 * counter.targets as u128;
            Expectation {
                value: total as f64 / denom as f64,
                estimator: Estimator::Exact { subsets },
            }
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut mean = 0.0;
            let mut m2 = 0.0;
            let mut picks = Vec::with_capacity(size);
            for i in 0..params.samples {
                picks.clear();
                picks.extend(rand::seq::index::sample(&mut rng, view.len(), size).iter());
                let x = counter.count(&picks) as f64 / counter.targets as f64;
                // Welford update
                let delta = x - mean;
                mean += delta / (i + 1) as f64;
                m2 += delta * (x - mean);
            }
            let variance = m2 / (params.samples - 1) as f64;
            Expectation {
                value: mean,
                estimator: Estimator::MonteCarlo {
                    samples: params.samples,
                    seed,
                    std_error: (variance / params.samples as f64).sqrt(),
                },
            }
        }
    }
}

/// Reusable distinct-target counter.
struct Coverage<'a> {
    sets: &'a [Vec<u32>],
    targets: usize,
    stamp: Vec<u32>,
    round: u32,
}

impl<'a> Coverage<'a> {
    fn new(view: &'a CoverageView, mode: Mode) -> Self {
        let (sets, targets) = match mode {
            Mode::Internal => (&view.internal[..], view.len()),
            Mode::External => (&view.external[..], view.boundary_len),
        };
        Coverage {
            sets,
            targets,
            stamp: vec![0; targets],
            round: 0,
        }
    }

    fn count(&mut self, picks: &[usize]) -> usize {
        self.round = self.round.wrapping_add(1);
        if self.round == 0 {
            self.stamp.fill(0);
            self.round = 1;
        }
        let mut hit = 0;
        for &i in picks {
            for &t in &self.sets[i] {
                let slot = &mut self.stamp[t as usize];
                if *slot != self.round {
                    *slot = self.round;
                    hit += 1;
                }
            }
        }
        hit
    }
}

/// Slope of the given kind. The greedy set is chosen by `criterion`
/// (`Criterion::Ratio(0.8)` for the usual `p`-set). `None` for the external
/// kind on a closed community.
pub fn slope(
    graph: &Graph,
    community: &Community,
    kind: Mode,
    criterion: Criterion,
    params: &EstimatorParams,
) -> Result<Option<SlopeResult>> {
    let criterion = criterion.validate()?;
    params.validate()?;
    if kind == Mode::External && community.is_closed() {
        return Ok(None);
    }
    let view = CoverageView::new(graph, community);
    let steps = greedy_local(&view, kind, criterion);
    let observed = steps.last().map_or(0.0, |s| s.ratio);
    let size = steps.len();
    let seed = stream_seed(params.seed, community.id(), kind);
    let expected = expectation_local(&view, size, kind, params, seed);
    Ok(Some(SlopeResult {
        kind,
        subset_size: size,
        observed_ratio: observed,
        expected_ratio: expected.value,
        slope: observed - expected.value,
        estimator: expected.estimator,
    }))
}

pub fn islope(
    graph: &Graph,
    community: &Community,
    criterion: Criterion,
    params: &EstimatorParams,
) -> Result<SlopeResult> {
    Ok(slope(graph, community, Mode::Internal, criterion, params)?
        .expect("internal slope is always defined"))
}

pub fn eslope(
    graph: &Graph,
    community: &Community,
    criterion: Criterion,
    params: &EstimatorParams,
) -> Result<Option<SlopeResult>> {
    slope(graph, community, Mode::External, criterion, params)
}
