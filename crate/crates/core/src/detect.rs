//! Local spectral community detection.
//!
//! Each seed gets an approximate personalized PageRank vector computed by
//! the push method on the lazy random walk; nodes are then swept in order of
//! degree-normalized score and the prefix of least conductance is kept.
//! Candidates from all seeds are filtered by size and deduplicated by
//! Jaccard overlap, preferring lower conductance.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::community::Community;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SeedStrategy {
    AllNodes,
    RandomSample(usize),
    Provided(Vec<NodeId>),
}

/// Which prefix of the sweep is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepRule {
    /// Least conductance over all admissible prefixes.
    #[default]
    GlobalMinimum,
    /// Smallest admissible prefix whose conductance is below both
    /// neighboring cut points; falls back to the global minimum.
    FirstLocalMinimum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectParams {
    /// Teleport probability.
    pub alpha: f64,
    /// Push tolerance on `residual / degree`.
    pub epsilon: f64,
    pub seeds: SeedStrategy,
    pub min_size: usize,
    pub max_size: usize,
    pub sweep_rule: SweepRule,
    /// Candidates overlapping a kept community by more than this are dropped.
    pub overlap_jaccard_max: f64,
    pub rng_seed: u64,
}

impl Default for DetectParams {
    fn default() -> Self {
        DetectParams {
            alpha: 0.15,
            epsilon: 1e-4,
            seeds: SeedStrategy::AllNodes,
            min_size: 5,
            max_size: 200,
            sweep_rule: SweepRule::GlobalMinimum,
            overlap_jaccard_max: 0.5,
            rng_seed: 0,
        }
    }
}

impl DetectParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.min_size == 0 || self.min_size > self.max_size {
            return bad(format!(
                "size bounds must satisfy 1 <= min <= max, got [{}, {}]",
                self.min_size, self.max_size
            ));
        }
        if !(0.0..=1.0).contains(&self.overlap_jaccard_max) {
            return bad(format!(
                "overlap bound must lie in [0, 1], got {}",
                self.overlap_jaccard_max
            ));
        }
        Ok(())
    }
}

/// Sparse approximate PageRank vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PprVector {
    /// `(node, score)` sorted by node; only nonzero scores.
    pub entries: Vec<(NodeId, f64)>,
    /// Largest `residual / degree` left when pushing stopped.
    pub max_residual_ratio: f64,
    pub pushes: usize,
}

impl PprVector {
    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, v: NodeId) -> f64 {
        self.entries
            .binary_search_by_key(&v, |&(n, _)| n)
            .map_or(0.0, |i| self.entries[i].1)
    }
}

/// Push-based personalized PageRank from `seed`. On return every node has
/// `residual < epsilon * degree`.
pub fn approximate_ppr(graph: &Graph, seed: NodeId, alpha: f64, epsilon: f64) -> Result<PprVector> {
    if seed >= graph.node_count() {
        return Err(Error::NodeOutOfRange(seed));
    }
    if !(alpha > 0.0 && alpha < 1.0) || epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} / epsilon {epsilon} out of range"
        )));
    }
    if graph.degree(seed) == 0 {
        return Ok(PprVector {
            entries: vec![(seed, 1.0)],
            max_residual_ratio: 0.0,
            pushes: 0,
        });
    }
    let mut p: HashMap<NodeId, f64> = HashMap::new();
    let mut r: HashMap<NodeId, f64> = HashMap::from([(seed, 1.0)]);
    let mut queue = VecDeque::from([seed]);
    let mut queued = HashSet::from([seed]);
    let mut pushes = 0;
    while let Some(u) = queue.pop_front() {
        queued.remove(&u);
        let du = graph.degree(u) as f64;
        let ru = r[&u];
        if ru < epsilon * du {
            continue;
        }
        pushes += 1;
        *p.entry(u).or_default() += alpha * ru;
        let keep = (1.0 - alpha) * ru / 2.0;
        r.insert(u, keep);
        let share = keep / du;
        for &v in graph.neighbors(u) {
            let rv = r.entry(v).or_default();
            *rv += share;
            if *rv >= epsilon * graph.degree(v) as f64 && queued.insert(v) {
                queue.push_back(v);
            }
        }
        if keep >= epsilon * du && queued.insert(u) {
            queue.push_back(u);
        }
    }
    let max_residual_ratio = r
        .iter()
        .map(|(&v, &rv)| rv / graph.degree(v) as f64)
        .fold(0.0, f64::max);
    let mut entries: Vec<(NodeId, f64)> = p.into_iter().filter(|&(_, x)| x > 0.0).collect();
    entries.sort_unstable_by_key(|&(v, _)| v);
    Ok(PprVector {
        entries,
        max_residual_ratio,
        pushes,
    })
}

/// `cut(S) / min(vol(S), vol(V \ S))`; infinite when either side has no volume.
pub fn conductance(graph: &Graph, members: &[NodeId]) -> f64 {
    let inside: HashSet<NodeId> = members.iter().copied().collect();
    let vol: usize = graph.volume(members);
    let cut: usize = members
        .iter()
        .flat_map(|&u| graph.neighbors(u))
        .filter(|v| !inside.contains(v))
        .count();
    let denom = vol.min(2 * graph.edge_count() - vol);
    if denom == 0 {
        f64::INFINITY
    } else {
        cut as f64 / denom as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCut {
    /// Sorted members of the best prefix.
    pub members: Vec<NodeId>,
    pub conductance: f64,
}

/// Best conductance prefix of the nodes ordered by `score / degree`
/// (descending, lower index first on ties). Prefixes are only cut between
/// distinct score levels, and the whole vertex set is never a candidate;
/// when nothing else remains the result is [`Error::NoLocalCommunity`].
pub fn sweep_cut(graph: &Graph, scores: &[(NodeId, f64)]) -> Result<SweepCut> {
    sweep_cut_bounded(graph, scores, 1, usize::MAX, SweepRule::GlobalMinimum)
}

/// [`sweep_cut`] restricted to prefixes of `min_size..=max_size` nodes,
/// choosing among them by `rule`.
pub fn sweep_cut_bounded(
    graph: &Graph,
    scores: &[(NodeId, f64)],
    min_size: usize,
    max_size: usize,
    rule: SweepRule,
) -> Result<SweepCut> {
    let mut order: Vec<(NodeId, f64)> = scores
        .iter()
        .filter(|&&(v, s)| s > 0.0 && graph.degree(v) > 0)
        .map(|&(v, s)| (v, s / graph.degree(v) as f64))
        .collect();
    if order.is_empty() {
        return Err(if scores.iter().all(|&(_, s)| s == 0.0) {
            Error::ZeroScores
        } else {
            Error::NoLocalCommunity
        });
    }
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    order.dedup_by_key(|e| e.0);

    let total = 2 * graph.edge_count();
    let mut inside = HashSet::new();
    let (mut vol, mut cut) = (0usize, 0isize);
    // (prefix length, conductance) at every admissible cut point
    let mut profile: Vec<(usize, f64)> = Vec::new();
    for (i, &(v, level)) in order.iter().enumerate() {
        let d = graph.degree(v);
        let internal = graph
            .neighbors(v)
            .iter()
            .filter(|w| inside.contains(*w))
            .count();
        inside.insert(v);
        vol += d;
        cut += d as isize - 2 * internal as isize;
        if inside.len() > max_size {
            break;
        }
        let boundary_here = order.get(i + 1).is_none_or(|next| next.1 < level);
        if !boundary_here || inside.len() == graph.node_count() {
            continue;
        }
        let denom = vol.min(total - vol);
        if denom > 0 {
            profile.push((i + 1, cut as f64 / denom as f64));
        }
    }
    let admissible = |k: usize| profile[k].0 >= min_size;
    let global = || {
        (0..profile.len())
            .filter(|&k| admissible(k))
            .min_by(|&a, &b| profile[a].1.total_cmp(&profile[b].1).then(a.cmp(&b)))
    };
    let chosen = match rule {
        SweepRule::GlobalMinimum => global(),
        SweepRule::FirstLocalMinimum => (0..profile.len())
            .find(|&k| {
                let phi = profile[k].1;
                admissible(k)
                    && profile.get(k + 1).is_some_and(|next| next.1 >= phi)
                    && (k == 0 || profile[k - 1].1 > phi)
            })
            .or_else(global),
    };
    let best = chosen.map(|k| profile[k]);
    let (len, phi) = best.ok_or(Error::NoLocalCommunity)?;
    let mut members: Vec<NodeId> = order[..len].iter().map(|e| e.0).collect();
    members.sort_unstable();
    Ok(SweepCut {
        members,
        conductance: phi,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectedCommunity {
    pub community: Community,
    pub conductance: f64,
    /// Whether the induced subgraph is connected.
    pub connected: bool,
    /// Seed whose sweep produced the community.
    pub seed: NodeId,
}

fn jaccard(a: &[NodeId], b: &[NodeId]) -> f64 {
    let (mut i, mut j, mut common) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    common as f64 / (a.len() + b.len() - common) as f64
}

fn seed_list(graph: &Graph, params: &DetectParams) -> Result<Vec<NodeId>> {
    let n = graph.node_count();
    Ok(match &params.seeds {
        SeedStrategy::AllNodes => (0..n).collect(),
        SeedStrategy::RandomSample(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
            let mut seeds = rand::seq::index::sample(&mut rng, n, (*k).min(n)).into_vec();
            seeds.sort_unstable();
            seeds
        }
        SeedStrategy::Provided(list) => {
            if let Some(&bad) = list.iter().find(|&&v| v >= n) {
                return Err(Error::NodeOutOfRange(bad));
            }
            list.clone()
        }
    })
}

/// Runs PPR + sweep from every seed and returns the surviving communities,
/// ordered by conductance and named `0, 1, ...` in that order. Seeds are
/// processed in parallel on the current rayon pool; the result does not
/// depend on scheduling.
pub fn detect_communities(graph: &Graph, params: &DetectParams) -> Result<Vec<DetectedCommunity>> {
    params.validate()?;
    let seeds = seed_list(graph, params)?;
    let candidates: Vec<(NodeId, SweepCut)> = seeds
        .par_iter()
        .map(|&seed| {
            let ppr = approximate_ppr(graph, seed, params.alpha, params.epsilon)?;
            match sweep_cut_bounded(
                graph,
                &ppr.entries,
                params.min_size,
                params.max_size,
                params.sweep_rule,
            ) {
                Ok(cut) => Ok(Some((seed, cut))),
                Err(Error::NoLocalCommunity | Error::ZeroScores) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .filter(|(_, cut)| (params.min_size..=params.max_size).contains(&cut.members.len()))
        .collect();

    let mut ranked = candidates;
    ranked.sort_by(|a, b| {
        a.1.conductance
            .total_cmp(&b.1.conductance)
            .then(a.1.members.len().cmp(&b.1.members.len()))
            .then(a.1.members.cmp(&b.1.members))
            .then(a.0.cmp(&b.0))
    });
    let mut kept: Vec<(NodeId, SweepCut)> = Vec::new();
    for (seed, cut) in ranked {
        if kept
            .iter()
            .all(|(_, k)| jaccard(&k.members, &cut.members) <= params.overlap_jaccard_max)
        {
            kept.push((seed, cut));
        }
    }
    kept.into_iter()
        .enumerate()
        .map(|(i, (seed, cut))| {
            let community = Community::new(i.to_string(), cut.members, graph)?;
            let connected = graph.induced_subgraph(&community).component_count() == 1;
            Ok(DetectedCommunity {
                community,
                conductance: cut.conductance,
                connected,
                seed,
            })
        })
        .collect()
}
