//! Internal and external dominating ratios and greedy dominating sets.
//!
//! The internal dominating ratio of `S ⊆ C` is the fraction of `C` covered by
//! `S` and its in-community neighbors. The external ratio is the fraction of
//! the community's outside neighborhood `N(C, C̄)` that `S` touches. Both are
//! coverage functions, so greedy selection carries the usual `1 − 1/e`
//! guarantee for a fixed size budget.

use std::fmt;

use serde::Serialize;

use crate::community::{neighbors_in, neighbors_out, Community, CoverageView, NodeSubset};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Internal,
    External,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Internal => "internal",
            Mode::External => "external",
        })
    }
}

/// When the greedy loop stops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Criterion {
    /// Exactly `min(k, |C|)` nodes.
    Size(usize),
    /// The fewest greedy nodes whose ratio reaches `p`.
    Ratio(f64),
}

impl Criterion {
    pub fn validate(self) -> Result<Self> {
        match self {
            Criterion::Size(0) => Err(Error::InvalidParameter("k must be at least 1".into())),
            Criterion::Ratio(p) if !(0.0..=1.0).contains(&p) => Err(Error::InvalidParameter(
                format!("p must lie in [0, 1], got {p}"),
            )),
            c => Ok(c),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Size(k) => write!(f, "k={k}"),
            Criterion::Ratio(p) => write!(f, "p={p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreedyStep {
    pub node: NodeId,
    /// Newly covered nodes contributed by this pick.
    pub gain: usize,
    /// Ratio of the prefix ending at this pick.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomSetResult {
    pub mode: Mode,
    pub criterion: Criterion,
    pub set: NodeSubset,
    /// `None` for the external mode on a closed community.
    pub achieved_ratio: Option<f64>,
    pub steps: Vec<GreedyStep>,
}

impl DomSetResult {
    pub fn size(&self) -> usize {
        self.set.len()
    }

    pub fn is_closed_sentinel(&self) -> bool {
        self.achieved_ratio.is_none()
    }
}

/// `|S ∪ N(S, C)| / |C|`.
pub fn idr(graph: &Graph, subset: &NodeSubset, community: &Community) -> f64 {
    let covered = subset.len() + neighbors_in(graph, subset, community).len();
    covered as f64 / community.len() as f64
}

/// `|N(S, C̄)| / |N(C, C̄)|`, or `None` when the community is closed.
pub fn edr(graph: &Graph, subset: &NodeSubset, community: &Community) -> Option<f64> {
    if community.is_closed() {
        return None;
    }
    let touched = neighbors_out(graph, subset, community).len();
    Some(touched as f64 / community.boundary().len() as f64)
}

pub fn greedy_ids(
    graph: &Graph,
    community: &Community,
    criterion: Criterion,
) -> Result<DomSetResult> {
    greedy(graph, community, Mode::Internal, criterion)
}

pub fn greedy_eds(
    graph: &Graph,
    community: &Community,
    criterion: Criterion,
) -> Result<DomSetResult> {
    greedy(graph, community, Mode::External, criterion)
}

/// Greedy maximum coverage. Each step adds the member with the most newly
/// covered targets, lowest index first on ties.
pub fn greedy(
    graph: &Graph,
    community: &Community,
    mode: Mode,
    criterion: Criterion,
) -> Result<DomSetResult> {
    let criterion = criterion.validate()?;
    if mode == Mode::External && community.is_closed() {
        return Ok(DomSetResult {
            mode,
            criterion,
            set: NodeSubset::default(),
            achieved_ratio: None,
            steps: Vec::new(),
        });
    }
    let view = CoverageView::new(graph, community);
    let picks = greedy_local(&view, mode, criterion);
    let mut nodes: Vec<NodeId> = picks.iter().map(|s| community.members()[s.node]).collect();
    let steps = picks
        .iter()
        .map(|s| GreedyStep {
            node: community.members()[s.node],
            ..*s
        })
        .collect::<Vec<_>>();
    let achieved = steps.last().map_or(0.0, |s| s.ratio);
    nodes.sort_unstable();
    Ok(DomSetResult {
        mode,
        criterion,
        set: NodeSubset::from_sorted(nodes),
        achieved_ratio: Some(achieved),
        steps,
    })
}

/// Greedy over local member indices; `GreedyStep::node` is a local index.
pub(crate) fn greedy_local(
    view: &CoverageView,
    mode: Mode,
    criterion: Criterion,
) -> Vec<GreedyStep> {
    let n = view.len();
    let (targets, sets): (usize, &[Vec<u32>]) = match mode {
        Mode::Internal => (n, &view.internal),
        Mode::External => (view.boundary_len, &view.external),
    };
    // owners[t]: members whose sets contain target t
    let owners: Vec<Vec<u32>> = match mode {
        Mode::Internal => view.internal.clone(),
        Mode::External => {
            let mut owners = vec![Vec::new(); targets];
            for (i, set) in sets.iter().enumerate() {
                for &t in set {
                    owners[t as usize].push(i as u32);
                }
            }
            owners
        }
    };
    let mut gain: Vec<usize> = sets.iter().map(Vec::len).collect();
    let mut covered = vec![false; targets];
    let mut chosen = vec![false; n];
    let mut covered_count = 0usize;
    let mut steps = Vec::new();
    loop {
        let done = match criterion {
            Criterion::Size(k) => steps.len() >= k.min(n),
            Criterion::Ratio(p) => {
                steps.len() == n
                    || (!steps.is_empty() && covered_count as f64 / targets as f64 >= p)
            }
        };
        if done {
            break;
        }
        let best = (0..n)
            .filter(|&i| !chosen[i])
            .max_by(|&a, &b| gain[a].cmp(&gain[b]).then(b.cmp(&a)))
            .expect("an unchosen member remains");
        chosen[best] = true;
        let picked_gain = gain[best];
        for &t in &sets[best] {
            let t = t as usize;
            if !covered[t] {
                covered[t] = true;
                covered_count += 1;
                for &w in &owners[t] {
                    gain[w as usize] -= 1;
                }
            }
        }
        steps.push(GreedyStep {
            node: best,
            gain: picked_gain,
            ratio: covered_count as f64 / targets as f64,
        });
    }
    steps
}
