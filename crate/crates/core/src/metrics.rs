//! Structural statistics of communities and networks.
//!
//! Distances are measured inside the community's induced subgraph, over
//! reachable pairs only; `component_count` tells how many pieces a community
//! falls into so disconnected ones can be filtered downstream.

use std::collections::VecDeque;

use serde::Serialize;

use crate::community::Community;
use crate::domsets::{greedy_eds, greedy_ids, Criterion, DomSetResult};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::slopes::{eslope, islope, EstimatorParams, SlopeResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunityStats {
    pub id: String,
    pub size: usize,
    pub apl: f64,
    pub diameter: usize,
    pub ccc: f64,
    pub triangles: u64,
    pub connected_triples: u64,
    pub component_count: usize,
    pub boundary_size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Distances {
    apl: f64,
    diameter: usize,
    components: usize,
}

fn distances(sub: &Graph) -> Distances {
    let n = sub.node_count();
    let mut dist = Vec::new();
    let mut queue = VecDeque::new();
    let (mut total, mut pairs, mut diameter) = (0u64, 0u64, 0usize);
    for s in 0..n {
        sub.bfs_into(s, &mut dist, &mut queue);
        for &d in &dist[s + 1..] {
            if d != usize::MAX {
                total += d as u64;
                pairs += 1;
                diameter = diameter.max(d);
            }
        }
    }
    Distances {
        apl: if pairs == 0 {
            0.0
        } else {
            total as f64 / pairs as f64
        },
        diameter,
        components: sub.component_count(),
    }
}

/// Mean hop distance over reachable member pairs, with the number of
/// connected components of the induced subgraph.
pub fn community_apl(graph: &Graph, community: &Community) -> (f64, usize) {
    let d = distances(&graph.induced_subgraph(community));
    (d.apl, d.components)
}

/// Largest hop distance between reachable members.
pub fn community_diameter(graph: &Graph, community: &Community) -> usize {
    distances(&graph.induced_subgraph(community)).diameter
}

/// Global transitivity: three times the triangle count over the number of
/// connected triples, or 0 when there are no triples.
pub fn clustering_coefficient(graph: &Graph) -> f64 {
    let t = graph.count_triangles();
    ratio_or_zero(3 * t.triangles, t.connected_triples)
}

fn ratio_or_zero(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn community_stats(graph: &Graph, community: &Community) -> CommunityStats {
    let sub = graph.induced_subgraph(community);
    let d = distances(&sub);
    let t = sub.count_triangles();
    CommunityStats {
        id: community.id().to_owned(),
        size: community.len(),
        apl: d.apl,
        diameter: d.diameter,
        ccc: ratio_or_zero(3 * t.triangles, t.connected_triples),
        triangles: t.triangles,
        connected_triples: t.connected_triples,
        component_count: d.components,
        boundary_size: community.boundary().len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupSummary {
    pub count: usize,
    /// 0 when the group is empty.
    pub mean_triangles: f64,
    pub empty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleSplit {
    pub threshold: f64,
    /// Communities with clustering coefficient above the threshold.
    pub above: GroupSummary,
    pub at_or_below: GroupSummary,
}

/// Splits communities by clustering coefficient and compares how many
/// triangles each side holds on average.
pub fn triangle_split_analysis(stats: &[CommunityStats], threshold: f64) -> Result<TriangleSplit> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidParameter(format!(
            "threshold must lie in [0, 1], got {threshold}"
        )));
    }
    let group = |above: bool| {
        let tri: Vec<u64> = stats
            .iter()
            .filter(|s| (s.ccc > threshold) == above)
            .map(|s| s.triangles)
            .collect();
        GroupSummary {
            count: tri.len(),
            mean_triangles: if tri.is_empty() {
                0.0
            } else {
                tri.iter().sum::<u64>() as f64 / tri.len() as f64
            },
            empty: tri.is_empty(),
        }
    };
    Ok(TriangleSplit {
        threshold,
        above: group(true),
        at_or_below: group(false),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileConfig {
    /// Budget of the fixed-size dominating sets.
    pub k: usize,
    /// Target ratio of the `p`-sets, also used to size the slope subsets.
    pub p: f64,
    pub estimator: EstimatorParams,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            k: 5,
            p: 0.8,
            estimator: EstimatorParams::default(),
        }
    }
}

/// Everything measured about one community.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityProfile {
    pub ids_k: DomSetResult,
    pub eds_k: DomSetResult,
    pub ids_p: DomSetResult,
    pub eds_p: DomSetResult,
    pub islope: SlopeResult,
    /// `None` for closed communities.
    pub eslope: Option<SlopeResult>,
    pub stats: CommunityStats,
}

impl CommunityProfile {
    pub fn id(&self) -> &str {
        &self.stats.id
    }
}

pub fn profile_community(
    graph: &Graph,
    community: &Community,
    config: &ProfileConfig,
) -> Result<CommunityProfile> {
    let by_size = Criterion::Size(config.k);
    let by_ratio = Criterion::Ratio(config.p);
    Ok(CommunityProfile {
        ids_k: greedy_ids(graph, community, by_size)?,
        eds_k: greedy_eds(graph, community, by_size)?,
        ids_p: greedy_ids(graph, community, by_ratio)?,
        eds_p: greedy_eds(graph, community, by_ratio)?,
        islope: islope(graph, community, by_ratio, &config.estimator)?,
        eslope: eslope(graph, community, by_ratio, &config.estimator)?,
        stats: community_stats(graph, community),
    })
}

/// Network-level row: unweighted means over communities. External
/// quantities average over communities with a nonempty boundary only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkSummary {
    pub communities: usize,
    pub closed_communities: usize,
    pub idr: f64,
    pub edr: Option<f64>,
    pub idn: f64,
    pub edn: Option<f64>,
    pub islope: f64,
    pub eslope: Option<f64>,
    pub apl: f64,
    pub diameter: f64,
    pub ccc: f64,
    pub ncc: f64,
}

/// Order-independent mean: values are summed in sorted order.
fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut v: Vec<f64> = values.into_iter().collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    Some(v.iter().sum::<f64>() / v.len() as f64)
}

pub fn aggregate_stats(profiles: &[CommunityProfile], ncc: f64) -> Result<NetworkSummary> {
    if profiles.is_empty() {
        return Err(Error::NoCommunities);
    }
    let open: Vec<&CommunityProfile> = profiles
        .iter()
        .filter(|p| p.eds_k.achieved_ratio.is_some())
        .collect();
    let all = |f: fn(&CommunityProfile) -> f64| mean(profiles.iter().map(f)).expect("nonempty");
    Ok(NetworkSummary {
        communities: profiles.len(),
        closed_communities: profiles.len() - open.len(),
        idr: all(|p| p.ids_k.achieved_ratio.expect("internal ratio")),
        edr: mean(open.iter().filter_map(|p| p.eds_k.achieved_ratio)),
        idn: all(|p| p.ids_p.size() as f64),
        edn: mean(open.iter().map(|p| p.eds_p.size() as f64)),
        islope: all(|p| p.islope.slope),
        eslope: mean(open.iter().filter_map(|p| p.eslope.map(|s| s.slope))),
        apl: all(|p| p.stats.apl),
        diameter: all(|p| p.stats.diameter as f64),
        ccc: all(|p| p.stats.ccc),
        ncc,
    })
}
