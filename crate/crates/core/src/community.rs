//! Communities, node subsets, and the community file format.
//!
//! A community file holds one community per line: whitespace-separated node
//! labels with an optional leading `id:` token. Lines starting with `#` are
//! comments. Communities may overlap.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// A nonempty set of nodes of one graph, with its external boundary
/// `N(C, C̄)` cached at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Community {
    id: String,
    members: Vec<NodeId>,
    boundary: Vec<NodeId>,
}

impl Community {
    /// Duplicate members are collapsed.
    pub fn new<I>(id: impl Into<String>, members: I, graph: &Graph) -> Result<Self>
    where
        I: IntoIterator<Item = NodeId>,
    {
        let id = id.into();
        let mut members: Vec<NodeId> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&v| v >= graph.node_count()) {
            return Err(Error::NodeOutOfRange(bad));
        }
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptyCommunity(id));
        }
        let mut boundary: Vec<NodeId> = members
            .iter()
            .flat_map(|&u| graph.neighbors(u).iter().copied())
            .filter(|v| members.binary_search(v).is_err())
            .collect();
        boundary.sort_unstable();
        boundary.dedup();
        Ok(Community {
            id,
            members,
            boundary,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Sorted member list.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.position(v).is_some()
    }

    /// Rank of `v` among the sorted members.
    pub fn position(&self, v: NodeId) -> Option<usize> {
        self.members.binary_search(&v).ok()
    }

    /// `N(C, C̄)`: nodes outside the community adjacent to some member.
    pub fn boundary(&self) -> &[NodeId] {
        &self.boundary
    }

    /// True when no edge leaves the community.
    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    /// Number of edges with exactly one endpoint in the community.
    pub fn cut_size(&self, graph: &Graph) -> usize {
        self.members
            .iter()
            .map(|&u| {
                graph
                    .neighbors(u)
                    .iter()
                    .filter(|&&v| !self.contains(v))
                    .count()
            })
            .sum()
    }
}

/// A subset of one community's members.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeSubset {
    nodes: Vec<NodeId>,
}

impl NodeSubset {
    pub fn new<I>(community: &Community, nodes: I) -> Result<Self>
    where
        I: IntoIterator<Item = NodeId>,
    {
        let mut nodes: Vec<NodeId> = nodes.into_iter().collect();
        nodes.sort_unstable();
        nodes.dedup();
        if let Some(&node) = nodes.iter().find(|&&v| !community.contains(v)) {
            return Err(Error::NotAMember {
                node,
                community: community.id().to_owned(),
            });
        }
        Ok(NodeSubset { nodes })
    }

    /// The whole community as a subset.
    pub fn whole(community: &Community) -> Self {
        NodeSubset {
            nodes: community.members().to_vec(),
        }
    }

    pub(crate) fn from_sorted(nodes: Vec<NodeId>) -> Self {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        NodeSubset { nodes }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `N(S, C)`: community members outside `S` adjacent to `S`. Sorted.
pub fn neighbors_in(graph: &Graph, subset: &NodeSubset, community: &Community) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = subset
        .nodes()
        .iter()
        .flat_map(|&u| graph.neighbors(u).iter().copied())
        .filter(|&v| community.contains(v) && subset.nodes.binary_search(&v).is_err())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `N(S, C̄)`: nodes outside the community adjacent to `S`. Sorted.
pub fn neighbors_out(graph: &Graph, subset: &NodeSubset, community: &Community) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = subset
        .nodes()
        .iter()
        .flat_map(|&u| graph.neighbors(u).iter().copied())
        .filter(|&v| !community.contains(v))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Reads a community file against `graph`. Communities without an explicit
/// `id:` token are numbered by their position in the file, from 0.
pub fn load_communities<R: BufRead>(reader: R, graph: &Graph) -> Result<Vec<Community>> {
    let mut communities = Vec::new();
    let mut ids = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace().peekable();
        let id = match tokens.peek() {
            Some(first) if first.ends_with(':') => {
                let id = first.trim_end_matches(':').to_owned();
                tokens.next();
                if id.is_empty() {
                    return Err(Error::parse(i + 1, "empty community id"));
                }
                id
            }
            _ => communities.len().to_string(),
        };
        let members = tokens
            .map(|label| {
                graph
                    .index_of(label)
                    .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;
        if members.is_empty() {
            return Err(Error::parse(i + 1, "empty community line"));
        }
        if !ids.insert(id.clone()) {
            return Err(Error::parse(
                i + 1,
                format!("duplicate community id `{id}`"),
            ));
        }
        communities.push(Community::new(id, members, graph)?);
    }
    Ok(communities)
}

/// Writes communities as `id: label label ...` lines, members in index order.
pub fn write_communities<W: Write>(
    mut out: W,
    graph: &Graph,
    communities: &[Community],
) -> std::io::Result<()> {
    for c in communities {
        write!(out, "{}:", c.id())?;
        for &v in c.members() {
            write!(out, " {}", graph.label(v))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Coverage structure of one community in local member indices, shared by
/// the greedy dominating-set routines and the slope estimators.
#[derive(Debug, Clone)]
pub(crate) struct CoverageView {
    /// Closed in-community neighborhood of each member (includes itself).
    pub internal: Vec<Vec<u32>>,
    /// External neighbors of each member, as indices into `boundary`.
    pub external: Vec<Vec<u32>>,
    pub boundary_len: usize,
}

impl CoverageView {
    pub fn new(graph: &Graph, community: &Community) -> Self {
        let boundary = community.boundary();
        let mut internal = Vec::with_capacity(community.len());
        let mut external = Vec::with_capacity(community.len());
        for (i, &u) in community.members().iter().enumerate() {
            let mut inner = vec![i as u32];
            let mut outer = Vec::new();
            for &v in graph.neighbors(u) {
                match community.position(v) {
                    Some(j) => inner.push(j as u32),
                    None => {
                        let b = boundary.binary_search(&v).expect("boundary is complete");
                        outer.push(b as u32);
                    }
                }
            }
            inner.sort_unstable();
            internal.push(inner);
            external.push(outer);
        }
        CoverageView {
            internal,
            external,
            boundary_len: boundary.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.internal.len()
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::worked_example;
    use super::*;

    #[test]
    fn worked_example_neighborhoods() {
        let (g, c) = worked_example();
        let s = NodeSubset::new(&c, [3, 4]).unwrap();
        assert_eq!(neighbors_in(&g, &s, &c), vec![0, 2, 5]);
        assert_eq!(neighbors_out(&g, &s, &c), vec![6, 8]);
        let all = NodeSubset::whole(&c);
        assert_eq!(neighbors_out(&g, &all, &c), vec![6, 7, 8]);
        assert_eq!(c.boundary(), &[6, 7, 8]);
    }

    #[test]
    fn whole_community_has_no_inner_neighbors() {
        let (g, c) = worked_example();
        assert!(neighbors_in(&g, &NodeSubset::whole(&c), &c).is_empty());
    }

    #[test]
    fn isolated_subset_has_no_neighbors() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let c = Community::new("c", [0, 1, 2, 3], &g).unwrap();
        let s = NodeSubset::new(&c, [3]).unwrap();
        assert!(neighbors_in(&g, &s, &c).is_empty());
        assert!(neighbors_out(&g, &s, &c).is_empty());
    }

    #[test]
    fn closed_community_has_empty_boundary() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let c = Community::new("c", [0, 1, 2], &g).unwrap();
        assert!(c.is_closed());
        assert!(neighbors_out(&g, &NodeSubset::whole(&c), &c).is_empty());
    }

    #[test]
    fn subset_must_lie_in_community() {
        let (_, c) = worked_example();
        assert!(matches!(
            NodeSubset::new(&c, [7]),
            Err(Error::NotAMember { node: 7, .. })
        ));
    }

    #[test]
    fn community_validation() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(
            Community::new("x", Vec::<NodeId>::new(), &g),
            Err(Error::EmptyCommunity(_))
        ));
        assert!(matches!(
            Community::new("x", [5], &g),
            Err(Error::NodeOutOfRange(5))
        ));
        assert_eq!(
            Community::new("x", [1, 0, 1], &g).unwrap().members(),
            &[0, 1]
        );
    }

    #[test]
    fn induced_subgraph_shapes() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let tri = Community::new("t", [0, 1, 2], &g).unwrap();
        let sub = g.induced_subgraph(&tri);
        assert_eq!((sub.node_count(), sub.edge_count()), (3, 3));
        let single = Community::new("s", [4], &g).unwrap();
        let sub = g.induced_subgraph(&single);
        assert_eq!((sub.node_count(), sub.edge_count()), (1, 0));
        assert_eq!(sub.label(0), "4");
        let (g, c) = worked_example();
        assert_eq!(g.induced_subgraph(&c).node_count(), 6);
    }

    #[test]
    fn community_file_roundtrip_and_ids() {
        let (g, _) = Graph::from_labeled_edges([("a", "b"), ("b", "c"), ("c", "d")]);
        let text = "# comment\na b c\nx7: d c\n";
        let cs = load_communities(text.as_bytes(), &g).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].id(), "0");
        assert_eq!(cs[0].len(), 3);
        assert_eq!(cs[1].id(), "x7");
        let mut buf = Vec::new();
        write_communities(&mut buf, &g, &cs).unwrap();
        let again = load_communities(buf.as_slice(), &g).unwrap();
        assert_eq!(again, cs);
    }

    #[test]
    fn community_file_errors() {
        let (g, _) = Graph::from_labeled_edges([("a", "b")]);
        match load_communities("a zz\n".as_bytes(), &g) {
            Err(Error::UnknownLabel(l)) => assert_eq!(l, "zz"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            load_communities("a b\n\n".as_bytes(), &g),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            load_communities("c1:\n".as_bytes(), &g),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            load_communities("k: a\nk: b\n".as_bytes(), &g),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn coverage_view_indices() {
        let (g, c) = worked_example();
        let view = CoverageView::new(&g, &c);
        assert_eq!(view.len(), 6);
        assert_eq!(view.boundary_len, 3);
        assert_eq!(view.internal[3], vec![0, 2, 3]);
        assert_eq!(view.external[3], vec![0]);
        assert_eq!(view.external[4], vec![2]);
    }
}
