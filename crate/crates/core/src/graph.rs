//! Immutable undirected simple graphs.
//!
//! Nodes carry arbitrary string labels and are stored under dense indices
//! `0..node_count` in order of first appearance. Adjacency lists are sorted,
//! which the triangle counter and the subset routines rely on.

use std::collections::{HashMap, VecDeque};
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::community::Community;
use crate::error::{Error, Result};

pub type NodeId = usize;

/// How reciprocal or repeated pairs in an edge list are treated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DirectedPolicy {
    /// Collapse `u v` / `v u` / repeated lines into one undirected edge.
    #[default]
    Symmetrize,
    /// Reject any pair that appears more than once, in either orientation.
    Strict,
}

/// What the loader dropped while building the graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub pairs_read: usize,
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TriangleCounts {
    pub triangles: u64,
    pub connected_triples: u64,
}

#[derive(Debug, Clone)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    edge_count: usize,
}

#[derive(Default)]
struct Builder {
    adjacency: Vec<Vec<NodeId>>,
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    report: LoadReport,
}

impl Builder {
    fn node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        self.adjacency.push(Vec::new());
        id
    }

    fn pair(&mut self, u: NodeId, v: NodeId) {
        self.report.pairs_read += 1;
        if u == v {
            self.report.self_loops_dropped += 1;
            return;
        }
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
    }

    fn finish(mut self) -> (Graph, LoadReport) {
        let mut pushed = 0usize;
        for list in &mut self.adjacency {
            pushed += list.len();
            list.sort_unstable();
            list.dedup();
        }
        let degree_sum: usize = self.adjacency.iter().map(Vec::len).sum();
        self.report.duplicates_collapsed = (pushed - degree_sum) / 2;
        let graph = Graph {
            adjacency: self.adjacency,
            labels: self.labels,
            index: self.index,
            edge_count: degree_sum / 2,
        };
        (graph, self.report)
    }
}

impl Graph {
    /// Builds a graph over nodes `0..node_count` labelled by their decimal
    /// index. Self-loops are dropped and parallel edges collapsed.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut builder = Builder::default();
        for v in 0..node_count {
            builder.node(&v.to_string());
        }
        for (u, v) in edges {
            if u >= node_count {
                return Err(Error::NodeOutOfRange(u));
            }
            if v >= node_count {
                return Err(Error::NodeOutOfRange(v));
            }
            builder.pair(u, v);
        }
        Ok(builder.finish().0)
    }

    /// Builds a graph over explicitly labelled nodes, isolated ones included.
    /// Edges refer to positions in `labels`.
    pub fn with_labels<I>(labels: &[String], edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut builder = Builder::default();
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(Error::InvalidParameter(format!(
                    "unusable node label {label:?}"
                )));
            }
            if builder.node(label) != i {
                return Err(Error::InvalidParameter(format!(
                    "duplicate node label `{label}`"
                )));
            }
        }
        for (u, v) in edges {
            let n = labels.len();
            if u >= n {
                return Err(Error::NodeOutOfRange(u));
            }
            if v >= n {
                return Err(Error::NodeOutOfRange(v));
            }
            builder.pair(u, v);
        }
        Ok(builder.finish().0)
    }

    /// Builds a graph from labelled pairs. Labels get indices in order of
    /// first appearance.
    pub fn from_labeled_edges<I, S>(edges: I) -> (Self, LoadReport)
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut builder = Builder::default();
        for (a, b) in edges {
            let u = builder.node(a.as_ref());
            let v = builder.node(b.as_ref());
            builder.pair(u, v);
        }
        builder.finish()
    }

    /// Reads a whitespace-separated edge list. Lines starting with `#` and
    /// blank lines are ignored; every other line must hold exactly two tokens.
    pub fn load_edge_list<R: BufRead>(
        reader: R,
        policy: DirectedPolicy,
    ) -> Result<(Self, LoadReport)> {
        let mut builder = Builder::default();
        let mut seen = std::collections::HashSet::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    let count = trimmed.split_whitespace().count();
                    return Err(Error::parse(
                        i + 1,
                        format!("expected 2 tokens, found {count}"),
                    ));
                }
            };
            let u = builder.node(a);
            let v = builder.node(b);
            if policy == DirectedPolicy::Strict && u != v {
                let key = (u.min(v), u.max(v));
                if !seen.insert(key) {
                    return Err(Error::DuplicateEdge(a.to_owned(), b.to_owned()));
                }
            }
            builder.pair(u, v);
        }
        let (graph, report) = builder.finish();
        if graph.edge_count == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok((graph, report))
    }

    /// Writes one `label label` line per edge, lower index first.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", self.labels[u], self.labels[v])?;
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    /// Each undirected edge once, as `(low, high)`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Sum of degrees over `nodes`.
    pub fn volume(&self, nodes: &[NodeId]) -> usize {
        nodes.iter().map(|&v| self.degree(v)).sum()
    }

    /// The subgraph induced by a community. Node `i` of the result is the
    /// community's `i`-th member (members are sorted), and keeps its label.
    pub fn induced_subgraph(&self, community: &Community) -> Graph {
        self.induced(community.members())
    }

    /// Induced subgraph over a sorted, duplicate-free node list.
    pub fn induced(&self, nodes: &[NodeId]) -> Graph {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let local = |v: NodeId| nodes.binary_search(&v).ok();
        let adjacency: Vec<Vec<NodeId>> = nodes
            .iter()
            .map(|&u| self.adjacency[u].iter().filter_map(|&v| local(v)).collect())
            .collect();
        let labels: Vec<String> = nodes.iter().map(|&v| self.labels[v].clone()).collect();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Graph {
            adjacency,
            labels,
            index,
            edge_count,
        }
    }

    /// Hop distances from `source`; unreachable nodes are absent.
    pub fn bfs_distances(&self, source: NodeId) -> HashMap<NodeId, usize> {
        let mut dist = Vec::new();
        let mut queue = VecDeque::new();
        self.bfs_into(source, &mut dist, &mut queue);
        dist.into_iter()
            .enumerate()
            .filter(|&(_, d)| d != usize::MAX)
            .collect()
    }

    /// BFS into caller-owned buffers; `dist[v] == usize::MAX` marks
    /// unreachable nodes.
    pub(crate) fn bfs_into(
        &self,
        source: NodeId,
        dist: &mut Vec<usize>,
        queue: &mut VecDeque<NodeId>,
    ) {
        dist.clear();
        dist.resize(self.node_count(), usize::MAX);
        queue.clear();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = next;
                    queue.push_back(v);
                }
            }
        }
    }

    /// Exact triangle and connected-triple counts. Each triangle is counted
    /// once, at its lowest-index vertex.
    pub fn count_triangles(&self) -> TriangleCounts {
        let mut triangles = 0u64;
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list.iter().filter(|&&v| v > u) {
                triangles += common_above(list, &self.adjacency[v], v);
            }
        }
        let connected_triples = self
            .adjacency
            .iter()
            .map(|l| {
                let d = l.len() as u64;
                d * d.saturating_sub(1) / 2
            })
            .sum();
        TriangleCounts {
            triangles,
            connected_triples,
        }
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        components
    }
}

/// Count of common entries of two sorted lists that exceed `floor`.
fn common_above(a: &[NodeId], b: &[NodeId], floor: NodeId) -> u64 {
    let a = &a[a.partition_point(|&x| x <= floor)..];
    let b = &b[b.partition_point(|&x| x <= floor)..];
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}
