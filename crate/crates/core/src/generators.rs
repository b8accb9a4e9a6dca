//! Seeded random graphs for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::community::Community;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Erdős–Rényi G(n, p).
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// `groups` blocks of `size` nodes; pairs inside a block connect with
/// probability `p_in`, pairs across blocks with `p_out`. Returns the graph
/// and the planted blocks, ids "0", "1", ...
pub fn planted_partition(
    groups: usize,
    size: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<(Graph, Vec<Community>)> {
    for p in [p_in, p_out] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "edge probability {p} outside [0, 1]"
            )));
        }
    }
    if groups == 0 || size == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = groups * size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if u / size == v / size { p_in } else { p_out };
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::from_edges(n, edges)?;
    let blocks = (0..groups)
        .map(|b| Community::new(b.to_string(), b * size..(b + 1) * size, &graph))
        .collect::<Result<Vec<_>>>()?;
    Ok((graph, blocks))
}
