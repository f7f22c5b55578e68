use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::invalid;
use crate::linalg::DenseMatrix;
use crate::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from undirected edges; duplicates are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Returns `false` if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.adj.len();
        if u >= n || v >= n {
            return Err(invalid!("edge ({u}, {v}) out of range for {n} vertices"));
        }
        if u == v {
            return Err(invalid!("self-loop at vertex {u}"));
        }
        if self.has_edge(u, v) {
            return Ok(false);
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        Ok(true)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|a| a.contains(&v))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, a)| a.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        e.sort_unstable();
        e
    }

    /// Hop distances from `src`; `usize::MAX` marks unreachable vertices.
    pub fn bfs(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.adj.len()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.adj.is_empty() || self.bfs(0).iter().all(|&d| d != usize::MAX)
    }
}

/// Connected random graph: a uniformly shuffled random spanning tree plus
/// every remaining pair independently with probability `edge_prob`.
pub fn random_connected_graph(k: usize, edge_prob: f64, seed: u64) -> Result<Graph> {
    if k < 2 {
        return Err(invalid!("graph needs at least 2 vertices, got {k}"));
    }
    if !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(invalid!("edge probability must lie in (0, 1], got {edge_prob}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(&mut rng);
    let mut g = Graph::new(k);
    for i in 1..k {
        let j = rng.random_range(0..i);
        g.add_edge(order[i], order[j])?;
    }
    for u in 0..k {
        for v in u + 1..k {
            // draw for every pair so the stream does not depend on the tree
            let keep = rng.random::<f64>() < edge_prob;
            if keep && !g.has_edge(u, v) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// All-pairs hop distances.
pub fn graph_distance_matrix(graph: &Graph) -> Result<DenseMatrix> {
    let n = graph.vertex_count();
    let mut p = DenseMatrix::zeros(n, n);
    for s in 0..n {
        let d = graph.bfs(s);
        for (t, &dt) in d.iter().enumerate() {
            if dt == usize::MAX {
                return Err(Error::Disconnected);
            }
            p.set(s, t, dt as f64);
        }
    }
    Ok(p)
}
