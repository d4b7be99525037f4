//! Minimal adjacency abstraction shared by the lattice, the spin network and the toy model.

use std::collections::VecDeque;

pub const UNREACHED: u32 = u32::MAX;

pub trait Graph: Sync {
    fn node_count(&self) -> usize;

    /// Neighbours of `u`, with multiplicity for parallel edges.
    fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_;
}

/// Hop distances from `source`; unreachable nodes get [`UNREACHED`].
pub fn bfs<G: Graph>(g: &G, source: usize) -> Vec<u32> {
    bfs_multi(g, std::iter::once(source))
}

pub fn bfs_multi<G: Graph>(g: &G, sources: impl IntoIterator<Item = usize>) -> Vec<u32> {
    let mut dist = vec![UNREACHED; g.node_count()];
    let mut queue = VecDeque::new();
    for s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for v in g.neighbors(u) {
            if dist[v] == UNREACHED {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Plain adjacency-list graph, used for small derived graphs.
#[derive(Clone, Debug, Default)]
pub struct AdjList {
    pub adj: Vec<Vec<usize>>,
}

impl AdjList {
    pub fn with_nodes(n: usize) -> Self {
        AdjList { adj: vec![Vec::new(); n] }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }
}

impl Graph for AdjList {
    fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().copied()
    }
}
