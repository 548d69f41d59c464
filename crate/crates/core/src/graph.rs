//! Compact undirected graphs with unit edge lengths and BFS primitives.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub const UNREACHED: u32 = u32::MAX;

/// Undirected simple graph in CSR form; neighbor lists are sorted by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Builds from an edge list; loops are dropped and parallel edges merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            if u != v {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n]];
        for &(u, v) in edges {
            if u != v {
                targets[fill[u]] = v as u32;
                fill[u] += 1;
                targets[fill[v]] = u as u32;
                fill[v] += 1;
            }
        }
        let mut compact_offsets = vec![0usize; n + 1];
        let mut compact = Vec::with_capacity(targets.len());
        for v in 0..n {
            let row = &mut targets[offsets[v]..offsets[v + 1]];
            row.sort_unstable();
            let mut last = None;
            for &t in row.iter() {
                if last != Some(t) {
                    compact.push(t);
                    last = Some(t);
                }
            }
            compact_offsets[v + 1] = compact.len();
        }
        Graph {
            offsets: compact_offsets,
            targets: compact,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// All edges `(u, v)` with `u < v`, in order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u, v as usize))
        })
    }

    pub fn bfs(&self, source: usize) -> Vec<u32> {
        self.multi_source_bfs(&[source])
    }

    /// Distance from the nearest source.
    pub fn multi_source_bfs(&self, sources: &[usize]) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.vertex_count()];
        let mut queue = VecDeque::with_capacity(self.vertex_count());
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s as u32);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize] + 1;
            for &t in self.neighbors(v as usize) {
                if dist[t as usize] == UNREACHED {
                    dist[t as usize] = d;
                    queue.push_back(t);
                }
            }
        }
        dist
    }

    /// BFS into a caller-provided buffer, reusing its allocation.
    pub fn bfs_into(&self, source: usize, dist: &mut Vec<u32>, queue: &mut Vec<u32>) {
        dist.clear();
        dist.resize(self.vertex_count(), UNREACHED);
        queue.clear();
        dist[source] = 0;
        queue.push(source as u32);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head] as usize;
            head += 1;
            let d = dist[v] + 1;
            for &t in self.neighbors(v) {
                if dist[t as usize] == UNREACHED {
                    dist[t as usize] = d;
                    queue.push(t);
                }
            }
        }
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.bfs(0).iter().all(|&d| d != UNREACHED)
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Domain("graph is not connected".into()))
        }
    }

    /// Lexicographically least vertex sequence among geodesics from `u` to `v`,
    /// given BFS distances `to_v` from `v`.
    pub fn least_geodesic_with(&self, u: usize, v: usize, to_v: &[u32]) -> Option<Vec<usize>> {
        if to_v[u] == UNREACHED {
            return None;
        }
        let mut path = Vec::with_capacity(to_v[u] as usize + 1);
        let mut at = u;
        path.push(at);
        while at != v {
            let next = self
                .neighbors(at)
                .iter()
                .find(|&&t| to_v[t as usize] + 1 == to_v[at])
                .expect("BFS distances are consistent");
            at = *next as usize;
            path.push(at);
        }
        Some(path)
    }

    pub fn least_geodesic(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        let to_v = self.bfs(v);
        self.least_geodesic_with(u, v, &to_v)
    }

    /// Subgraph induced on the vertices with `keep[v]`, renumbered in order.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        let mut map = vec![usize::MAX; self.vertex_count()];
        let mut kept = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if k {
                map[v] = kept.len();
                kept.push(v);
            }
        }
        let edges: Vec<(usize, usize)> = self
            .edges()
            .filter(|&(u, v)| keep[u] && keep[v])
            .map(|(u, v)| (map[u], map[v]))
            .collect();
        (Graph::from_edges(kept.len(), &edges), kept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_distances() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (1, 0)]);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.bfs(0), vec![0, 1, 2, 3]);
        assert_eq!(g.least_geodesic(3, 0), Some(vec![3, 2, 1, 0]));
    }

    #[test]
    fn least_geodesic_prefers_small_ids() {
        // square 0-1-3, 0-2-3
        let g = Graph::from_edges(4, &[(0, 2), (2, 3), (0, 1), (1, 3)]);
        assert_eq!(g.least_geodesic(0, 3), Some(vec![0, 1, 3]));
    }

    #[test]
    fn disconnected_is_reported() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        assert!(matches!(g.require_connected(), Err(Error::Domain(_))));
        assert_eq!(g.least_geodesic(0, 2), None);
    }
}
