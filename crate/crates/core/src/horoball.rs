//! Finite metric spaces and combinatorial horoballs over them.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A finite metric space with integer distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetric {
    n: usize,
    d: Vec<u64>,
}

impl FiniteMetric {
    /// Validates symmetry, positivity off the diagonal and the triangle inequality.
    pub fn new(n: usize, d: Vec<u64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::Domain(format!("distance table must have {} entries", n * n)));
        }
        for i in 0..n {
            if d[i * n + i] != 0 {
                return Err(Error::Domain(format!("d({i},{i}) ≠ 0")));
            }
            for j in 0..n {
                if d[i * n + j] != d[j * n + i] {
                    return Err(Error::Domain(format!("d({i},{j}) ≠ d({j},{i})")));
                }
                if i != j && d[i * n + j] == 0 {
                    return Err(Error::Domain(format!("d({i},{j}) = 0 for distinct points")));
                }
                for k in 0..n {
                    if d[i * n + k] > d[i * n + j] + d[j * n + k] {
                        return Err(Error::Domain(format!(
                            "triangle inequality fails for ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetric { n, d })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> u64) -> Result<Self> {
        let d = (0..n * n).map(|k| f(k / n, k % n)).collect();
        FiniteMetric::new(n, d)
    }

    /// Shortest-path metric of a complete graph with random weights in `1..=max_weight`.
    pub fn random(n: usize, max_weight: u64, rng: &mut impl Rng) -> Self {
        let mut d = vec![0u64; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let w = rng.gen_range(1..=max_weight);
                d[i * n + j] = w;
                d[j * n + i] = w;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i * n + k] + d[k * n + j];
                    if via < d[i * n + j] {
                        d[i * n + j] = via;
                    }
                }
            }
        }
        FiniteMetric { n, d }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distance(&self, i: usize, j: usize) -> u64 {
        self.d[i * self.n + j]
    }

    pub fn diameter(&self) -> u64 {
        self.d.iter().copied().max().unwrap_or(0)
    }
}

/// Whether `{(p,k),(q,k)}` is a horizontal edge for points at distance `d`.
pub fn horizontal(d: u64, k: usize) -> bool {
    d > 0 && (k >= 64 || d <= 1u64 << k)
}

/// Combinatorial horoball `P × {0..D}`; vertex `(p,k)` has id `k·|P| + p`.
#[derive(Clone, Debug)]
pub struct HoroballGraph {
    points: usize,
    depth: usize,
    graph: Graph,
}

impl HoroballGraph {
    pub fn build(base: &FiniteMetric, depth: usize) -> Self {
        let n = base.len();
        let mut edges = Vec::new();
        for k in 0..=depth {
            for p in 0..n {
                for q in p + 1..n {
                    if horizontal(base.distance(p, q), k) {
                        edges.push((k * n + p, k * n + q));
                    }
                }
                if k < depth {
                    edges.push((k * n + p, (k + 1) * n + p));
                }
            }
        }
        HoroballGraph {
            points: n,
            depth,
            graph: Graph::from_edges(n * (depth + 1), &edges),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn vertex(&self, p: usize, k: usize) -> usize {
        k * self.points + p
    }

    /// `(p, k)` of a vertex id.
    pub fn coordinates(&self, v: usize) -> (usize, usize) {
        (v % self.points, v / self.points)
    }

    /// Point pairs `p < q` joined at level `k`.
    pub fn horizontal_pairs(&self, k: usize) -> Vec<(usize, usize)> {
        let base = k * self.points;
        (0..self.points)
            .flat_map(|p| {
                self.graph
                    .neighbors(base + p)
                    .iter()
                    .map(|&t| t as usize)
                    .filter(move |&t| t >= base && t < base + self.points && t > base + p)
                    .map(move |t| (p, t - base))
            })
            .collect()
    }
}
