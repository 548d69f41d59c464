//! Gromov hyperbolicity estimates for finite graphs.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coned::Half;
use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};

/// Graphs up to this size use an all-pairs distance matrix.
pub const ALL_PAIRS_LIMIT: usize = 3000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMethod {
    /// Max distance from a point of one side to the union of the other two,
    /// with shortlex geodesic sides.
    ThinTriangle,
    /// Max Gromov four-point defect.
    FourPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMode {
    Exhaustive,
    Sampled { size: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaEstimate {
    pub method: DeltaMethod,
    pub mode: DeltaMode,
    /// Number of triples (or quadruples) examined.
    pub examined: u64,
    /// Whether every tuple was examined.
    pub exhaustive: bool,
    pub value: Half,
}

struct Distances<'a> {
    graph: &'a Graph,
    matrix: Option<Vec<u32>>,
}

impl<'a> Distances<'a> {
    fn new(graph: &'a Graph) -> Self {
        let n = graph.vertex_count();
        let matrix = (n <= ALL_PAIRS_LIMIT).then(|| {
            let rows: Vec<Vec<u32>> = (0..n).into_par_iter().map(|s| graph.bfs(s)).collect();
            rows.concat()
        });
        Distances { graph, matrix }
    }

    fn n(&self) -> usize {
        self.graph.vertex_count()
    }
}

fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Decodes the `rank`-th `k`-subset of `0..n` in lexicographic order.
#[cfg(test)]
fn unrank(mut rank: u64, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0usize;
    for slot in 0..k {
        loop {
            let rest = choose((n - next - 1) as u64, (k - slot - 1) as u64);
            if rank < rest {
                out.push(next);
                next += 1;
                break;
            }
            rank -= rest;
            next += 1;
        }
    }
    out
}

/// Estimates δ of a connected graph.
///
/// Sampled mode draws tuples with a per-index ChaCha stream, so the result
/// does not depend on the thread count. A sample at least as large as the
/// tuple count falls back to exhaustive mode.
pub fn delta_estimate(graph: &Graph, method: DeltaMethod, mode: DeltaMode) -> Result<DeltaEstimate> {
    graph.require_connected()?;
    let n = graph.vertex_count();
    let k = match method {
        DeltaMethod::ThinTriangle => 3,
        DeltaMethod::FourPoint => 4,
    };
    let total = choose(n as u64, k as u64);
    let dist = Distances::new(graph);
    let eval = |t: &[usize]| match method {
        DeltaMethod::ThinTriangle => thin_triangle(&dist, t[0], t[1], t[2]),
        DeltaMethod::FourPoint => four_point(&dist, t[0], t[1], t[2], t[3]),
    };
    let (examined, exhaustive, value) = match mode {
        DeltaMode::Sampled { size, seed } if (size as u64) < total => {
            let v = (0..size as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i);
                    let mut t = sample(&mut rng, n, k).into_vec();
                    t.sort_unstable();
                    eval(&t)
                })
                .max()
                .unwrap_or(0);
            (size as u64, false, v)
        }
        _ => {
            let v = (0..n)
                .into_par_iter()
                .map(|x| {
                    let mut worst = 0;
                    let mut t = vec![x; k];
                    for y in x + 1..n {
                        t[1] = y;
                        for z in y + 1..n {
                            t[2] = z;
                            if k == 3 {
                                worst = worst.max(eval(&t));
                                continue;
                            }
                            for w in z + 1..n {
                                t[3] = w;
                                worst = worst.max(eval(&t));
                            }
                        }
                    }
                    worst
                })
                .max()
                .unwrap_or(0);
            (total, true, v)
        }
    };
    let value = match method {
        DeltaMethod::ThinTriangle => Half::from_int(value),
        DeltaMethod::FourPoint => Half(value),
    };
    Ok(DeltaEstimate {
        method,
        mode,
        examined,
        exhaustive,
        value,
    })
}

/// Defect of one quadruple in half-units: the largest pair sum minus the second largest.
fn four_point(d: &Distances, x: usize, y: usize, z: usize, w: usize) -> u32 {
    let (dxy, dxz, dxw, dyz, dyw, dzw) = match &d.matrix {
        Some(m) => {
            let n = d.n();
            (m[x * n + y], m[x * n + z], m[x * n + w], m[y * n + z], m[y * n + w], m[z * n + w])
        }
        None => {
            let (bx, by, bz) = (d.graph.bfs(x), d.graph.bfs(y), d.graph.bfs(z));
            (bx[y], bx[z], bx[w], by[z], by[w], bz[w])
        }
    };
    let mut sums = [dxy + dzw, dxz + dyw, dxw + dyz];
    sums.sort_unstable();
    sums[2] - sums[1]
}

fn descend(graph: &Graph, from: usize, to: usize, to_row: impl Fn(usize) -> u32) -> Vec<usize> {
    let mut path = vec![from];
    let mut at = from;
    while at != to {
        let want = to_row(at) - 1;
        at = graph
            .neighbors(at)
            .iter()
            .map(|&t| t as usize)
            .find(|&t| to_row(t) == want)
            .expect("distances are consistent");
        path.push(at);
    }
    path
}

fn thin_triangle(d: &Distances, x: usize, y: usize, z: usize) -> u32 {
    let g = d.graph;
    match &d.matrix {
        Some(m) => {
            let n = d.n();
            let row = |v: usize| move |t: usize| m[v * n + t];
            let sides = [
                descend(g, x, y, row(y)),
                descend(g, y, z, row(z)),
                descend(g, x, z, row(z)),
            ];
            let mut worst = 0;
            for i in 0..3 {
                for &a in &sides[i] {
                    let near = (0..3)
                        .filter(|&j| j != i)
                        .flat_map(|j| sides[j].iter())
                        .map(|&b| m[a * n + b])
                        .min()
                        .unwrap_or(0);
                    worst = worst.max(near);
                }
            }
            worst
        }
        None => {
            let (by, bz) = (g.bfs(y), g.bfs(z));
            let sides = [
                descend(g, x, y, |t| by[t]),
                descend(g, y, z, |t| bz[t]),
                descend(g, x, z, |t| bz[t]),
            ];
            let mut worst = 0;
            for i in 0..3 {
                let others: Vec<usize> = (0..3)
                    .filter(|&j| j != i)
                    .flat_map(|j| sides[j].iter().copied())
                    .collect();
                let near = g.multi_source_bfs(&others);
                for &a in &sides[i] {
                    debug_assert_ne!(near[a], UNREACHED);
                    worst = worst.max(near[a]);
                }
            }
            worst
        }
    }
}

/// Thin-triangle δ of a single triple, with shortlex sides.
pub fn triangle_defect(graph: &Graph, x: usize, y: usize, z: usize) -> Result<u32> {
    graph.require_connected()?;
    if x.max(y).max(z) >= graph.vertex_count() {
        return Err(Error::Domain("triangle vertex out of range".into()));
    }
    let d = Distances { graph, matrix: None };
    Ok(thin_triangle(&d, x, y, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    #[test]
    fn unrank_enumerates_subsets_in_order() {
        let all: Vec<_> = (0..choose(5, 3)).map(|r| unrank(r, 5, 3)).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn trees_have_delta_zero() {
        let edges: Vec<_> = (1..15).map(|i| ((i - 1) / 2, i)).collect();
        let g = Graph::from_edges(15, &edges);
        for method in [DeltaMethod::ThinTriangle, DeltaMethod::FourPoint] {
            assert_eq!(delta_estimate(&g, method, DeltaMode::Exhaustive).unwrap().value, Half(0));
        }
    }

    #[test]
    fn cycles_are_fat() {
        let g = cycle(12);
        let e = delta_estimate(&g, DeltaMethod::ThinTriangle, DeltaMode::Exhaustive).unwrap();
        assert!(e.value >= Half::from_int(2));
        let sampled = delta_estimate(&g, DeltaMethod::ThinTriangle, DeltaMode::Sampled { size: 30, seed: 3 }).unwrap();
        assert!(sampled.value <= e.value);
        let all = delta_estimate(&g, DeltaMethod::ThinTriangle, DeltaMode::Sampled { size: 10_000, seed: 3 }).unwrap();
        assert!(all.exhaustive);
        assert_eq!(all.value, e.value);
        // the matrix-free path agrees triple by triple
        let d = Distances::new(&g);
        for t in [[0, 3, 7], [1, 5, 9], [0, 6, 11]] {
            assert_eq!(thin_triangle(&d, t[0], t[1], t[2]), triangle_defect(&g, t[0], t[1], t[2]).unwrap());
        }
    }

    #[test]
    fn disconnected_graph_is_a_domain_error() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        assert!(matches!(
            delta_estimate(&g, DeltaMethod::FourPoint, DeltaMode::Exhaustive),
            Err(Error::Domain(_))
        ));
    }
}
