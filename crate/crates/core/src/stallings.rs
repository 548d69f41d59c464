//! Stallings graphs of finitely generated subgroups of free groups.

use std::collections::VecDeque;

use crate::word::{push_reduced, Letter};

/// Folded core graph of a subgroup `H ≤ F(rank)`, based at vertex 0.
///
/// `adj[v][code]` is the endpoint of the edge leaving `v` labelled by the
/// letter with that code. Vertices are numbered in shortlex BFS order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StallingsGraph {
    rank: usize,
    adj: Vec<Vec<Option<usize>>>,
    tree_path: Vec<Vec<Letter>>,
}

impl StallingsGraph {
    /// Folds the bouquet of the given (arbitrary) generator words.
    pub fn new(rank: usize, generators: &[Vec<Letter>]) -> Self {
        let mut folder = Folder::new(rank);
        for w in generators {
            let mut reduced = Vec::new();
            push_reduced(&mut reduced, w.iter().copied());
            if reduced.is_empty() {
                continue;
            }
            let mut at = 0;
            for (i, &l) in reduced.iter().enumerate() {
                let to = if i + 1 == reduced.len() {
                    0
                } else {
                    folder.add_vertex()
                };
                folder.add_edge(at, l, to);
                at = to;
            }
        }
        folder.finish()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|row| row.iter().step_by(2).filter(|e| e.is_some()).count())
            .sum()
    }

    /// Rank of the subgroup, `E − V + 1`.
    pub fn subgroup_rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn step(&self, v: usize, l: Letter) -> Option<usize> {
        self.adj[v][l.code()]
    }

    /// Follows `w` from the base as far as possible.
    /// Returns the vertex reached and the number of letters read.
    pub fn read(&self, w: &[Letter]) -> (usize, usize) {
        let mut v = 0;
        for (i, &l) in w.iter().enumerate() {
            match self.step(v, l) {
                Some(u) => v = u,
                None => return (v, i),
            }
        }
        (v, w.len())
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        let (v, read) = self.read(w);
        read == w.len() && v == 0
    }

    /// Canonical representative of the left coset `gH`, for reduced `g`.
    pub fn left_coset_key(&self, g: &[Letter]) -> Vec<Letter> {
        let inv: Vec<Letter> = g.iter().rev().map(|l| l.inverse()).collect();
        let (q, read) = self.read(&inv);
        let mut right = self.tree_path[q].clone();
        push_reduced(&mut right, inv[read..].iter().copied());
        right.iter().rev().map(|l| l.inverse()).collect()
    }

    /// Shortlex-least path from the base to `v` inside the core graph.
    pub fn tree_path(&self, v: usize) -> &[Letter] {
        &self.tree_path[v]
    }

    /// Length of the shortest element of `gH`.
    pub fn coset_length(&self, g: &[Letter]) -> usize {
        self.left_coset_key(g).len()
    }

    /// Whether the subgroup is the whole free group.
    pub fn is_whole(&self) -> bool {
        self.vertex_count() == 1 && self.adj[0].iter().all(Option::is_some)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

struct Folder {
    rank: usize,
    parent: Vec<usize>,
    adj: Vec<Vec<Option<usize>>>,
    pending: Vec<(usize, Letter, usize)>,
}

impl Folder {
    fn new(rank: usize) -> Self {
        Folder {
            rank,
            parent: vec![0],
            adj: vec![vec![None; 2 * rank]],
            pending: Vec::new(),
        }
    }

    fn add_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(vec![None; 2 * self.rank]);
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        self.pending.push((u, l, v));
        while let Some((u, l, v)) = self.pending.pop() {
            let u = self.find(u);
            let v = self.find(v);
            if let Some(w) = self.adj[u][l.code()] {
                let w = self.find(w);
                if w != v {
                    self.merge(v, w);
                }
            } else if let Some(x) = self.adj[v][l.inverse().code()] {
                let x = self.find(x);
                if x != u {
                    self.merge(u, x);
                } else {
                    self.adj[u][l.code()] = Some(v);
                    self.adj[v][l.inverse().code()] = Some(u);
                }
            } else {
                self.adj[u][l.code()] = Some(v);
                self.adj[v][l.inverse().code()] = Some(u);
            }
        }
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (root, child) = if a < b { (a, b) } else { (b, a) };
        self.parent[child] = root;
        let edges = std::mem::take(&mut self.adj[child]);
        for (code, e) in edges.into_iter().enumerate() {
            if let Some(t) = e {
                self.pending.push((root, Letter::from_code(code), t));
            }
        }
        self.adj[child] = vec![None; 2 * self.rank];
    }

    #[allow(clippy::needless_range_loop)]
    fn finish(mut self) -> StallingsGraph {
        let n = self.parent.len();
        let mut resolved = vec![vec![None; 2 * self.rank]; n];
        for v in 0..n {
            if self.find(v) != v {
                continue;
            }
            for code in 0..2 * self.rank {
                if let Some(t) = self.adj[v][code] {
                    let t = self.find(t);
                    resolved[v][code] = Some(t);
                }
            }
        }
        // Prune hanging trees away from the base.
        let mut degree: Vec<usize> = resolved
            .iter()
            .map(|row| row.iter().filter(|e| e.is_some()).count())
            .collect();
        let mut alive: Vec<bool> = (0..n).map(|v| self.parent[v] == v).collect();
        let mut stack: Vec<usize> = (1..n).filter(|&v| alive[v] && degree[v] <= 1).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for code in 0..2 * self.rank {
                if let Some(t) = resolved[v][code].take() {
                    let back = Letter::from_code(code).inverse().code();
                    resolved[t][back] = None;
                    degree[t] -= 1;
                    if t != 0 && alive[t] && degree[t] <= 1 {
                        stack.push(t);
                    }
                }
            }
        }
        // Renumber in BFS order with letters in code order.
        let mut order = vec![usize::MAX; n];
        let mut tree_path = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        order[0] = 0;
        let mut visited = vec![0usize];
        while let Some(v) = queue.pop_front() {
            for code in 0..2 * self.rank {
                if let Some(t) = resolved[v][code] {
                    if order[t] == usize::MAX {
                        order[t] = visited.len();
                        visited.push(t);
                        let mut p = tree_path[order[v]].clone();
                        p.push(Letter::from_code(code));
                        tree_path.push(p);
                        queue.push_back(t);
                    }
                }
            }
        }
        let adj = visited
            .iter()
            .map(|&v| {
                resolved[v]
                    .iter()
                    .map(|e| e.map(|t| order[t]))
                    .collect()
            })
            .collect();
        StallingsGraph {
            rank: self.rank,
            adj,
            tree_path,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{default_names, parse_word};

    fn w(s: &str) -> Vec<Letter> {
        parse_word(s, &default_names(2)).unwrap().0
    }

    #[test]
    fn cyclic_subgroup() {
        let g = StallingsGraph::new(2, &[w("a b")]);
        assert_eq!(g.vertex_count(), 2);
        assert!(g.contains(&w("a b a b")));
        assert!(!g.contains(&w("a")));
        assert!(g.contains(&[]));
        assert_eq!(g.subgroup_rank(), 1);
    }

    #[test]
    fn folding_identifies_generators() {
        let g = StallingsGraph::new(2, &[w("a"), w("a a b A"), w("a a")]);
        assert!(g.contains(&w("a b A")));
        assert!(g.contains(&w("b")));
        assert!(g.is_whole());
    }

    #[test]
    fn coset_keys() {
        let g = StallingsGraph::new(2, &[w("a")]);
        assert_eq!(g.left_coset_key(&w("b a^5")), w("b"));
        assert_eq!(g.left_coset_key(&w("A A")), Vec::<Letter>::new());
        assert_ne!(g.left_coset_key(&w("a")), g.left_coset_key(&w("b")));
        let h = StallingsGraph::new(2, &[w("a b")]);
        assert_eq!(h.left_coset_key(&w("a a b")), w("a"));
        assert_eq!(h.left_coset_key(&w("a B A")), w("a"));
        assert_eq!(h.left_coset_key(&w("a b a")), w("a b a"));
    }
}
