//! Cusped (augmented) balls: Cayley balls with combinatorial horoballs glued
//! along every peripheral coset that meets them.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::ball::ElementBall;
use crate::cayley::{CayleyBall, CosetDistances};
use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};
use crate::group::{Element, MarkedGroup};
use crate::horoball::horizontal;
use crate::subgroup::{CosetId, CosetTable, PeripheralStructure, SubgroupSpec};

/// Provenance of a cusped-ball vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CuspedVertex {
    /// Depth-0 vertex: a ball element.
    Group(usize),
    /// Vertex `(member, depth)` of the horoball over `coset`, `depth ≥ 1`.
    Horo { coset: CosetId, depth: usize, member: usize },
}

#[derive(Clone, Debug)]
pub struct CuspedBall {
    cayley: CayleyBall,
    peripherals: PeripheralStructure,
    cosets: CosetTable,
    depth: usize,
    members: Vec<Vec<usize>>,
    /// First horoball vertex id of each coset.
    offsets: Vec<usize>,
    graph: Graph,
    margin: usize,
}

/// Cusped geodesic with the depth of each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspedPath {
    pub vertices: Vec<usize>,
    pub depths: Vec<usize>,
}

impl CuspedPath {
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() <= 1
    }
}

impl CuspedBall {
    pub fn build(
        group: &MarkedGroup,
        peripherals: &PeripheralStructure,
        radius: usize,
        depth: usize,
        budget: usize,
    ) -> Result<Self> {
        let cayley = CayleyBall::build(group, radius, budget)?;
        CuspedBall::over(cayley, peripherals, depth, budget)
    }

    pub fn over(
        cayley: CayleyBall,
        peripherals: &PeripheralStructure,
        depth: usize,
        budget: usize,
    ) -> Result<Self> {
        let group = cayley.group().clone();
        let mut cosets = CosetTable::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for i in 0..cayley.len() {
            for p in 0..peripherals.len() {
                let id = cosets.coset_id(&group, peripherals, p, cayley.element(i));
                if id.0 == members.len() {
                    members.push(Vec::new());
                }
                members[id.0].push(i);
            }
        }
        let mut offsets = Vec::with_capacity(members.len());
        let mut next = cayley.len();
        for ms in &members {
            offsets.push(next);
            next += depth * ms.len();
        }
        if next > budget {
            return Err(Error::budget("cusped ball vertices", budget));
        }
        let mut edges: Vec<(usize, usize)> = cayley.graph().edges().collect();
        let metrics = peripheral_metrics(&group, peripherals, &cayley, &members, &cosets, depth, budget)?;
        for (c, ms) in members.iter().enumerate() {
            let level = |k: usize, pos: usize| {
                if k == 0 {
                    ms[pos]
                } else {
                    offsets[c] + (k - 1) * ms.len() + pos
                }
            };
            let p = cosets.entry(CosetId(c)).peripheral;
            for a in 0..ms.len() {
                for b in a + 1..ms.len() {
                    let d = metrics[p].distance(&group, cayley.element(ms[a]), cayley.element(ms[b]));
                    let Some(d) = d else { continue };
                    for k in 0..=depth {
                        if horizontal(d, k) {
                            edges.push((level(k, a), level(k, b)));
                        }
                    }
                }
                for k in 0..depth {
                    edges.push((level(k, a), level(k + 1, a)));
                }
            }
        }
        Ok(CuspedBall {
            graph: Graph::from_edges(next, &edges),
            cayley,
            peripherals: peripherals.clone(),
            cosets,
            depth,
            members,
            offsets,
            margin: 2,
        })
    }

    pub fn with_margin(mut self, margin: usize) -> Self {
        self.margin = margin;
        self
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn cayley(&self) -> &CayleyBall {
        &self.cayley
    }

    pub fn group(&self) -> &MarkedGroup {
        self.cayley.group()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn radius(&self) -> usize {
        self.cayley.radius()
    }

    pub fn horoball_count(&self) -> usize {
        self.members.len()
    }

    pub fn cosets(&self) -> &CosetTable {
        &self.cosets
    }

    pub fn peripherals(&self) -> &PeripheralStructure {
        &self.peripherals
    }

    pub fn members(&self, c: CosetId) -> &[usize] {
        &self.members[c.0]
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn vertex_id(&self, v: CuspedVertex) -> usize {
        match v {
            CuspedVertex::Group(i) => i,
            CuspedVertex::Horo { coset, depth: 0, member } => self.members[coset.0][member],
            CuspedVertex::Horo { coset, depth, member } => {
                self.offsets[coset.0] + (depth - 1) * self.members[coset.0].len() + member
            }
        }
    }

    pub fn vertex(&self, id: usize) -> CuspedVertex {
        if id < self.cayley.len() {
            return CuspedVertex::Group(id);
        }
        let c = self.offsets.partition_point(|&o| o <= id) - 1;
        let size = self.members[c].len();
        let rel = id - self.offsets[c];
        CuspedVertex::Horo {
            coset: CosetId(c),
            depth: rel / size + 1,
            member: rel % size,
        }
    }

    pub fn depth_of(&self, id: usize) -> usize {
        match self.vertex(id) {
            CuspedVertex::Group(_) => 0,
            CuspedVertex::Horo { depth, .. } => depth,
        }
    }

    /// Ball index of the base point of a vertex.
    pub fn base_of(&self, id: usize) -> usize {
        match self.vertex(id) {
            CuspedVertex::Group(i) => i,
            CuspedVertex::Horo { coset, member, .. } => self.members[coset.0][member],
        }
    }

    /// Coset owning a horoball vertex.
    pub fn coset_of_vertex(&self, id: usize) -> Option<CosetId> {
        match self.vertex(id) {
            CuspedVertex::Group(_) => None,
            CuspedVertex::Horo { coset, .. } => Some(coset),
        }
    }

    /// Exact distance with the shortlex (least vertex id) geodesic.
    ///
    /// Depth is certified when the distance is below the length of any path
    /// through depth `D+1`; radius follows the margin rule on base points.
    pub fn distance(&self, u: usize, v: usize) -> Result<(usize, CuspedPath)> {
        let to_v = self.graph.bfs(v);
        self.distance_with(u, v, &to_v)
    }

    pub fn distance_with(&self, u: usize, v: usize, to_v: &[u32]) -> Result<(usize, CuspedPath)> {
        let vertices = self
            .graph
            .least_geodesic_with(u, v, to_v)
            .ok_or_else(|| Error::InsufficientRadius("vertices are not connected inside the ball".into()))?;
        let d = vertices.len() - 1;
        let (du, dv) = (self.depth_of(u), self.depth_of(v));
        if !self.peripherals.is_empty() && d >= (self.depth + 1 - du) + (self.depth + 1 - dv) {
            return Err(Error::InsufficientDepth(format!(
                "distance {d} could be shortened through depth {}",
                self.depth + 1
            )));
        }
        let limit = self.radius().saturating_sub(self.margin);
        if let Some(&bad) = vertices.iter().find(|&&x| self.cayley.length(self.base_of(x)) > limit) {
            return Err(Error::InsufficientRadius(format!(
                "geodesic reaches {} within {} of the boundary",
                self.group().render(self.cayley.element(self.base_of(bad))),
                self.margin
            )));
        }
        let depths = vertices.iter().map(|&x| self.depth_of(x)).collect();
        Ok((d, CuspedPath { vertices, depths }))
    }

    /// Subgraph on the depth-0 vertices.
    pub fn truncated(&self) -> Graph {
        let keep: Vec<bool> = (0..self.vertex_count()).map(|v| v < self.cayley.len()).collect();
        self.graph.induced(&keep).0
    }
}

/// Word metric of each peripheral subgroup's own generating set, evaluated
/// on pairs of coset members. Only distances up to `2^depth` matter.
struct PeripheralMetric {
    ball: ElementBall,
}

impl PeripheralMetric {
    fn distance(&self, group: &MarkedGroup, u: &Element, w: &Element) -> Option<u64> {
        let x = group.mul(&group.inverse(u), w);
        self.ball.length_of(&x).map(|d| d as u64)
    }
}

fn peripheral_metrics(
    group: &MarkedGroup,
    peripherals: &PeripheralStructure,
    cayley: &CayleyBall,
    members: &[Vec<usize>],
    cosets: &CosetTable,
    depth: usize,
    budget: usize,
) -> Result<Vec<PeripheralMetric>> {
    let cap = if depth >= 40 { usize::MAX } else { 1usize << depth };
    let mut out = Vec::with_capacity(peripherals.len());
    for (p, spec) in peripherals.subgroups().iter().enumerate() {
        let mut needed: Vec<Element> = Vec::new();
        for (c, ms) in members.iter().enumerate() {
            if cosets.entry(CosetId(c)).peripheral != p {
                continue;
            }
            for a in 0..ms.len() {
                for b in a + 1..ms.len() {
                    needed.push(group.mul(&group.inverse(cayley.element(ms[a])), cayley.element(ms[b])));
                }
            }
        }
        out.push(PeripheralMetric {
            ball: grow_until(group, spec, &needed, cap, budget)?,
        });
    }
    Ok(out)
}

/// Doubles the radius of the subgroup ball until it holds every element of
/// `needed` or reaches `cap`.
fn grow_until(
    group: &MarkedGroup,
    spec: &SubgroupSpec,
    needed: &[Element],
    cap: usize,
    budget: usize,
) -> Result<ElementBall> {
    let mut r = 1usize.min(cap);
    loop {
        let ball = spec.ball(group, r, budget)?;
        let saturated = ball.within(r.saturating_sub(1)).end == ball.len() && r > 0;
        if r >= cap || saturated || needed.iter().all(|x| ball.index_of(x).is_some()) {
            return Ok(ball);
        }
        r = (2 * r).min(cap);
    }
}

/// Observed horoball lemma constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaProbe {
    pub l: usize,
    /// Longest geodesic lying in one horoball at depth ≤ L.
    pub m0: usize,
    /// Largest `min(d(z,x), d(z,y))` over vertices `z` outside the open horoball
    /// on shortlex geodesics between level-0 vertices `x, y` of that horoball.
    pub m2: usize,
}

pub fn horoball_lemma_probe(x: &CuspedBall, l: usize) -> Result<LemmaProbe> {
    if x.depth < 3 {
        return Err(Error::InsufficientDepth(format!("lemma probe needs depth ≥ 3, got {}", x.depth)));
    }
    if l > x.depth {
        return Err(Error::InsufficientDepth(format!("L = {l} exceeds depth {}", x.depth)));
    }
    let n = x.cayley.len();
    let limit = x.radius().saturating_sub(x.margin);
    let results: Vec<(usize, usize)> = (0..x.members.len())
        .into_par_iter()
        .map(|c| {
            let ms = &x.members[c];
            let region: Vec<usize> = (0..=l)
                .flat_map(|k| (0..ms.len()).map(move |pos| (k, pos)))
                .map(|(k, pos)| {
                    if k == 0 {
                        ms[pos]
                    } else {
                        x.offsets[c] + (k - 1) * ms.len() + pos
                    }
                })
                .filter(|&v| x.cayley.length(x.base_of(v)) <= limit)
                .collect();
            let mut keep = vec![false; x.vertex_count()];
            for &v in &region {
                keep[v] = true;
            }
            let (sub, map) = x.graph.induced(&keep);
            let mut m0 = 0;
            let mut m2 = 0;
            for (si, &u) in map.iter().enumerate() {
                let global = x.graph.bfs(u);
                let local = sub.bfs(si);
                for (sj, &v) in map.iter().enumerate() {
                    if local[sj] != UNREACHED && local[sj] == global[v] {
                        m0 = m0.max(local[sj] as usize);
                    }
                }
                if u < n {
                    // u is a level-0 vertex of this horoball
                    for &v in map.iter().filter(|&&v| v < n && v > u) {
                        let Some(path) = x.graph.least_geodesic_with(v, u, &global) else { continue };
                        let len = path.len() - 1;
                        for (i, &z) in path.iter().enumerate() {
                            if x.coset_of_vertex(z) != Some(CosetId(c)) {
                                m2 = m2.max(i.min(len - i));
                            }
                        }
                    }
                }
            }
            (m0, m2)
        })
        .collect();
    let m0 = results.iter().map(|r| r.0).max().unwrap_or(0);
    let m2 = results.iter().map(|r| r.1).max().unwrap_or(0);
    Ok(LemmaProbe { l, m0, m2 })
}

/// `μ(n)` for `n` in `ns`: the farthest a depth-0 vertex of a shortlex cusped
/// geodesic between points of `H ∩ B_S(n)` gets from `H`.
pub fn qc3_probe(
    x: &CuspedBall,
    h: &SubgroupSpec,
    ns: &[usize],
) -> Result<Vec<(usize, usize)>> {
    let group = x.group();
    let oracle = h
        .oracle()
        .ok_or_else(|| Error::Spec(format!("{} needs an exact membership oracle", h.name())))?;
    let n_max = ns.iter().copied().max().unwrap_or(0);
    if n_max + x.margin > x.radius() {
        return Err(Error::InsufficientRadius(format!(
            "n = {n_max} needs radius {}",
            n_max + x.margin
        )));
    }
    let to_h = CosetDistances::new(&x.cayley, |g| oracle.coset_key(group, g));
    let members: Vec<usize> = x
        .cayley
        .within(n_max)
        .filter(|&i| oracle.contains(group, x.cayley.element(i)))
        .collect();
    // μ contribution of each pair, tagged by the level max(|h₀|, |h₁|).
    let per_target: Vec<Vec<(usize, usize)>> = members
        .par_iter()
        .map(|&t| -> Result<Vec<(usize, usize)>> {
            let to_t = x.graph.bfs(t);
            let mut out = Vec::new();
            for &s in &members {
                if s == t {
                    continue;
                }
                let (_, path) = x.distance_with(s, t, &to_t)?;
                let mut mu = 0;
                for &v in &path.vertices {
                    if v < x.cayley.len() {
                        let g = group.inverse(x.cayley.element(v));
                        mu = mu.max(to_h.distance(&g)?);
                    }
                }
                out.push((x.cayley.length(s).max(x.cayley.length(t)), mu));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut best: HashMap<usize, usize> = HashMap::new();
    for (level, mu) in per_target.into_iter().flatten() {
        let slot = best.entry(level).or_insert(0);
        *slot = (*slot).max(mu);
    }
    Ok(ns
        .iter()
        .map(|&n| {
            let mu = best.iter().filter(|(&lv, _)| lv <= n).map(|(_, &m)| m).max().unwrap_or(0);
            (n, mu)
        })
        .collect())
}
