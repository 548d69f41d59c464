//! Coned-off Cayley balls and the relative metric `d_{S∪𝒫}`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cayley::CayleyBall;
use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};
use crate::group::{Element, MarkedGroup};
use crate::subgroup::{CosetId, CosetTable, PeripheralStructure};
use crate::word::{Letter, Word};

/// Default distance kept between query endpoints and the ball boundary.
pub const DEFAULT_MARGIN: usize = 2;

/// A non-negative multiple of 1/2, stored as its double.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Half(pub u32);

impl Half {
    pub fn from_int(n: u32) -> Self {
        Half(2 * n)
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// The integer value, when there is one.
    pub fn integer(self) -> Option<u32> {
        self.0.is_multiple_of(2).then_some(self.0 / 2)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}

/// Vertex of a coned ball: a group element (by ball index) or a cone point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConedVertex {
    Group(usize),
    Cone(CosetId),
}

/// One step of a relative path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelStep {
    Edge(Letter),
    /// Passage through the cone point of `coset`, leaving at ball index `exit`.
    Passage { coset: CosetId, exit: usize },
}

/// Entering and exiting vertices of a coset passage, as ball indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Penetration {
    pub coset: CosetId,
    pub entering: usize,
    pub exiting: usize,
}

/// Path in `Cayley(G, S ∪ 𝒫)` through group vertices of a coned ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativePath {
    /// Group vertices visited, as ball indices; `steps.len() + 1` entries.
    pub vertices: Vec<usize>,
    pub steps: Vec<RelStep>,
}

impl RelativePath {
    /// Relative length (each S-edge and each passage counts 1).
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("paths are nonempty")
    }

    pub fn penetrations(&self) -> Vec<Penetration> {
        self.steps
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                RelStep::Passage { coset, exit } => Some(Penetration {
                    coset: *coset,
                    entering: self.vertices[i],
                    exiting: *exit,
                }),
                RelStep::Edge(_) => None,
            })
            .collect()
    }

    /// Whether some coset is penetrated again after being left.
    pub fn backtracks(&self) -> bool {
        let p = self.penetrations();
        (0..p.len()).any(|i| p[..i].iter().any(|q| q.coset == p[i].coset))
    }
}

/// The coned-off ball over `B_S(radius)`.
#[derive(Clone, Debug)]
pub struct ConedBall {
    cayley: CayleyBall,
    peripherals: PeripheralStructure,
    cosets: CosetTable,
    /// `vertex_cosets[i * np + p]` is the coset of `Pₚ` containing vertex `i`.
    vertex_cosets: Vec<CosetId>,
    members: Vec<Vec<u32>>,
    margin: usize,
}

impl ConedBall {
    pub fn build(
        group: &MarkedGroup,
        peripherals: &PeripheralStructure,
        radius: usize,
        budget: usize,
    ) -> Result<Self> {
        let cayley = CayleyBall::build(group, radius, budget)?;
        ConedBall::over(cayley, peripherals)
    }

    /// Cones off an existing Cayley ball.
    pub fn over(cayley: CayleyBall, peripherals: &PeripheralStructure) -> Result<Self> {
        let np = peripherals.len();
        let mut cosets = CosetTable::new();
        let mut vertex_cosets = Vec::with_capacity(cayley.len() * np);
        let mut members: Vec<Vec<u32>> = Vec::new();
        for i in 0..cayley.len() {
            for p in 0..np {
                let id = cosets.coset_id(cayley.group(), peripherals, p, cayley.element(i));
                if id.0 == members.len() {
                    members.push(Vec::new());
                }
                members[id.0].push(i as u32);
                vertex_cosets.push(id);
            }
        }
        Ok(ConedBall {
            cayley,
            peripherals: peripherals.clone(),
            cosets,
            vertex_cosets,
            members,
            margin: DEFAULT_MARGIN,
        })
    }

    pub fn with_margin(mut self, margin: usize) -> Self {
        self.margin = margin;
        self
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn cayley(&self) -> &CayleyBall {
        &self.cayley
    }

    pub fn group(&self) -> &MarkedGroup {
        self.cayley.group()
    }

    pub fn peripherals(&self) -> &PeripheralStructure {
        &self.peripherals
    }

    pub fn cosets(&self) -> &CosetTable {
        &self.cosets
    }

    pub fn radius(&self) -> usize {
        self.cayley.radius()
    }

    pub fn cone_count(&self) -> usize {
        self.cosets.len()
    }

    pub fn group_vertex_count(&self) -> usize {
        self.cayley.len()
    }

    /// Members of a coset inside the ball, in ball order.
    pub fn members(&self, c: CosetId) -> &[u32] {
        &self.members[c.0]
    }

    /// Coset of `Pₚ` containing ball vertex `i`.
    pub fn coset_of(&self, i: usize, p: usize) -> CosetId {
        self.vertex_cosets[i * self.peripherals.len() + p]
    }

    /// Vertex numbering of the coned graph: group vertices, then cone points.
    pub fn vertex_id(&self, v: ConedVertex) -> usize {
        match v {
            ConedVertex::Group(i) => i,
            ConedVertex::Cone(c) => self.cayley.len() + c.0,
        }
    }

    pub fn vertex(&self, id: usize) -> ConedVertex {
        if id < self.cayley.len() {
            ConedVertex::Group(id)
        } else {
            ConedVertex::Cone(CosetId(id - self.cayley.len()))
        }
    }

    /// The coned graph; cone edges join each cone point to its coset's members.
    /// Returns the graph and, per edge, whether it is a cone edge (length 1/2).
    pub fn graph(&self) -> Graph {
        let mut edges: Vec<(usize, usize)> = self.cayley.graph().edges().collect();
        for (c, ms) in self.members.iter().enumerate() {
            let cone = self.cayley.len() + c;
            edges.extend(ms.iter().map(|&m| (m as usize, cone)));
        }
        Graph::from_edges(self.cayley.len() + self.cosets.len(), &edges)
    }

    pub fn is_cone_edge(&self, u: usize, v: usize) -> bool {
        (u >= self.cayley.len()) != (v >= self.cayley.len())
    }

    /// Ball index of `g`, provided it lies at least `margin` inside the boundary.
    pub fn index_with_margin(&self, g: &Element) -> Result<usize> {
        self.group().validate(g)?;
        let limit = self.radius().saturating_sub(self.margin);
        match self.cayley.index_of(g) {
            Some(i) if self.cayley.length(i) <= limit => Ok(i),
            _ => Err(Error::InsufficientRadius(format!(
                "{} is not within radius {} minus margin {}",
                self.group().render(g),
                self.radius(),
                self.margin
            ))),
        }
    }

    /// Relative distances (integers) from the nearest source group vertex.
    pub fn relative_bfs(&self, sources: &[usize]) -> Vec<u32> {
        let n = self.cayley.len();
        let np = self.peripherals.len();
        let mut dist = vec![UNREACHED; n];
        let mut used = vec![false; self.cosets.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v] + 1;
            for (_, u) in self.cayley.neighbors(v) {
                if dist[u] == UNREACHED {
                    dist[u] = d;
                    queue.push_back(u);
                }
            }
            for p in 0..np {
                let c = self.vertex_cosets[v * np + p];
                if used[c.0] {
                    continue;
                }
                used[c.0] = true;
                for &m in &self.members[c.0] {
                    let m = m as usize;
                    if dist[m] == UNREACHED {
                        dist[m] = d;
                        queue.push_back(m);
                    }
                }
            }
        }
        dist
    }

    fn group_sources(&self, v: ConedVertex) -> (Vec<usize>, u32) {
        match v {
            ConedVertex::Group(i) => (vec![i], 0),
            ConedVertex::Cone(c) => (self.members[c.0].iter().map(|&m| m as usize).collect(), 1),
        }
    }

    fn check_vertex(&self, v: ConedVertex) -> Result<()> {
        let limit = self.radius().saturating_sub(self.margin);
        let ok = match v {
            ConedVertex::Group(i) => i < self.cayley.len() && self.cayley.length(i) <= limit,
            ConedVertex::Cone(c) => {
                c.0 < self.cosets.len()
                    && self.members[c.0]
                        .first()
                        .is_some_and(|&m| self.cayley.length(m as usize) <= limit)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InsufficientRadius(format!(
                "vertex {v:?} is not within radius {} minus margin {}",
                self.radius(),
                self.margin
            )))
        }
    }

    /// Distance in the coned graph between arbitrary vertices, in half-units.
    pub fn vertex_distance(&self, u: ConedVertex, v: ConedVertex) -> Result<Half> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(Half(0));
        }
        let (sources, offset_u) = self.group_sources(u);
        let dist = self.relative_bfs(&sources);
        let (targets, offset_v) = self.group_sources(v);
        let best = targets
            .iter()
            .map(|&t| dist[t])
            .min()
            .filter(|&d| d != UNREACHED)
            .ok_or_else(|| Error::InsufficientRadius("vertices are not connected inside the ball".into()))?;
        Ok(Half(2 * best + offset_u + offset_v))
    }

    /// `d_{S∪𝒫}(g, h)` in half-units (always an integer for group elements).
    pub fn relative_distance(&self, g: &Element, h: &Element) -> Result<Half> {
        let i = self.index_with_margin(g)?;
        let j = self.index_with_margin(h)?;
        self.vertex_distance(ConedVertex::Group(i), ConedVertex::Group(j))
    }

    /// Shortlex-least relative geodesic from ball index `i` to `j`, given
    /// relative distances to `j`.
    ///
    /// Steps are ordered S-letters first, then passages by peripheral index,
    /// then by ball index of the exit vertex.
    pub fn least_geodesic_with(&self, i: usize, j: usize, to_j: &[u32]) -> Option<RelativePath> {
        if to_j[i] == UNREACHED {
            return None;
        }
        let np = self.peripherals.len();
        let mut vertices = vec![i];
        let mut steps = Vec::new();
        let mut at = i;
        while at != j {
            let want = to_j[at] - 1;
            let mut next = None;
            for (l, u) in self.cayley.neighbors(at) {
                if to_j[u] == want {
                    next = Some((RelStep::Edge(l), u));
                    break;
                }
            }
            if next.is_none() {
                'cosets: for p in 0..np {
                    let c = self.vertex_cosets[at * np + p];
                    for &m in &self.members[c.0] {
                        if to_j[m as usize] == want {
                            next = Some((RelStep::Passage { coset: c, exit: m as usize }, m as usize));
                            break 'cosets;
                        }
                    }
                }
            }
            let (step, u) = next.expect("relative distances are consistent");
            steps.push(step);
            vertices.push(u);
            at = u;
        }
        Some(RelativePath { vertices, steps })
    }

    pub fn relative_geodesic(&self, g: &Element, h: &Element) -> Result<RelativePath> {
        let i = self.index_with_margin(g)?;
        let j = self.index_with_margin(h)?;
        let to_j = self.relative_bfs(&[j]);
        let path = self
            .least_geodesic_with(i, j, &to_j)
            .ok_or_else(|| Error::InsufficientRadius("endpoints are not connected inside the ball".into()))?;
        if path.backtracks() {
            return Err(Error::Invariant(format!(
                "relative geodesic from {} to {} returns to a coset it left",
                self.group().render(g),
                self.group().render(h)
            )));
        }
        Ok(path)
    }

    /// All relative geodesics from the sources of `from_source` to `target`,
    /// where `from_source` holds relative distances from a single source vertex.
    pub fn all_relative_geodesics(
        &self,
        from_source: &[u32],
        target: usize,
        cap: usize,
    ) -> Result<Vec<RelativePath>> {
        if from_source[target] == UNREACHED {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut rev_steps = Vec::new();
        let mut rev_vertices = vec![target];
        self.collect_back(from_source, target, &mut rev_steps, &mut rev_vertices, &mut out, cap)?;
        Ok(out)
    }

    fn collect_back(
        &self,
        dist: &[u32],
        at: usize,
        rev_steps: &mut Vec<RelStep>,
        rev_vertices: &mut Vec<usize>,
        out: &mut Vec<RelativePath>,
        cap: usize,
    ) -> Result<()> {
        if dist[at] == 0 {
            if out.len() >= cap {
                return Err(Error::budget("relative geodesic count", cap));
            }
            let mut vertices = rev_vertices.clone();
            vertices.reverse();
            let mut steps = rev_steps.clone();
            steps.reverse();
            out.push(RelativePath { vertices, steps });
            return Ok(());
        }
        let want = dist[at] - 1;
        let np = self.peripherals.len();
        for code in 0..self.cayley.codes() {
            let l = Letter::from_code(code);
            if let Some(p) = self.cayley.step(at, l.inverse()) {
                if dist[p] == want {
                    rev_steps.push(RelStep::Edge(l));
                    rev_vertices.push(p);
                    self.collect_back(dist, p, rev_steps, rev_vertices, out, cap)?;
                    rev_steps.pop();
                    rev_vertices.pop();
                }
            }
        }
        for p in 0..np {
            let c = self.vertex_cosets[at * np + p];
            for &m in &self.members[c.0] {
                let m = m as usize;
                if m != at && dist[m] == want {
                    rev_steps.push(RelStep::Passage { coset: c, exit: at });
                    rev_vertices.push(m);
                    self.collect_back(dist, m, rev_steps, rev_vertices, out, cap)?;
                    rev_steps.pop();
                    rev_vertices.pop();
                }
            }
        }
        Ok(())
    }

    /// Replaces each passage by the shortlex S-geodesic between its entering
    /// and exiting vertices.
    pub fn lift(&self, path: &RelativePath) -> Result<(Vec<Element>, Word)> {
        let cayley = &self.cayley;
        let mut vertices = vec![cayley.element(path.start()).clone()];
        let mut letters = Vec::new();
        for (i, step) in path.steps.iter().enumerate() {
            match step {
                RelStep::Edge(l) => {
                    letters.push(*l);
                    vertices.push(cayley.element(path.vertices[i + 1]).clone());
                }
                RelStep::Passage { exit, .. } => {
                    let g = cayley.geodesic(cayley.element(path.vertices[i]), cayley.element(*exit))?;
                    letters.extend(g.word.iter().copied());
                    vertices.extend(g.vertices.into_iter().skip(1));
                }
            }
        }
        Ok((vertices, Word(letters)))
    }

    /// Human-readable description of a coset.
    pub fn coset_label(&self, c: CosetId) -> String {
        let e = self.cosets.entry(c);
        format!(
            "{} {}",
            self.group().render(&e.representative),
            self.peripherals.get(e.peripheral).name()
        )
    }
}

/// Parameters of [`bcp_probe`].
#[derive(Clone, Debug, PartialEq)]
pub struct BcpParams {
    pub lambda: f64,
    pub l_values: Vec<usize>,
    pub seed: u64,
    /// Above this many path pairs, pairs are sampled instead of enumerated.
    pub pair_threshold: usize,
    /// Cap on paths enumerated per endpoint.
    pub path_cap: usize,
}

impl Default for BcpParams {
    fn default() -> Self {
        BcpParams {
            lambda: 1.0,
            l_values: vec![4, 5, 6, 7, 8],
            seed: 0,
            pair_threshold: 1_000_000,
            path_cap: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcpLevel {
    pub l: usize,
    pub pairs: usize,
    pub sampled: bool,
    pub clause1: usize,
    pub clause2: usize,
    /// `(clause, coset) → max discrepancy`.
    pub per_coset: BTreeMap<(u8, CosetId), usize>,
}

impl BcpLevel {
    pub fn max_a(&self) -> usize {
        self.clause1.max(self.clause2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BcpReport {
    pub params: BcpParams,
    pub radius: usize,
    pub levels: Vec<BcpLevel>,
}

type Discrepancies = HashMap<(u8, CosetId), usize>;

/// Bounded coset penetration probe.
///
/// Paths start at the identity (left invariance moves any common start there)
/// and end in `B(L)` with `d_S(γ₊, γ′₊) ≤ 1`. All `L` share one coned ball of
/// radius `max L + margin`, so each level's pair set contains the previous
/// one and the reported maxima are monotone in `L` when enumeration is exhaustive.
pub fn bcp_probe(
    group: &MarkedGroup,
    peripherals: &PeripheralStructure,
    params: &BcpParams,
    margin: usize,
    budget: usize,
) -> Result<BcpReport> {
    if params.lambda < 1.0 || !params.lambda.is_finite() {
        return Err(Error::Spec(format!("λ must be ≥ 1, got {}", params.lambda)));
    }
    let l_max = *params
        .l_values
        .iter()
        .max()
        .ok_or_else(|| Error::Spec("no L values given".into()))?;
    let coned = ConedBall::build(group, peripherals, l_max + margin, budget)?.with_margin(margin);
    let cayley = coned.cayley();
    let endpoints: Vec<usize> = cayley.within(l_max).collect();

    // Penetration lists of every admissible path from the identity, per endpoint.
    let paths: Vec<Vec<Vec<Penetration>>> = if params.lambda == 1.0 {
        let dist = coned.relative_bfs(&[0]);
        endpoints
            .par_iter()
            .map(|&p| {
                coned
                    .all_relative_geodesics(&dist, p, params.path_cap)
                    .map(|ps| ps.iter().map(|q| q.penetrations()).collect())
            })
            .collect::<Result<_>>()?
    } else {
        quasigeodesic_penetrations(&coned, params.lambda, l_max, params.path_cap)?
    };

    // Ordered endpoint pairs (p, p′) with d_S ≤ 1, tagged by the level max(|p|,|p′|).
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for &p in &endpoints {
        pairs.push((p, p, cayley.length(p)));
        for (_, q) in cayley.neighbors(p) {
            if q < endpoints.len() {
                pairs.push((p, q, cayley.length(p).max(cayley.length(q))));
            }
        }
    }
    let weights: Vec<usize> = pairs
        .iter()
        .map(|&(p, q, _)| paths[p].len() * paths[q].len())
        .collect();
    // Levels are enumerated exhaustively while the cumulative pair count stays
    // within the threshold; pairs of higher levels are sampled.
    let mut level_totals = vec![0usize; l_max + 1];
    for (&(_, _, level), &w) in pairs.iter().zip(&weights) {
        level_totals[level] += w;
    }
    let mut exhaustive_upto: Option<usize> = None;
    let mut running_total = 0usize;
    for (level, &t) in level_totals.iter().enumerate() {
        running_total += t;
        if running_total > params.pair_threshold {
            break;
        }
        exhaustive_upto = Some(level);
    }
    let is_exhaustive = |level: usize| exhaustive_upto.is_some_and(|u| level <= u);

    let distance = |x: usize, y: usize| -> Result<usize> {
        cayley.distance(cayley.element(x), cayley.element(y))
    };
    let compare = |a: &[Penetration], b: &[Penetration], acc: &mut Discrepancies| -> Result<()> {
        for pa in a {
            let key_d = match b.iter().find(|pb| pb.coset == pa.coset) {
                None => (1u8, distance(pa.entering, pa.exiting)?),
                Some(pb) => (
                    2u8,
                    distance(pa.entering, pb.entering)?.max(distance(pa.exiting, pb.exiting)?),
                ),
            };
            let slot = acc.entry((key_d.0, pa.coset)).or_insert(0);
            *slot = (*slot).max(key_d.1);
        }
        Ok(())
    };

    // Per level: pair count and discrepancy maxima.
    let merge = |mut a: Vec<(usize, Discrepancies)>, b: Vec<(usize, Discrepancies)>| {
        for (x, y) in a.iter_mut().zip(b) {
            x.0 += y.0;
            for (k, v) in y.1 {
                let slot = x.1.entry(k).or_insert(0);
                *slot = (*slot).max(v);
            }
        }
        a
    };
    let empty = || vec![(0usize, Discrepancies::new()); l_max + 1];
    let exhaustive_part = pairs
        .par_iter()
        .filter(|&&(_, _, level)| is_exhaustive(level))
        .try_fold(empty, |mut acc, &(p, q, level)| -> Result<_> {
            for a in &paths[p] {
                for b in &paths[q] {
                    acc[level].0 += 1;
                    compare(a, b, &mut acc[level].1)?;
                }
            }
            Ok(acc)
        })
        .try_reduce(empty, |a, b| Ok(merge(a, b)))?;
    let mut by_level = exhaustive_part;

    let rest: Vec<usize> = (0..pairs.len()).filter(|&k| !is_exhaustive(pairs[k].2)).collect();
    let mut cumulative = Vec::with_capacity(rest.len());
    let mut run = 0usize;
    for &k in &rest {
        run += weights[k];
        cumulative.push(run);
    }
    if run > 0 {
        let total = run;
        let samples = params.pair_threshold.max(1);
        let sampled_part = (0..samples)
            .into_par_iter()
            .try_fold(empty, |mut acc, s| -> Result<_> {
                let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
                rng.set_stream(s as u64);
                let u = rng.gen_range(0..total);
                let slot = cumulative.partition_point(|&c| c <= u);
                let k = rest[slot];
                let (p, q, level) = pairs[k];
                let offset = u - (cumulative[slot] - weights[k]);
                let (ia, ib) = (offset / paths[q].len(), offset % paths[q].len());
                acc[level].0 += 1;
                compare(&paths[p][ia], &paths[q][ib], &mut acc[level].1)?;
                Ok(acc)
            })
            .try_reduce(empty, |a, b| Ok(merge(a, b)))?;
        by_level = merge(by_level, sampled_part);
    }

    let mut levels = Vec::new();
    let mut running: BTreeMap<(u8, CosetId), usize> = BTreeMap::new();
    let mut count = 0;
    let mut sorted_l = params.l_values.clone();
    sorted_l.sort_unstable();
    sorted_l.dedup();
    let mut next_level = 0;
    for &l in &sorted_l {
        while next_level <= l {
            count += by_level[next_level].0;
            for (k, v) in &by_level[next_level].1 {
                let slot = running.entry(*k).or_insert(0);
                *slot = (*slot).max(*v);
            }
            next_level += 1;
        }
        let clause = |c: u8| {
            running
                .iter()
                .filter(|((k, _), _)| *k == c)
                .map(|(_, v)| *v)
                .max()
                .unwrap_or(0)
        };
        levels.push(BcpLevel {
            l,
            pairs: count,
            sampled: !is_exhaustive(l),
            clause1: clause(1),
            clause2: clause(2),
            per_coset: running.clone(),
        });
    }
    Ok(BcpReport {
        params: params.clone(),
        radius: coned.radius(),
        levels,
    })
}

/// Penetration lists of backtracking-free `(λ,0)`-quasigeodesics from the
/// identity to each vertex of `B(l_max)`, by depth-first search.
fn quasigeodesic_penetrations(
    coned: &ConedBall,
    lambda: f64,
    l_max: usize,
    cap: usize,
) -> Result<Vec<Vec<Vec<Penetration>>>> {
    let cayley = coned.cayley();
    let endpoints = cayley.within(l_max).end;
    let mut out: Vec<Vec<Vec<Penetration>>> = vec![Vec::new(); endpoints];
    let mut cache: HashMap<usize, Vec<u32>> = HashMap::new();
    let mut path = RelativePath {
        vertices: vec![0],
        steps: Vec::new(),
    };
    let mut found = 0usize;
    quasi_dfs(coned, lambda, endpoints, &mut path, &mut cache, &mut out, &mut found, cap)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn quasi_dfs(
    coned: &ConedBall,
    lambda: f64,
    endpoints: usize,
    path: &mut RelativePath,
    cache: &mut HashMap<usize, Vec<u32>>,
    out: &mut [Vec<Vec<Penetration>>],
    found: &mut usize,
    cap: usize,
) -> Result<()> {
    let at = path.end();
    if at < endpoints {
        *found += 1;
        if *found > cap * endpoints {
            return Err(Error::budget("quasigeodesic path count", cap * endpoints));
        }
        out[at].push(path.penetrations());
    }
    let np = coned.peripherals.len();
    let mut candidates: Vec<(RelStep, usize)> = coned
        .cayley
        .neighbors(at)
        .map(|(l, u)| (RelStep::Edge(l), u))
        .collect();
    for p in 0..np {
        let c = coned.coset_of(at, p);
        if path.penetrations().iter().any(|q| q.coset == c) {
            continue;
        }
        for &m in coned.members(c) {
            if m as usize != at {
                candidates.push((RelStep::Passage { coset: c, exit: m as usize }, m as usize));
            }
        }
    }
    for (step, u) in candidates {
        // (λ,0) condition against every earlier vertex: k − i ≤ λ·d̂(vᵢ, u).
        let k = path.vertices.len();
        let dist_u = cache.entry(u).or_insert_with(|| coned.relative_bfs(&[u]));
        let ok = path.vertices.iter().enumerate().all(|(i, &v)| {
            let d = dist_u[v];
            d != UNREACHED && ((k - i) as f64) <= lambda * d as f64
        });
        if !ok {
            continue;
        }
        path.vertices.push(u);
        path.steps.push(step);
        quasi_dfs(coned, lambda, endpoints, path, cache, out, found, cap)?;
        path.vertices.pop();
        path.steps.pop();
    }
    Ok(())
}

/// Counts embedded circuits of length `n` (S-edges 1, cone edges 1/2) through
/// the edge `{u, v}` of the coned graph.
pub fn fineness_probe(coned: &ConedBall, u: ConedVertex, v: ConedVertex, n: usize, cap: usize) -> Result<usize> {
    let graph = coned.graph();
    let (u, v) = (coned.vertex_id(u), coned.vertex_id(v));
    if u >= graph.vertex_count() || v >= graph.vertex_count() || !graph.has_edge(u, v) {
        return Err(Error::Domain(format!("({u}, {v}) is not an edge of the coned ball")));
    }
    let weight = |a: usize, b: usize| if coned.is_cone_edge(a, b) { 1u32 } else { 2 };
    let target = 2 * n as u32;
    let first = weight(u, v);
    if target <= first {
        return Ok(0);
    }
    // Weighted distances to u (half-units) for pruning, by a two-bucket BFS.
    let to_u = weighted_distances(&graph, u, &weight);
    let mut on_path = vec![false; graph.vertex_count()];
    on_path[u] = true;
    on_path[v] = true;
    let mut count = 0usize;
    circuit_dfs(&graph, &weight, &to_u, (u, v), v, first, target, &mut on_path, &mut count, cap)?;
    Ok(count)
}

fn weighted_distances(graph: &Graph, source: usize, weight: &impl Fn(usize, usize) -> u32) -> Vec<u32> {
    let mut dist = vec![UNREACHED; graph.vertex_count()];
    let mut buckets: Vec<Vec<usize>> = vec![vec![source]];
    dist[source] = 0;
    let mut d = 0usize;
    while d < buckets.len() {
        let mut i = 0;
        while i < buckets[d].len() {
            let x = buckets[d][i];
            i += 1;
            if dist[x] as usize != d {
                continue;
            }
            for &y in graph.neighbors(x) {
                let y = y as usize;
                let nd = d as u32 + weight(x, y);
                if nd < dist[y] {
                    dist[y] = nd;
                    if buckets.len() <= nd as usize {
                        buckets.resize(nd as usize + 1, Vec::new());
                    }
                    buckets[nd as usize].push(y);
                }
            }
        }
        d += 1;
    }
    dist
}

#[allow(clippy::too_many_arguments)]
fn circuit_dfs(
    graph: &Graph,
    weight: &impl Fn(usize, usize) -> u32,
    to_u: &[u32],
    (u, v): (usize, usize),
    at: usize,
    length: u32,
    target: u32,
    on_path: &mut [bool],
    count: &mut usize,
    cap: usize,
) -> Result<()> {
    for &y in graph.neighbors(at) {
        let y = y as usize;
        let l = length + weight(at, y);
        if y == u {
            // Closing along the starting edge itself is not a circuit.
            if l == target && at != v {
                *count += 1;
                if *count > cap {
                    return Err(Error::budget("circuit count", cap));
                }
            }
            continue;
        }
        if on_path[y] || to_u[y] == UNREACHED || l + to_u[y] > target {
            continue;
        }
        on_path[y] = true;
        circuit_dfs(graph, weight, to_u, (u, v), y, l, target, on_path, count, cap)?;
        on_path[y] = false;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::SubgroupSpec;
    use crate::word::parse_word;

    fn elt(g: &MarkedGroup, w: &str) -> Element {
        g.eval(&parse_word(w, g.names()).unwrap())
    }

    fn rel(g: &MarkedGroup, gens: &[&[&str]]) -> PeripheralStructure {
        PeripheralStructure::new(
            gens.iter()
                .map(|ws| SubgroupSpec::from_words(g, ws).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn cone_counts() {
        let f2 = MarkedGroup::free(2);
        let pa = rel(&f2, &[&["a"]]);
        assert_eq!(ConedBall::build(&f2, &pa, 1, 1000).unwrap().cone_count(), 3);
        assert_eq!(ConedBall::build(&f2, &pa, 0, 1000).unwrap().cone_count(), 1);
        let z2 = MarkedGroup::free_abelian(2);
        let pab = rel(&z2, &[&["a"], &["b"]]);
        assert_eq!(ConedBall::build(&z2, &pab, 1, 1000).unwrap().cone_count(), 6);
    }

    #[test]
    fn relative_distances_and_paths() {
        let f2 = MarkedGroup::free(2);
        let pa = rel(&f2, &[&["a"]]);
        let c = ConedBall::build(&f2, &pa, 8, 100_000).unwrap();
        let one = f2.identity();
        assert_eq!(c.relative_distance(&one, &elt(&f2, "a^6")).unwrap(), Half::from_int(1));
        assert_eq!(c.relative_distance(&one, &elt(&f2, "a^5 b")).unwrap(), Half::from_int(2));
        assert_eq!(c.relative_distance(&one, &elt(&f2, "b")).unwrap(), Half::from_int(1));
        let p = c.relative_geodesic(&one, &elt(&f2, "a^5 b")).unwrap();
        let pen = p.penetrations();
        assert_eq!(pen.len(), 1);
        assert_eq!(c.cayley().element(pen[0].entering), &one);
        assert_eq!(c.cayley().element(pen[0].exiting), &elt(&f2, "a^5"));
        assert!(c.relative_geodesic(&one, &elt(&f2, "b")).unwrap().penetrations().is_empty());
        let (lifted, word) = c.lift(&p).unwrap();
        assert_eq!(word, parse_word("a^5 b", f2.names()).unwrap());
        assert_eq!(lifted.len(), 7);
        let cone = ConedVertex::Cone(c.coset_of(0, 0));
        assert_eq!(c.vertex_distance(ConedVertex::Group(0), cone).unwrap(), Half(1));
        assert_eq!(Half(1).to_string(), "0.5");
        assert!(c.relative_distance(&one, &elt(&f2, "a^7")).is_err());
    }

    #[test]
    fn fineness_examples() {
        let f2 = MarkedGroup::free(2);
        let pa = rel(&f2, &[&["a"]]);
        for r in 2..=4 {
            let c = ConedBall::build(&f2, &pa, r, 100_000).unwrap();
            let cone = ConedVertex::Cone(c.coset_of(0, 0));
            assert_eq!(fineness_probe(&c, ConedVertex::Group(0), cone, 2, 1_000_000).unwrap(), 2);
        }
        let plain = ConedBall::build(&f2, &PeripheralStructure::empty(), 3, 1000).unwrap();
        let a = plain.cayley().index_of(&elt(&f2, "a")).unwrap();
        assert_eq!(fineness_probe(&plain, ConedVertex::Group(0), ConedVertex::Group(a), 3, 100).unwrap(), 0);
    }

    #[test]
    fn quasigeodesic_probe_dominates_geodesic_probe() {
        let f2 = MarkedGroup::free(2);
        let pa = rel(&f2, &[&["a"]]);
        let base = BcpParams {
            l_values: vec![2, 3],
            ..BcpParams::default()
        };
        let geo = bcp_probe(&f2, &pa, &base, 2, 100_000).unwrap();
        let quasi = bcp_probe(&f2, &pa, &BcpParams { lambda: 2.0, ..base }, 2, 100_000).unwrap();
        for (g, q) in geo.levels.iter().zip(&quasi.levels) {
            assert!(q.max_a() >= g.max_a());
            assert!(q.pairs >= g.pairs);
        }
    }
}
