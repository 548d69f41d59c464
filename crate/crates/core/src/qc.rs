//! Word-metric diagnostics for relative quasiconvexity: saturations, deep and
//! transition decompositions, QC-5 profiles, close cosets and induced
//! peripheral structures.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::ops::Range;

use rayon::prelude::*;

use crate::ball::ElementBall;
use crate::cayley::CayleyBall;
use crate::coned::ConedBall;
use crate::error::{Error, Result};
use crate::graph::UNREACHED;
use crate::group::{Element, MarkedGroup};
use crate::subgroup::{CosetId, Oracle, PeripheralStructure, SubgroupSpec};
use crate::word::Letter;

/// Number of trailing radii a verdict looks at.
pub const PLATEAU_WINDOW: usize = 3;

/// Three-valued outcome of a finite quasiconvexity experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Consistent,
    GrowthDetected,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent-with-quasiconvex",
            Verdict::GrowthDetected => "growth-detected",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Plateau over the last [`PLATEAU_WINDOW`] values gives `Consistent`,
/// strict increase gives `GrowthDetected`.
pub fn verdict(values: &[u64]) -> Verdict {
    if values.len() < PLATEAU_WINDOW {
        return Verdict::Inconclusive;
    }
    let tail = &values[values.len() - PLATEAU_WINDOW..];
    if tail.windows(2).all(|w| w[0] == w[1]) {
        Verdict::Consistent
    } else if tail.windows(2).all(|w| w[0] < w[1]) {
        Verdict::GrowthDetected
    } else {
        Verdict::Inconclusive
    }
}

/// A proper left-invariant word metric with positive integer generator weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordMetric {
    weights: Vec<u64>,
}

impl WordMetric {
    /// `d_S`: every generator has weight 1.
    pub fn standard(rank: usize) -> Self {
        WordMetric { weights: vec![1; rank] }
    }

    pub fn weighted(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(Error::Spec("generator weights must be positive".into()));
        }
        Ok(WordMetric { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn is_standard(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    pub fn name(&self) -> String {
        if self.is_standard() {
            "d_S".into()
        } else {
            let w: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
            format!("weighted({})", w.join(" "))
        }
    }

    fn weight(&self, l: Letter) -> u64 {
        self.weights[l.generator()]
    }

    /// Lengths of all ball elements in this metric, measured inside the ball.
    ///
    /// Exact for every element whose value is at most `radius * min weight`.
    fn lengths(&self, ball: &CayleyBall) -> Vec<u64> {
        if self.is_standard() {
            return (0..ball.len()).map(|i| ball.length(i) as u64).collect();
        }
        let mut dist = vec![u64::MAX; ball.len()];
        let mut heap = BinaryHeap::new();
        dist[0] = 0;
        heap.push(Reverse((0u64, 0usize)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for (l, u) in ball.neighbors(v) {
                let nd = d + self.weight(l);
                if nd < dist[u] {
                    dist[u] = nd;
                    heap.push(Reverse((nd, u)));
                }
            }
        }
        dist
    }

    fn certified_limit(&self, ball: &CayleyBall) -> u64 {
        ball.radius() as u64 * self.weights.iter().copied().min().unwrap_or(1)
    }
}

/// `d(v, H)` for every vertex `v` of a Cayley ball.
fn subgroup_distances(
    ball: &CayleyBall,
    oracle: &Oracle,
    metric: &WordMetric,
) -> Result<Vec<u64>> {
    if metric.weights.len() != ball.group().rank() {
        return Err(Error::Spec(format!(
            "metric has {} weights for {} generators",
            metric.weights.len(),
            ball.group().rank()
        )));
    }
    let group = ball.group();
    let lengths = metric.lengths(ball);
    let keys: Vec<Element> = ball
        .elements()
        .par_iter()
        .map(|g| oracle.coset_key(group, g))
        .collect();
    let mut best: HashMap<&Element, u64> = HashMap::new();
    for (k, &len) in keys.iter().zip(&lengths) {
        let e = best.entry(k).or_insert(len);
        *e = (*e).min(len);
    }
    let limit = metric.certified_limit(ball);
    // d(v, H) = d(1, v⁻¹H)
    ball.elements()
        .par_iter()
        .map(|v| {
            let key = oracle.coset_key(group, &group.inverse(v));
            match best.get(&key) {
                Some(&d) if metric.is_standard() || d <= limit => Ok(d),
                _ => Err(Error::InsufficientRadius(format!(
                    "distance from {} to the subgroup is not certified in radius {}",
                    group.render(v),
                    ball.radius()
                ))),
            }
        })
        .collect()
}

fn require_oracle(h: &SubgroupSpec) -> Result<&Oracle> {
    h.oracle().ok_or_else(|| {
        Error::Spec(format!("subgroup {} has no exact membership oracle", h.name()))
    })
}

fn require_radius(coned: &ConedBall, n_max: usize) -> Result<()> {
    if n_max + coned.margin() > coned.radius() {
        return Err(Error::InsufficientRadius(format!(
            "n_max {} plus margin {} exceeds ball radius {}",
            n_max,
            coned.margin(),
            coned.radius()
        )));
    }
    Ok(())
}

/// Elements of `B(radius)` as an element ball.
fn small_ball(group: &MarkedGroup, radius: usize) -> Result<ElementBall> {
    ElementBall::bfs(
        group.identity(),
        2 * group.rank(),
        |g, l| group.mul_letter(g, l),
        radius,
        usize::MAX,
    )
}

/// A geodesic `c` together with the peripheral cosets at distance `< M` from it.
#[derive(Clone, Debug, PartialEq)]
pub struct Saturation {
    pub core: Vec<Element>,
    pub threshold: usize,
    pub cosets: Vec<CosetId>,
}

/// Peripheral cosets meeting the open `M`-neighbourhood of `c`.
pub fn saturation(coned: &ConedBall, core: &[Element], m: usize) -> Result<Saturation> {
    let group = coned.group();
    let cayley = coned.cayley();
    let limit = coned.radius().saturating_sub(m);
    let mut found = BTreeSet::new();
    if m > 0 {
        let shifts = small_ball(group, m - 1)?;
        for y in core {
            match cayley.index_of(y) {
                Some(i) if cayley.length(i) <= limit => {}
                _ => {
                    return Err(Error::InsufficientRadius(format!(
                        "{} is not within radius {} minus threshold {}",
                        group.render(y),
                        coned.radius(),
                        m
                    )))
                }
            }
            for u in shifts.elements() {
                let z = cayley
                    .index_of(&group.mul(y, u))
                    .expect("shift stays inside the ball");
                for p in 0..coned.peripherals().len() {
                    found.insert(coned.coset_of(z, p));
                }
            }
        }
    }
    Ok(Saturation {
        core: core.to_vec(),
        threshold: m,
        cosets: found.into_iter().collect(),
    })
}

/// A peripheral left coset named by its oracle key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetRef {
    pub peripheral: usize,
    pub key: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeepComponent {
    pub range: Range<usize>,
    pub coset: CosetRef,
    pub epsilon: usize,
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Segment {
    Transition(Range<usize>),
    Deep(DeepComponent),
}

impl Segment {
    pub fn range(&self) -> &Range<usize> {
        match self {
            Segment::Transition(r) => r,
            Segment::Deep(c) => &c.range,
        }
    }
}

/// Consecutive nonempty segments partitioning the vertex indices of a path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionDecomposition {
    pub segments: Vec<Segment>,
    pub epsilon: usize,
    pub r: usize,
}

impl TransitionDecomposition {
    pub fn deep_components(&self) -> impl Iterator<Item = &DeepComponent> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Deep(c) => Some(c),
            Segment::Transition(_) => None,
        })
    }

    /// Indices of transition points.
    pub fn transition_points(&self) -> Vec<usize> {
        self.segments
            .iter()
            .filter_map(|s| match s {
                Segment::Transition(r) => Some(r.clone()),
                Segment::Deep(_) => None,
            })
            .flatten()
            .collect()
    }

    /// The owning coset of each vertex, `None` for transition points.
    pub fn owners(&self) -> Vec<Option<&CosetRef>> {
        let mut out = Vec::new();
        for s in &self.segments {
            let owner = match s {
                Segment::Deep(c) => Some(&c.coset),
                Segment::Transition(_) => None,
            };
            out.extend(s.range().clone().map(|_| owner));
        }
        out
    }
}

/// Cosets within distance `< ε` of each vertex: keys of `y·u` for `|u| < ε`.
fn near_cosets(
    group: &MarkedGroup,
    peripherals: &PeripheralStructure,
    path: &[Element],
    shifts: &[Element],
) -> Vec<BTreeSet<CosetRef>> {
    path.par_iter()
        .map(|y| {
            let mut set = BTreeSet::new();
            for u in shifts {
                let z = group.mul(y, u);
                for p in 0..peripherals.len() {
                    set.insert(CosetRef {
                        peripheral: p,
                        key: peripherals.coset_key(group, p, &z),
                    });
                }
            }
            set
        })
        .collect()
}

/// Classifies each vertex of the geodesic `path` as `(ε,R)`-deep in a unique
/// peripheral coset or as a transition point.
///
/// Distances along a geodesic are index differences. A vertex deep in two
/// cosets is reported as an invariant violation.
pub fn deep_decomposition(
    group: &MarkedGroup,
    peripherals: &PeripheralStructure,
    path: &[Element],
    epsilon: usize,
    r: usize,
) -> Result<TransitionDecomposition> {
    if path.is_empty() {
        return Err(Error::Domain("empty path".into()));
    }
    let shifts = if epsilon == 0 {
        Vec::new()
    } else {
        small_ball(group, epsilon - 1)?.elements().to_vec()
    };
    let near = near_cosets(group, peripherals, path, &shifts);
    let last = path.len() - 1;
    let mut owners: Vec<Option<CosetRef>> = vec![None; path.len()];
    for i in 0..path.len() {
        if i < r || last - i < r {
            continue;
        }
        let window = i - r..=i + r;
        let mut common: Vec<&CosetRef> = near[i].iter().collect();
        for j in window {
            common.retain(|c| near[j].contains(*c));
            if common.is_empty() {
                break;
            }
        }
        match common.len() {
            0 => {}
            1 => owners[i] = Some(common[0].clone()),
            _ => {
                let labels: Vec<String> = common
                    .iter()
                    .map(|c| format!("{}·P{}", group.render(&c.key), c.peripheral))
                    .collect();
                return Err(Error::Invariant(format!(
                    "vertex {} (index {i}) is ({epsilon},{r})-deep in {} cosets: {}",
                    group.render(&path[i]),
                    labels.len(),
                    labels.join(", ")
                )));
            }
        }
    }
    let mut segments = Vec::new();
    let mut start = 0;
    for i in 1..=path.len() {
        if i < path.len() && owners[i] == owners[start] {
            continue;
        }
        segments.push(match &owners[start] {
            None => Segment::Transition(start..i),
            Some(c) => Segment::Deep(DeepComponent {
                range: start..i,
                coset: c.clone(),
                epsilon,
                r,
            }),
        });
        start = i;
    }
    Ok(TransitionDecomposition {
        segments,
        epsilon,
        r,
    })
}

/// Indices of the points of `path` that are `(ε,R)`-deep in no peripheral coset.
pub fn transition_points(
    group: &MarkedGroup,
    peripherals: &PeripheralStructure,
    path: &[Element],
    epsilon: usize,
    r: usize,
) -> Result<Vec<usize>> {
    Ok(deep_decomposition(group, peripherals, path, epsilon, r)?.transition_points())
}

/// Largest `d_S`-diameter of `𝒩_ε(C) ∩ 𝒩_ε(C′)` over distinct peripheral cosets,
/// sampled at the vertices of `B(within)`. Neighbourhoods are open.
/// `None` when no two cosets come that close.
pub fn isolation_diameter(coned: &ConedBall, epsilon: usize, within: usize) -> Result<Option<usize>> {
    let group = coned.group();
    let cayley = coned.cayley();
    if epsilon == 0 {
        return Ok(None);
    }
    let within = within.min(coned.radius());
    let shifts = small_ball(group, epsilon - 1)?;
    let points: Vec<Element> = cayley.elements()[cayley.within(within)].to_vec();
    let near = near_cosets(group, coned.peripherals(), &points, shifts.elements());
    let mut shared: BTreeMap<(&CosetRef, &CosetRef), Vec<usize>> = BTreeMap::new();
    for (i, set) in near.iter().enumerate() {
        let list: Vec<&CosetRef> = set.iter().collect();
        for a in 0..list.len() {
            for b in a + 1..list.len() {
                shared.entry((list[a], list[b])).or_default().push(i);
            }
        }
    }
    let mut best: Option<usize> = None;
    for members in shared.values() {
        let mut diam = 0;
        for (k, &x) in members.iter().enumerate() {
            for &y in &members[k + 1..] {
                diam = diam.max(cayley.distance(&points[x], &points[y])?);
            }
        }
        best = Some(best.map_or(diam, |b| b.max(diam)));
    }
    Ok(best)
}

/// Default `R` for a given `ε`: the observed isolation diameter plus one.
pub fn default_r(coned: &ConedBall, epsilon: usize) -> Result<usize> {
    let within = coned.radius().saturating_sub(coned.margin());
    Ok(isolation_diameter(coned, epsilon, within)?.map_or(1, |d| d + 1))
}

/// One radius of a quasiconvexity profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcRow {
    pub n: usize,
    pub kappa: u64,
    /// Transition check only: Hausdorff distance between transition points of
    /// `c` and the group vertices of the companion relative geodesic.
    pub hausdorff: Option<u64>,
    pub pairs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QcReport {
    pub subgroup: String,
    pub method: &'static str,
    pub metric: String,
    pub parameters: Vec<(String, String)>,
    pub rows: Vec<QcRow>,
    pub window: usize,
    pub verdict: Verdict,
}

impl QcReport {
    pub fn kappa(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.kappa).collect()
    }

    fn finish(
        subgroup: &SubgroupSpec,
        method: &'static str,
        metric: &WordMetric,
        parameters: Vec<(String, String)>,
        rows: Vec<QcRow>,
    ) -> Self {
        let values: Vec<u64> = rows.iter().map(|r| r.kappa).collect();
        QcReport {
            subgroup: subgroup.name().to_string(),
            method,
            metric: metric.name(),
            parameters,
            rows,
            window: PLATEAU_WINDOW,
            verdict: verdict(&values),
        }
    }
}

/// Per-level maxima merged across work items.
#[derive(Clone, Default)]
struct LevelMax {
    kappa: Vec<u64>,
    hausdorff: Vec<u64>,
    pairs: Vec<usize>,
}

impl LevelMax {
    fn new(levels: usize) -> Self {
        LevelMax {
            kappa: vec![0; levels],
            hausdorff: vec![0; levels],
            pairs: vec![0; levels],
        }
    }

    fn merge(mut self, other: LevelMax) -> LevelMax {
        for i in 0..self.kappa.len() {
            self.kappa[i] = self.kappa[i].max(other.kappa[i]);
            self.hausdorff[i] = self.hausdorff[i].max(other.hausdorff[i]);
            self.pairs[i] += other.pairs[i];
        }
        self
    }

    /// Cumulative maxima: row `n` covers all pairs of level `≤ n`.
    fn rows(&self, with_hausdorff: bool) -> Vec<QcRow> {
        let mut rows = Vec::new();
        let (mut k, mut h, mut p) = (0, 0, 0);
        for n in 0..self.kappa.len() {
            k = k.max(self.kappa[n]);
            h = h.max(self.hausdorff[n]);
            p += self.pairs[n];
            rows.push(QcRow {
                n,
                kappa: k,
                hausdorff: with_hausdorff.then_some(h),
                pairs: p,
            });
        }
        rows
    }
}

fn members_within(coned: &ConedBall, oracle: &Oracle, n_max: usize) -> Vec<usize> {
    let cayley = coned.cayley();
    cayley
        .within(n_max)
        .filter(|&i| oracle.contains(cayley.group(), cayley.element(i)))
        .collect()
}

/// QC-5 profile: `κ(n)` is the largest `d`-distance to `H` of a group vertex on
/// the shortlex relative geodesic between two elements of `H ∩ B_S(n)`.
pub fn qc5_profile(
    coned: &ConedBall,
    h: &SubgroupSpec,
    metric: &WordMetric,
    n_max: usize,
) -> Result<QcReport> {
    let oracle = require_oracle(h)?;
    require_radius(coned, n_max)?;
    let cayley = coned.cayley();
    let dist_h = subgroup_distances(cayley, oracle, metric)?;
    let members = members_within(coned, oracle, n_max);
    let merged = members
        .par_iter()
        .map(|&t| -> Result<LevelMax> {
            let mut acc = LevelMax::new(n_max + 1);
            let to_t = coned.relative_bfs(&[t]);
            for &s in &members {
                let path = coned.least_geodesic_with(s, t, &to_t).ok_or_else(|| {
                    Error::InsufficientRadius("subgroup elements are not connected inside the ball".into())
                })?;
                if path.backtracks() {
                    return Err(Error::Invariant(format!(
                        "relative geodesic from {} to {} returns to a coset it left",
                        cayley.group().render(cayley.element(s)),
                        cayley.group().render(cayley.element(t))
                    )));
                }
                let level = cayley.length(s).max(cayley.length(t));
                let k = path.vertices.iter().map(|&v| dist_h[v]).max().unwrap_or(0);
                acc.kappa[level] = acc.kappa[level].max(k);
                acc.pairs[level] += 1;
            }
            Ok(acc)
        })
        .try_reduce(|| LevelMax::new(n_max + 1), |a, b| Ok(a.merge(b)))?;
    let mut rows = merged.rows(false);
    rows.remove(0);
    let parameters = vec![
        ("n_max".into(), n_max.to_string()),
        ("radius".into(), coned.radius().to_string()),
        ("margin".into(), coned.margin().to_string()),
    ];
    Ok(QcReport::finish(h, "qc5", metric, parameters, rows))
}

/// Shortlex-least path from `i` to `j` in the Cayley ball graph.
fn s_geodesic(cayley: &CayleyBall, i: usize, j: usize, to_j: &[u32]) -> Option<Vec<usize>> {
    if to_j[i] == UNREACHED {
        return None;
    }
    let mut out = vec![i];
    let mut at = i;
    while at != j {
        let want = to_j[at] - 1;
        let (_, u) = cayley.neighbors(at).find(|&(_, u)| to_j[u] == want)?;
        out.push(u);
        at = u;
    }
    Some(out)
}

/// Exact `|g⁻¹h|_S` when a formula or the ball certifies it.
fn certified_distance(cayley: &CayleyBall, g: &Element, h: &Element) -> Option<usize> {
    let group = cayley.group();
    let x = group.mul(&group.inverse(g), h);
    group
        .formula_length(&x)
        .or_else(|| cayley.element_ball().length_of(&x))
}

/// Transition-point criterion: `κ′(n)` is the largest `d`-distance to `H` of a
/// transition point on the shortlex S-geodesic between two elements of
/// `H ∩ B_S(n)`.
pub fn transition_criterion_check(
    coned: &ConedBall,
    h: &SubgroupSpec,
    metric: &WordMetric,
    epsilon: usize,
    r: Option<usize>,
    n_max: usize,
) -> Result<QcReport> {
    let oracle = require_oracle(h)?;
    require_radius(coned, n_max)?;
    let r = match r {
        Some(r) => r,
        None => default_r(coned, epsilon)?,
    };
    let cayley = coned.cayley();
    let group = cayley.group();
    let graph = cayley.graph();
    let dist_h = subgroup_distances(cayley, oracle, metric)?;
    let members = members_within(coned, oracle, n_max);
    let merged = members
        .par_iter()
        .map(|&t| -> Result<LevelMax> {
            let mut acc = LevelMax::new(n_max + 1);
            let to_t = graph.bfs(t);
            let rel_to_t = coned.relative_bfs(&[t]);
            for &s in &members {
                let c = s_geodesic(cayley, s, t, &to_t).ok_or_else(|| {
                    Error::InsufficientRadius("subgroup elements are not connected inside the ball".into())
                })?;
                if let Some(exact) = certified_distance(cayley, cayley.element(s), cayley.element(t)) {
                    if exact != c.len() - 1 {
                        return Err(Error::InsufficientRadius(format!(
                            "geodesic from {} to {} leaves the ball of radius {}",
                            group.render(cayley.element(s)),
                            group.render(cayley.element(t)),
                            cayley.radius()
                        )));
                    }
                }
                let elements: Vec<Element> = c.iter().map(|&v| cayley.element(v).clone()).collect();
                let points = transition_points(group, coned.peripherals(), &elements, epsilon, r)?;
                let level = cayley.length(s).max(cayley.length(t));
                let k = points.iter().map(|&p| dist_h[c[p]]).max().unwrap_or(0);
                let companion = coned
                    .least_geodesic_with(s, t, &rel_to_t)
                    .expect("S-connected vertices are relatively connected");
                let hd = transition_hausdorff(cayley, &points, &c, &companion.vertices)?;
                acc.kappa[level] = acc.kappa[level].max(k);
                acc.hausdorff[level] = acc.hausdorff[level].max(hd as u64);
                acc.pairs[level] += 1;
            }
            Ok(acc)
        })
        .try_reduce(|| LevelMax::new(n_max + 1), |a, b| Ok(a.merge(b)))?;
    let mut rows = merged.rows(true);
    rows.remove(0);
    let parameters = vec![
        ("n_max".into(), n_max.to_string()),
        ("radius".into(), coned.radius().to_string()),
        ("margin".into(), coned.margin().to_string()),
        ("epsilon".into(), epsilon.to_string()),
        ("R".into(), r.to_string()),
    ];
    Ok(QcReport::finish(h, "transition", metric, parameters, rows))
}

fn transition_hausdorff(
    cayley: &CayleyBall,
    points: &[usize],
    c: &[usize],
    companion: &[usize],
) -> Result<usize> {
    let a: Vec<usize> = points.iter().map(|&p| c[p]).collect();
    if a.is_empty() || companion.is_empty() {
        return Err(Error::Domain("Hausdorff distance of an empty set".into()));
    }
    // Shared vertices are at distance 0 and need no certified length.
    let one_sided = |xs: &[usize], ys: &[usize]| -> Result<usize> {
        let set: HashSet<usize> = ys.iter().copied().collect();
        let mut worst = 0;
        for &x in xs {
            if set.contains(&x) {
                continue;
            }
            let mut best = usize::MAX;
            for &y in ys {
                let d = certified_distance(cayley, cayley.element(x), cayley.element(y)).ok_or_else(|| {
                    Error::InsufficientRadius("distance between path vertices is not certified".into())
                })?;
                best = best.min(d);
            }
            worst = worst.max(best);
        }
        Ok(worst)
    };
    Ok(one_sided(&a, companion)?.max(one_sided(companion, &a)?))
}

/// A left coset `xH` given by its translating element and subgroup.
#[derive(Clone, Debug)]
pub struct LeftCoset<'a> {
    pub x: Element,
    pub subgroup: &'a SubgroupSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CloseCosetRow {
    pub n: usize,
    /// Elements of `B(n)` in both closed `L`-neighbourhoods.
    pub region: Vec<Element>,
    /// Elements of `xHx⁻¹ ∩ yKy⁻¹` of length `≤ 2n`.
    pub target: usize,
    pub l_prime: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CloseCosetReport {
    pub l: usize,
    pub rows: Vec<CloseCosetRow>,
    pub stable: bool,
}

impl CloseCosetReport {
    pub fn l_prime(&self) -> usize {
        self.rows.last().map_or(0, |r| r.l_prime)
    }
}

/// Observed `L′` with `𝒩_L(xH) ∩ 𝒩_L(yK) ⊆ 𝒩_{L′}(xHx⁻¹ ∩ yKy⁻¹)` on `B(n)`
/// for `n = n_max − 1, n_max`.
pub fn coset_intersection_bound(
    group: &MarkedGroup,
    xh: &LeftCoset<'_>,
    yk: &LeftCoset<'_>,
    l: usize,
    n_max: usize,
    budget: usize,
) -> Result<CloseCosetReport> {
    let oh = require_oracle(xh.subgroup)?;
    let ok = require_oracle(yk.subgroup)?;
    if n_max == 0 {
        return Err(Error::Domain("n_max must be positive".into()));
    }
    group.validate(&xh.x)?;
    group.validate(&yk.x)?;
    // Every distance to the target is at most |z| (the target contains 1),
    // so target elements of length ≤ 2n suffice.
    let ball = CayleyBall::build(group, 2 * n_max, budget)?;
    let shifts = small_ball(group, l)?;
    let in_coset = |o: &Oracle, x: &Element, g: &Element| o.contains(group, &group.mul(&group.inverse(x), g));
    let in_conj = |o: &Oracle, x: &Element, s: &Element| {
        o.contains(group, &group.mul(&group.mul(&group.inverse(x), s), x))
    };
    let target: Vec<usize> = (0..ball.len())
        .into_par_iter()
        .filter(|&i| {
            let s = ball.element(i);
            in_conj(oh, &xh.x, s) && in_conj(ok, &yk.x, s)
        })
        .collect();
    if target.len() > budget {
        return Err(Error::budget("intersection subgroup enumeration", budget));
    }
    let near = |o: &Oracle, x: &Element, z: &Element| shifts.elements().iter().any(|u| in_coset(o, x, &group.mul(z, u)));
    let mut rows = Vec::new();
    for n in [n_max - 1, n_max] {
        let region: Vec<usize> = ball
            .within(n)
            .filter(|&i| {
                let z = ball.element(i);
                near(oh, &xh.x, z) && near(ok, &yk.x, z)
            })
            .collect();
        let mut l_prime = 0;
        for &i in &region {
            let z = ball.element(i);
            let mut best = usize::MAX;
            for &j in target.iter().filter(|&&j| ball.length(j) <= 2 * n) {
                best = best.min(ball.distance(z, ball.element(j))?);
            }
            l_prime = l_prime.max(best);
        }
        rows.push(CloseCosetRow {
            n,
            region: region.iter().map(|&i| ball.element(i).clone()).collect(),
            target: target.iter().filter(|&&j| ball.length(j) <= 2 * n).count(),
            l_prime,
        });
    }
    let stable = rows[0].l_prime == rows[1].l_prime;
    Ok(CloseCosetReport { l, rows, stable })
}

/// Growth class of `H ∩ gPg⁻¹` seen through a ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionClass {
    Trivial,
    FiniteSoFar,
    Growing,
}

impl fmt::Display for IntersectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntersectionClass::Trivial => "trivial",
            IntersectionClass::FiniteSoFar => "finite-so-far",
            IntersectionClass::Growing => "growing",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InducedEntry {
    pub coset: CosetId,
    pub peripheral: usize,
    pub representative: Element,
    /// `|H ∩ gPg⁻¹ ∩ B(r)|` for `r = 0..=n_max`.
    pub counts: Vec<usize>,
    /// Shortest nontrivial elements found.
    pub generators: Vec<Element>,
    pub class: IntersectionClass,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InducedReport {
    pub subgroup: String,
    pub n_max: usize,
    /// One entry per `H`-orbit of cosets (within the ball), by least coset id.
    pub entries: Vec<InducedEntry>,
    pub strong: bool,
}

fn classify(counts: &[usize]) -> IntersectionClass {
    let n = counts.len() - 1;
    if counts[n] <= 1 {
        IntersectionClass::Trivial
    } else if n >= 3 && counts[n] > counts[n - 2] && counts[n - 1] > counts[n - 3] {
        IntersectionClass::Growing
    } else {
        IntersectionClass::FiniteSoFar
    }
}

/// Intersections `H ∩ gPg⁻¹` for the cosets `gP` meeting `B(n_max)`.
pub fn induced_peripheral_probe(coned: &ConedBall, h: &SubgroupSpec, n_max: usize) -> Result<InducedReport> {
    let oracle = require_oracle(h)?;
    if n_max > coned.radius() {
        return Err(Error::InsufficientRadius(format!(
            "n_max {n_max} exceeds ball radius {}",
            coned.radius()
        )));
    }
    let cayley = coned.cayley();
    let group = cayley.group();
    let ps = coned.peripherals();
    let in_h = members_within(coned, oracle, n_max);
    // cosets with a representative in B(n_max), least id first
    let mut cosets: Vec<CosetId> = cayley
        .within(n_max)
        .flat_map(|i| (0..ps.len()).map(move |p| (i, p)))
        .map(|(i, p)| coned.coset_of(i, p))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    cosets.sort();
    let mut orbit: HashMap<CosetId, CosetId> = HashMap::new();
    let table = coned.cosets();
    for &c in &cosets {
        if orbit.contains_key(&c) {
            continue;
        }
        // H-translates hC with h ∈ H ∩ B(n_max) that are registered cosets
        let e = table.entry(c);
        for &hi in &in_h {
            let g = group.mul(cayley.element(hi), &e.representative);
            if let Some(d) = table.find(group, ps, e.peripheral, &g) {
                orbit.entry(d).or_insert(c);
            }
        }
        orbit.insert(c, c);
    }
    let heads: Vec<CosetId> = cosets.iter().copied().filter(|c| orbit[c] == *c).collect();
    let entries: Vec<InducedEntry> = heads
        .par_iter()
        .map(|&c| {
            let e = table.entry(c);
            let p = ps.get(e.peripheral);
            let p_oracle = p.oracle().expect("peripherals carry oracles");
            let g = &e.representative;
            let g_inv = group.inverse(g);
            let mut counts = vec![0; n_max + 1];
            let mut found: Vec<usize> = Vec::new();
            for &s in &in_h {
                let conj = group.mul(&group.mul(&g_inv, cayley.element(s)), g);
                if p_oracle.contains(group, &conj) {
                    counts[cayley.length(s)] += 1;
                    if cayley.length(s) > 0 {
                        found.push(s);
                    }
                }
            }
            for r in 1..=n_max {
                counts[r] += counts[r - 1];
            }
            let shortest = found.iter().map(|&s| cayley.length(s)).min();
            let generators = found
                .iter()
                .filter(|&&s| Some(cayley.length(s)) == shortest)
                .map(|&s| cayley.element(s).clone())
                .collect();
            InducedEntry {
                coset: c,
                peripheral: e.peripheral,
                representative: g.clone(),
                class: classify(&counts),
                counts,
                generators,
            }
        })
        .collect();
    let strong = entries.iter().all(|e| e.class != IntersectionClass::Growing);
    Ok(InducedReport {
        subgroup: h.name().to_string(),
        n_max,
        entries,
        strong,
    })
}
