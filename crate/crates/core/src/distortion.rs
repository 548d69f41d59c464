//! Subgroup distortion tables, superadditive closures and dominance checks.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ball::ElementBall;
use crate::cayley::CayleyBall;
use crate::coned::ConedBall;
use crate::error::{Error, Result};
use crate::graph::UNREACHED;
use crate::group::{Element, MarkedGroup};
use crate::qc::{induced_peripheral_probe, IntersectionClass};
use crate::subgroup::{Oracle, PeripheralStructure, SubgroupSpec};
use crate::word::Letter;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Measured,
    Synthetic,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Measured => "measured",
            Provenance::Synthetic => "synthetic",
        })
    }
}

/// A function `ℕ → ℕ` tabulated on `0..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthFunction {
    pub values: Vec<u64>,
    pub provenance: Provenance,
    /// Set when [`GrowthFunction::monotonized`] had to raise a value.
    pub monotonized: bool,
}

impl GrowthFunction {
    pub fn new(values: Vec<u64>, provenance: Provenance) -> Self {
        GrowthFunction {
            values,
            provenance,
            monotonized: false,
        }
    }

    pub fn synthetic(n: usize, f: impl Fn(u64) -> u64) -> Self {
        GrowthFunction::new((0..=n as u64).map(f).collect(), Provenance::Synthetic)
    }

    /// Random non-decreasing table with `f(0) = 0` and steps in `0..=max_step`.
    pub fn random_monotone(n: usize, max_step: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = vec![0u64];
        for _ in 0..n {
            let last = *values.last().expect("nonempty");
            values.push(last + rng.gen_range(0..=max_step));
        }
        GrowthFunction::new(values, Provenance::Synthetic)
    }

    /// Largest argument in the table.
    pub fn n(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn get(&self, n: usize) -> u64 {
        self.values[n]
    }

    /// Running maximum, recording whether anything changed.
    pub fn monotonized(mut self) -> Self {
        let mut best = 0;
        for v in &mut self.values {
            if *v < best {
                *v = best;
                self.monotonized = true;
            }
            best = *v;
        }
        self
    }

    pub fn is_superadditive(&self) -> bool {
        let n = self.n();
        (1..=n).all(|a| (1..=n - a).all(|b| self.values[a + b] >= self.values[a] + self.values[b]))
    }
}

/// `f̄(n) = max(f(n), max_{1≤k≤n/2} f̄(k) + f̄(n−k))`, the least superadditive
/// majorant of `f` on the table.
pub fn superadditive_closure(f: &GrowthFunction) -> GrowthFunction {
    let mut out = f.values.clone();
    for n in 2..out.len() {
        for k in 1..=n / 2 {
            out[n] = out[n].max(out[k] + out[n - k]);
        }
    }
    GrowthFunction {
        values: out,
        provenance: f.provenance,
        monotonized: f.monotonized,
    }
}

/// Outcome of [`dominance_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dominance {
    /// Least `C` with `f(r) ≤ C·g(Cr+C) + Cr + C` on the tested range.
    pub c: Option<u64>,
    /// Largest `r` tested for the reported `C`, or for `C_max` when none works.
    pub tested_up_to: Option<usize>,
    /// True when `g`'s table forced the `r`-range below `f`'s.
    pub clipped: bool,
}

/// Smallest `C ≤ c_max` with `f ⪯_C g` for every `r` whose `Cr + C` is in `g`'s table.
/// A `C` whose clipped range is empty does not count.
pub fn dominance_check(f: &GrowthFunction, g: &GrowthFunction, c_max: u64) -> Dominance {
    let mut last = Dominance {
        c: None,
        tested_up_to: None,
        clipped: false,
    };
    for c in 1..=c_max {
        let cu = c as usize;
        if cu > g.n() {
            break;
        }
        let hi = ((g.n() - cu) / cu).min(f.n());
        let clipped = hi < f.n();
        let ok = (0..=hi).all(|r| {
            let r64 = r as u64;
            f.get(r) <= c * g.get(cu * r + cu) + c * r64 + c
        });
        last = Dominance {
            c: ok.then_some(c),
            tested_up_to: Some(hi),
            clipped,
        };
        if ok {
            return last;
        }
    }
    last.c = None;
    last
}

/// `Δ(n) = max{|h|_T : h ∈ H, |h|_S ≤ n}` for `n = 0..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionTable {
    pub subgroup: String,
    pub generators: Vec<String>,
    pub values: Vec<u64>,
    /// Elements of `H ∩ B_S(N)` enumerated.
    pub members: usize,
}

impl DistortionTable {
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn growth(&self) -> GrowthFunction {
        GrowthFunction::new(self.values.clone(), Provenance::Measured)
    }
}

/// Free-group normal form of an element of a free group or of a fiber.
fn free_word(g: &Element) -> Option<&[Letter]> {
    match g {
        Element::Free(w) => Some(w),
        Element::MappingTorus(0, w) => Some(w),
        _ => None,
    }
}

/// When `T` is a set of distinct basis letters, `H` is free on `T` and
/// `|h|_T` is the reduced word length.
fn letter_basis(generators: &[Element]) -> bool {
    let mut seen = HashSet::new();
    generators.iter().all(|g| match free_word(g) {
        Some([l]) if !l.is_inverse() => seen.insert(l.generator()),
        _ => false,
    })
}

/// `|h|_T` for each target, by BFS in the Cayley graph of `⟨T⟩`.
fn t_lengths(
    group: &MarkedGroup,
    generators: &[Element],
    targets: &[Element],
    budget: usize,
) -> Result<HashMap<Element, u64>> {
    if letter_basis(generators) {
        return Ok(targets
            .iter()
            .map(|t| (t.clone(), free_word(t).map_or(0, |w| w.len()) as u64))
            .collect());
    }
    let letters: Vec<Element> = generators
        .iter()
        .flat_map(|g| [g.clone(), group.inverse(g)])
        .collect();
    let mut wanted: HashSet<&Element> = targets.iter().collect();
    let mut out = HashMap::new();
    let id = group.identity();
    let mut seen: HashSet<Element> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    let mut r = 0u64;
    loop {
        for g in &frontier {
            if wanted.remove(g) {
                out.insert(g.clone(), r);
            }
        }
        if wanted.is_empty() {
            return Ok(out);
        }
        let mut next = Vec::new();
        for g in &frontier {
            for s in &letters {
                let h = group.mul(g, s);
                if seen.insert(h.clone()) {
                    if seen.len() > budget {
                        return Err(Error::budget("subgroup ball", budget));
                    }
                    next.push(h);
                }
            }
        }
        if next.is_empty() {
            return Err(Error::Invariant(
                "subgroup elements not reached by their generators".into(),
            ));
        }
        frontier = next;
        r += 1;
    }
}

/// Distortion from an ambient ball, a membership test and `T`.
fn distortion_in(
    group: &MarkedGroup,
    ambient: &ElementBall,
    member: impl Fn(&Element) -> bool,
    generators: &[Element],
    budget: usize,
) -> Result<(Vec<u64>, usize)> {
    let n = ambient.radius();
    let members: Vec<usize> = (0..ambient.len()).filter(|&i| member(ambient.element(i))).collect();
    let targets: Vec<Element> = members.iter().map(|&i| ambient.element(i).clone()).collect();
    let lengths = t_lengths(group, generators, &targets, budget)?;
    let mut values = vec![0u64; n + 1];
    for &i in &members {
        let l = ambient.length(i);
        values[l] = values[l].max(lengths[ambient.element(i)]);
    }
    for k in 1..=n {
        values[k] = values[k].max(values[k - 1]);
    }
    Ok((values, members.len()))
}

fn oracle_of(h: &SubgroupSpec) -> Result<&Oracle> {
    h.oracle()
        .ok_or_else(|| Error::Spec(format!("subgroup {} has no exact membership oracle", h.name())))
}

/// Exact distortion of `(H, T)` in `(G, S)` on `0..=N`, `T` the generators of `h`.
pub fn distortion_table(group: &MarkedGroup, h: &SubgroupSpec, n: usize, budget: usize) -> Result<DistortionTable> {
    let oracle = oracle_of(h)?;
    let ball = CayleyBall::build(group, n, budget)?;
    let (values, members) = distortion_in(
        group,
        ball.element_ball(),
        |g| oracle.contains(group, g),
        h.generators(),
        budget,
    )?;
    Ok(DistortionTable {
        subgroup: h.name().to_string(),
        generators: h.generators().iter().map(|g| group.render(g)).collect(),
        values,
        members,
    })
}

/// Distortion seen from `H`'s side: enumerate `B_T(t_radius)` and invert
/// `h ↦ |h|_S`. Agrees with [`distortion_table`] once `t_radius ≥ Δ(N)`.
pub fn distortion_by_matching(
    group: &MarkedGroup,
    h: &SubgroupSpec,
    n: usize,
    t_radius: usize,
    budget: usize,
) -> Result<Vec<u64>> {
    let s_ball = CayleyBall::build(group, n, budget)?;
    let t_ball = h.ball(group, t_radius, budget)?;
    let mut values = vec![0u64; n + 1];
    for (i, g) in t_ball.elements().iter().enumerate() {
        if let Some(l) = s_ball.element_ball().length_of(g) {
            values[l] = values[l].max(t_ball.length(i) as u64);
        }
    }
    for k in 1..=n {
        values[k] = values[k].max(values[k - 1]);
    }
    Ok(values)
}

/// Distortion `δ_O` of an induced subgroup `O = H ∩ gPg⁻¹` inside `gPg⁻¹`,
/// measured in `P` after conjugating by `g⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedDistortion {
    pub peripheral: usize,
    pub conjugator: Element,
    pub generators: Vec<Element>,
    pub values: Vec<u64>,
}

#[allow(clippy::too_many_arguments)]
fn induced_distortion(
    group: &MarkedGroup,
    peripherals: &PeripheralStructure,
    h_oracle: &Oracle,
    peripheral: usize,
    g: &Element,
    generators: &[Element],
    n: usize,
    budget: usize,
) -> Result<InducedDistortion> {
    let p = peripherals.get(peripheral);
    let gi = group.inverse(g);
    let conj = |x: &Element, a: &Element, b: &Element| group.mul(&group.mul(a, x), b);
    let back: Vec<Element> = generators.iter().map(|o| conj(o, &gi, g)).collect();
    let p_ball = p.ball(group, n, budget)?;
    let (values, _) = distortion_in(
        group,
        &p_ball,
        |x| h_oracle.contains(group, &conj(x, g, &gi)),
        &back,
        budget,
    )?;
    Ok(InducedDistortion {
        peripheral,
        conjugator: g.clone(),
        generators: generators.to_vec(),
        values,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SandwichReport {
    pub n: usize,
    pub c_max: u64,
    pub induced: Vec<InducedDistortion>,
    /// `f = max_O δ_O` on `0..=C_max·N + C_max`.
    pub f: GrowthFunction,
    pub f_bar: GrowthFunction,
    pub delta: DistortionTable,
    pub lower: Dominance,
    pub upper: Dominance,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower.c.is_some() && self.upper.c.is_some()
    }

    /// The larger of the two constants, when both exist.
    pub fn c(&self) -> Option<u64> {
        Some(self.lower.c?.max(self.upper.c?))
    }
}

/// Checks `f ⪯ Δ ⪯ f̄` on `0..=N` where `f` is the supremum of the distortions
/// of the growing induced subgroups found by the induced peripheral probe.
pub fn distortion_sandwich_check(
    coned: &ConedBall,
    h: &SubgroupSpec,
    n: usize,
    c_max: u64,
    budget: usize,
) -> Result<SandwichReport> {
    let group = coned.group();
    let h_oracle = oracle_of(h)?;
    let probe = induced_peripheral_probe(coned, h, coned.radius())?;
    let long = (c_max as usize) * n + c_max as usize;
    let mut induced = Vec::new();
    for e in probe.entries.iter().filter(|e| e.class == IntersectionClass::Growing) {
        induced.push(induced_distortion(
            group,
            coned.peripherals(),
            h_oracle,
            e.peripheral,
            &e.representative,
            &e.generators,
            long,
            budget,
        )?);
    }
    let mut f = vec![0u64; long + 1];
    for o in &induced {
        for (v, &x) in f.iter_mut().zip(&o.values) {
            *v = (*v).max(x);
        }
    }
    let f = GrowthFunction::new(f, Provenance::Measured);
    let f_bar = superadditive_closure(&f);
    let delta = distortion_table(group, h, n, budget)?;
    let lower = dominance_check(
        &GrowthFunction::new(f.values[..=n].to_vec(), Provenance::Measured),
        &delta.growth(),
        c_max,
    );
    let upper = dominance_check(&delta.growth(), &f_bar, c_max);
    Ok(SandwichReport {
        n,
        c_max,
        induced,
        f,
        f_bar,
        delta,
        lower,
        upper,
    })
}

/// Affine comparison of `H`'s relative metric `d_{T∪𝒪}` with `d_{S∪𝒫}` on
/// `H ∩ B_S(n)`, measured from the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingProfile {
    /// `(d_{T∪𝒪}(1,h), d_{S∪𝒫}(1,h))` per element, in ball order.
    pub pairs: Vec<(u64, u64)>,
    /// Least `C` with `d_G ≤ C d_H + C` and `d_H ≤ C d_G + C` on all pairs.
    pub c: u64,
}

/// `induced` lists `(peripheral, g)` for each `O = H ∩ gPg⁻¹`; cosets `hO`
/// inside `H` are identified by the `P`-coset of `hg`. `d_{T∪𝒪}` is measured
/// inside `B_T(t_radius)`.
pub fn embedding_profile(
    coned: &ConedBall,
    h: &SubgroupSpec,
    induced: &[(usize, Element)],
    n: usize,
    t_radius: usize,
    budget: usize,
) -> Result<EmbeddingProfile> {
    let group = coned.group();
    let oracle = oracle_of(h)?;
    if n + coned.margin() > coned.radius() {
        return Err(Error::InsufficientRadius(format!(
            "n {n} plus margin {} exceeds ball radius {}",
            coned.margin(),
            coned.radius()
        )));
    }
    let cayley = coned.cayley();
    let from_one = coned.relative_bfs(&[0]);
    let t_ball = h.ball(group, t_radius, budget)?;
    // relative BFS in the T-ball with a cone per induced coset
    let keys: Vec<Vec<Element>> = t_ball
        .elements()
        .iter()
        .map(|x| {
            induced
                .iter()
                .map(|(p, g)| coned.peripherals().coset_key(group, *p, &group.mul(x, g)))
                .collect()
        })
        .collect();
    let mut classes: HashMap<(usize, &Element), Vec<usize>> = HashMap::new();
    for (i, ks) in keys.iter().enumerate() {
        for (j, k) in ks.iter().enumerate() {
            classes.entry((j, k)).or_default().push(i);
        }
    }
    let codes = 2 * h.rank();
    let letters: Vec<Element> = (0..codes).map(|c| h.letter(group, Letter::from_code(c))).collect();
    let mut dist = vec![UNREACHED; t_ball.len()];
    let mut used: HashSet<(usize, &Element)> = HashSet::new();
    let mut queue = std::collections::VecDeque::from([0usize]);
    dist[0] = 0;
    while let Some(v) = queue.pop_front() {
        let d = dist[v] + 1;
        let x = t_ball.element(v);
        for s in &letters {
            if let Some(u) = t_ball.index_of(&group.mul(x, s)) {
                if dist[u] == UNREACHED {
                    dist[u] = d;
                    queue.push_back(u);
                }
            }
        }
        for (j, k) in keys[v].iter().enumerate() {
            if used.insert((j, k)) {
                for &u in &classes[&(j, k)] {
                    if dist[u] == UNREACHED {
                        dist[u] = d;
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    let mut pairs = Vec::new();
    for i in cayley.within(n) {
        let g = cayley.element(i);
        if !oracle.contains(group, g) {
            continue;
        }
        let dh = match t_ball.index_of(g) {
            Some(j) if dist[j] != UNREACHED => dist[j] as u64,
            _ => {
                return Err(Error::InsufficientRadius(format!(
                    "{} is not certified in the subgroup ball of radius {t_radius}",
                    group.render(g)
                )))
            }
        };
        pairs.push((dh, from_one[i] as u64));
    }
    let fits = |c: u64| pairs.iter().all(|&(a, b)| b <= c * a + c && a <= c * b + c);
    let c = (1..).find(|&c| fits(c)).expect("affine bounds exist on a finite set");
    Ok(EmbeddingProfile { pairs, c })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all compositions of `n` into positive parts.
    fn by_compositions(f: &GrowthFunction, n: usize) -> u64 {
        if n == 0 {
            return f.get(0);
        }
        let mut best = 0;
        for mask in 0u32..(1 << (n - 1)) {
            let mut sum = 0;
            let mut part = 1;
            for bit in 0..n - 1 {
                if mask & (1 << bit) != 0 {
                    sum += f.get(part);
                    part = 1;
                } else {
                    part += 1;
                }
            }
            sum += f.get(part);
            best = best.max(sum);
        }
        best
    }

    #[test]
    fn closure_examples() {
        let sq = GrowthFunction::synthetic(12, |n| n * n);
        assert_eq!(superadditive_closure(&sq), sq);
        let one = GrowthFunction::synthetic(12, |n| u64::from(n > 0));
        assert_eq!(superadditive_closure(&one).values, (0..=12).collect::<Vec<u64>>());
        let root = GrowthFunction::synthetic(12, |n| (n as f64).sqrt().ceil() as u64);
        let c = superadditive_closure(&root);
        assert_eq!(c.values, (0..=12).collect::<Vec<u64>>());
        assert!(c.is_superadditive());
        for n in 0..=12 {
            assert_eq!(c.get(n), by_compositions(&root, n));
        }
    }

    #[test]
    fn dominance_examples() {
        let id = GrowthFunction::synthetic(40, |n| n);
        assert_eq!(dominance_check(&id, &id, 8).c, Some(1));
        let twice = GrowthFunction::synthetic(12, |n| 2 * n);
        assert_eq!(dominance_check(&twice, &id, 8).c, Some(1));
        let exp = GrowthFunction::synthetic(12, |n| 1 << n);
        let long = GrowthFunction::synthetic(12 * 8 + 8, |n| n);
        let d = dominance_check(&exp, &long, 8);
        assert_eq!(d.c, None);
        assert!(!d.clipped);
        let short = GrowthFunction::synthetic(6, |n| n);
        let d = dominance_check(&twice, &short, 8);
        assert!(d.clipped);
    }

    #[test]
    fn monotonize_records() {
        let f = GrowthFunction::new(vec![0, 2, 1, 3], Provenance::Measured).monotonized();
        assert_eq!(f.values, vec![0, 2, 2, 3]);
        assert!(f.monotonized);
    }

    #[test]
    fn free_factor_is_undistorted() {
        let f2 = MarkedGroup::free(2);
        let b = SubgroupSpec::from_words(&f2, &["b"]).unwrap();
        let t = distortion_table(&f2, &b, 8, 1_000_000).unwrap();
        assert_eq!(t.values, (0..=8).collect::<Vec<u64>>());
        assert_eq!(distortion_by_matching(&f2, &b, 8, 9, 1_000_000).unwrap(), t.values);
    }

    #[test]
    fn heisenberg_center_matches_matching_route() {
        let h3 = MarkedGroup::heisenberg();
        let z = SubgroupSpec::from_words(&h3, &["z"]).unwrap();
        let t = distortion_table(&h3, &z, 8, 1_000_000).unwrap();
        let m = distortion_by_matching(&h3, &z, 8, t.values[8] as usize + 1, 1_000_000).unwrap();
        assert_eq!(m, t.values);
        assert_eq!(t.values, (0..=8).collect::<Vec<u64>>());
        // commutators x^k y^l X^k Y^l = z^(kl) overtake the z letters from n = 18
        let long = distortion_table(&h3, &z, 24, 10_000_000).unwrap();
        assert_eq!(long.values[16..], [16, 17, 20, 21, 25, 26, 30, 31, 36]);
    }
}
