//! Subgroups, exact membership oracles, peripheral structures and coset tables.

use std::collections::HashMap;

use crate::ball::ElementBall;
use crate::error::{Error, Result};
use crate::group::{Element, GroupKind, MarkedGroup};
use crate::lattice::Lattice;
use crate::stallings::StallingsGraph;
use crate::word::{parse_word, Letter, Word};

/// Exact decision procedure for membership in, and cosets of, a subgroup.
#[derive(Clone, Debug, PartialEq)]
pub enum Oracle {
    Trivial,
    Whole,
    /// Subgroup of a free group.
    Free(StallingsGraph),
    /// Subgroup of `ℤⁿ/R`, stored as the lattice `R + H`.
    Abelian(Lattice),
    /// `⟨z^m⟩` in the Heisenberg group, `m > 0`.
    HeisenbergCentral(i64),
    /// Free product of subgroups of the factors (`None` where the factor is not involved).
    FreeProduct(Vec<Option<Oracle>>),
    /// Subgroup of the fiber of a mapping torus.
    Fiber(StallingsGraph),
}

impl Oracle {
    /// Finds an exact oracle for `⟨generators⟩` when the catalog provides one.
    pub fn detect(group: &MarkedGroup, generators: &[Element]) -> Option<Oracle> {
        let gens: Vec<&Element> = generators.iter().filter(|g| !group.is_identity(g)).collect();
        if gens.is_empty() {
            return Some(Oracle::Trivial);
        }
        match group.kind() {
            GroupKind::Free { rank } => {
                let words: Vec<Vec<Letter>> = gens
                    .iter()
                    .map(|g| match g {
                        Element::Free(w) => w.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                let s = StallingsGraph::new(*rank, &words);
                Some(if s.is_whole() { Oracle::Whole } else { Oracle::Free(s) })
            }
            GroupKind::Abelian { relations, .. } => {
                let vecs: Vec<Vec<i64>> = gens
                    .iter()
                    .map(|g| match g {
                        Element::Abelian(v) => v.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                let lattice = relations.extended(&vecs);
                Some(if lattice.is_full() {
                    Oracle::Whole
                } else {
                    Oracle::Abelian(lattice)
                })
            }
            GroupKind::Heisenberg => {
                let coords: Vec<[i64; 3]> = gens
                    .iter()
                    .map(|g| match g {
                        Element::Heisenberg(v) => *v,
                        _ => unreachable!(),
                    })
                    .collect();
                let projection: Vec<Vec<i64>> = coords.iter().map(|v| vec![v[0], v[1]]).collect();
                if Lattice::new(2, &projection).is_full() {
                    return Some(Oracle::Whole);
                }
                if coords.iter().all(|v| v[0] == 0 && v[1] == 0) {
                    let m = coords.iter().fold(0, |acc, v| gcd(acc, v[2]));
                    return Some(Oracle::HeisenbergCentral(m));
                }
                None
            }
            GroupKind::FreeProduct { factors, .. } => {
                let mut per_factor: Vec<Vec<Element>> = vec![Vec::new(); factors.len()];
                for g in &gens {
                    match g {
                        Element::FreeProduct(s) if s.len() == 1 => per_factor[s[0].0].push(s[0].1.clone()),
                        _ => return None,
                    }
                }
                let mut oracles = Vec::with_capacity(factors.len());
                for (f, gs) in factors.iter().zip(per_factor) {
                    if gs.is_empty() {
                        oracles.push(None);
                    } else {
                        oracles.push(Some(Oracle::detect(f, &gs)?));
                    }
                }
                if oracles.iter().all(|o| matches!(o, Some(Oracle::Whole))) {
                    return Some(Oracle::Whole);
                }
                Some(Oracle::FreeProduct(oracles))
            }
            GroupKind::MappingTorus { rank, .. } => {
                let mut words = Vec::with_capacity(gens.len());
                for g in &gens {
                    match g {
                        Element::MappingTorus(0, w) => words.push(w.clone()),
                        _ => return None,
                    }
                }
                Some(Oracle::Fiber(StallingsGraph::new(*rank, &words)))
            }
        }
    }

    /// Canonical representative of the left coset `gH`.
    pub fn coset_key(&self, group: &MarkedGroup, g: &Element) -> Element {
        match (self, group.kind(), g) {
            (Oracle::Trivial, _, _) => g.clone(),
            (Oracle::Whole, _, _) => group.identity(),
            (Oracle::Free(s), _, Element::Free(w)) => Element::Free(s.left_coset_key(w)),
            (Oracle::Abelian(lattice), GroupKind::Abelian { relations, .. }, Element::Abelian(v)) => {
                Element::Abelian(relations.reduce(&lattice.reduce(v)))
            }
            (Oracle::HeisenbergCentral(m), _, Element::Heisenberg([a, b, c])) => {
                Element::Heisenberg([*a, *b, c.rem_euclid(*m)])
            }
            (Oracle::FreeProduct(oracles), GroupKind::FreeProduct { factors, .. }, Element::FreeProduct(s)) => {
                let mut syllables = s.clone();
                while let Some((f, x)) = syllables.last() {
                    let Some(o) = &oracles[*f] else { break };
                    let key = o.coset_key(&factors[*f], x);
                    let f = *f;
                    syllables.pop();
                    if !factors[f].is_identity(&key) {
                        syllables.push((f, key));
                        break;
                    }
                }
                Element::FreeProduct(syllables)
            }
            (Oracle::Fiber(s), _, Element::MappingTorus(k, w)) => {
                Element::MappingTorus(*k, s.left_coset_key(w))
            }
            _ => panic!("oracle does not match group kind"),
        }
    }

    pub fn contains(&self, group: &MarkedGroup, g: &Element) -> bool {
        group.is_identity(&self.coset_key(group, g))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A finitely generated subgroup `H = ⟨T⟩` of a marked group.
///
/// Words over `T` use letter codes `2i` for `tᵢ` and `2i+1` for `tᵢ⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupSpec {
    name: String,
    generators: Vec<Element>,
    oracle: Option<Oracle>,
}

impl SubgroupSpec {
    pub fn new(group: &MarkedGroup, generators: Vec<Element>) -> Result<Self> {
        for g in &generators {
            group.validate(g)?;
        }
        let oracle = Oracle::detect(group, &generators);
        let name = format!(
            "<{}>",
            generators
                .iter()
                .map(|g| group.render(g))
                .collect::<Vec<_>>()
                .join(", ")
        );
        Ok(SubgroupSpec {
            name,
            generators,
            oracle,
        })
    }

    /// Parses generator words in the ambient alphabet.
    pub fn from_words(group: &MarkedGroup, words: &[&str]) -> Result<Self> {
        let gens = words
            .iter()
            .map(|w| parse_word(w, group.names()).map(|w| group.eval(&w)))
            .collect::<Result<Vec<_>>>()?;
        SubgroupSpec::new(group, gens)
    }

    pub fn trivial() -> Self {
        SubgroupSpec {
            name: "<>".into(),
            generators: Vec::new(),
            oracle: Some(Oracle::Trivial),
        }
    }

    /// Drops the exact oracle, leaving only ball enumeration.
    pub fn without_oracle(mut self) -> Self {
        self.oracle = None;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn oracle(&self) -> Option<&Oracle> {
        self.oracle.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// The element represented by a letter over `T`.
    pub fn letter(&self, group: &MarkedGroup, l: Letter) -> Element {
        let g = &self.generators[l.generator()];
        if l.is_inverse() {
            group.inverse(g)
        } else {
            g.clone()
        }
    }

    /// Evaluates a word over `T` in the ambient group.
    pub fn eval(&self, group: &MarkedGroup, w: &Word) -> Element {
        w.iter().fold(group.identity(), |acc, &l| group.mul(&acc, &self.letter(group, l)))
    }

    /// BFS ball of `H` in its own word metric `d_T`.
    pub fn ball(&self, group: &MarkedGroup, radius: usize, budget: usize) -> Result<ElementBall> {
        let letters: Vec<Element> = (0..2 * self.rank())
            .map(|c| self.letter(group, Letter::from_code(c)))
            .collect();
        ElementBall::bfs(
            group.identity(),
            letters.len(),
            |g, l| group.mul(g, &letters[l.code()]),
            radius,
            budget,
        )
    }

    /// Conjugate subgroup `g H g⁻¹`, generated by the conjugated generators.
    pub fn conjugate(&self, group: &MarkedGroup, g: &Element) -> Result<SubgroupSpec> {
        let gi = group.inverse(g);
        let gens = self
            .generators
            .iter()
            .map(|h| group.mul(&group.mul(g, h), &gi))
            .collect();
        Ok(SubgroupSpec::new(group, gens)?.with_name(format!("{} {} {}", group.render(g), self.name, group.render(&gi))))
    }
}

/// Answer of [`subgroup_membership`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Member; the witness is a `T`-geodesic word when one was found within budget.
    Yes(Option<Word>),
    /// Exact non-membership.
    No,
    /// Not found in the `T`-ball of the given radius; not a proof.
    NoWithinRadius,
}

/// Decides `g ∈ H`, exactly when `H` has an oracle, else by enumerating `B_T(radius)`.
pub fn subgroup_membership(
    group: &MarkedGroup,
    h: &SubgroupSpec,
    g: &Element,
    radius: usize,
    budget: usize,
) -> Result<Membership> {
    group.validate(g)?;
    match h.oracle() {
        Some(o) => {
            if !o.contains(group, g) {
                return Ok(Membership::No);
            }
            let mut r = 0;
            loop {
                match h.ball(group, r, budget) {
                    Ok(ball) => {
                        if let Some(i) = ball.index_of(g) {
                            return Ok(Membership::Yes(Some(ball.word(i))));
                        }
                        if ball.radius() < r || (r > 0 && ball.within(r - 1).end == ball.len()) {
                            return Ok(Membership::Yes(None));
                        }
                    }
                    Err(Error::Budget { .. }) => return Ok(Membership::Yes(None)),
                    Err(e) => return Err(e),
                }
                r += 1;
            }
        }
        None => {
            let ball = h.ball(group, radius, budget)?;
            Ok(match ball.index_of(g) {
                Some(i) => Membership::Yes(Some(ball.word(i))),
                None => Membership::NoWithinRadius,
            })
        }
    }
}

/// The peripheral subgroups `P₁,…,Pₙ`, each with an exact oracle.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PeripheralStructure {
    subgroups: Vec<SubgroupSpec>,
}

impl PeripheralStructure {
    pub fn new(subgroups: Vec<SubgroupSpec>) -> Result<Self> {
        for p in &subgroups {
            if p.oracle().is_none() {
                return Err(Error::Spec(format!(
                    "peripheral subgroup {} has no exact membership oracle",
                    p.name()
                )));
            }
        }
        Ok(PeripheralStructure { subgroups })
    }

    pub fn empty() -> Self {
        PeripheralStructure::default()
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[SubgroupSpec] {
        &self.subgroups
    }

    pub fn get(&self, i: usize) -> &SubgroupSpec {
        &self.subgroups[i]
    }

    /// Canonical key of `gPᵢ`.
    pub fn coset_key(&self, group: &MarkedGroup, i: usize, g: &Element) -> Element {
        self.subgroups[i]
            .oracle()
            .expect("peripheral oracles are exact")
            .coset_key(group, g)
    }

    /// Checks that each `Pᵢ` has at least `2R+1` elements in its `R`-ball.
    pub fn check_infinite(&self, group: &MarkedGroup, r: usize, budget: usize) -> Result<()> {
        for p in &self.subgroups {
            let ball = p.ball(group, r, budget)?;
            if ball.len() < 2 * r + 1 {
                return Err(Error::Spec(format!(
                    "peripheral subgroup {} looks finite: {} elements within radius {r}",
                    p.name(),
                    ball.len()
                )));
            }
        }
        Ok(())
    }
}

/// Index of a peripheral left coset within one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetId(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct CosetEntry {
    pub peripheral: usize,
    pub key: Element,
    /// First element of the coset seen by this table.
    pub representative: Element,
}

/// Assigns ids to peripheral cosets in order of discovery.
#[derive(Clone, Debug, Default)]
pub struct CosetTable {
    index: HashMap<(usize, Element), CosetId>,
    entries: Vec<CosetEntry>,
}

impl CosetTable {
    pub fn new() -> Self {
        CosetTable::default()
    }

    /// Id of `gPᵢ`, registering the coset with representative `g` if new.
    pub fn coset_id(
        &mut self,
        group: &MarkedGroup,
        peripherals: &PeripheralStructure,
        i: usize,
        g: &Element,
    ) -> CosetId {
        let key = peripherals.coset_key(group, i, g);
        if let Some(&id) = self.index.get(&(i, key.clone())) {
            return id;
        }
        let id = CosetId(self.entries.len());
        self.index.insert((i, key.clone()), id);
        self.entries.push(CosetEntry {
            peripheral: i,
            key,
            representative: g.clone(),
        });
        id
    }

    /// Id of `gPᵢ` if already registered.
    pub fn find(
        &self,
        group: &MarkedGroup,
        peripherals: &PeripheralStructure,
        i: usize,
        g: &Element,
    ) -> Option<CosetId> {
        let key = peripherals.coset_key(group, i, g);
        self.index.get(&(i, key)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, id: CosetId) -> &CosetEntry {
        &self.entries[id.0]
    }

    pub fn entries(&self) -> &[CosetEntry] {
        &self.entries
    }
}
