//! Finite Cayley balls with exact word-metric queries.

use std::collections::HashMap;

use crate::ball::ElementBall;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{Element, MarkedGroup};
use crate::word::{Letter, Word};

pub const NO_EDGE: u32 = u32::MAX;

/// The ball `B_S(radius)` about the identity with its generator-labelled edges.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    group: MarkedGroup,
    ball: ElementBall,
    codes: usize,
    adjacency: Vec<u32>,
}

/// A geodesic edge path with its label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicPath {
    pub vertices: Vec<Element>,
    pub word: Word,
}

impl GeodesicPath {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

impl CayleyBall {
    pub fn build(group: &MarkedGroup, radius: usize, budget: usize) -> Result<Self> {
        let codes = 2 * group.rank();
        let ball = ElementBall::bfs(
            group.identity(),
            codes,
            |g, l| group.mul_letter(g, l),
            radius,
            budget,
        )?;
        let mut adjacency = vec![NO_EDGE; ball.len() * codes];
        for i in 0..ball.len() {
            for code in 0..codes {
                if adjacency[i * codes + code] != NO_EDGE {
                    continue;
                }
                let l = Letter::from_code(code);
                let t = group.mul_letter(ball.element(i), l);
                if let Some(j) = ball.index_of(&t) {
                    adjacency[i * codes + code] = j as u32;
                    adjacency[j * codes + l.inverse().code()] = i as u32;
                }
            }
        }
        Ok(CayleyBall {
            group: group.clone(),
            ball,
            codes,
            adjacency,
        })
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn radius(&self) -> usize {
        self.ball.radius()
    }

    pub fn len(&self) -> usize {
        self.ball.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ball.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        self.ball.elements()
    }

    pub fn element(&self, i: usize) -> &Element {
        self.ball.element(i)
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.ball.index_of(g)
    }

    /// Word length of the vertex at index `i`.
    pub fn length(&self, i: usize) -> usize {
        self.ball.length(i)
    }

    /// Indices of vertices of length at most `r`.
    pub fn within(&self, r: usize) -> std::ops::Range<usize> {
        self.ball.within(r)
    }

    pub fn element_ball(&self) -> &ElementBall {
        &self.ball
    }

    pub fn codes(&self) -> usize {
        self.codes
    }

    /// Neighbor of vertex `i` along letter `l`, if inside the ball.
    pub fn step(&self, i: usize, l: Letter) -> Option<usize> {
        match self.adjacency[i * self.codes + l.code()] {
            NO_EDGE => None,
            j => Some(j as usize),
        }
    }

    /// Neighbors in letter order, with the letter.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (Letter, usize)> + '_ {
        (0..self.codes).filter_map(move |c| {
            let l = Letter::from_code(c);
            self.step(i, l).map(|j| (l, j))
        })
    }

    /// The ball as an unlabelled graph on vertex indices.
    pub fn graph(&self) -> Graph {
        let mut edges = Vec::new();
        for i in 0..self.len() {
            for (_, j) in self.neighbors(i) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(self.len(), &edges)
    }

    /// `|g|_S`, exact. Fails when `g` lies outside the ball and no closed formula exists.
    pub fn word_length(&self, g: &Element) -> Result<usize> {
        if let Some(n) = self.group.formula_length(g) {
            return Ok(n);
        }
        self.ball.length_of(g).ok_or_else(|| {
            Error::InsufficientRadius(format!(
                "{} is not within radius {}",
                self.group.render(g),
                self.radius()
            ))
        })
    }

    /// Shortlex-least geodesic word for `g`.
    pub fn shortlex_word(&self, g: &Element) -> Result<Word> {
        if let Some(w) = self.group.formula_geodesic(g) {
            return Ok(w);
        }
        match self.ball.index_of(g) {
            Some(i) => Ok(self.ball.word(i)),
            None => Err(Error::InsufficientRadius(format!(
                "{} is not within radius {}",
                self.group.render(g),
                self.radius()
            ))),
        }
    }

    fn require_inside(&self, g: &Element) -> Result<()> {
        self.group.validate(g)?;
        if self.ball.index_of(g).is_none() {
            return Err(Error::InsufficientRadius(format!(
                "{} lies outside the ball of radius {}",
                self.group.render(g),
                self.radius()
            )));
        }
        Ok(())
    }

    /// `d_S(g, h) = |g⁻¹h|_S`.
    pub fn distance(&self, g: &Element, h: &Element) -> Result<usize> {
        self.require_inside(g)?;
        self.require_inside(h)?;
        self.word_length(&self.group.mul(&self.group.inverse(g), h))
    }

    /// The shortlex-least geodesic from `g` to `h`; all its vertices must lie in the ball.
    pub fn geodesic(&self, g: &Element, h: &Element) -> Result<GeodesicPath> {
        self.require_inside(g)?;
        self.require_inside(h)?;
        let w = self.shortlex_word(&self.group.mul(&self.group.inverse(g), h))?;
        self.trace(g, w)
    }

    fn trace(&self, g: &Element, w: Word) -> Result<GeodesicPath> {
        let mut vertices = Vec::with_capacity(w.len() + 1);
        let mut at = g.clone();
        vertices.push(at.clone());
        for &l in w.iter() {
            at = self.group.mul_letter(&at, l);
            if self.ball.index_of(&at).is_none() {
                return Err(Error::InsufficientRadius(format!(
                    "geodesic leaves the ball of radius {} at {}",
                    self.radius(),
                    self.group.render(&at)
                )));
            }
            vertices.push(at.clone());
        }
        Ok(GeodesicPath { vertices, word: w })
    }

    /// Every geodesic from `g` to `h`, in shortlex order of labels.
    pub fn all_geodesics(&self, g: &Element, h: &Element, cap: usize) -> Result<Vec<GeodesicPath>> {
        self.require_inside(g)?;
        self.require_inside(h)?;
        let x = self.group.mul(&self.group.inverse(g), h);
        let Some(target) = self.ball.index_of(&x) else {
            return Err(Error::InsufficientRadius(format!(
                "{} is not within radius {}",
                self.group.render(&x),
                self.radius()
            )));
        };
        let mut words: Vec<Vec<Letter>> = Vec::new();
        let mut suffix = Vec::new();
        self.collect_geodesics(target, &mut suffix, &mut words, cap)?;
        let mut words: Vec<Word> = words
            .into_iter()
            .map(|mut w| {
                w.reverse();
                Word(w)
            })
            .collect();
        words.sort();
        words.into_iter().map(|w| self.trace(g, w)).collect()
    }

    fn collect_geodesics(
        &self,
        at: usize,
        suffix: &mut Vec<Letter>,
        out: &mut Vec<Vec<Letter>>,
        cap: usize,
    ) -> Result<()> {
        if at == 0 {
            if out.len() >= cap {
                return Err(Error::budget("geodesic count", cap));
            }
            out.push(suffix.clone());
            return Ok(());
        }
        let len = self.length(at);
        for code in 0..self.codes {
            let l = Letter::from_code(code);
            // predecessor p with p·l = at
            if let Some(p) = self.step(at, l.inverse()) {
                if self.length(p) + 1 == len {
                    suffix.push(l);
                    self.collect_geodesics(p, suffix, out, cap)?;
                    suffix.pop();
                }
            }
        }
        Ok(())
    }

    /// Distance from `g` to the nearest element of `set`.
    pub fn distance_to_set(&self, g: &Element, set: &[Element]) -> Result<usize> {
        let mut best = None;
        for h in set {
            let d = self.distance(g, h)?;
            best = Some(best.map_or(d, |b: usize| b.min(d)));
        }
        best.ok_or_else(|| Error::Domain("distance to an empty set".into()))
    }
}

/// Distances `d(1, gH)` for a subgroup with a coset-key function, computed
/// from the shortest ball element of each left coset.
///
/// Exact whenever the coset meets the ball, in particular for every `g` in it.
pub struct CosetDistances<F> {
    key: F,
    table: HashMap<Element, usize>,
    radius: usize,
}

impl<F: Fn(&Element) -> Element> CosetDistances<F> {
    pub fn new(ball: &CayleyBall, key: F) -> Self {
        let mut table = HashMap::new();
        for (i, g) in ball.elements().iter().enumerate() {
            table.entry(key(g)).or_insert(ball.length(i));
        }
        CosetDistances {
            key,
            table,
            radius: ball.radius(),
        }
    }

    /// `d(1, gH) = min_{h ∈ H} |gh|`.
    pub fn distance(&self, g: &Element) -> Result<usize> {
        self.table.get(&(self.key)(g)).copied().ok_or_else(|| {
            Error::InsufficientRadius(format!("coset does not meet the ball of radius {}", self.radius))
        })
    }
}

/// Hausdorff distance between two finite nonempty sets under `d`.
pub fn hausdorff_distance<T>(
    a: &[T],
    b: &[T],
    d: impl Fn(&T, &T) -> Result<usize>,
) -> Result<usize> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("Hausdorff distance of an empty set".into()));
    }
    let one_sided = |xs: &[T], ys: &[T]| -> Result<usize> {
        let mut worst = 0;
        for x in xs {
            let mut best = usize::MAX;
            for y in ys {
                best = best.min(d(x, y)?);
                if best == 0 {
                    break;
                }
            }
            worst = worst.max(best);
        }
        Ok(worst)
    };
    Ok(one_sided(a, b)?.max(one_sided(b, a)?))
}
