//! Breadth-first enumeration of word-metric balls over an arbitrary finite
//! symmetrized generating set.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::Element;
use crate::word::{Letter, Word};

/// Elements within a given radius, in BFS (shortlex) order.
///
/// Index 0 is the identity. `parent[i]` is the first-discovered predecessor
/// and the letter leading from it, so parent chains spell shortlex-least
/// geodesic words.
#[derive(Clone, Debug)]
pub struct ElementBall {
    pub(crate) radius: usize,
    pub(crate) elements: Vec<Element>,
    pub(crate) index: HashMap<Element, usize>,
    pub(crate) length: Vec<usize>,
    pub(crate) parent: Vec<Option<(usize, Letter)>>,
    /// Start of each sphere in `elements`; `spheres[k]..spheres[k+1]` has length `k`.
    pub(crate) spheres: Vec<usize>,
}

impl ElementBall {
    /// `step(g, code)` must return `g·s` where `s` is the generator with that letter code.
    pub fn bfs(
        identity: Element,
        codes: usize,
        step: impl Fn(&Element, Letter) -> Element,
        radius: usize,
        budget: usize,
    ) -> Result<Self> {
        let mut ball = ElementBall {
            radius: 0,
            elements: vec![identity.clone()],
            index: HashMap::from([(identity, 0)]),
            length: vec![0],
            parent: vec![None],
            spheres: vec![0, 1],
        };
        for r in 1..=radius {
            let start = ball.spheres[r - 1];
            let end = ball.spheres[r];
            for i in start..end {
                for code in 0..codes {
                    let l = Letter::from_code(code);
                    let g = step(&ball.elements[i], l);
                    if ball.index.contains_key(&g) {
                        continue;
                    }
                    if ball.elements.len() >= budget {
                        return Err(Error::budget("ball vertices", budget));
                    }
                    ball.index.insert(g.clone(), ball.elements.len());
                    ball.elements.push(g);
                    ball.length.push(r);
                    ball.parent.push(Some((i, l)));
                }
            }
            ball.spheres.push(ball.elements.len());
            ball.radius = r;
        }
        Ok(ball)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn length(&self, i: usize) -> usize {
        self.length[i]
    }

    /// Word length of `g`, if it lies in the ball.
    pub fn length_of(&self, g: &Element) -> Option<usize> {
        self.index_of(g).map(|i| self.length[i])
    }

    pub fn parent(&self, i: usize) -> Option<(usize, Letter)> {
        self.parent[i]
    }

    /// Indices of elements with length at most `r`.
    pub fn within(&self, r: usize) -> std::ops::Range<usize> {
        0..self.spheres[r.min(self.radius) + 1]
    }

    /// Shortlex-least geodesic word for the element at index `i`.
    pub fn word(&self, mut i: usize) -> Word {
        let mut letters = Vec::with_capacity(self.length[i]);
        while let Some((p, l)) = self.parent[i] {
            letters.push(l);
            i = p;
        }
        letters.reverse();
        Word(letters)
    }
}
